#include "toral/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace toral {

namespace {

std::vector<double> to_double_coeffs(const IntPoly& p) {
    std::vector<double> c(p.c.size());
    for (size_t i = 0; i < p.c.size(); ++i) c[i] = static_cast<double>(p.c[i]);
    return c;
}

std::complex<double> horner(const std::vector<double>& c, std::complex<double> z) {
    std::complex<double> acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
}

// Natural evaluation scale: sum |a_k| |z|^k. The certified residual is
// |p(z)| / scale, which is insensitive to coefficient size.
double eval_scale(const std::vector<double>& c, std::complex<double> z) {
    double az = std::abs(z);
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * az + std::abs(*it);
    return std::max(acc, std::numeric_limits<double>::min());
}

std::complex<double> horner_derivative(const std::vector<double>& c, std::complex<double> z) {
    std::complex<double> acc = 0.0;
    for (size_t k = c.size(); k-- > 1;) acc = acc * z + c[k] * static_cast<double>(k);
    return acc;
}

// Aberth-Ehrlich on a squarefree polynomial with real coefficients.
// Deterministic initial configuration, conjugate symmetry restored after
// convergence.
std::vector<std::complex<double>> aberth(const std::vector<double>& c, double tol) {
    const int n = static_cast<int>(c.size()) - 1;
    std::vector<std::complex<double>> z(n);
    double cmax = 0.0;
    for (int k = 0; k < n; ++k) cmax = std::max(cmax, std::abs(c[k]));
    const double radius = 1.0 + cmax / std::abs(c[n]); // Cauchy bound
    const double pi = std::acos(-1.0);
    for (int i = 0; i < n; ++i) {
        double ang = 2.0 * pi * (i + 0.25) / n + 0.42; // asymmetric start
        z[i] = std::polar(radius * (0.5 + 0.5 * (i + 1.0) / n), ang);
    }

    const int max_sweeps = 400;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            std::complex<double> pv = horner(c, z[i]);
            double res = std::abs(pv) / eval_scale(c, z[i]);
            worst = std::max(worst, res);
            if (res == 0.0) continue;
            std::complex<double> dv = horner_derivative(c, z[i]);
            if (dv == 0.0) dv = std::numeric_limits<double>::epsilon();
            std::complex<double> newton = pv / dv;
            std::complex<double> sum = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                std::complex<double> d = z[i] - z[j];
                if (std::abs(d) < 1e-300) d = 1e-300;
                sum += 1.0 / d;
            }
            std::complex<double> denom = 1.0 - newton * sum;
            if (std::abs(denom) < 1e-300) denom = 1e-300;
            z[i] -= newton / denom;
        }
        if (worst <= tol * 0.01 && sweep > 2) break;
    }
    // Newton polish, quadratic cleanup of the last bits.
    for (int pass = 0; pass < 3; ++pass) {
        for (int i = 0; i < n; ++i) {
            std::complex<double> pv = horner(c, z[i]);
            std::complex<double> dv = horner_derivative(c, z[i]);
            if (std::abs(dv) > 0.0) z[i] -= pv / dv;
        }
    }
    return z;
}

void enforce_conjugate_symmetry(std::vector<std::complex<double>>& z) {
    const int n = static_cast<int>(z.size());
    std::vector<bool> done(n, false);
    for (int i = 0; i < n; ++i) {
        if (done[i]) continue;
        // Closest root to conj(z[i]); a real root pairs with itself.
        int best = i;
        double bd = std::abs(std::conj(z[i]) - z[i]);
        for (int j = 0; j < n; ++j) {
            if (done[j] || j == i) continue;
            double d = std::abs(std::conj(z[i]) - z[j]);
            if (d < bd) { bd = d; best = j; }
        }
        if (best == i) {
            z[i] = std::complex<double>(z[i].real(), 0.0);
            done[i] = true;
        } else {
            std::complex<double> w = 0.5 * (z[i] + std::conj(z[best]));
            if (w.imag() < 0) w = std::conj(w);
            z[i] = w;
            z[best] = std::conj(w);
            done[i] = done[best] = true;
        }
    }
}

bool root_order(const Root& a, const Root& b) {
    double ma = std::abs(a.value), mb = std::abs(b.value);
    if (ma != mb) return ma > mb;
    if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
    return a.value.imag() > b.value.imag();
}

} // namespace

std::vector<Root> poly_roots(const IntPoly& p, double tol) {
    if (p.is_zero() || p.degree() < 1)
        throw PreconditionViolated("poly_roots: need degree >= 1");
    if (tol <= 0) throw PreconditionViolated("poly_roots: tol must be positive");

    std::vector<Root> out;
    for (const auto& [factor, mult] : squarefree_decomposition(p)) {
        std::vector<double> c = to_double_coeffs(factor);
        std::vector<std::complex<double>> z = aberth(c, tol);
        enforce_conjugate_symmetry(z);
        for (const auto& zi : z) {
            double res = std::abs(horner(c, zi)) / eval_scale(c, zi);
            if (!(res <= tol))
                throw NoConvergence("poly_roots: residual " + std::to_string(res) +
                                    " above tol for factor " + factor.str());
            out.push_back(Root{zi, res, mult});
        }
    }
    std::sort(out.begin(), out.end(), root_order);
    return out;
}

SpectralData spectral_data(const IntMatrix& A, double grouping_tol) {
    if (A.n < 1) throw PreconditionViolated("spectral_data: empty matrix");
    if (grouping_tol <= 0) throw PreconditionViolated("spectral_data: grouping_tol must be positive");

    SpectralData sd;
    sd.l = A.n;
    sd.grouping_tol = grouping_tol;
    sd.characteristic = char_poly(A);

    BigInt det = determinant(A);
    if (det != 1 && det != -1)
        throw NotAnAutomorphism("spectral_data: |det A| = " + BigInt(boost::multiprecision::abs(det)).str() +
                                ", not a toral automorphism");

    sd.roots = poly_roots(sd.characteristic, 1e-12);

    // Per-root absolute error estimate from the certified residual; used
    // only to detect grouping ambiguity.
    const std::vector<double> dc = to_double_coeffs(sd.characteristic);
    struct Mod { double m; int weight; double err; };
    std::vector<Mod> mods;
    for (const Root& r : sd.roots) {
        double dp = std::abs(horner_derivative(dc, r.value));
        double err = dp > 0 ? r.residual * eval_scale(dc, r.value) / dp : grouping_tol;
        // Multiple roots: the numeric value came from the squarefree part,
        // whose conditioning is what matters; this estimate stays valid.
        mods.push_back({std::abs(r.value), r.multiplicity, err});
    }
    std::sort(mods.begin(), mods.end(), [](const Mod& a, const Mod& b) { return a.m > b.m; });

    struct Cluster { double m_sum = 0; int w = 0; double rep = 0; double err = 0; };
    std::vector<Cluster> clusters;
    for (const Mod& md : mods) {
        if (!clusters.empty() && clusters.back().rep - md.m <= grouping_tol) {
            Cluster& cl = clusters.back();
            double gap = cl.rep - md.m;
            if (gap > 50.0 * (cl.err + md.err))
                throw AmbiguousGrouping(
                    "spectral_data: moduli " + std::to_string(cl.rep) + " and " +
                    std::to_string(md.m) + " are certifiably distinct but closer than grouping_tol");
            cl.m_sum += md.m * md.weight;
            cl.w += md.weight;
            cl.err = std::max(cl.err, md.err);
        } else {
            clusters.push_back({md.m * md.weight, md.weight, md.m, md.err});
        }
    }

    int assigned = 0;
    for (const Cluster& cl : clusters) {
        double m = cl.m_sum / cl.w;
        if (m > 1.0 + grouping_tol) {
            sd.chi.push_back(m);
            sd.zeta.push_back(cl.w);
            sd.zeta_total += cl.w;
        }
        if (std::abs(m - 1.0) <= grouping_tol) sd.unit_modulus_count += cl.w;
        assigned += cl.w;
    }
    if (assigned != sd.l)
        throw Error("spectral_data: multiplicities do not sum to l (bug)");
    sd.zeta_rest = sd.l - sd.zeta_total;

    sd.h_top = 0.0;
    for (size_t j = 0; j < sd.chi.size(); ++j) sd.h_top += sd.zeta[j] * std::log(sd.chi[j]);

    sd.cyclotomic_factors = cyclotomic_factor_test(sd.characteristic);
    sd.flags.ergodic = sd.cyclotomic_factors.empty();
    sd.flags.hyperbolic = (sd.unit_modulus_count == 0);
    sd.flags.irreducible = is_irreducible(sd.characteristic);

    const auto& pc = sd.characteristic.c;
    const size_t nn = pc.size();
    bool pal = true, antipal = true;
    for (size_t i = 0; i < nn; ++i) {
        if (pc[i] != pc[nn - 1 - i]) pal = false;
        if (pc[i] != -pc[nn - 1 - i]) antipal = false;
    }
    sd.self_reciprocal = pal || antipal;

    return sd;
}

double top_entropy(const SpectralData& sd) {
    double h = 0.0;
    for (size_t j = 0; j < sd.chi.size(); ++j) h += sd.zeta[j] * std::log(sd.chi[j]);
    return h;
}

} // namespace toral
