#include "toral/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "toral/spectral.hpp"

namespace toral {

namespace {

Eigen::MatrixXd to_dense(const IntMatrix& A) {
    Eigen::MatrixXd M(A.n, A.n);
    for (int i = 0; i < A.n; ++i)
        for (int j = 0; j < A.n; ++j) M(i, j) = static_cast<double>(A.at(i, j));
    return M;
}

AssumptionsReport check_assumptions(const UnstableChart& chart, const OmegaBox& box,
                                    const RadiusVector& r) {
    AssumptionsReport rep;
    rep.expansion_gt_2 = true;
    rep.radius_floor = true;
    for (size_t j = 0; j < r.size(); ++j) {
        double growth = std::pow(chart.chi[j] - box.epsilon, box.k);
        if (!(growth > 2.0)) rep.expansion_gt_2 = false;
        if (!(r[j] * growth >= 3.0 * box.alpha0 * (1.0 - 1e-12))) rep.radius_floor = false;
    }
    rep.cube = cell_in_block(chart, r);
    return rep;
}

struct PathBisection {
    bool bracketed = false;
    RadiusVector r;
    double log_g_minus = 0.0;
};

// Monotone bisection of log g_- along a path r(t), t in [0,1], towards
// `target`. The bracketing invariant F(a) <= 0 <= F(b) is re-checked every
// iteration.
PathBisection bisect_on_path(const UnstableChart& chart, int k, double eps, double target,
                             const std::function<RadiusVector(double)>& path) {
    PathBisection out;
    auto F = [&](double t) {
        return std::log(iterated_bounds(chart, k, path(t), eps).g_minus) - target;
    };
    double a = 0.0, b = 1.0;
    double fa = F(a), fb = F(b);
    if (!(fa <= 0.0 && 0.0 <= fb)) return out;
    for (int it = 0; it < 200; ++it) {
        if (!(fa <= 0.0 && 0.0 <= fb))
            throw Error("solve_params: bisection lost its bracket (bug)");
        double mid = 0.5 * (a + b);
        double fm = F(mid);
        if (std::abs(fm) <= 1e-9 || mid == a || mid == b) {
            out.bracketed = true;
            out.r = path(mid);
            out.log_g_minus = fm + target;
            return out;
        }
        if (fm < 0.0) { a = mid; fa = fm; }
        else { b = mid; fb = fm; }
    }
    out.bracketed = true;
    out.r = path(0.5 * (a + b));
    out.log_g_minus = F(0.5 * (a + b)) + target;
    return out;
}

} // namespace

EntropyCertificate solve_params(const IntMatrix& A, double beta1, double beta2,
                                const SolveOptions& opts) {
    SpectralData sd = spectral_data(A, opts.grouping_tol);
    const double h = sd.h_top;
    if (!(beta1 >= 0.0) || !(beta1 < beta2) || !(beta2 <= h + 1e-12))
        throw TargetsOutOfRange("solve_params: need 0 <= beta1 < beta2 <= h_top = " +
                                std::to_string(h));
    const double gap = beta2 - beta1;
    const Eigen::MatrixXd Ad = to_dense(A);

    double eps = opts.epsilon0;
    if (eps <= 0.0) {
        double chi_min = sd.chi.back();
        eps = (chi_min - 1.0) / 10.0;
    }
    eps = std::min(eps, 0.999 * sd.chi.back());

    std::string last_diagnosis = "no feasible (eps, k) tried";
    for (int round = 0; round < opts.max_rounds; ++round) {
        if (eps < opts.eps_min)
            throw SearchExhausted("solve_params: eps fell below eps_min; last: " + last_diagnosis);

        EpsJordanForm ejf = eps_jordan(Ad, sd, eps);
        UnstableChart chart = unstable_chart(ejf, sd);

        // If even the k -> infinity gap limit is too wide, no k can help.
        if (psi_limit(chart, eps) >= 0.9 * gap * 0.999) {
            last_diagnosis = "psi limit " + std::to_string(psi_limit(chart, eps)) +
                             " >= 0.9 * window at eps = " + std::to_string(eps);
            eps *= 0.5;
            continue;
        }
        // Entropy reachable with this eps: max (1/k) log g_- tends to
        // sum zeta_j log(chi_j - eps).
        double reach = 0.0;
        for (size_t j = 0; j < chart.chi.size(); ++j)
            reach += chart.zeta[j] * std::log(chart.chi[j] - eps);
        if (beta1 > 0.0 && reach <= beta1) {
            last_diagnosis = "sum zeta log(chi - eps) = " + std::to_string(reach) +
                             " below beta1 at eps = " + std::to_string(eps);
            eps *= 0.5;
            continue;
        }

        for (int k = 1; k <= opts.k_max; ++k) {
            OmegaBox box = omega_k(chart, k, eps, opts.alpha0_margin, opts.tau_safety);
            if (!box.feasible) {
                last_diagnosis = "Omega_" + std::to_string(k) + " infeasible: " + box.reason;
                continue;
            }
            double psi = std::log(iterated_bounds(chart, k, box.lo, eps).g_plus) -
                         std::log(iterated_bounds(chart, k, box.lo, eps).g_minus);
            if (!(psi / k < 0.9 * gap)) {
                last_diagnosis = "psi_k / k = " + std::to_string(psi / k) +
                                 " >= 0.9 * window at k = " + std::to_string(k);
                continue;
            }
            double delta = std::min(0.5 * (k * gap - psi), k * gap / 20.0);

            RadiusVector r;
            std::string path_used = "diagonal";
            if (beta1 == 0.0) {
                // Lower corner: smallest log g_-, always positive; grow k
                // until the upper bound fits under k beta2.
                CellBounds cb = iterated_bounds(chart, k, box.lo, eps);
                if (!(std::log(cb.g_plus) <= k * beta2)) {
                    last_diagnosis = "beta1 = 0: log g_+ at the lower corner still above k beta2";
                    continue;
                }
                r = box.lo;
            } else {
                const double target = k * beta1 + delta;
                auto diagonal = [&](double t) {
                    RadiusVector rv(box.lo.size());
                    for (size_t j = 0; j < rv.size(); ++j)
                        rv[j] = (1.0 - t) * box.lo[j] + t * box.hi[j];
                    return rv;
                };
                PathBisection hit = bisect_on_path(chart, k, eps, target, diagonal);
                if (!hit.bracketed) {
                    // Per-coordinate continuation: raise one radius at a
                    // time. The endpoints match the diagonal's, so this is
                    // a belt-and-braces alternative, reported when used.
                    const size_t u = box.lo.size();
                    auto polyline = [&](double t) {
                        RadiusVector rv = box.lo;
                        double s = t * static_cast<double>(u);
                        for (size_t j = 0; j < u; ++j) {
                            double seg = std::clamp(s - static_cast<double>(j), 0.0, 1.0);
                            rv[j] = (1.0 - seg) * box.lo[j] + seg * box.hi[j];
                        }
                        return rv;
                    };
                    hit = bisect_on_path(chart, k, eps, target, polyline);
                    path_used = "per-coordinate";
                }
                if (!hit.bracketed) {
                    last_diagnosis = "target k beta1 + delta outside the g_- range over Omega_" +
                                     std::to_string(k);
                    continue;
                }
                r = hit.r;
            }

            CellBounds fin = iterated_bounds(chart, k, r, eps);
            double lg_minus = std::log(fin.g_minus);
            double lg_plus = std::log(fin.g_plus);
            bool contained = (lg_minus >= k * beta1) && (lg_plus <= k * beta2);
            if (!contained) {
                last_diagnosis = "final containment check failed at k = " + std::to_string(k);
                continue;
            }

            EntropyCertificate cert;
            cert.matrix = A;
            cert.beta1 = beta1;
            cert.beta2 = beta2;
            cert.k = k;
            cert.epsilon = eps;
            cert.r = r;
            cert.log_g_minus = lg_minus;
            cert.log_g_plus = lg_plus;
            cert.window_lo = lg_minus / k;
            cert.window_hi = lg_plus / k;
            cert.assumptions = check_assumptions(chart, box, r);
            cert.containment = true;
            cert.h_top = h;
            cert.path_used = path_used;
            cert.irreducible_warning = !sd.flags.irreducible;
            cert.grouping_tol = opts.grouping_tol;
            cert.alpha0_margin = opts.alpha0_margin;
            cert.tau_safety = opts.tau_safety;
            if (!cert.assumptions.all())
                throw Error("solve_params: assumptions failed on a feasible box point (bug)");
            return cert;
        }
        eps *= 0.5;
    }
    throw SearchExhausted("solve_params: max_rounds exhausted; last: " + last_diagnosis);
}

SetDescription describe_invariant_set(const EntropyCertificate& cert) {
    SpectralData sd = spectral_data(cert.matrix, cert.grouping_tol);
    EpsJordanForm ejf = eps_jordan(to_dense(cert.matrix), sd, cert.epsilon);
    UnstableChart chart = unstable_chart(ejf, sd);

    SetDescription d;
    d.k = cert.k;
    d.epsilon = cert.epsilon;
    d.r = cert.r;
    d.window_lo = cert.window_lo;
    d.window_hi = cert.window_hi;
    d.chart_half_widths.resize(chart.zeta_total);
    for (int i = 0; i < chart.zeta_total; ++i) {
        double s = 0.0;
        int off = 0;
        for (size_t j = 0; j < chart.zeta.size(); ++j) {
            s += chart.B.row(i).segment(off, chart.zeta[j]).norm() * cert.r[j];
            off += chart.zeta[j];
        }
        d.chart_half_widths[i] = s;
    }

    std::ostringstream u_line;
    u_line << "U = B D(r): box of half-widths (";
    for (int i = 0; i < chart.zeta_total; ++i)
        u_line << (i ? ", " : "") << d.chart_half_widths[i];
    u_line << ") in the chart coordinates";
    d.lines.push_back(u_line.str());
    d.lines.push_back("K(r): all torus points whose charted coordinates lie in U (a slab)");
    if (cert.k == 1) {
        d.lines.push_back("U_1 = intersection of f^i(K(r)) over all integers i; M = f(U_1) = U_1");
    } else {
        d.lines.push_back("U_" + std::to_string(cert.k) + " = intersection of f^(" +
                          std::to_string(cert.k) + "i)(K(r)) over all integers i");
        d.lines.push_back("M = union of f^j(U_" + std::to_string(cert.k) + "), j = 1.." +
                          std::to_string(cert.k));
    }
    std::ostringstream w;
    w << "h(f|M) = (1/" << cert.k << ") h(f^" << cert.k << ", U_" << cert.k << ") in ["
      << d.window_lo << ", " << d.window_hi << "] within [" << cert.beta1 << ", " << cert.beta2
      << "]";
    d.lines.push_back(w.str());
    return d;
}

} // namespace toral
