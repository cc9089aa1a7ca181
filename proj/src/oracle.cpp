#include "toral/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <thread>

#include "toral/spectral.hpp"

namespace toral {

namespace {

// Inclusive closed-set tests with a tiny symmetric closure fattening, so
// axis-aligned hand examples with exact ties land on the inclusive side.
constexpr double kTieSlack = 1e-9;

struct ScanGeometry {
    std::vector<std::int64_t> bound;  // |m_i| <= bound[i]
    std::int64_t total = 1;
};

ScanGeometry scan_box(const UnstableChart& chart, const RadiusVector& cell_r,
                      const RadiusVector& disk_R) {
    const int z = chart.zeta_total;
    ScanGeometry g;
    g.bound.resize(z);
    RadiusVector reach(cell_r.size());
    for (size_t j = 0; j < cell_r.size(); ++j) reach[j] = cell_r[j] + disk_R[j];
    for (int i = 0; i < z; ++i) {
        // sup over the reach set of |<B row i, x>| bounds |m_i| for any
        // candidate gamma = B^-1 m; points outside violate the
        // intersection inequality.
        double s = 0.0;
        int off = 0;
        for (size_t j = 0; j < cell_r.size(); ++j) {
            s += chart.B.row(i).segment(off, chart.zeta[j]).norm() * reach[j];
            off += chart.zeta[j];
        }
        g.bound[i] = static_cast<std::int64_t>(std::floor(s * (1.0 + 1e-12) + kTieSlack));
        g.total *= 2 * g.bound[i] + 1;
        if (g.total < 0) g.total = std::numeric_limits<std::int64_t>::max();
    }
    return g;
}

} // namespace

CellCount brute_force_cell_count(const UnstableChart& chart, const RadiusVector& cell_r,
                                 const RadiusVector& disk_R, std::int64_t budget, int threads) {
    const int z = chart.zeta_total;
    const size_t u = chart.chi.size();
    if (cell_r.size() != u || disk_R.size() != u)
        throw PreconditionViolated("brute_force_cell_count: one radius per class required");

    ScanGeometry geom = scan_box(chart, cell_r, disk_R);
    if (geom.total > budget)
        throw BudgetExceeded("brute_force_cell_count: enumeration box has " +
                             std::to_string(geom.total) + " points, budget " +
                             std::to_string(budget));

    // Flattened lex scan over the index box, partitioned by leading index
    // for the parallel case. Per-point work: gamma = B_inv * m, then the
    // two per-class closed tests.
    std::vector<int> offsets(u);
    for (size_t j = 0; j < u; ++j) offsets[j] = chart.class_offset(j);

    auto scan_range = [&](std::int64_t i0_lo, std::int64_t i0_hi, std::int64_t& cov,
                          std::int64_t& inter) {
        std::vector<std::int64_t> m(z);
        Eigen::VectorXd mv(z), gamma(z);
        std::int64_t c = 0, it = 0;
        for (std::int64_t i0 = i0_lo; i0 < i0_hi; ++i0) {
            m[0] = i0;
            // odometer over remaining coordinates
            for (int i = 1; i < z; ++i) m[i] = -geom.bound[i];
            while (true) {
                for (int i = 0; i < z; ++i) mv(i) = static_cast<double>(m[i]);
                gamma = chart.B_inv * mv;
                bool covered = true, intersects = true;
                for (size_t j = 0; j < u && (covered || intersects); ++j) {
                    double n = gamma.segment(offsets[j], chart.zeta[j]).norm();
                    double slack = kTieSlack * std::max(1.0, cell_r[j] + disk_R[j]);
                    if (n + cell_r[j] > disk_R[j] + slack) covered = false;
                    if (n > cell_r[j] + disk_R[j] + slack) intersects = false;
                }
                if (covered) ++c;
                if (intersects) ++it;
                int i = z - 1;
                while (i >= 1) {
                    if (++m[i] <= geom.bound[i]) break;
                    m[i] = -geom.bound[i];
                    --i;
                }
                if (i == 0) break;
            }
        }
        cov = c;
        inter = it;
    };

    CellCount out;
    out.box = geom.bound;
    const std::int64_t lo = -geom.bound[0], hi = geom.bound[0] + 1;
    if (threads <= 1) {
        scan_range(lo, hi, out.covered, out.intersecting);
    } else {
        const int nt = std::min<std::int64_t>(threads, hi - lo);
        std::vector<std::int64_t> cov(nt, 0), inter(nt, 0);
        std::vector<std::thread> pool;
        for (int t = 0; t < nt; ++t) {
            std::int64_t a = lo + (hi - lo) * t / nt;
            std::int64_t b = lo + (hi - lo) * (t + 1) / nt;
            pool.emplace_back([&, a, b, t] { scan_range(a, b, cov[t], inter[t]); });
        }
        for (auto& th : pool) th.join();
        // integer reduction: order-independent
        for (int t = 0; t < nt; ++t) {
            out.covered += cov[t];
            out.intersecting += inter[t];
        }
    }
    return out;
}

CoverVerdict verify_cellcover(const UnstableChart& chart, const RadiusVector& R,
                              const RadiusVector& cell_r, std::int64_t budget, int threads) {
    CoverVerdict v;
    for (size_t j = 0; j < R.size(); ++j) {
        if (!(R[j] > chart.alpha)) {
            v.reason = "R_j <= alpha: the lower bound g_- is not defined here";
            return v;
        }
    }
    if (!cell_in_block(chart, cell_r)) {
        v.reason = "cell does not fit inside one block (assumption 3 fails)";
        return v;
    }
    v.precondition_ok = true;
    v.bounds = cell_count_bounds(chart, R);
    v.counts = brute_force_cell_count(chart, cell_r, R, budget, threads);
    v.margin_lower = static_cast<double>(v.counts.covered) - v.bounds.g_minus;
    v.margin_upper = v.bounds.g_plus - static_cast<double>(v.counts.intersecting);
    v.plus_one_needed = static_cast<double>(v.counts.intersecting) > v.bounds.g_plus - 1.0;
    v.pass = v.margin_lower >= 0.0 && v.margin_upper >= 0.0;
    if (!v.pass) v.reason = "exact counts violate the closed-form bounds";
    return v;
}

ComponentBounds component_bounds(const IntMatrix& A, double eps, int k, const RadiusVector& r,
                                 int m, double grouping_tol, std::int64_t budget, int threads) {
    if (m < 1 || m > 12)
        throw PreconditionViolated("component_bounds: 1 <= m <= 12 required");
    SpectralData sd = spectral_data(A, grouping_tol);
    Eigen::MatrixXd Ad(A.n, A.n);
    for (int i = 0; i < A.n; ++i)
        for (int j = 0; j < A.n; ++j) Ad(i, j) = static_cast<double>(A.at(i, j));
    EpsJordanForm ejf = eps_jordan(Ad, sd, eps);
    UnstableChart chart = unstable_chart(ejf, sd);

    RadiusVector shrunk(r.size()), grown(r.size());
    for (size_t j = 0; j < r.size(); ++j) {
        double growth = std::pow(chart.chi[j] - eps, k);
        if (!(r[j] * growth > chart.alpha))
            throw HypothesisViolated("component_bounds: r_j (chi_j - eps)^k <= alpha");
        shrunk[j] = r[j] * growth;
        grown[j] = r[j] * std::pow(chart.chi[j] + eps, k);
    }

    ComponentBounds out;
    out.m = m;
    CellBounds cb = iterated_bounds(chart, k, r, eps);
    out.g_minus = cb.g_minus;
    out.g_plus = cb.g_plus;
    out.shrunk_counts = brute_force_cell_count(chart, r, shrunk, budget, threads);
    out.grown_counts = brute_force_cell_count(chart, r, grown, budget, threads);
    out.n_minus = out.shrunk_counts.covered;
    out.n_plus = out.grown_counts.intersecting;
    out.lower = boost::multiprecision::pow(BigInt(out.n_minus), static_cast<unsigned>(m));
    out.upper = boost::multiprecision::pow(BigInt(out.n_plus), static_cast<unsigned>(m));
    out.g_minus_pow_m = std::pow(out.g_minus, m);
    out.g_plus_pow_m = std::pow(out.g_plus, m);
    out.pass = static_cast<double>(out.n_minus) >= out.g_minus &&
               static_cast<double>(out.n_plus) <= out.g_plus;
    return out;
}

namespace {

// Smith normal form S = L M R over Z; only S and the accumulated column
// operations R are needed: the period lattice is { R diag(c_i/s_i) mod 1 }.
struct Snf {
    std::vector<BigInt> diag;
    IntMatrix R;
};

Snf smith_normal_form(IntMatrix M) {
    const int n = M.n;
    Snf snf;
    snf.R = IntMatrix::identity(n);
    auto col_swap = [&](int a, int b) {
        for (int i = 0; i < n; ++i) {
            std::swap(M.at(i, a), M.at(i, b));
            std::swap(snf.R.at(i, a), snf.R.at(i, b));
        }
    };
    auto col_add = [&](int dst, int src, const BigInt& f) {
        for (int i = 0; i < n; ++i) {
            M.at(i, dst) += f * M.at(i, src);
            snf.R.at(i, dst) += f * snf.R.at(i, src);
        }
    };
    auto row_swap = [&](int a, int b) {
        for (int j = 0; j < n; ++j) std::swap(M.at(a, j), M.at(b, j));
    };
    auto row_add = [&](int dst, int src, const BigInt& f) {
        for (int j = 0; j < n; ++j) M.at(dst, j) += f * M.at(src, j);
    };

    for (int t = 0; t < n; ++t) {
        while (true) {
            // Find the smallest nonzero pivot in the trailing block.
            int pi = -1, pj = -1;
            for (int i = t; i < n; ++i)
                for (int j = t; j < n; ++j) {
                    if (M.at(i, j) == 0) continue;
                    if (pi < 0 || boost::multiprecision::abs(M.at(i, j)) <
                                      boost::multiprecision::abs(M.at(pi, pj))) {
                        pi = i;
                        pj = j;
                    }
                }
            if (pi < 0) { snf.diag.push_back(0); break; }
            if (pi != t) row_swap(pi, t);
            if (pj != t) col_swap(pj, t);
            bool clean = true;
            for (int i = t + 1; i < n; ++i) {
                BigInt q = M.at(i, t) / M.at(t, t);
                if (q != 0) row_add(i, t, -q);
                if (M.at(i, t) != 0) clean = false;
            }
            for (int j = t + 1; j < n; ++j) {
                BigInt q = M.at(t, j) / M.at(t, t);
                if (q != 0) col_add(j, t, -q);
                if (M.at(t, j) != 0) clean = false;
            }
            if (clean) {
                if (M.at(t, t) < 0) {
                    for (int j2 = 0; j2 < n; ++j2) M.at(t, j2) = -M.at(t, j2);
                }
                snf.diag.push_back(M.at(t, t));
                break;
            }
        }
    }
    return snf;
}

double frac01(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0) f = 0.0;
    return f;
}

double circle_dist(double a, double b) {
    double d = std::abs(a - b);
    return std::min(d, 1.0 - d);
}

struct OrbitSet {
    int l = 0, n = 0;
    std::vector<double> data;  // orbits, n*l doubles per point
    const double* orbit(size_t p) const { return data.data() + p * n * l; }
};

// d_n distance with descending-time early exit: expansion makes late times
// separate first.
bool separated(const OrbitSet& s, const double* a, const double* b, double delta) {
    for (int t = s.n - 1; t >= 0; --t) {
        double d = 0.0;
        for (int i = 0; i < s.l; ++i)
            d = std::max(d, circle_dist(a[t * s.l + i], b[t * s.l + i]));
        if (d >= delta) return true;
    }
    return false;
}

std::vector<std::array<double, 3>> base_grid(int l, double delta, unsigned seed) {
    // Uniform grid with spacing delta/2; the seed shifts the origin.
    std::vector<std::array<double, 3>> pts;
    const double s = delta / 2.0;
    const int per_dim = static_cast<int>(std::floor(1.0 / s));
    const double shift = frac01(0.5 + 0.6180339887498949 * seed) * s;
    std::array<int, 3> idx{0, 0, 0};
    std::array<int, 3> lim{per_dim, l > 1 ? per_dim : 1, l > 2 ? per_dim : 1};
    for (idx[0] = 0; idx[0] < lim[0]; ++idx[0])
        for (idx[1] = 0; idx[1] < lim[1]; ++idx[1])
            for (idx[2] = 0; idx[2] < lim[2]; ++idx[2]) {
                std::array<double, 3> p{0, 0, 0};
                for (int i = 0; i < l; ++i) p[i] = frac01(idx[i] * s + shift);
                pts.push_back(p);
            }
    return pts;
}

// Exact n-periodic points: the subgroup (A^n - I)^{-1} Z^l / Z^l,
// enumerated through the Smith form. Empty when degenerate or over budget.
std::vector<std::array<double, 3>> periodic_points(const IntMatrix& A, int n,
                                                   std::int64_t budget, bool& degenerate) {
    IntMatrix M = A.pow(n);
    for (int i = 0; i < M.n; ++i) M.at(i, i) -= 1;
    BigInt det = determinant(M);
    degenerate = (det == 0);
    std::vector<std::array<double, 3>> pts;
    if (degenerate) return pts;
    BigInt count = boost::multiprecision::abs(det);
    if (count > budget)
        throw BudgetExceeded("separated_set_entropy: period-" + std::to_string(n) +
                             " lattice has " + count.str() + " points, budget " +
                             std::to_string(budget));
    Snf snf = smith_normal_form(M);
    const int l = M.n;
    std::vector<std::int64_t> s(l);
    for (int i = 0; i < l; ++i) s[i] = snf.diag[i].convert_to<std::int64_t>();
    std::vector<std::int64_t> c(l, 0);
    while (true) {
        std::array<double, 3> p{0, 0, 0};
        for (int i = 0; i < l; ++i) {
            double x = 0.0;
            for (int j = 0; j < l; ++j)
                x += static_cast<double>(snf.R.at(i, j)) * (static_cast<double>(c[j]) / s[j]);
            p[i] = frac01(x);
        }
        pts.push_back(p);
        int i = l - 1;
        while (i >= 0) {
            if (++c[i] < s[i]) break;
            c[i] = 0;
            --i;
        }
        if (i < 0) break;
    }
    return pts;
}

} // namespace

std::vector<std::int64_t> separated_set_cardinalities(const IntMatrix& A, int n_max, double delta,
                                                      unsigned seed, std::int64_t budget) {
    const int l = A.n;
    if (l > 3)
        throw PreconditionViolated("separated_set_entropy: l <= 3 required (cost ~ delta^-l * growth^n)");
    if (!(delta > 0 && delta < 0.5))
        throw PreconditionViolated("separated_set_entropy: delta in (0, 1/2) required");
    if (n_max < 2) throw PreconditionViolated("separated_set_entropy: n_max >= 2 required");

    Eigen::MatrixXd Ad(l, l);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) Ad(i, j) = static_cast<double>(A.at(i, j));

    // The period-n pools only resolve stage-n Bowen balls when they are
    // nondegenerate at every n; any root of unity in the spectrum forces
    // the fixed grid throughout so that S(n) stays comparable across n.
    bool use_periodic = true;
    for (int n = 1; n <= n_max && use_periodic; ++n) {
        IntMatrix M = A.pow(n);
        for (int i = 0; i < M.n; ++i) M.at(i, i) -= 1;
        if (determinant(M) == 0) use_periodic = false;
    }

    std::vector<std::array<double, 3>> grid = base_grid(l, delta, seed);
    std::vector<std::int64_t> cards;

    for (int n = 1; n <= n_max; ++n) {
        std::vector<std::array<double, 3>> pool;
        if (use_periodic) {
            bool degen = false;
            pool = periodic_points(A, n, budget, degen);
        } else {
            pool = grid;
        }

        std::vector<double> orbit_buf(static_cast<size_t>(n) * l);
        OrbitSet kept;
        kept.l = l;
        kept.n = n;

        // Greedy hash on the time-0 cell (side delta): conflicting pairs
        // share neighbouring cells.
        const int nb = std::max(1, static_cast<int>(std::floor(1.0 / delta)));
        const int nby = l > 1 ? nb : 1;
        const int nbz = l > 2 ? nb : 1;
        auto clampc = [&](double v, int lim) {
            return std::min(lim - 1, std::max(0, static_cast<int>(v * lim)));
        };
        std::vector<std::vector<std::int64_t>> buckets(
            static_cast<size_t>(nb) * nby * nbz);
        auto bucket_index = [&](int cx, int cy, int cz) {
            return (static_cast<size_t>(cz) * nby + cy) * nb + cx;
        };

        std::int64_t kept_count = 0;
        for (const auto& p : pool) {
            double x[3] = {p[0], p[1], p[2]};
            for (int t = 0; t < n; ++t) {
                for (int i = 0; i < l; ++i) orbit_buf[t * l + i] = x[i];
                if (t + 1 < n) {
                    double y[3] = {0, 0, 0};
                    for (int i = 0; i < l; ++i) {
                        double acc = 0;
                        for (int j = 0; j < l; ++j) acc += Ad(i, j) * x[j];
                        y[i] = frac01(acc);
                    }
                    for (int i = 0; i < l; ++i) x[i] = y[i];
                }
            }
            // Probe neighbouring time-0 cells (wrapping: torus).
            bool ok = true;
            const int c0x = clampc(orbit_buf[0], nb);
            const int c0y = l > 1 ? clampc(orbit_buf[1], nb) : 0;
            const int c0z = l > 2 ? clampc(orbit_buf[2], nb) : 0;
            for (int dx = -1; dx <= 1 && ok; ++dx)
                for (int dy = (l > 1 ? -1 : 0); dy <= (l > 1 ? 1 : 0) && ok; ++dy)
                    for (int dz = (l > 2 ? -1 : 0); dz <= (l > 2 ? 1 : 0) && ok; ++dz) {
                        int cx = ((c0x + dx) % nb + nb) % nb;
                        int cy = ((c0y + dy) % nby + nby) % nby;
                        int cz = ((c0z + dz) % nbz + nbz) % nbz;
                        for (std::int64_t id : buckets[bucket_index(cx, cy, cz)]) {
                            if (!separated(kept, kept.orbit(id), orbit_buf.data(), delta)) {
                                ok = false;
                                break;
                            }
                        }
                    }
            if (ok) {
                kept.data.insert(kept.data.end(), orbit_buf.begin(), orbit_buf.end());
                buckets[bucket_index(c0x, c0y, c0z)].push_back(kept_count);
                ++kept_count;
            }
        }
        cards.push_back(kept_count);
    }
    return cards;
}

double separated_set_entropy(const IntMatrix& A, int n_max, double delta, unsigned seed,
                             std::int64_t budget) {
    std::vector<std::int64_t> S = separated_set_cardinalities(A, n_max, delta, seed, budget);
    // Least squares slope of log S(n) over the last half of the range.
    int first = n_max / 2 + 1;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int n = first; n <= n_max; ++n) {
        double x = n, y = std::log(static_cast<double>(std::max<std::int64_t>(S[n - 1], 1)));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    double denom = cnt * sxx - sx * sx;
    if (denom == 0) return 0.0;
    return (cnt * sxy - sx * sy) / denom;
}

} // namespace toral
