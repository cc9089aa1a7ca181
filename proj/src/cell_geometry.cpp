#include "toral/cell_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace toral {

int UnstableChart::class_offset(size_t j) const {
    int off = 0;
    for (size_t i = 0; i < j; ++i) off += zeta[i];
    return off;
}

namespace {

double unit_ball_volume(int d) {
    // V_0 = 1, V_1 = 2, V_d = 2 pi / d * V_{d-2}.
    double v0 = 1.0, v1 = 2.0;
    if (d == 0) return v0;
    const double pi = std::acos(-1.0);
    double v = (d % 2 == 0) ? v0 : v1;
    for (int k = (d % 2 == 0) ? 2 : 3; k <= d; k += 2) v *= 2.0 * pi / k;
    return v;
}

// Diameter of the parallelepiped spanned by the columns of Binv: the long
// diagonal, max over sign patterns of || sum s_i b_i ||. Exponential in
// zeta but zeta stays desk-scale.
double parallelepiped_diameter(const Eigen::MatrixXd& Binv) {
    const int z = static_cast<int>(Binv.cols());
    double best = 0.0;
    for (long mask = 0; mask < (1L << (z - 1)); ++mask) {
        Eigen::VectorXd v = Binv.col(0);
        for (int i = 1; i < z; ++i)
            v += ((mask >> (i - 1)) & 1) ? Eigen::VectorXd(-Binv.col(i)) : Eigen::VectorXd(Binv.col(i));
        best = std::max(best, v.norm());
    }
    return best;
}

double row_block_support(const UnstableChart& chart, int row, const RadiusVector& r) {
    // sup over D(r) of |<B row, x>| = sum_j ||row segment j|| r_j.
    double s = 0.0;
    int off = 0;
    for (size_t j = 0; j < chart.zeta.size(); ++j) {
        s += chart.B.row(row).segment(off, chart.zeta[j]).norm() * r[j];
        off += chart.zeta[j];
    }
    return s;
}

} // namespace

UnstableChart unstable_chart(const EpsJordanForm& ejf, const SpectralData& sd) {
    const int zeta = ejf.zeta;
    if (zeta < 1) throw PreconditionViolated("unstable_chart: no unstable directions");
    const int l = static_cast<int>(ejf.Q.rows());

    UnstableChart chart;
    chart.zeta_total = zeta;
    chart.chi = sd.chi;
    chart.zeta = sd.zeta;

    const Eigen::MatrixXd unstable_cols = ejf.Q.leftCols(zeta);

    // Default projection: the first zeta torus coordinates.
    std::vector<int> coords(zeta);
    std::iota(coords.begin(), coords.end(), 0);
    auto rows_of = [&](const std::vector<int>& sel) {
        Eigen::MatrixXd B(zeta, zeta);
        for (int i = 0; i < zeta; ++i) B.row(i) = unstable_cols.row(sel[i]);
        return B;
    };

    Eigen::MatrixXd B = rows_of(coords);
    double scale = unstable_cols.jacobiSvd().singularValues()(0);
    auto degenerate = [&](const Eigen::MatrixXd& M) {
        return std::abs(M.determinant()) < 1e-10 * std::pow(std::max(scale, 1e-300), zeta);
    };

    if (degenerate(B)) {
        // Search all coordinate subsets for the best-conditioned chart.
        std::vector<int> subset(zeta), best;
        double best_det = 0.0;
        std::vector<int> idx(l);
        std::iota(idx.begin(), idx.end(), 0);
        std::vector<bool> pick(l, false);
        std::fill(pick.end() - zeta, pick.end(), true);
        do {
            int t = 0;
            for (int i = 0; i < l; ++i)
                if (pick[i]) subset[t++] = i;
            double d = std::abs(rows_of(subset).determinant());
            if (d > best_det) { best_det = d; best = subset; }
        } while (std::next_permutation(pick.begin(), pick.end()));
        if (best.empty() || best_det < 1e-10 * std::pow(std::max(scale, 1e-300), zeta))
            throw DegenerateProjection(
                "unstable_chart: no coordinate subset charts the unstable subspace");
        coords = best;
        B = rows_of(coords);
    }

    chart.coords = coords;
    chart.B = B;
    chart.B_inv = B.inverse();
    chart.alpha = parallelepiped_diameter(chart.B_inv);
    chart.C1 = std::abs(chart.B_inv.determinant());
    chart.C2 = 1.0;
    for (int zj : chart.zeta) chart.C2 *= unit_ball_volume(zj);
    chart.C0 = chart.C2 / chart.C1;
    return chart;
}

CellBounds cell_count_bounds(const UnstableChart& chart, const RadiusVector& R) {
    if (R.size() != chart.chi.size())
        throw PreconditionViolated("cell_count_bounds: one radius per modulus class required");
    CellBounds out;
    double lower = chart.C0, upper = chart.C0;
    for (size_t j = 0; j < R.size(); ++j) {
        if (!(R[j] > chart.alpha))
            throw HypothesisViolated("cell_count_bounds: R_j <= alpha (R_j = " +
                                     std::to_string(R[j]) + ", alpha = " +
                                     std::to_string(chart.alpha) + ")");
        lower *= std::pow(R[j] - chart.alpha, chart.zeta[j]);
        upper *= std::pow(R[j] + chart.alpha, chart.zeta[j]);
    }
    out.g_minus = lower;
    out.g_plus = upper + 1.0;
    return out;
}

CellBounds iterated_bounds(const UnstableChart& chart, int k, const RadiusVector& r, double eps) {
    if (k < 0) throw PreconditionViolated("iterated_bounds: k >= 0 required");
    if (r.size() != chart.chi.size())
        throw PreconditionViolated("iterated_bounds: one radius per modulus class required");
    RadiusVector shrunk(r.size()), grown(r.size());
    for (size_t j = 0; j < r.size(); ++j) {
        if (!(eps < chart.chi[j]))
            throw PreconditionViolated("iterated_bounds: eps >= chi_j");
        shrunk[j] = r[j] * std::pow(chart.chi[j] - eps, k);
        grown[j] = r[j] * std::pow(chart.chi[j] + eps, k);
    }
    CellBounds lo = cell_count_bounds(chart, shrunk);  // throws if hypothesis fails
    CellBounds hi = cell_count_bounds(chart, grown);
    return CellBounds{lo.g_minus, hi.g_plus};
}

double alpha0(const UnstableChart& chart, double margin) {
    double a0 = chart.alpha + std::pow(chart.C0, -1.0 / chart.zeta_total) * (1.0 + margin);
    // Postcondition of the construction, not an assumption.
    if (!(chart.C0 * std::pow(a0 - chart.alpha, chart.zeta_total) > 1.0))
        throw Error("alpha0: postcondition C0 (a0 - alpha)^zeta > 1 failed");
    return a0;
}

double tau(const UnstableChart& chart, double safety) {
    double worst = 0.0;
    RadiusVector ones(chart.chi.size(), 1.0);
    for (int i = 0; i < chart.zeta_total; ++i)
        worst = std::max(worst, row_block_support(chart, i, ones));
    double t = safety / worst;
    // Certify by support evaluation: image of D(tau * 1) stays in the cube.
    RadiusVector rt(chart.chi.size(), t);
    for (int i = 0; i < chart.zeta_total; ++i)
        if (!(row_block_support(chart, i, rt) < 0.5))
            throw Error("tau: support certification failed");
    return t;
}

bool cell_in_block(const UnstableChart& chart, const RadiusVector& r) {
    for (int i = 0; i < chart.zeta_total; ++i)
        if (!(row_block_support(chart, i, r) <= 0.5)) return false;
    return true;
}

OmegaBox omega_k(const UnstableChart& chart, int k, double eps,
                 double alpha0_margin, double tau_safety) {
    OmegaBox box;
    box.k = k;
    box.epsilon = eps;
    box.alpha0 = alpha0(chart, alpha0_margin);
    box.tau = tau(chart, tau_safety);
    const size_t u = chart.chi.size();
    box.lo.resize(u);
    box.hi.assign(u, box.tau);
    for (size_t j = 0; j < u; ++j) {
        if (!(eps < chart.chi[j])) {
            box.feasible = false;
            box.reason = "eps >= chi_j";
            return box;
        }
        double growth = std::pow(chart.chi[j] - eps, k);
        if (!(growth > 2.0)) {
            box.feasible = false;
            box.reason = "(chi_j - eps)^k <= 2 (assumption 1 fails)";
            return box;
        }
        box.lo[j] = 3.0 * box.alpha0 / growth;
        if (box.lo[j] > box.hi[j]) {
            box.feasible = false;
            box.reason = "3 alpha0 / (chi_j - eps)^k > tau (box empty)";
            return box;
        }
    }
    // Assert the assumptions at the corners: the lower corner meets the
    // radius floor with equality, the upper corner must fit the cube.
    for (size_t j = 0; j < u; ++j) {
        if (!(box.lo[j] * std::pow(chart.chi[j] - eps, k) >= 3.0 * box.alpha0 * (1.0 - 1e-12)))
            throw Error("omega_k: lower-corner assumption check failed");
    }
    if (!cell_in_block(chart, box.hi))
        throw Error("omega_k: upper corner leaves the unit cube");
    box.feasible = true;
    return box;
}

double psi_k(const UnstableChart& chart, int k, double eps,
             double alpha0_margin, double tau_safety) {
    OmegaBox box = omega_k(chart, k, eps, alpha0_margin, tau_safety);
    if (!box.feasible)
        throw HypothesisViolated("psi_k: Omega_k infeasible: " + box.reason);
    CellBounds b = iterated_bounds(chart, k, box.lo, eps);
    return std::log(b.g_plus) - std::log(b.g_minus);
}

double psi_limit(const UnstableChart& chart, double eps) {
    double s = 0.0;
    for (size_t j = 0; j < chart.chi.size(); ++j) {
        if (!(eps < chart.chi[j])) throw PreconditionViolated("psi_limit: eps >= chi_j");
        s += chart.zeta[j] * std::log((chart.chi[j] + eps) / (chart.chi[j] - eps));
    }
    return s;
}

} // namespace toral
