#pragma once

#include <string>
#include <vector>

#include "toral/cell_geometry.hpp"
#include "toral/int_matrix.hpp"

namespace toral {

struct SolveOptions {
    double epsilon0 = 0.0;      // 0 = auto: min_j (chi_j - 1) / 10
    int k_max = 10000;
    double eps_min = 1e-6;
    int max_rounds = 60;        // epsilon-halving budget
    double grouping_tol = 1e-8;
    double alpha0_margin = 0.01;
    double tau_safety = 0.49;
};

struct AssumptionsReport {
    bool expansion_gt_2 = false;  // (chi_j - eps)^k > 2
    bool radius_floor = false;    // r_j (chi_j - eps)^k >= 3 alpha0
    bool cube = false;            // chart image of D(r) inside the unit cube
    bool all() const { return expansion_gt_2 && radius_floor && cube; }
};

struct EntropyCertificate {
    IntMatrix matrix;
    double beta1 = 0.0, beta2 = 0.0;
    int k = 0;
    double epsilon = 0.0;
    RadiusVector r;
    double log_g_minus = 0.0, log_g_plus = 0.0;
    double window_lo = 0.0, window_hi = 0.0;  // log g_-/k, log g_+/k
    AssumptionsReport assumptions;
    bool containment = false;
    double h_top = 0.0;
    std::string path_used;          // "diagonal" or "per-coordinate"
    bool irreducible_warning = false;
    // Replay parameters: a fresh process recomputes log_g from these.
    double grouping_tol = 1e-8;
    double alpha0_margin = 0.01;
    double tau_safety = 0.49;
};

// Searches (eps, k, r in Omega_k) with [log g_-, log g_+] inside
// [k beta1, k beta2]. The radius is found by monotone bisection of
// log g_- along the box diagonal, aimed slightly above k beta1 so round-off
// cannot break containment; beta1 = 0 takes the lower corner and grows k
// until the upper bound fits. Deterministic. Throws TargetsOutOfRange or
// SearchExhausted (with the last infeasibility diagnosis).
EntropyCertificate solve_params(const IntMatrix& A, double beta1, double beta2,
                                const SolveOptions& opts = {});

struct SetDescription {
    int k = 0;
    double epsilon = 0.0;
    RadiusVector r;
    std::vector<double> chart_half_widths;  // per chart coordinate, of U = B D(r)
    double window_lo = 0.0, window_hi = 0.0;
    std::vector<std::string> lines;         // human-readable recipe
};

// Symbolic description of the invariant set behind a certificate: the slab
// K(r), the intersection U_k and the union M, with the entropy window for
// M. No point set is materialised.
SetDescription describe_invariant_set(const EntropyCertificate& cert);

} // namespace toral
