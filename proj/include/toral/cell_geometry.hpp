#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "toral/eps_jordan.hpp"

namespace toral {

using RadiusVector = std::vector<double>;

// Linear data of the unstable chart: B maps leaf coordinates to the
// projected torus coordinates, so leaf returns form the lattice
// Gamma = B^-1 Z^zeta. alpha and C1 are the diameter and volume of the
// fundamental parallelepiped (one "block"), C2 = vol D(1), C0 = C2/C1.
struct UnstableChart {
    Eigen::MatrixXd B, B_inv;      // zeta x zeta
    std::vector<int> coords;       // torus coordinates charting the leaf
    std::vector<double> chi;       // unstable modulus classes, descending
    std::vector<int> zeta;         // real dimension per class
    int zeta_total = 0;
    double alpha = 0.0;
    double C1 = 0.0, C2 = 0.0, C0 = 0.0;

    int class_offset(size_t j) const;
};

// Extracts the chart from an eps-Jordan form. If the leading zeta torus
// coordinates fail to chart the unstable subspace the best coordinate
// subset is substituted (recorded in coords); if none works this throws
// DegenerateProjection.
UnstableChart unstable_chart(const EpsJordanForm& ejf, const SpectralData& sd);

struct CellBounds {
    double g_minus = 0.0;
    double g_plus = 0.0;
};

// Closed-form cell-count bounds for a disk D(R): at least
// C0 * prod (R_j - alpha)^zeta_j cells covered, at most
// C0 * prod (R_j + alpha)^zeta_j + 1 intersected. Requires R_j > alpha.
CellBounds cell_count_bounds(const UnstableChart& chart, const RadiusVector& R);

// Bounds after k steps of expansion: the disks D((chi_j -+ eps)^k r_j).
// Requires r_j (chi_j - eps)^k > alpha and eps < chi_j; k = 0 degenerates
// to cell_count_bounds.
CellBounds iterated_bounds(const UnstableChart& chart, int k, const RadiusVector& r, double eps);

// Smallest uniform radius with g_-(a0,...,a0) > 1, plus a fixed relative
// margin: alpha + C0^(-1/zeta) * (1 + margin).
double alpha0(const UnstableChart& chart, double margin = 0.01);

// Largest certified uniform radius whose chart image stays inside the open
// unit cube, with a safety factor: tau = safety / max_i sum_j
// ||row-i block-j of B||.
double tau(const UnstableChart& chart, double safety = 0.49);

// Support-function test that D(r) fits inside one block.
bool cell_in_block(const UnstableChart& chart, const RadiusVector& r);

struct OmegaBox {
    bool feasible = false;
    std::string reason;
    RadiusVector lo, hi;
    double alpha0 = 0.0;
    double tau = 0.0;
    int k = 0;
    double epsilon = 0.0;
};

// Admissible radius box Omega_k = { 3 alpha0 / (chi_j - eps)^k <= r_j <= tau },
// empty (feasible = false) when the box is void or (chi_j - eps)^k <= 2.
// Every point of a feasible box satisfies the three construction
// assumptions; this is asserted at the corners, not assumed.
OmegaBox omega_k(const UnstableChart& chart, int k, double eps,
                 double alpha0_margin = 0.01, double tau_safety = 0.49);

// Certified upper bound of log g_+ - log g_- over Omega_k: the gap
// evaluated at the lower corner (it is decreasing in every r_j).
double psi_k(const UnstableChart& chart, int k, double eps,
             double alpha0_margin = 0.01, double tau_safety = 0.49);

// Limit of psi_k(eps)/k as k grows: sum zeta_j log((chi_j+eps)/(chi_j-eps)).
double psi_limit(const UnstableChart& chart, double eps);

} // namespace toral
