#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "toral/spectral.hpp"

namespace toral {

// One Jordan chain after realification: `dim` columns of Q. For a complex
// pair the chain occupies 2*length columns and the diagonal is the
// rotation-scaling [[a,-b],[b,a]].
struct JordanBlockInfo {
    double chi = 0.0;        // modulus of the eigenvalue
    int length = 0;          // chain length (number of eigenvalue slots)
    int dim = 0;             // columns in Q: length, or 2*length for a pair
    bool complex_pair = false;
    double re = 0.0, im = 0.0;  // eigenvalue (im = 0 for real blocks)
    int offset = 0;          // first column in Q / A_eps
};

// Contiguous run of coordinates sharing one modulus class.
struct ModulusClassLayout {
    double chi = 0.0;
    int offset = 0;
    int dim = 0;
};

struct EpsJordanForm {
    double epsilon = 0.0;
    Eigen::MatrixXd Q, Q_inv, A_eps;
    std::vector<JordanBlockInfo> blocks;
    std::vector<ModulusClassLayout> classes;  // descending modulus, all of them
    int zeta = 0;             // dimension of the unstable prefix
    double residual = 0.0;    // ||Q^-1 A Q - A_eps||_2
    double cond = 0.0;        // ||Q|| * ||Q^-1||
};

// Epsilon-scaled real Jordan conjugation: A_eps = Q^-1 A Q with eigenvalue
// blocks on the diagonal and couplings of norm epsilon on the
// superdiagonal. Unstable chains come first, grouped by descending modulus
// class. Chains are computed in double precision from the exact root data
// in `sd`; conditioning above cond_cap or a conjugation residual above
// 1e-8 * ||A|| throws IllConditioned.
EpsJordanForm eps_jordan(const Eigen::MatrixXd& A, const SpectralData& sd, double epsilon,
                         double cond_cap = 1e8);

struct SandwichVerdict {
    bool pass = false;
    // Worst slack observed, normalised by the bound; negative means a
    // violation beyond the allowed tolerance.
    double worst_lower_margin = 0.0;
    double worst_upper_margin = 0.0;
    int samples = 0;
    std::string detail;
};

// Samples boundary points of the unstable product-of-balls D(r) and checks
// per-class image norms against [(chi_j - eps) r_j, (chi_j + eps) r_j],
// plus the containment direction via preimages of boundary points of
// D((chi - eps) r). Deterministic for a fixed seed.
SandwichVerdict sandwich_check(const EpsJordanForm& ejf, const std::vector<double>& r,
                               int samples, unsigned seed = 0, double slack = 1e-12);

// Same windows iterated k times: per-class norms of A_eps^k x against
// [(chi_j - eps)^k r_j, (chi_j + eps)^k r_j].
SandwichVerdict power_sandwich_check(const EpsJordanForm& ejf, const std::vector<double>& r,
                                     int k, int samples, unsigned seed = 0, double slack = 1e-12);

} // namespace toral
