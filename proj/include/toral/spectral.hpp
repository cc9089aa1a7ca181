#pragma once

#include <complex>
#include <vector>

#include "toral/int_matrix.hpp"

namespace toral {

struct Root {
    std::complex<double> value;
    double residual = 0.0;   // |p(z)| / scale(p, z), certified after iteration
    int multiplicity = 1;    // exact, from the squarefree decomposition
};

// Roots of a monic integer polynomial with certified relative residuals.
// Multiple roots are extracted exactly first (gcd over Z), so the numeric
// solver only ever sees squarefree polynomials. Conjugate symmetry is
// enforced on the output. Throws NoConvergence if residuals cannot be
// certified below tol.
std::vector<Root> poly_roots(const IntPoly& p, double tol = 1e-12);

struct SpectralFlags {
    bool hyperbolic = false;
    bool ergodic = false;
    bool irreducible = false;
};

struct SpectralData {
    int l = 0;
    std::vector<Root> roots;       // distinct roots, conjugates both present
    std::vector<double> chi;       // distinct moduli > 1, strictly descending
    std::vector<int> zeta;         // real multiplicity per chi class
    int zeta_total = 0;            // sum of zeta
    int zeta_rest = 0;             // l - zeta_total
    double h_top = 0.0;            // nats
    SpectralFlags flags;
    // Unit-circle evidence, numeric and algebraic (see spectral_data()).
    int unit_modulus_count = 0;    // roots with | |z| - 1 | <= grouping_tol
    bool self_reciprocal = false;  // char poly palindromic up to sign
    std::vector<int> cyclotomic_factors;
    double grouping_tol = 1e-8;
    IntPoly characteristic;
};

// Full spectral analysis of an integer automorphism: certified roots,
// modulus classes chi_1 > ... > chi_u > 1 with multiplicities, entropy and
// classification flags. Requires |det A| = 1. Two moduli closer than
// grouping_tol fall in one class; if they are certifiably distinct at the
// root-finder's resolution this raises AmbiguousGrouping.
SpectralData spectral_data(const IntMatrix& A, double grouping_tol = 1e-8);

// Sum of zeta_j * log chi_j, nats.
double top_entropy(const SpectralData& sd);

} // namespace toral
