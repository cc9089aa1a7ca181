#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>

#include "toral/spectral.hpp"

using namespace toral;

namespace {

IntMatrix cat_map() { return IntMatrix::from_rows({{2, 1}, {1, 1}}); }
IntMatrix salem4() { return IntMatrix::companion({1, -1, -1, -1, 1}); }

// Independent root oracle: sign bisection on the exact polynomial.
// Evaluated in long double; 200 halvings of [lo,hi] are far below the
// representable resolution, so the result is correct to ~1 ulp.
long double bisect_root(const IntPoly& p, long double lo, long double hi) {
    auto eval = [&](long double x) {
        long double acc = 0;
        for (auto it = p.c.rbegin(); it != p.c.rend(); ++it)
            acc = acc * x + static_cast<long double>(*it);
        return acc;
    };
    long double flo = eval(lo);
    REQUIRE(flo * eval(hi) < 0);
    for (int i = 0; i < 200; ++i) {
        long double mid = (lo + hi) / 2;
        long double fm = eval(mid);
        if ((fm < 0) == (flo < 0)) { lo = mid; flo = fm; }
        else hi = mid;
    }
    return (lo + hi) / 2;
}

double modulus_of(const Root& r) { return std::abs(r.value); }

} // namespace

TEST_CASE("poly_roots: cat map quadratic against the closed form") {
    // Oracle: quadratic formula, frozen here.
    const double golden_plus = (3.0 + std::sqrt(5.0)) / 2.0;   // 2.6180339887498949
    const double golden_minus = (3.0 - std::sqrt(5.0)) / 2.0;  // 0.3819660112501051
    auto roots = poly_roots(IntPoly::from_ll({1, -3, 1}), 1e-12);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].value.imag() == 0.0);
    CHECK(roots[1].value.imag() == 0.0);
    CHECK(roots[0].value.real() == doctest::Approx(golden_plus).epsilon(1e-13));
    CHECK(roots[1].value.real() == doctest::Approx(golden_minus).epsilon(1e-13));
    CHECK(roots[0].residual <= 1e-12);
}

TEST_CASE("poly_roots: x^2 + 1 returns an exact conjugate pair") {
    auto roots = poly_roots(IntPoly::from_ll({1, 0, 1}), 1e-12);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].value == std::conj(roots[1].value));
    CHECK(std::abs(roots[0].value.imag()) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(roots[0].value.real() == 0.0);
}

TEST_CASE("poly_roots: Salem quartic structure") {
    IntPoly p = IntPoly::from_ll({1, -1, -1, -1, 1});
    const double lambda = static_cast<double>(bisect_root(p, 1.0L, 2.0L));
    auto roots = poly_roots(p, 1e-12);
    REQUIRE(roots.size() == 4);

    int real_count = 0, circle_count = 0;
    double found_lambda = 0, found_recip = 0;
    for (const Root& r : roots) {
        if (r.value.imag() == 0.0) {
            ++real_count;
            if (r.value.real() > 1.0) found_lambda = r.value.real();
            else found_recip = r.value.real();
        } else if (std::abs(modulus_of(r) - 1.0) < 1e-9) {
            ++circle_count;
        }
    }
    CHECK(real_count == 2);
    CHECK(circle_count == 2);
    CHECK(found_lambda == doctest::Approx(lambda).epsilon(1e-12));
    // Reciprocal-polynomial symmetry: the second real root is 1/lambda.
    CHECK(found_recip == doctest::Approx(1.0 / lambda).epsilon(1e-12));
}

TEST_CASE("poly_roots: exact multiplicities via squarefree preprocessing") {
    // (x-1)^3
    auto roots = poly_roots(IntPoly::from_ll({-1, 3, -3, 1}), 1e-12);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].multiplicity == 3);
    CHECK(roots[0].value.real() == doctest::Approx(1.0).epsilon(1e-14));

    // (x^2-3x+1)^2: two double roots
    IntPoly p = IntPoly::from_ll({1, -3, 1});
    auto r2 = poly_roots(p * p, 1e-12);
    REQUIRE(r2.size() == 2);
    CHECK(r2[0].multiplicity == 2);
    CHECK(r2[1].multiplicity == 2);
}

TEST_CASE("poly_roots: unreachable tolerance is loud") {
    CHECK_THROWS_AS((void)poly_roots(IntPoly::from_ll({1, -3, 1}), 1e-30), NoConvergence);
}

TEST_CASE("spectral_data: cat map") {
    SpectralData sd = spectral_data(cat_map());
    const double chi = (3.0 + std::sqrt(5.0)) / 2.0;
    REQUIRE(sd.chi.size() == 1);
    CHECK(sd.chi[0] == doctest::Approx(chi).epsilon(1e-12));
    CHECK(sd.zeta[0] == 1);
    CHECK(sd.zeta_total == 1);
    CHECK(sd.zeta_rest == 1);
    CHECK(sd.h_top == doctest::Approx(std::log(chi)).epsilon(1e-12));
    CHECK(sd.h_top == doctest::Approx(0.9624236501192069).epsilon(1e-10));
    CHECK(sd.flags.hyperbolic);
    CHECK(sd.flags.ergodic);
    CHECK(sd.flags.irreducible);
}

TEST_CASE("spectral_data: identity(2)") {
    SpectralData sd = spectral_data(IntMatrix::identity(2));
    CHECK(sd.chi.empty());
    CHECK(sd.h_top == 0.0);
    CHECK_FALSE(sd.flags.hyperbolic);
    CHECK_FALSE(sd.flags.ergodic);
    CHECK(sd.cyclotomic_factors == std::vector<int>{1});
    CHECK_FALSE(sd.flags.irreducible);
    CHECK(sd.unit_modulus_count == 2);
}

TEST_CASE("spectral_data: Salem-4 companion") {
    IntPoly p = IntPoly::from_ll({1, -1, -1, -1, 1});
    const double lambda = static_cast<double>(bisect_root(p, 1.0L, 2.0L));
    SpectralData sd = spectral_data(salem4());
    REQUIRE(sd.chi.size() == 1);
    CHECK(sd.chi[0] == doctest::Approx(lambda).epsilon(1e-12));
    CHECK(std::abs(sd.h_top - std::log(lambda)) <= 1e-9);
    CHECK(sd.zeta[0] == 1);
    CHECK(sd.zeta_rest == 3);
    CHECK_FALSE(sd.flags.hyperbolic);
    CHECK(sd.flags.ergodic);
    CHECK(sd.flags.irreducible);
    CHECK(sd.self_reciprocal);
    CHECK(sd.unit_modulus_count == 2);
}

TEST_CASE("spectral_data: non-automorphism rejected") {
    CHECK_THROWS_AS((void)spectral_data(IntMatrix::from_rows({{2, 0}, {0, 1}})), NotAnAutomorphism);
}

TEST_CASE("spectral invariants: moduli product and root sum") {
    const std::vector<IntMatrix> cases = {
        cat_map(), salem4(), IntMatrix::from_rows({{0, 1}, {-1, 0}}),
        IntMatrix::from_rows({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}})};  // det 2: skip below
    for (const IntMatrix& A : cases) {
        BigInt det = determinant(A);
        if (det != 1 && det != -1) continue;
        SpectralData sd = spectral_data(A);
        double prod = 1.0;
        std::complex<double> sum = 0.0;
        for (const Root& r : sd.roots) {
            for (int m = 0; m < r.multiplicity; ++m) {
                prod *= std::abs(r.value);
                sum += r.value;
            }
        }
        CHECK(prod == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(sum.real() == doctest::Approx(static_cast<double>(A.trace())).epsilon(1e-9));
        CHECK(std::abs(sum.imag()) < 1e-9);
    }
}

TEST_CASE("spectral invariant: h_top of A^k equals k * h_top(A)") {
    for (const IntMatrix& A : {cat_map(), salem4()}) {
        SpectralData base = spectral_data(A);
        for (int k = 2; k <= 5; ++k) {
            SpectralData sk = spectral_data(A.pow(k));
            CHECK(sk.h_top == doctest::Approx(k * base.h_top).epsilon(1e-8));
        }
    }
}

TEST_CASE("spectral invariant: palindromic polynomial has inversion-symmetric moduli") {
    SpectralData sd = spectral_data(salem4());
    std::vector<double> mods;
    for (const Root& r : sd.roots)
        for (int m = 0; m < r.multiplicity; ++m) mods.push_back(std::abs(r.value));
    for (double m : mods) {
        bool has_inverse = false;
        for (double m2 : mods)
            if (std::abs(m2 - 1.0 / m) < 1e-9) has_inverse = true;
        CHECK(has_inverse);
    }
}

TEST_CASE("spectral_data: ambiguous grouping guard") {
    // chi^2 and chi^3 of the cat map are certifiably distinct; a grouping
    // tolerance wide enough to span them must refuse instead of merging.
    IntMatrix A2 = cat_map().pow(2);
    IntMatrix A3 = cat_map().pow(3);
    IntMatrix blockdiag(4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            blockdiag.at(i, j) = A2.at(i, j);
            blockdiag.at(i + 2, j + 2) = A3.at(i, j);
        }
    CHECK_NOTHROW((void)spectral_data(blockdiag, 1e-8));
    CHECK_THROWS_AS((void)spectral_data(blockdiag, 20.0), AmbiguousGrouping);
}

TEST_CASE("top_entropy matches the stored field") {
    SpectralData sd = spectral_data(cat_map());
    CHECK(top_entropy(sd) == doctest::Approx(sd.h_top).epsilon(1e-15));
    SpectralData id = spectral_data(IntMatrix::identity(2));
    CHECK(top_entropy(id) == 0.0);
}
