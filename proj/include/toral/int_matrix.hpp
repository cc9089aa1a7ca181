#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <utility>
#include <vector>

#include "toral/errors.hpp"

namespace toral {

using BigInt = boost::multiprecision::cpp_int;

// Square integer matrix with arbitrary-precision entries, row-major.
struct IntMatrix {
    int n = 0;
    std::vector<BigInt> a;

    IntMatrix() = default;
    explicit IntMatrix(int dim) : n(dim), a(static_cast<size_t>(dim) * dim) {}

    BigInt& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    const BigInt& at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

    static IntMatrix identity(int dim);
    static IntMatrix from_rows(const std::vector<std::vector<long long>>& rows);
    // Companion matrix of a monic polynomial (subdiagonal ones, negated
    // coefficients in the last column); its characteristic polynomial is p.
    static IntMatrix companion(const std::vector<long long>& monic_ascending);

    IntMatrix operator*(const IntMatrix& rhs) const;
    IntMatrix pow(int k) const;
    BigInt trace() const;
    bool operator==(const IntMatrix& rhs) const = default;
};

// Integer polynomial, coefficients ascending by degree. Normalised so that
// the leading coefficient is nonzero (the zero polynomial has empty c).
struct IntPoly {
    std::vector<BigInt> c;

    IntPoly() = default;
    explicit IntPoly(std::vector<BigInt> coeffs) : c(std::move(coeffs)) { trim(); }
    static IntPoly from_ll(const std::vector<long long>& coeffs);
    static IntPoly x_minus(const BigInt& r); // x - r

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    bool is_monic() const { return !c.empty() && c.back() == 1; }
    BigInt eval(const BigInt& x) const;
    IntPoly derivative() const;
    void trim();

    bool operator==(const IntPoly& rhs) const = default;
    std::string str() const; // human-readable, e.g. "x^2 - 3x + 1"
};

IntPoly operator+(const IntPoly& a, const IntPoly& b);
IntPoly operator-(const IntPoly& a, const IntPoly& b);
IntPoly operator*(const IntPoly& a, const IntPoly& b);

// Exact division; returns false (and leaves q unspecified) if b does not
// divide a over the integers.
bool try_divide_exact(const IntPoly& a, const IntPoly& b, IntPoly& q);

BigInt poly_content(const IntPoly& p);
IntPoly primitive_part(const IntPoly& p);

// Gcd over Z via the primitive PRS; result is primitive with positive
// leading coefficient.
IntPoly poly_gcd(IntPoly a, IntPoly b);

// Yun decomposition p = lc * prod q_i^i with the q_i squarefree, pairwise
// coprime and primitive. Returned as (q_i, i) pairs, constant factors
// dropped. Requires p nonzero.
std::vector<std::pair<IntPoly, int>> squarefree_decomposition(const IntPoly& p);

// Exact determinant (Bareiss fraction-free elimination).
BigInt determinant(const IntMatrix& A);

// Characteristic polynomial det(xI - A), exact (Faddeev-LeVerrier; the
// interior divisions are exact over Z).
IntPoly char_poly(const IntMatrix& A);

// Exact irreducibility over Q for monic p of degree <= degree_cap.
// Bounded exhaustive factor search with Mignotte-style coefficient bounds
// plus evaluation-divisor filters. Throws DegreeTooLarge above the cap.
bool is_irreducible(const IntPoly& p, int degree_cap = 8);

// n-th cyclotomic polynomial, exact.
IntPoly cyclotomic(int n);

// All n with Phi_n | p, searched over the finite set phi(n) <= deg p.
std::vector<int> cyclotomic_factor_test(const IntPoly& p);

} // namespace toral
