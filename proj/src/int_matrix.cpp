#include "toral/int_matrix.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace toral {

IntMatrix IntMatrix::identity(int dim) {
    IntMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long long>>& rows) {
    const int n = static_cast<int>(rows.size());
    IntMatrix m(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw ParseError("matrix rows must form a square array");
        for (int j = 0; j < n; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

IntMatrix IntMatrix::companion(const std::vector<long long>& p) {
    const int n = static_cast<int>(p.size()) - 1;
    if (n < 1 || p.back() != 1)
        throw ParseError("companion() needs a monic polynomial of degree >= 1");
    IntMatrix m(n);
    for (int i = 1; i < n; ++i) m.at(i, i - 1) = 1;
    for (int i = 0; i < n; ++i) m.at(i, n - 1) = -BigInt(p[i]);
    return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
    IntMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const BigInt& aik = at(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < n; ++j) r.at(i, j) += aik * rhs.at(k, j);
        }
    return r;
}

IntMatrix IntMatrix::pow(int k) const {
    IntMatrix r = identity(n);
    IntMatrix base = *this;
    while (k > 0) {
        if (k & 1) r = r * base;
        base = base * base;
        k >>= 1;
    }
    return r;
}

BigInt IntMatrix::trace() const {
    BigInt t = 0;
    for (int i = 0; i < n; ++i) t += at(i, i);
    return t;
}

void IntPoly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

IntPoly IntPoly::from_ll(const std::vector<long long>& coeffs) {
    std::vector<BigInt> v(coeffs.begin(), coeffs.end());
    return IntPoly(std::move(v));
}

IntPoly IntPoly::x_minus(const BigInt& r) {
    return IntPoly({-r, 1});
}

BigInt IntPoly::eval(const BigInt& x) const {
    BigInt acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

IntPoly IntPoly::derivative() const {
    if (c.size() <= 1) return IntPoly{};
    std::vector<BigInt> d(c.size() - 1);
    for (size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * BigInt(i);
    return IntPoly(std::move(d));
}

std::string IntPoly::str() const {
    if (c.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const BigInt& k = c[i];
        if (k == 0) continue;
        BigInt mag = k < 0 ? BigInt(-k) : k;
        if (first) {
            if (k < 0) os << "-";
            first = false;
        } else {
            os << (k < 0 ? " - " : " + ");
        }
        if (mag != 1 || i == 0) os << mag.str();
        if (i > 0) os << "x";
        if (i > 1) os << "^" << i;
    }
    return os.str();
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    std::vector<BigInt> r(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
    return IntPoly(std::move(r));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) {
    std::vector<BigInt> r(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
    return IntPoly(std::move(r));
}

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return IntPoly{};
    std::vector<BigInt> r(a.c.size() + b.c.size() - 1);
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    }
    return IntPoly(std::move(r));
}

bool try_divide_exact(const IntPoly& a, const IntPoly& b, IntPoly& q) {
    if (b.is_zero()) return false;
    std::vector<BigInt> rem = a.c;
    const int db = b.degree();
    const BigInt& lead = b.c.back();
    if (a.degree() < db) {
        if (a.is_zero()) { q = IntPoly{}; return true; }
        return false;
    }
    std::vector<BigInt> quot(a.degree() - db + 1);
    for (int i = a.degree() - db; i >= 0; --i) {
        BigInt num = rem[i + db];
        if (num == 0) continue;
        if (num % lead != 0) return false;
        BigInt f = num / lead;
        quot[i] = f;
        for (int j = 0; j <= db; ++j) rem[i + j] -= f * b.c[j];
    }
    for (const BigInt& r : rem)
        if (r != 0) return false;
    q = IntPoly(std::move(quot));
    return true;
}

BigInt poly_content(const IntPoly& p) {
    BigInt g = 0;
    for (const BigInt& k : p.c) g = boost::multiprecision::gcd(g, k);
    return g;
}

IntPoly primitive_part(const IntPoly& p) {
    if (p.is_zero()) return p;
    BigInt g = poly_content(p);
    if (p.c.back() < 0) g = -g;
    std::vector<BigInt> r(p.c.size());
    for (size_t i = 0; i < p.c.size(); ++i) r[i] = p.c[i] / g;
    return IntPoly(std::move(r));
}

namespace {

// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b, exact over Z.
IntPoly pseudo_rem(IntPoly a, const IntPoly& b) {
    const int db = b.degree();
    const BigInt& lb = b.c.back();
    while (!a.is_zero() && a.degree() >= db) {
        const int da = a.degree();
        BigInt la = a.c.back();
        std::vector<BigInt> r(a.c.size());
        for (size_t i = 0; i < a.c.size(); ++i) r[i] = a.c[i] * lb;
        for (int j = 0; j <= db; ++j) r[da - db + j] -= la * b.c[j];
        a = IntPoly(std::move(r));
    }
    return a;
}

} // namespace

IntPoly poly_gcd(IntPoly a, IntPoly b) {
    a = primitive_part(a);
    b = primitive_part(b);
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.is_zero()) {
        IntPoly r = primitive_part(pseudo_rem(a, b));
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

std::vector<std::pair<IntPoly, int>> squarefree_decomposition(const IntPoly& p) {
    if (p.is_zero()) throw PreconditionViolated("squarefree_decomposition: zero polynomial");
    std::vector<std::pair<IntPoly, int>> out;
    IntPoly f = primitive_part(p);
    if (f.degree() == 0) return out;
    // Yun's algorithm over Z.
    IntPoly fp = f.derivative();
    IntPoly a = poly_gcd(f, fp);
    IntPoly b, c, d;
    if (!try_divide_exact(f, a, b)) throw Error("squarefree: inexact division (f/gcd)");
    if (!try_divide_exact(fp, a, c)) throw Error("squarefree: inexact division (f'/gcd)");
    d = c - b.derivative();
    int i = 1;
    while (b.degree() > 0) {
        IntPoly g = poly_gcd(b, d);
        if (g.degree() > 0) out.emplace_back(g, i);
        IntPoly nb, nc;
        if (!try_divide_exact(b, g, nb)) throw Error("squarefree: inexact division (b/g)");
        if (!try_divide_exact(d, g, nc)) throw Error("squarefree: inexact division (d/g)");
        b = std::move(nb);
        d = nc - b.derivative();
        ++i;
    }
    return out;
}

BigInt determinant(const IntMatrix& A) {
    const int n = A.n;
    if (n == 0) return 1;
    std::vector<BigInt> m = A.a;
    auto at = [&](int i, int j) -> BigInt& { return m[static_cast<size_t>(i) * n + j]; };
    BigInt prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (at(k, k) == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (at(i, k) != 0) { piv = i; break; }
            if (piv < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(at(k, j), at(piv, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                BigInt v = at(i, j) * at(k, k) - at(i, k) * at(k, j);
                at(i, j) = v / prev; // division is exact (Bareiss)
            }
            at(i, k) = 0;
        }
        prev = at(k, k);
    }
    BigInt det = at(n - 1, n - 1);
    return sign > 0 ? det : BigInt(-det);
}

IntPoly char_poly(const IntMatrix& A) {
    const int n = A.n;
    // Faddeev-LeVerrier: M_0 = I, c_n = 1; M_k = A*M_{k-1} + c_{n-k+1} I,
    // c_{n-k} = -tr(A*M_{k-1}... ) / k. All divisions exact.
    std::vector<BigInt> coeff(static_cast<size_t>(n) + 1);
    coeff[n] = 1;
    IntMatrix M = IntMatrix::identity(n);
    for (int k = 1; k <= n; ++k) {
        IntMatrix AM = A * M;
        BigInt t = AM.trace();
        if (t % k != 0) throw Error("char_poly: Newton division not exact (bug)");
        BigInt ck = -t / k;
        coeff[n - k] = ck;
        if (k < n) {
            M = AM;
            for (int i = 0; i < n; ++i) M.at(i, i) += ck;
        }
    }
    return IntPoly(std::move(coeff));
}

namespace {

// Enumerate signed divisors of v (v != 0), ascending by magnitude.
std::vector<BigInt> signed_divisors(const BigInt& v) {
    BigInt m = v < 0 ? BigInt(-v) : v;
    std::vector<BigInt> divs;
    for (BigInt d = 1; d * d <= m; ++d) {
        if (m % d == 0) {
            divs.push_back(d);
            if (d * d != m) divs.push_back(m / d);
        }
    }
    std::sort(divs.begin(), divs.end());
    std::vector<BigInt> out;
    out.reserve(divs.size() * 2);
    for (const BigInt& d : divs) {
        out.push_back(d);
        out.push_back(-d);
    }
    return out;
}

// sqrt of the 2-norm of p, rounded up.
BigInt norm2_ceil(const IntPoly& p) {
    BigInt s = 0;
    for (const BigInt& k : p.c) s += k * k;
    BigInt r = boost::multiprecision::sqrt(s);
    if (r * r < s) ++r;
    return r;
}

BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

// Search for a monic degree-d factor of monic p. Interior coefficients are
// swept inside the Mignotte box |g_i| <= C(d-1,i)*||p||_2 + C(d-1,i-1);
// the constant term runs over divisors of p(0) and candidates are filtered
// by g(1) | p(1) and g(-1) | p(-1) before trial division.
bool has_monic_factor_of_degree(const IntPoly& p, int d) {
    const BigInt p0 = p.c.front();
    const BigInt p1 = p.eval(1);
    const BigInt pm1 = p.eval(-1);
    if (p0 == 0) return true; // x | p
    const BigInt n2 = norm2_ceil(p);
    std::vector<BigInt> bound(d);
    for (int i = 1; i < d; ++i) bound[i] = binomial(d - 1, i) * n2 + binomial(d - 1, i - 1);

    std::vector<BigInt> g(static_cast<size_t>(d) + 1);
    g[d] = 1;
    const std::vector<BigInt> const_terms = signed_divisors(p0);

    // Odometer over interior coefficients g[1..d-1].
    std::vector<BigInt> cur(d, 0);
    std::function<bool(int)> sweep = [&](int idx) -> bool {
        if (idx == d) {
            for (const BigInt& c0 : const_terms) {
                g[0] = c0;
                IntPoly cand{std::vector<BigInt>(g)};
                BigInt c1 = cand.eval(1);
                if (c1 == 0 || p1 % c1 != 0) {
                    if (!(c1 == 0 && p1 == 0)) continue;
                }
                BigInt cm1 = cand.eval(-1);
                if (cm1 == 0 || pm1 % cm1 != 0) {
                    if (!(cm1 == 0 && pm1 == 0)) continue;
                }
                IntPoly q;
                if (try_divide_exact(p, cand, q)) return true;
            }
            return false;
        }
        for (BigInt v = -bound[idx]; v <= bound[idx]; ++v) {
            g[idx] = v;
            if (sweep(idx + 1)) return true;
        }
        return false;
    };
    return sweep(1);
}

} // namespace

bool is_irreducible(const IntPoly& p, int degree_cap) {
    if (p.is_zero() || !p.is_monic() || p.degree() < 1)
        throw PreconditionViolated("is_irreducible: need a monic polynomial of degree >= 1");
    const int n = p.degree();
    if (n > degree_cap)
        throw DegreeTooLarge("is_irreducible: degree " + std::to_string(n) +
                             " exceeds the exact-decision cap " + std::to_string(degree_cap));
    if (n == 1) return true;
    // Repeated factors make p reducible.
    if (poly_gcd(p, p.derivative()).degree() > 0) return false;
    for (int d = 1; d <= n / 2; ++d)
        if (has_monic_factor_of_degree(p, d)) return false;
    return true;
}

IntPoly cyclotomic(int n) {
    if (n < 1) throw PreconditionViolated("cyclotomic: n >= 1 required");
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d.
    std::vector<BigInt> xn(static_cast<size_t>(n) + 1);
    xn[0] = -1;
    xn[n] = 1;
    IntPoly num(std::move(xn));
    for (int d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        IntPoly q;
        if (!try_divide_exact(num, cyclotomic(d), q))
            throw Error("cyclotomic: inexact division (bug)");
        num = std::move(q);
    }
    return num;
}

namespace {

int euler_phi(int n) {
    int r = n;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            r -= r / p;
        }
    }
    if (n > 1) r -= r / n;
    return r;
}

} // namespace

std::vector<int> cyclotomic_factor_test(const IntPoly& p) {
    if (p.is_zero() || !p.is_monic())
        throw PreconditionViolated("cyclotomic_factor_test: need a monic polynomial");
    std::vector<int> hits;
    const int d = p.degree();
    if (d < 1) return hits;
    // phi(n) >= sqrt(n/2), so phi(n) <= d forces n <= 2 d^2 + 1.
    const int n_max = 2 * d * d + 1;
    for (int n = 1; n <= n_max; ++n) {
        if (euler_phi(n) > d) continue;
        IntPoly q;
        if (try_divide_exact(p, cyclotomic(n), q)) hits.push_back(n);
    }
    return hits;
}

} // namespace toral
