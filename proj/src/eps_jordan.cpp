#include "toral/eps_jordan.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>

namespace toral {

namespace {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

double op_norm(const Eigen::MatrixXd& M) {
    return M.jacobiSvd().singularValues()(0);
}

// Orthonormal basis of the null space of M, SVD-based. Vectors whose
// singular value is below thresh * sigma_max count as null.
CMat null_space(const CMat& M, double rel_thresh = 1e-9) {
    Eigen::JacobiSVD<CMat> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double smax = sv.size() ? sv(0) : 0.0;
    double thresh = std::max(smax * rel_thresh, 1e-300);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++rank;
    return svd.matrixV().rightCols(M.cols() - rank);
}

// Component of v orthogonal to the column space of S (rank-deficient S is
// fine); returns the residual norm.
double orth_residual(const CMat& S, const CVec& v, CVec& out) {
    if (S.cols() == 0) { out = v; return v.norm(); }
    Eigen::JacobiSVD<CMat> svd(S, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    double thresh = std::max(sv(0) * 1e-12, 1e-300);
    out = v;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv(i) <= thresh) break;
        CVec u = svd.matrixU().col(i);
        out -= u * (u.adjoint() * v);
    }
    return out.norm();
}

struct Chain {
    std::complex<double> lambda;
    std::vector<CVec> vecs;  // bottom (eigenvector) first
};

// All Jordan chains of A for eigenvalue lambda of algebraic multiplicity m.
std::vector<Chain> jordan_chains(const CMat& A, std::complex<double> lambda, int m) {
    const int l = static_cast<int>(A.rows());
    CMat M = A - lambda * CMat::Identity(l, l);

    std::vector<CMat> nulls;       // nulls[k] = basis of ker M^(k+1)
    std::vector<int> dims;
    CMat P = CMat::Identity(l, l);
    int steps = 0;
    while (true) {
        P = M * P;
        CMat N = null_space(P);
        nulls.push_back(N);
        dims.push_back(static_cast<int>(N.cols()));
        ++steps;
        if (dims.back() >= m || steps > m)
            break;
        if (dims.size() >= 2 && dims[dims.size() - 1] == dims[dims.size() - 2])
            break; // stabilised early
    }
    if (dims.back() != m)
        throw IllConditioned("eps_jordan: generalized eigenspace for lambda=" +
                             std::to_string(lambda.real()) + "+" + std::to_string(lambda.imag()) +
                             "i reached dimension " + std::to_string(dims.back()) +
                             " instead of multiplicity " + std::to_string(m));

    const int s = static_cast<int>(dims.size());
    auto null_dim = [&](int k) { return k <= 0 ? 0 : dims[k - 1]; };
    // blocks_ge[k] = number of chains of length >= k.
    std::vector<int> blocks_ge(s + 2, 0);
    for (int k = 1; k <= s; ++k) blocks_ge[k] = null_dim(k) - null_dim(k - 1);

    std::vector<Chain> chains;
    for (int k = s; k >= 1; --k) {
        int needed = blocks_ge[k] - blocks_ge[k + 1];
        for (int c = 0; c < needed; ++c) {
            // Span to avoid: ker M^(k-1) plus the height-k member of every
            // chain already built (all of which have length >= k).
            CMat avoid(l, (k >= 2 ? nulls[k - 2].cols() : 0) + static_cast<Eigen::Index>(chains.size()));
            int col = 0;
            if (k >= 2)
                for (int j = 0; j < nulls[k - 2].cols(); ++j) avoid.col(col++) = nulls[k - 2].col(j);
            for (const Chain& prev : chains) avoid.col(col++) = prev.vecs[k - 1];

            const CMat& cand = nulls[k - 1];
            int best = -1;
            double best_res = 0.0;
            CVec best_vec;
            for (int j = 0; j < cand.cols(); ++j) {
                CVec out;
                double res = orth_residual(avoid, cand.col(j), out);
                if (res > best_res) { best_res = res; best = j; best_vec = out; }
            }
            if (best < 0 || best_res < 1e-8)
                throw IllConditioned("eps_jordan: could not select an independent chain top");
            CVec top = best_vec / best_res;

            Chain ch;
            ch.lambda = lambda;
            ch.vecs.resize(k);
            ch.vecs[k - 1] = top;
            for (int j = k - 2; j >= 0; --j) ch.vecs[j] = M * ch.vecs[j + 1];

            // Normalise: unit eigenvector with a deterministic phase (its
            // largest-magnitude component made real positive).
            CVec& bottom = ch.vecs[0];
            double bn = bottom.norm();
            if (bn < 1e-12)
                throw IllConditioned("eps_jordan: degenerate chain bottom");
            int imax = 0;
            for (int i = 1; i < l; ++i)
                if (std::abs(bottom(i)) > std::abs(bottom(imax))) imax = i;
            std::complex<double> phase = bottom(imax) / std::abs(bottom(imax));
            std::complex<double> scale = 1.0 / (bn * phase);
            for (CVec& v : ch.vecs) v *= scale;

            chains.push_back(std::move(ch));
        }
    }
    return chains;
}

struct RealBlock {
    JordanBlockInfo info;
    std::vector<Eigen::VectorXd> cols;
};

} // namespace

EpsJordanForm eps_jordan(const Eigen::MatrixXd& A, const SpectralData& sd, double epsilon,
                         double cond_cap) {
    const int l = static_cast<int>(A.rows());
    if (A.cols() != l) throw PreconditionViolated("eps_jordan: matrix must be square");
    if (epsilon <= 0) throw PreconditionViolated("eps_jordan: epsilon must be positive");
    int mult_sum = 0;
    for (const Root& r : sd.roots) mult_sum += r.multiplicity;
    if (mult_sum != l)
        throw PreconditionViolated("eps_jordan: spectral data inconsistent with dimension");

    CMat Ac = A.cast<std::complex<double>>();

    // One chain set per eigenvalue; conjugate pairs handled once, at the
    // representative with positive imaginary part.
    std::vector<RealBlock> blocks;
    for (const Root& r : sd.roots) {
        if (r.value.imag() < 0) continue;
        bool pair = r.value.imag() > 0;
        for (Chain& ch : jordan_chains(Ac, r.value, r.multiplicity)) {
            const int k = static_cast<int>(ch.vecs.size());
            RealBlock rb;
            rb.info.chi = std::abs(ch.lambda);
            rb.info.length = k;
            rb.info.complex_pair = pair;
            rb.info.dim = pair ? 2 * k : k;
            rb.info.re = ch.lambda.real();
            rb.info.im = pair ? ch.lambda.imag() : 0.0;
            for (int j = 0; j < k; ++j) {
                CVec v = ch.vecs[j] * std::pow(epsilon, j); // makes couplings epsilon
                if (pair) {
                    // Basis (Im w, Re w) per slot realises [[a,-b],[b,a]].
                    rb.cols.push_back(v.imag());
                    rb.cols.push_back(v.real());
                } else {
                    rb.cols.push_back(v.real());
                }
            }
            blocks.push_back(std::move(rb));
        }
    }

    // Stable ordering: descending modulus, then longer chains, then real
    // before complex, then by eigenvalue angle.
    std::stable_sort(blocks.begin(), blocks.end(), [](const RealBlock& a, const RealBlock& b) {
        if (a.info.chi != b.info.chi) return a.info.chi > b.info.chi;
        if (a.info.length != b.info.length) return a.info.length > b.info.length;
        if (a.info.complex_pair != b.info.complex_pair) return !a.info.complex_pair;
        return a.info.re > b.info.re;
    });

    EpsJordanForm out;
    out.epsilon = epsilon;
    out.Q.resize(l, l);
    out.A_eps = Eigen::MatrixXd::Zero(l, l);

    int col = 0;
    for (RealBlock& rb : blocks) {
        rb.info.offset = col;
        const double a = rb.info.re, b = rb.info.im;
        for (int j = 0; j < rb.info.length; ++j) {
            if (rb.info.complex_pair) {
                out.Q.col(col) = rb.cols[2 * j];
                out.Q.col(col + 1) = rb.cols[2 * j + 1];
                out.A_eps(col, col) = a;
                out.A_eps(col, col + 1) = -b;
                out.A_eps(col + 1, col) = b;
                out.A_eps(col + 1, col + 1) = a;
                if (j > 0) {
                    out.A_eps(col - 2, col) = epsilon;
                    out.A_eps(col - 1, col + 1) = epsilon;
                }
                col += 2;
            } else {
                out.Q.col(col) = rb.cols[j];
                out.A_eps(col, col) = a;
                if (j > 0) out.A_eps(col - 1, col) = epsilon;
                col += 1;
            }
        }
        out.blocks.push_back(rb.info);
    }
    if (col != l) throw IllConditioned("eps_jordan: chain dimensions do not fill the space");

    // Modulus-class layout; classes follow the grouping tolerance that the
    // spectral data was built with.
    const double gt = sd.grouping_tol;
    for (const JordanBlockInfo& bi : out.blocks) {
        if (!out.classes.empty() && std::abs(out.classes.back().chi - bi.chi) <= gt) {
            out.classes.back().dim += bi.dim;
        } else {
            out.classes.push_back({bi.chi, bi.offset, bi.dim});
        }
    }
    out.zeta = 0;
    for (const ModulusClassLayout& cl : out.classes)
        if (cl.chi > 1.0 + gt) out.zeta += cl.dim;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(out.Q);
    if (!lu.isInvertible())
        throw IllConditioned("eps_jordan: Q is numerically singular");
    out.Q_inv = lu.inverse();
    out.cond = op_norm(out.Q) * op_norm(out.Q_inv);
    if (out.cond > cond_cap)
        throw IllConditioned("eps_jordan: cond(Q) = " + std::to_string(out.cond) +
                             " exceeds the cap " + std::to_string(cond_cap));

    out.residual = op_norm(out.Q_inv * A * out.Q - out.A_eps);
    double normA = op_norm(A);
    if (out.residual > 1e-8 * std::max(normA, 1.0))
        throw IllConditioned("eps_jordan: conjugation residual " + std::to_string(out.residual) +
                             " above 1e-8 * ||A||");
    return out;
}

namespace {

// Unstable prefix of the modulus-class layout.
std::vector<ModulusClassLayout> unstable_classes(const EpsJordanForm& ejf) {
    std::vector<ModulusClassLayout> v;
    int seen = 0;
    for (const ModulusClassLayout& cl : ejf.classes) {
        if (seen >= ejf.zeta) break;
        v.push_back(cl);
        seen += cl.dim;
    }
    return v;
}

Eigen::VectorXd sample_product_sphere(const std::vector<ModulusClassLayout>& cls,
                                      const std::vector<double>& r, int zeta,
                                      std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(zeta);
    for (size_t j = 0; j < cls.size(); ++j) {
        Eigen::VectorXd g(cls[j].dim);
        for (int i = 0; i < cls[j].dim; ++i) g(i) = gauss(rng);
        double n = g.norm();
        if (n == 0) g(0) = n = 1.0;
        for (int i = 0; i < cls[j].dim; ++i)
            x(cls[j].offset + i) = g(i) / n * r[j];
    }
    return x;
}

} // namespace

SandwichVerdict sandwich_check(const EpsJordanForm& ejf, const std::vector<double>& r,
                               int samples, unsigned seed, double slack) {
    return power_sandwich_check(ejf, r, 1, samples, seed, slack);
}

SandwichVerdict power_sandwich_check(const EpsJordanForm& ejf, const std::vector<double>& r,
                                     int k, int samples, unsigned seed, double slack) {
    const auto cls = unstable_classes(ejf);
    if (r.size() != cls.size())
        throw PreconditionViolated("sandwich_check: radius vector must have one entry per unstable class");
    for (const auto& cl : cls)
        if (ejf.epsilon >= cl.chi)
            throw PreconditionViolated("sandwich_check: epsilon >= chi_j violates the lemma hypothesis");
    if (k < 1) throw PreconditionViolated("sandwich_check: k >= 1 required");

    const int zeta = ejf.zeta;
    Eigen::MatrixXd U = ejf.A_eps.topLeftCorner(zeta, zeta);
    Eigen::MatrixXd Upow = Eigen::MatrixXd::Identity(zeta, zeta);
    for (int i = 0; i < k; ++i) Upow = U * Upow;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(Upow);
    Eigen::MatrixXd Upow_inv = lu.inverse();

    SandwichVerdict v;
    v.pass = true;
    v.samples = samples;
    v.worst_lower_margin = v.worst_upper_margin = std::numeric_limits<double>::infinity();

    std::mt19937_64 rng(seed);
    std::vector<double> shrunk(r.size());
    for (size_t j = 0; j < r.size(); ++j)
        shrunk[j] = r[j] * std::pow(cls[j].chi - ejf.epsilon, k);

    for (int s = 0; s < samples; ++s) {
        // Forward direction: image norms inside the per-class window.
        Eigen::VectorXd x = sample_product_sphere(cls, r, zeta, rng);
        Eigen::VectorXd y = Upow * x;
        for (size_t j = 0; j < cls.size(); ++j) {
            double lo = std::pow(cls[j].chi - ejf.epsilon, k) * r[j];
            double hi = std::pow(cls[j].chi + ejf.epsilon, k) * r[j];
            double norm = y.segment(cls[j].offset, cls[j].dim).norm();
            double tol = slack * std::max(1.0, hi);
            double lower_margin = norm - lo + tol;
            double upper_margin = hi - norm + tol;
            v.worst_lower_margin = std::min(v.worst_lower_margin, norm - lo);
            v.worst_upper_margin = std::min(v.worst_upper_margin, hi - norm);
            if (lower_margin < 0 || upper_margin < 0) v.pass = false;
        }
        // Containment direction: preimages of the shrunk boundary lie in D(r).
        Eigen::VectorXd yb = sample_product_sphere(cls, shrunk, zeta, rng);
        Eigen::VectorXd xb = Upow_inv * yb;
        for (size_t j = 0; j < cls.size(); ++j) {
            double norm = xb.segment(cls[j].offset, cls[j].dim).norm();
            double tol = slack * std::max(1.0, r[j]);
            double margin = r[j] - norm;
            v.worst_upper_margin = std::min(v.worst_upper_margin, margin);
            if (margin + tol < 0) v.pass = false;
        }
    }
    if (!v.pass)
        v.detail = "per-class norm left the sandwich window beyond the allowed slack";
    return v;
}

} // namespace toral
