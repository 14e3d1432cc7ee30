#pragma once

// Hermitian eigensolver (cyclic Jacobi), symmetric pseudoinverse, trace norm
// and spectral helpers. Jacobi is deterministic for a fixed input, which keeps
// golden tests stable; at dim <= 8 its cost is irrelevant.

#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "qgeo/errors.hpp"
#include "qgeo/matrix.hpp"

namespace qgeo {

struct EigResult {
    RealVector values;       // ascending
    ComplexMatrix vectors;   // columns, orthonormal; m = V diag(values) V^dagger
};

namespace detail {

inline double frobenius(const ComplexMatrix& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) s += std::norm(m(i, j));
    return std::sqrt(s);
}

inline double offdiag_max(const ComplexMatrix& m) {
    double v = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (i != j) v = std::max(v, std::abs(m(i, j)));
    return v;
}

}  // namespace detail

inline EigResult herm_eig(const HermitianMatrix& input) {
    const std::size_t n = input.dim();
    ComplexMatrix h = input.matrix();
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = detail::frobenius(h);
    const double tol = scale * 1e-15;

    if (scale > 0.0) {
        bool converged = false;
        for (int sweep = 0; sweep < 60 && !converged; ++sweep) {
            converged = true;
            for (std::size_t p = 0; p + 1 < n; ++p) {
                for (std::size_t q = p + 1; q < n; ++q) {
                    const cdouble gamma = h(p, q);
                    const double g = std::abs(gamma);
                    if (g <= tol) continue;
                    converged = false;

                    const cdouble w = gamma / g;  // phase of the pivot
                    const double a = h(p, p).real();
                    const double b = h(q, q).real();
                    const double tau = (b - a) / (2.0 * g);
                    const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                     (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const double s = t * c;

                    // plane rotation R = [[w c, w s], [-s, c]]; h <- R^dag h R
                    for (std::size_t i = 0; i < n; ++i) {
                        const cdouble hip = h(i, p), hiq = h(i, q);
                        h(i, p) = w * c * hip - s * hiq;
                        h(i, q) = w * s * hip + c * hiq;
                    }
                    for (std::size_t j = 0; j < n; ++j) {
                        const cdouble hpj = h(p, j), hqj = h(q, j);
                        h(p, j) = std::conj(w) * c * hpj - s * hqj;
                        h(q, j) = std::conj(w) * s * hpj + c * hqj;
                    }
                    for (std::size_t i = 0; i < n; ++i) {
                        const cdouble vip = v(i, p), viq = v(i, q);
                        v(i, p) = w * c * vip - s * viq;
                        v(i, q) = w * s * vip + c * viq;
                    }
                    h(p, q) = 0.0;
                    h(q, p) = 0.0;
                }
            }
        }
        if (!converged && detail::offdiag_max(h) > 1e-12 * std::max(scale, 1.0))
            throw NonConvergence("herm_eig: Jacobi sweeps did not converge");
    }

    EigResult out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = h(i, i).real();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return out.values[i] < out.values[j]; });

    EigResult sorted;
    sorted.values.resize(n);
    sorted.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        sorted.values[k] = out.values[order[k]];
        for (std::size_t i = 0; i < n; ++i) sorted.vectors(i, k) = v(i, order[k]);
    }
    return sorted;
}

// Real-symmetric convenience path; imaginary parts vanish identically because
// all Jacobi pivots are real.
struct SymEigResult {
    RealVector values;   // ascending
    RealMatrix vectors;  // columns
};

inline SymEigResult sym_eig(const RealMatrix& m, double herm_tol = 1e-9) {
    if (symmetry_residual(m) > herm_tol)
        throw NumericalInconsistency("sym_eig: matrix is not symmetric");
    RealMatrix sym(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) sym(i, j) = 0.5 * (m(i, j) + m(j, i));
    const EigResult e = herm_eig(HermitianMatrix(to_complex(sym)));
    return SymEigResult{e.values, real_part(e.vectors)};
}

inline RealMatrix spectral_apply(const SymEigResult& e, const RealVector& f_of_lambda) {
    const std::size_t n = e.values.size();
    RealMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        if (f_of_lambda[k] == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out(i, j) += f_of_lambda[k] * e.vectors(i, k) * e.vectors(j, k);
    }
    // exact symmetrization to keep downstream residual checks clean
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double avg = 0.5 * (out(i, j) + out(j, i));
            out(i, j) = avg;
            out(j, i) = avg;
        }
    return out;
}

// Moore-Penrose pseudoinverse of a real symmetric matrix; eigenvalues below
// rel_tol * |lambda|_max are treated as exact zeros.
inline RealMatrix pinv_sym(const RealMatrix& m, double rel_tol = 1e-10) {
    if (!(rel_tol > 0.0 && rel_tol < 1.0))
        throw DomainError("pinv_sym: rel_tol must lie in (0, 1)");
    const SymEigResult e = sym_eig(m);
    double lmax = 0.0;
    for (double lv : e.values) lmax = std::max(lmax, std::abs(lv));
    const double cutoff = rel_tol * lmax;
    RealVector inv(e.values.size(), 0.0);
    for (std::size_t k = 0; k < e.values.size(); ++k)
        if (std::abs(e.values[k]) > cutoff) inv[k] = 1.0 / e.values[k];
    return spectral_apply(e, inv);
}

// Support decomposition of a real symmetric PSD matrix: spectral square root,
// inverse square root and projector restricted to the numerical range.
struct SymSupport {
    SymEigResult eig;
    std::size_t rank = 0;
    double cutoff = 0.0;
    RealMatrix sqrt;       // m^{1/2} on the support
    RealMatrix inv_sqrt;   // m^{-1/2} on the support, 0 on the null space
    RealMatrix projector;  // orthogonal projector onto the support
};

inline SymSupport sym_support(const RealMatrix& m, double rel_tol = 1e-10,
                              double psd_tol = 1e-9) {
    SymSupport s;
    s.eig = sym_eig(m);
    double lmax = 0.0;
    for (double lv : s.eig.values) lmax = std::max(lmax, std::abs(lv));
    if (!s.eig.values.empty() && s.eig.values.front() < -psd_tol * std::max(lmax, 1.0))
        throw NumericalInconsistency("sym_support: matrix is not positive semidefinite");
    s.cutoff = rel_tol * lmax;

    const std::size_t n = s.eig.values.size();
    RealVector fsqrt(n, 0.0), finv(n, 0.0), fproj(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double lv = s.eig.values[k];
        if (lv > s.cutoff) {
            ++s.rank;
            fsqrt[k] = std::sqrt(lv);
            finv[k] = 1.0 / std::sqrt(lv);
            fproj[k] = 1.0;
        }
    }
    s.sqrt = spectral_apply(s.eig, fsqrt);
    s.inv_sqrt = spectral_apply(s.eig, finv);
    s.projector = spectral_apply(s.eig, fproj);
    return s;
}

// Sum of singular values. Computed from the Hermitian eigenvalues of m^dag m,
// so a NonConvergence there propagates unchanged.
inline double trace_norm(const ComplexMatrix& m) {
    if (!m.square()) throw DimensionMismatch("trace_norm: matrix must be square");
    const ComplexMatrix gram = adjoint(m) * m;
    const EigResult e = herm_eig(HermitianMatrix(gram, 1e-9 * std::max(1.0, max_abs(gram))));
    double sum = 0.0;
    for (double lv : e.values) sum += std::sqrt(std::max(lv, 0.0));
    return sum;
}

inline double trace_norm(const RealMatrix& m) { return trace_norm(to_complex(m)); }

// V exp(scale * lambda) V^dagger for Hermitian input; with scale = -i*t this
// is the exact unitary propagator.
inline ComplexMatrix herm_exp(const HermitianMatrix& h, cdouble scale) {
    const EigResult e = herm_eig(h);
    const std::size_t n = h.dim();
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const cdouble f = std::exp(scale * e.values[k]);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out(i, j) += f * e.vectors(i, k) * std::conj(e.vectors(j, k));
    }
    return out;
}

inline double trace_real(const RealMatrix& m) {
    double t = 0.0;
    for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) t += m(i, i);
    return t;
}

inline cdouble trace(const ComplexMatrix& m) {
    cdouble t = 0.0;
    for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) t += m(i, i);
    return t;
}

}  // namespace qgeo
