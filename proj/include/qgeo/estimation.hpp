#pragma once

// Estimation bounds from geometry: QFIM, SLD cross-checks, characterization
// number gamma, scalar SLD-CRB, Holevo sandwich, attainable QCRB, subspace
// restriction and the uncertainty-relation audit.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "qgeo/eig.hpp"
#include "qgeo/errors.hpp"
#include "qgeo/geometry.hpp"
#include "qgeo/matrix.hpp"
#include "qgeo/model.hpp"

namespace qgeo {

struct QFIMatrix {
    RealMatrix j;        // 4 * metric, symmetric PSD
    RealVector theta;
};

enum class WeightKind { identity, qfim, custom };

struct WeightMatrix {
    RealMatrix w;
    WeightKind kind = WeightKind::qfim;
};

struct GammaSpectrum {
    RealVector eigenvalues;              // support spectrum, descending by |.|
    double gamma = 0.0;                  // largest magnitude after clamping
    std::size_t support_rank = 0;        // rank of the QFIM
    std::size_t dim = 0;                 // full parameter count
    std::vector<std::size_t> inestimable_axes;  // axes outside the QFIM support
};

struct SLDSet {
    std::vector<ComplexMatrix> operators;  // hermitian, one per axis
};

struct BoundReport {
    RealVector theta;
    RealMatrix j;
    RealMatrix f;
    RealMatrix w;
    GammaSpectrum spectrum;
    double sld_crb = 0.0;        // C^S = tr(W J^+)
    double sandwich_mid = 0.0;   // C^S + || sqrt(W) J^+ F J^+ sqrt(W) ||_1
    double sandwich_gamma = 0.0; // (1 + gamma) C^S
    double sandwich_two = 0.0;   // 2 C^S
    double attainable_qcrb = 0.0;
};

inline QFIMatrix qfim(const MetricTensor& g) {
    RealMatrix j = g.g;
    j *= 4.0;
    if (symmetry_residual(j) > 1e-9)
        throw NumericalInconsistency("qfim: metric input is not symmetric");
    return QFIMatrix{j, g.theta};
}

inline WeightMatrix make_weight(WeightKind kind, const QFIMatrix& j) {
    if (kind == WeightKind::identity)
        return WeightMatrix{RealMatrix::identity(j.j.rows()), WeightKind::identity};
    return WeightMatrix{j.j, WeightKind::qfim};
}

inline WeightMatrix make_weight(const RealMatrix& w) {
    if (symmetry_residual(w) > 1e-9)
        throw NumericalInconsistency("weight matrix must be symmetric");
    sym_support(w);  // PSD validation
    return WeightMatrix{w, WeightKind::custom};
}

// Pure-state SLDs: L_mu = 2 d_mu rho with rho = |psi><psi|.
inline SLDSet sld_pure(const StateModel& model, const RealVector& theta,
                       DiffScheme scheme = DiffScheme::central4_richardson) {
    const ComplexVector psi = model.evaluate(theta);
    SLDSet out;
    for (std::size_t a = 0; a < model.param_dim; ++a) {
        const ComplexVector tau = tangent(model, theta, a, scheme).amplitudes;
        ComplexMatrix l = outer(tau, psi) + outer(psi, tau);
        l *= cdouble{2.0, 0.0};
        out.operators.push_back(detail::hermitize(l));
    }
    return out;
}

inline ComplexMatrix density(const ComplexVector& psi) { return outer(psi, psi); }

inline QFIMatrix qfim_from_sld(const ComplexMatrix& rho, const SLDSet& slds,
                               const RealVector& theta = {}) {
    const std::size_t d = slds.operators.size();
    RealMatrix j(d, d);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a; b < d; ++b) {
            const ComplexMatrix sym = slds.operators[a] * slds.operators[b] +
                                      slds.operators[b] * slds.operators[a];
            j(a, b) = j(b, a) = 0.5 * trace(rho * sym).real();
        }
    return QFIMatrix{j, theta};
}

// Mean Uhlmann curvature; for pure states this is the Berry curvature.
inline CurvatureMatrix uhlmann_from_sld(const ComplexMatrix& rho, const SLDSet& slds,
                                        const RealVector& theta = {}) {
    const std::size_t d = slds.operators.size();
    RealMatrix f(d, d);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a + 1; b < d; ++b) {
            const ComplexMatrix comm = slds.operators[a] * slds.operators[b] -
                                       slds.operators[b] * slds.operators[a];
            const cdouble val = cdouble{0.0, -0.25} * trace(rho * comm);
            f(a, b) = val.real();
            f(b, a) = -val.real();
        }
    return CurvatureMatrix{f, theta};
}

namespace detail {

inline void require_support(const RealMatrix& m, const RealMatrix& projector, const char* what) {
    const RealMatrix proj = projector * m * projector;
    const double resid = max_abs_diff(m, proj);
    if (resid > 1e-7 * std::max(1.0, max_abs(m)))
        throw IncompatibleSupport(std::string(what) + " has components outside the QFIM support");
}

}  // namespace detail

// Spectrum of 2i J^{-1/2} F J^{-1/2} restricted to the support of J.
// Magnitudes in (1, 1 + 1e-6] are rounding and get clamped to 1; anything
// larger signals inconsistent inputs and raises.
inline GammaSpectrum gamma_spectrum(const QFIMatrix& qfi, const CurvatureMatrix& curv,
                                    double rank_tol = 1e-10) {
    const std::size_t d = qfi.j.rows();
    if (curv.f.rows() != d || curv.f.cols() != d)
        throw DimensionMismatch("gamma_spectrum: dimension mismatch between J and F");
    if (antisymmetry_residual(curv.f) > 1e-9)
        throw NumericalInconsistency("gamma_spectrum: curvature is not antisymmetric");

    const SymSupport sup = sym_support(qfi.j, rank_tol);
    detail::require_support(curv.f, sup.projector, "curvature");

    GammaSpectrum out;
    out.dim = d;
    out.support_rank = sup.rank;
    for (std::size_t a = 0; a < d; ++a)
        if (sup.projector(a, a) <= 1e-8) out.inestimable_axes.push_back(a);

    if (sup.rank == 0) {
        out.gamma = 0.0;
        return out;
    }

    // reduced r x r hermitian matrix in the support eigenbasis
    const std::size_t n0 = d - sup.rank;  // support eigenvalues sort last (ascending)
    ComplexMatrix y(sup.rank, sup.rank);
    const cdouble I{0.0, 1.0};
    for (std::size_t k = 0; k < sup.rank; ++k)
        for (std::size_t l = 0; l < sup.rank; ++l) {
            double b = 0.0;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    b += sup.eig.vectors(i, n0 + k) * curv.f(i, j) * sup.eig.vectors(j, n0 + l);
            y(k, l) = 2.0 * I * b /
                      std::sqrt(sup.eig.values[n0 + k] * sup.eig.values[n0 + l]);
        }

    const EigResult e = herm_eig(HermitianMatrix(y, 1e-9));
    out.eigenvalues = e.values;
    for (double& v : out.eigenvalues) {
        if (std::abs(v) > 1.0 + 1e-6)
            throw NumericalInconsistency(
                "gamma_spectrum: eigenvalue exceeds 1 beyond the rounding clamp");
        v = std::clamp(v, -1.0, 1.0);
    }
    std::stable_sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](double a, double b) {
        if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
        return a > b;
    });
    out.gamma = out.eigenvalues.empty() ? 0.0 : std::abs(out.eigenvalues.front());
    return out;
}

inline double sld_crb_scalar(const QFIMatrix& qfi, const WeightMatrix& weight,
                             double rank_tol = 1e-10) {
    if (weight.w.rows() != qfi.j.rows())
        throw DimensionMismatch("sld_crb_scalar: weight dimension mismatch");
    const SymSupport sup = sym_support(qfi.j, rank_tol);
    detail::require_support(weight.w, sup.projector, "weight");
    return trace_real(weight.w * pinv_sym(qfi.j, rank_tol));
}

// Attainable scalar bound for W = J: sum_i 2 / (1 + sqrt(1 - gamma_i^2)) over
// the support spectrum; zero eigenvalues contribute 1 apiece.
inline double attainable_qcrb(const GammaSpectrum& spectrum) {
    double c = 0.0;
    for (double v : spectrum.eigenvalues) {
        const double clamped = std::clamp(v, -1.0, 1.0);
        c += 2.0 / (1.0 + std::sqrt(1.0 - clamped * clamped));
    }
    return c;
}

inline BoundReport holevo_sandwich(const QFIMatrix& qfi, const CurvatureMatrix& curv,
                                   const WeightMatrix& weight, double rank_tol = 1e-10) {
    BoundReport r;
    r.theta = qfi.theta;
    r.j = qfi.j;
    r.f = curv.f;
    r.w = weight.w;
    r.spectrum = gamma_spectrum(qfi, curv, rank_tol);
    r.sld_crb = sld_crb_scalar(qfi, weight, rank_tol);

    const RealMatrix jplus = pinv_sym(qfi.j, rank_tol);
    const RealMatrix wsqrt = sym_support(weight.w, rank_tol).sqrt;
    r.sandwich_mid = r.sld_crb + trace_norm(wsqrt * jplus * curv.f * jplus * wsqrt);
    r.sandwich_gamma = (1.0 + r.spectrum.gamma) * r.sld_crb;
    r.sandwich_two = 2.0 * r.sld_crb;
    r.attainable_qcrb = attainable_qcrb(r.spectrum);

    const double slack = 1e-9;
    const bool ordered = r.sld_crb <= r.sandwich_mid + slack &&
                         r.sandwich_mid <= r.sandwich_gamma + slack &&
                         r.sandwich_gamma <= r.sandwich_two + slack;
    bool attainable_ok = true;
    if (weight.kind == WeightKind::qfim)
        attainable_ok = r.sld_crb <= r.attainable_qcrb + slack &&
                        r.attainable_qcrb <= r.sandwich_gamma + slack;
    if (!ordered || !attainable_ok)
        throw NumericalInconsistency("holevo_sandwich: bound ordering violated");
    return r;
}

inline std::pair<QFIMatrix, CurvatureMatrix> subspace(const QFIMatrix& qfi,
                                                      const CurvatureMatrix& curv,
                                                      const std::vector<std::size_t>& axes) {
    if (axes.empty()) throw IndexOutOfRange("subspace: empty axis set");
    for (std::size_t i = 0; i < axes.size(); ++i)
        for (std::size_t j = i + 1; j < axes.size(); ++j)
            if (axes[i] == axes[j]) throw IndexOutOfRange("subspace: repeated axis");
    return {QFIMatrix{principal_submatrix(qfi.j, axes), qfi.theta},
            CurvatureMatrix{principal_submatrix(curv.f, axes), curv.theta}};
}

// Robertson-Schrodinger slack for one axis pair, in geometric form:
// g_mm g_nn - F_mn^2 / 4 - g_mn^2 >= 0.
inline double uncertainty_check(const StateModel& model, const RealVector& theta, std::size_t mu,
                                std::size_t nu) {
    if (mu >= model.param_dim || nu >= model.param_dim)
        throw IndexOutOfRange("uncertainty_check: axis out of range");
    const QGTensor t = model.has_generators() ? qgt_from_generators(model, theta)
                                              : qgt(model, theta, best_scheme(model));
    const auto [g, f] = split(t);
    return g.g(mu, mu) * g.g(nu, nu) - 0.25 * f.f(mu, nu) * f.f(mu, nu) -
           g.g(mu, nu) * g.g(mu, nu);
}

}  // namespace qgeo
