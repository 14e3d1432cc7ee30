#pragma once

// Quantum geometric tensor, Fubini-Study metric, Berry curvature, the
// generalized 3-form curvature, and topological invariants by sphere
// integration.

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "qgeo/eig.hpp"
#include "qgeo/errors.hpp"
#include "qgeo/matrix.hpp"
#include "qgeo/model.hpp"

namespace qgeo {

struct QGTensor {
    ComplexMatrix chi;   // chi_{mu nu} = <d_mu psi|(1 - |psi><psi|)|d_nu psi>
    RealVector theta;
    DiffScheme method = DiffScheme::central4_richardson;
};

struct MetricTensor {
    RealMatrix g;        // Re chi, symmetric PSD
    RealVector theta;
};

struct CurvatureMatrix {
    RealMatrix f;        // 2 Im chi, antisymmetric
    RealVector theta;
};

namespace detail {

inline void validate_qgt(const ComplexMatrix& chi) {
    if (hermiticity_residual(chi) > 1e-9)
        throw NumericalInconsistency("qgt: tensor is not hermitian within tolerance");
    const EigResult e = herm_eig(HermitianMatrix(chi, 1e-9));
    if (!e.values.empty() && e.values.front() < -1e-9)
        throw NumericalInconsistency("qgt: tensor has a negative eigenvalue beyond tolerance");
}

inline ComplexMatrix hermitize(ComplexMatrix m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        m(i, i) = m(i, i).real();
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            const cdouble avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
            m(i, j) = avg;
            m(j, i) = std::conj(avg);
        }
    }
    return m;
}

}  // namespace detail

inline DiffScheme best_scheme(const StateModel& model) {
    return model.has_analytic_tangent() ? DiffScheme::analytic
                                        : DiffScheme::central4_richardson;
}

inline QGTensor qgt(const StateModel& model, const RealVector& theta,
                    DiffScheme scheme = DiffScheme::central4_richardson, double step = 1e-3) {
    const ComplexVector psi = model.evaluate(theta);
    const std::size_t d = model.param_dim;

    std::vector<ComplexVector> tangents;
    tangents.reserve(d);
    for (std::size_t a = 0; a < d; ++a)
        tangents.push_back(tangent(model, theta, a, scheme, step).amplitudes);

    ComplexMatrix chi(d, d);
    std::vector<cdouble> overlap(d);
    for (std::size_t a = 0; a < d; ++a) overlap[a] = inner(psi, tangents[a]);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            chi(a, b) = inner(tangents[a], tangents[b]) - std::conj(overlap[a]) * overlap[b];

    chi = detail::hermitize(chi);
    detail::validate_qgt(chi);
    return QGTensor{chi, theta, scheme};
}

inline QGTensor qgt_from_generators(const StateModel& model, const RealVector& theta) {
    if (!model.has_generators())
        throw MissingGenerators(model.name + ": model has no generator set");
    const ComplexVector psi = model.evaluate(theta);
    const std::vector<ComplexMatrix> gens = model.generator_set(theta);
    const std::size_t d = gens.size();

    std::vector<ComplexVector> gpsi;
    gpsi.reserve(d);
    RealVector mean(d);
    for (std::size_t a = 0; a < d; ++a) {
        gpsi.push_back(gens[a] * psi);
        mean[a] = inner(psi, gpsi[a]).real();
    }

    // chi_{ab} = <G_a G_b> - <G_a><G_b>; real part is the generator
    // covariance, imaginary part reproduces the commutator curvature.
    ComplexMatrix chi(d, d);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            chi(a, b) = inner(gpsi[a], gpsi[b]) - mean[a] * mean[b];

    chi = detail::hermitize(chi);
    detail::validate_qgt(chi);
    return QGTensor{chi, theta, DiffScheme::analytic};
}

inline std::pair<MetricTensor, CurvatureMatrix> split(const QGTensor& t) {
    RealMatrix g = real_part(t.chi);
    RealMatrix f = imag_part(t.chi);
    f *= 2.0;
    if (symmetry_residual(g) > 1e-9)
        throw NumericalInconsistency("split: metric part is not symmetric");
    if (antisymmetry_residual(f) > 1e-9)
        throw NumericalInconsistency("split: curvature part is not antisymmetric");
    for (std::size_t i = 0; i < g.rows(); ++i) {
        f(i, i) = 0.0;
        for (std::size_t j = i + 1; j < g.cols(); ++j) {
            const double gs = 0.5 * (g(i, j) + g(j, i));
            g(i, j) = gs;
            g(j, i) = gs;
            const double fa = 0.5 * (f(i, j) - f(j, i));
            f(i, j) = fa;
            f(j, i) = -fa;
        }
    }
    return {MetricTensor{g, t.theta}, CurvatureMatrix{f, t.theta}};
}

// Generalized 3-form curvature H = sqrt(J_ff F_ab^2 + J_bb F_af^2
// - 2 J_bf F_ab F_af) for a 3-parameter model; axes order is
// (alpha-like, beta-like, phi-like). Rounding can push an exact zero
// radicand slightly negative, hence the clamp.
inline double three_form(const RealMatrix& qfim, const RealMatrix& curvature,
                         const std::array<std::size_t, 3>& axes = {0, 1, 2}) {
    if (qfim.rows() != 3 || qfim.cols() != 3 || curvature.rows() != 3 || curvature.cols() != 3)
        throw DimensionMismatch("three_form: requires 3x3 inputs");
    std::array<bool, 3> seen{};
    for (std::size_t a : axes) {
        if (a > 2 || seen[a]) throw DimensionMismatch("three_form: axes must permute {0,1,2}");
        seen[a] = true;
    }
    const std::size_t a = axes[0], b = axes[1], f = axes[2];
    const double radicand = qfim(f, f) * curvature(a, b) * curvature(a, b) +
                            qfim(b, b) * curvature(a, f) * curvature(a, f) -
                            2.0 * qfim(b, f) * curvature(a, b) * curvature(a, f);
    return std::sqrt(std::max(radicand, 0.0));
}

namespace detail {

inline void require_axis(const AxisSpec& ax, double lo, double hi, const char* what) {
    if (!ax.bounds || std::abs(ax.bounds->first - lo) > 1e-12 ||
        std::abs(ax.bounds->second - hi) > 1e-12)
        throw DomainError(std::string("sphere integration: axis ") + ax.label +
                          " is not the expected " + what + " interval");
}

inline void require_periodic(const AxisSpec& ax) {
    if (!ax.period || std::abs(*ax.period - 2.0 * std::numbers::pi) > 1e-12)
        throw DomainError("sphere integration: axis " + ax.label + " is not 2*pi periodic");
}

}  // namespace detail

// Berry-curvature flux through the parameter sphere, in units of 2*pi.
// Midpoint rule on a uniform grid; fixed-order accumulation keeps the result
// bit-for-bit reproducible for a given grid.
inline double chern_number(const StateModel& model, std::size_t n_polar, std::size_t n_azimuth,
                           DiffScheme scheme = DiffScheme::analytic) {
    if (model.param_dim != 2) throw DomainError("chern_number: requires a 2-parameter model");
    detail::require_axis(model.axes[0], 0.0, std::numbers::pi, "polar");
    detail::require_periodic(model.axes[1]);
    if (n_polar < 1 || n_azimuth < 1) throw DomainError("chern_number: empty grid");

    const double d_polar = std::numbers::pi / static_cast<double>(n_polar);
    const double d_azimuth = 2.0 * std::numbers::pi / static_cast<double>(n_azimuth);
    double flux = 0.0;
    for (std::size_t i = 0; i < n_polar; ++i) {
        const double th = (static_cast<double>(i) + 0.5) * d_polar;
        for (std::size_t j = 0; j < n_azimuth; ++j) {
            const double ph = (static_cast<double>(j) + 0.5) * d_azimuth;
            const auto [g, f] = split(qgt(model, {th, ph}, scheme));
            flux += f.f(0, 1);
        }
    }
    return flux * d_polar * d_azimuth / (2.0 * std::numbers::pi);
}

// Flux of the generalized 3-form through the parameter 3-sphere, in units of
// 2*pi^2 (Dixmier-Douady invariant for the qutrit family).
inline double dd_invariant(const StateModel& model, std::size_t n_alpha, std::size_t n_beta,
                           std::size_t n_phi, DiffScheme scheme = DiffScheme::analytic) {
    if (model.param_dim != 3) throw DomainError("dd_invariant: requires a 3-parameter model");
    detail::require_axis(model.axes[0], 0.0, std::numbers::pi / 2.0, "half-polar");
    detail::require_periodic(model.axes[1]);
    detail::require_periodic(model.axes[2]);
    if (n_alpha < 1 || n_beta < 1 || n_phi < 1) throw DomainError("dd_invariant: empty grid");

    const double da = (std::numbers::pi / 2.0) / static_cast<double>(n_alpha);
    const double db = 2.0 * std::numbers::pi / static_cast<double>(n_beta);
    const double dp = 2.0 * std::numbers::pi / static_cast<double>(n_phi);
    double flux = 0.0;
    for (std::size_t i = 0; i < n_alpha; ++i) {
        const double a = (static_cast<double>(i) + 0.5) * da;
        for (std::size_t j = 0; j < n_beta; ++j) {
            const double b = (static_cast<double>(j) + 0.5) * db;
            for (std::size_t k = 0; k < n_phi; ++k) {
                const double p = (static_cast<double>(k) + 0.5) * dp;
                const auto [g, f] = split(qgt(model, {a, b, p}, scheme));
                RealMatrix j4 = g.g;
                j4 *= 4.0;
                flux += three_form(j4, f.f);
            }
        }
    }
    return flux * da * db * dp / (2.0 * std::numbers::pi * std::numbers::pi);
}

}  // namespace qgeo
