#pragma once

// Parametrized pure-state families: built-in qubit/qutrit/ququart models,
// unitary families with explicit generators, and numerical differentiation of
// states with respect to parameters.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qgeo/eig.hpp"
#include "qgeo/errors.hpp"
#include "qgeo/matrix.hpp"

namespace qgeo {

struct AxisSpec {
    std::string label;
    std::optional<double> period;                      // 2*pi for phase-like axes
    std::optional<std::pair<double, double>> bounds;   // closed interval, if any
    bool hard_bounds = false;                          // evaluate() rejects points outside
};

struct ParameterPoint {
    RealVector values;
    std::vector<std::string> axis_labels;
    std::vector<std::optional<double>> periodicity;
};

enum class DiffScheme { analytic, central2, central4_richardson };

struct TangentVector {
    ComplexVector amplitudes;
    std::size_t axis = 0;
    DiffScheme scheme = DiffScheme::central4_richardson;
    double step = 0.0;
    double truncation_estimate = 0.0;  // max-norm estimate, FD schemes only
};

class StateModel {
public:
    using Evaluator = std::function<ComplexVector(const RealVector&)>;
    using Tangent = std::function<ComplexVector(const RealVector&, std::size_t)>;
    using Generators = std::function<std::vector<ComplexMatrix>(const RealVector&)>;

    std::string name;
    std::size_t hilbert_dim = 0;
    std::size_t param_dim = 0;
    std::vector<AxisSpec> axes;
    Evaluator evaluator;
    Tangent analytic_tangent;   // optional
    Generators generator_set;   // optional

    bool has_analytic_tangent() const { return static_cast<bool>(analytic_tangent); }
    bool has_generators() const { return static_cast<bool>(generator_set); }

    void validate_point(const RealVector& theta) const {
        if (theta.size() != param_dim)
            throw DimensionMismatch(name + ": expected " + std::to_string(param_dim) +
                                    " parameters, got " + std::to_string(theta.size()));
        for (std::size_t a = 0; a < param_dim; ++a) {
            const AxisSpec& ax = axes[a];
            if (ax.hard_bounds && ax.bounds) {
                const auto [lo, hi] = *ax.bounds;
                if (theta[a] < lo - 1e-12 || theta[a] > hi + 1e-12)
                    throw DomainError(name + ": axis " + ax.label + " outside [" +
                                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
            }
        }
    }

    ComplexVector evaluate(const RealVector& theta) const {
        validate_point(theta);
        ComplexVector psi = evaluator(theta);
        if (psi.size() != hilbert_dim)
            throw DimensionMismatch(name + ": evaluator returned wrong dimension");
        if (std::abs(norm(psi) - 1.0) > 1e-12)
            throw NumericalInconsistency(name + ": state norm deviates from 1");
        return psi;
    }

    ParameterPoint point(const RealVector& theta) const {
        validate_point(theta);
        ParameterPoint p;
        p.values = theta;
        for (const AxisSpec& ax : axes) {
            p.axis_labels.push_back(ax.label);
            p.periodicity.push_back(ax.period);
        }
        return p;
    }

    std::size_t axis_index(const std::string& label) const {
        for (std::size_t a = 0; a < axes.size(); ++a)
            if (axes[a].label == label) return a;
        throw IndexOutOfRange(name + ": no axis named " + label);
    }
};

namespace detail {

// Rotate psi by a global phase so that <ref|psi> is real nonnegative. Removes
// spurious gauge components before finite differencing.
inline ComplexVector gauge_align(const ComplexVector& ref, ComplexVector psi) {
    const cdouble ov = inner(psi, ref);  // conj(<ref|psi>)
    const double mag = std::abs(ov);
    if (mag > 1e-14) {
        const cdouble phase = ov / mag;
        for (auto& x : psi) x *= phase;
    }
    return psi;
}

enum class Stencil { central, forward, backward };

inline Stencil pick_stencil(const AxisSpec& ax, double x, double h) {
    if (!ax.bounds || ax.period) return Stencil::central;
    const auto [lo, hi] = *ax.bounds;
    if (hi - lo < 2.0 * h + 1e-15)
        throw DomainError("tangent: axis " + ax.label + " narrower than the stencil");
    if (x - h < lo) return Stencil::forward;
    if (x + h > hi) return Stencil::backward;
    return Stencil::central;
}

// Second-order difference at step h with the given stencil, gauge-aligned
// against the base state.
inline ComplexVector fd_once(const StateModel& model, const RealVector& theta,
                             const ComplexVector& base, std::size_t axis, double h,
                             Stencil st) {
    RealVector t = theta;
    auto eval_at = [&](double x) {
        t[axis] = x;
        return gauge_align(base, model.evaluate(t));
    };
    const double x = theta[axis];
    ComplexVector d(base.size(), cdouble{});
    switch (st) {
        case Stencil::central: {
            const ComplexVector plus = eval_at(x + h), minus = eval_at(x - h);
            for (std::size_t k = 0; k < d.size(); ++k) d[k] = (plus[k] - minus[k]) / (2.0 * h);
            break;
        }
        case Stencil::forward: {
            const ComplexVector p1 = eval_at(x + h), p2 = eval_at(x + 2.0 * h);
            const ComplexVector p0 = gauge_align(base, base);
            for (std::size_t k = 0; k < d.size(); ++k)
                d[k] = (-3.0 * p0[k] + 4.0 * p1[k] - p2[k]) / (2.0 * h);
            break;
        }
        case Stencil::backward: {
            const ComplexVector m1 = eval_at(x - h), m2 = eval_at(x - 2.0 * h);
            const ComplexVector p0 = gauge_align(base, base);
            for (std::size_t k = 0; k < d.size(); ++k)
                d[k] = (3.0 * p0[k] - 4.0 * m1[k] + m2[k]) / (2.0 * h);
            break;
        }
    }
    return d;
}

}  // namespace detail

inline TangentVector tangent(const StateModel& model, const RealVector& theta, std::size_t axis,
                             DiffScheme scheme = DiffScheme::central4_richardson,
                             double step = 1e-3) {
    model.validate_point(theta);
    if (axis >= model.param_dim) throw IndexOutOfRange("tangent: axis index out of range");

    TangentVector tv;
    tv.axis = axis;
    tv.scheme = scheme;
    tv.step = step;

    if (scheme == DiffScheme::analytic) {
        if (!model.has_analytic_tangent())
            throw MissingGenerators(model.name + ": no analytic tangent available");
        tv.amplitudes = model.analytic_tangent(theta, axis);
        tv.step = 0.0;
        return tv;
    }

    const ComplexVector base = model.evaluate(theta);
    const detail::Stencil st = detail::pick_stencil(model.axes[axis], theta[axis], step);
    // one-sided stencils need 2h of room; re-check against the wider footprint
    if (st != detail::Stencil::central) {
        const auto [lo, hi] = *model.axes[axis].bounds;
        const double x = theta[axis];
        if ((st == detail::Stencil::forward && x + 2.0 * step > hi + 1e-15) ||
            (st == detail::Stencil::backward && x - 2.0 * step < lo - 1e-15))
            throw DomainError("tangent: stencil exits the domain of axis " +
                              model.axes[axis].label);
    }

    const ComplexVector d_h = detail::fd_once(model, theta, base, axis, step, st);
    if (scheme == DiffScheme::central2) {
        tv.amplitudes = d_h;
        return tv;
    }

    const ComplexVector d_h2 = detail::fd_once(model, theta, base, axis, step / 2.0, st);
    ComplexVector rich(base.size());
    double est = 0.0;
    for (std::size_t k = 0; k < rich.size(); ++k) {
        rich[k] = (4.0 * d_h2[k] - d_h[k]) / 3.0;
        est = std::max(est, std::abs(d_h2[k] - d_h[k]) / 3.0);
    }
    tv.amplitudes = rich;
    tv.truncation_estimate = est;
    return tv;
}

// ---------------------------------------------------------------------------
// Built-in models
// ---------------------------------------------------------------------------

namespace detail {

// Hermitian generator reproducing a known tangent:
// G = i(|tau><psi| - |psi><tau|) satisfies the covariance identities of a
// unitary family regardless of where tau came from.
inline ComplexMatrix tangent_generator(const ComplexVector& psi, const ComplexVector& tau) {
    const cdouble I{0.0, 1.0};
    ComplexMatrix g = outer(tau, psi);
    const ComplexMatrix gt = outer(psi, tau);
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) = I * (g(i, j) - gt(i, j));
    return g;
}

}  // namespace detail

inline StateModel qubit_model() {
    constexpr double pi = std::numbers::pi;
    StateModel m;
    m.name = "qubit";
    m.hilbert_dim = 2;
    m.param_dim = 2;
    m.axes = {AxisSpec{"theta", std::nullopt, std::make_pair(0.0, pi), false},
              AxisSpec{"phi", 2.0 * pi, std::nullopt, false}};
    m.evaluator = [](const RealVector& t) {
        const double th = t[0], ph = t[1];
        const cdouble e{std::cos(ph), std::sin(ph)};
        return ComplexVector{std::cos(th / 2.0), -std::sin(th / 2.0) * e};
    };
    m.analytic_tangent = [](const RealVector& t, std::size_t axis) {
        const double th = t[0], ph = t[1];
        const cdouble e{std::cos(ph), std::sin(ph)};
        if (axis == 0)
            return ComplexVector{-0.5 * std::sin(th / 2.0), -0.5 * std::cos(th / 2.0) * e};
        const cdouble I{0.0, 1.0};
        return ComplexVector{0.0, -I * std::sin(th / 2.0) * e};
    };
    m.generator_set = [](const RealVector& t) {
        const double ph = t[1];
        ComplexMatrix g_theta(2, 2), g_phi(2, 2);
        const cdouble I{0.0, 1.0};
        // (sin(phi) sigma_x - cos(phi) sigma_y)/2 and (sigma_z - 1)/2
        g_theta(0, 1) = 0.5 * (std::sin(ph) + I * std::cos(ph));
        g_theta(1, 0) = std::conj(g_theta(0, 1));
        g_phi(1, 1) = -1.0;
        return std::vector<ComplexMatrix>{g_theta, g_phi};
    };
    return m;
}

inline StateModel qutrit_model() {
    constexpr double pi = std::numbers::pi;
    StateModel m;
    m.name = "qutrit";
    m.hilbert_dim = 3;
    m.param_dim = 3;
    m.axes = {AxisSpec{"alpha", std::nullopt, std::make_pair(0.0, pi / 2.0), true},
              AxisSpec{"beta", 2.0 * pi, std::nullopt, false},
              AxisSpec{"phi", 2.0 * pi, std::nullopt, false}};
    const double isq2 = 1.0 / std::sqrt(2.0);
    m.evaluator = [isq2](const RealVector& t) {
        const double a = t[0], b = t[1], f = t[2];
        const cdouble eb{std::cos(b), -std::sin(b)};
        const cdouble ef{std::cos(f), -std::sin(f)};
        return ComplexVector{isq2 * std::cos(a) * eb, -isq2, isq2 * std::sin(a) * ef};
    };
    m.analytic_tangent = [isq2](const RealVector& t, std::size_t axis) {
        const double a = t[0], b = t[1], f = t[2];
        const cdouble eb{std::cos(b), -std::sin(b)};
        const cdouble ef{std::cos(f), -std::sin(f)};
        const cdouble I{0.0, 1.0};
        switch (axis) {
            case 0: return ComplexVector{-isq2 * std::sin(a) * eb, 0.0, isq2 * std::cos(a) * ef};
            case 1: return ComplexVector{-I * isq2 * std::cos(a) * eb, 0.0, 0.0};
            default: return ComplexVector{0.0, 0.0, -I * isq2 * std::sin(a) * ef};
        }
    };
    StateModel copy = m;  // capture evaluator/tangent by value for the generators
    m.generator_set = [copy](const RealVector& t) {
        const ComplexVector psi = copy.evaluate(t);
        std::vector<ComplexMatrix> gens;
        for (std::size_t a = 0; a < 3; ++a)
            gens.push_back(detail::tangent_generator(psi, copy.analytic_tangent(t, a)));
        return gens;
    };
    return m;
}

// Remaining eigenstates of the qutrit frame, orthogonal to the model state.
inline std::pair<ComplexVector, ComplexVector> qutrit_eigenframe(const RealVector& theta) {
    qutrit_model().validate_point(theta);
    const double a = theta[0], b = theta[1], f = theta[2];
    const cdouble eb{std::cos(b), -std::sin(b)};
    const cdouble ef{std::cos(f), -std::sin(f)};
    const double isq2 = 1.0 / std::sqrt(2.0);
    ComplexVector psi1{-std::sin(a) * eb, 0.0, std::cos(a) * ef};
    ComplexVector psi2{isq2 * std::cos(a) * eb, isq2, isq2 * std::sin(a) * ef};
    return {psi1, psi2};
}

inline StateModel ququart_model() {
    constexpr double pi = std::numbers::pi;
    StateModel m;
    m.name = "ququart";
    m.hilbert_dim = 4;
    m.param_dim = 4;
    m.axes = {AxisSpec{"alpha", std::nullopt, std::make_pair(0.0, pi / 2.0), true},
              AxisSpec{"phi1", 2.0 * pi, std::nullopt, false},
              AxisSpec{"phi2", 2.0 * pi, std::nullopt, false},
              AxisSpec{"phi3", 2.0 * pi, std::nullopt, false}};
    const double isq3 = 1.0 / std::sqrt(3.0);
    m.evaluator = [isq3](const RealVector& t) {
        const double a = t[0];
        const cdouble e1{std::cos(t[1]), std::sin(t[1])};
        const cdouble e2{std::cos(t[2]), std::sin(t[2])};
        const cdouble e3{std::cos(t[3]), std::sin(t[3])};
        return ComplexVector{isq3 * std::cos(a) * e1, isq3 * e2, isq3 * std::sin(a) * e3, isq3};
    };
    m.analytic_tangent = [isq3](const RealVector& t, std::size_t axis) {
        const double a = t[0];
        const cdouble e1{std::cos(t[1]), std::sin(t[1])};
        const cdouble e2{std::cos(t[2]), std::sin(t[2])};
        const cdouble e3{std::cos(t[3]), std::sin(t[3])};
        const cdouble I{0.0, 1.0};
        switch (axis) {
            case 0:
                return ComplexVector{-isq3 * std::sin(a) * e1, 0.0, isq3 * std::cos(a) * e3, 0.0};
            case 1: return ComplexVector{I * isq3 * std::cos(a) * e1, 0.0, 0.0, 0.0};
            case 2: return ComplexVector{0.0, I * isq3 * e2, 0.0, 0.0};
            default: return ComplexVector{0.0, 0.0, I * isq3 * std::sin(a) * e3, 0.0};
        }
    };
    StateModel copy = m;
    m.generator_set = [copy](const RealVector& t) {
        const ComplexVector psi = copy.evaluate(t);
        std::vector<ComplexMatrix> gens;
        for (std::size_t a = 0; a < 4; ++a)
            gens.push_back(detail::tangent_generator(psi, copy.analytic_tangent(t, a)));
        return gens;
    };
    return m;
}

// Family psi(theta) = prod_mu exp(-i theta_mu G_mu) psi0, factors applied in
// declared generator order. Generators of the family follow from the ordered
// product: G_mu(theta) = V_mu G_mu V_mu^dag with V_mu the product of all
// earlier factors.
inline StateModel unitary_family(const std::vector<ComplexMatrix>& generators,
                                 const ComplexVector& psi0) {
    if (generators.empty()) throw DimensionMismatch("unitary_family: no generators");
    const std::size_t n = psi0.size();
    std::vector<HermitianMatrix> gens;
    gens.reserve(generators.size());
    for (const ComplexMatrix& g : generators) {
        if (g.rows() != n || g.cols() != n)
            throw DimensionMismatch("unitary_family: generator dimension mismatch");
        gens.emplace_back(g, 1e-10);
    }
    if (std::abs(norm(psi0) - 1.0) > 1e-12)
        throw NumericalInconsistency("unitary_family: initial state is not normalized");

    const cdouble I{0.0, 1.0};
    const std::size_t d = gens.size();

    StateModel m;
    m.name = "unitary_family";
    m.hilbert_dim = n;
    m.param_dim = d;
    for (std::size_t a = 0; a < d; ++a)
        m.axes.push_back(AxisSpec{"theta" + std::to_string(a), std::nullopt, std::nullopt, false});

    m.evaluator = [gens, psi0, I](const RealVector& t) {
        ComplexVector psi = psi0;
        for (std::size_t mu = gens.size(); mu-- > 0;)
            psi = herm_exp(gens[mu], -I * t[mu]) * psi;
        return psi;
    };
    m.generator_set = [gens, I](const RealVector& t) {
        std::vector<ComplexMatrix> out;
        ComplexMatrix prefix = ComplexMatrix::identity(gens.front().dim());
        for (std::size_t mu = 0; mu < gens.size(); ++mu) {
            out.push_back(prefix * gens[mu].matrix() * adjoint(prefix));
            prefix = prefix * herm_exp(gens[mu], -I * t[mu]);
        }
        return out;
    };
    StateModel copy = m;
    m.analytic_tangent = [copy, I](const RealVector& t, std::size_t axis) {
        const ComplexVector psi = copy.evaluate(t);
        const std::vector<ComplexMatrix> g = copy.generator_set(t);
        ComplexVector tau = g[axis] * psi;
        for (auto& x : tau) x *= -I;
        return tau;
    };
    return m;
}

inline StateModel model_by_name(const std::string& name) {
    if (name == "qubit") return qubit_model();
    if (name == "qutrit") return qutrit_model();
    if (name == "ququart") return ququart_model();
    throw DomainError("unknown model: " + name);
}

}  // namespace qgeo
