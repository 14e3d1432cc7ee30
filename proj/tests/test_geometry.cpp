#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qgeo/geometry.hpp"
#include "qgeo/rng.hpp"

using namespace qgeo;

namespace {

constexpr double pi = std::numbers::pi;
const cdouble I{0.0, 1.0};

ComplexMatrix pauli(char which) {
    ComplexMatrix m(2, 2);
    switch (which) {
        case 'x': m(0, 1) = 1.0; m(1, 0) = 1.0; break;
        case 'y': m(0, 1) = -I; m(1, 0) = I; break;
        default: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    }
    return m;
}

RealVector random_interior_point(const StateModel& m, Rng& rng) {
    RealVector t(m.param_dim);
    for (std::size_t a = 0; a < m.param_dim; ++a) {
        if (m.axes[a].bounds) {
            const auto [lo, hi] = *m.axes[a].bounds;
            t[a] = rng.uniform(lo + 0.05, hi - 0.05);
        } else {
            t[a] = rng.uniform(0.0, 2.0 * pi);
        }
    }
    return t;
}

// model with the state multiplied by exp(i(a t0 + b sin t1)); same projective
// family, so the QGT must not move.
StateModel gauge_twisted(const StateModel& base, double a, double b) {
    StateModel m = base;
    m.analytic_tangent = nullptr;
    m.generator_set = nullptr;
    const StateModel::Evaluator inner_eval = base.evaluator;
    m.evaluator = [inner_eval, a, b](const RealVector& t) {
        ComplexVector psi = inner_eval(t);
        const double phase = a * t[0] + b * std::sin(t[1]);
        const cdouble factor{std::cos(phase), std::sin(phase)};
        for (auto& x : psi) x *= factor;
        return psi;
    };
    return m;
}

}  // namespace

TEST_CASE("qgt: qubit reference point") {
    const auto [g, f] = split(qgt(qubit_model(), {pi / 2.0, 0.0}));
    CHECK(g.g(0, 0) == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(g.g(1, 1) == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(std::abs(g.g(0, 1)) <= 1e-10);
    CHECK(f.f(0, 1) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("qgt: qutrit loses phi information at alpha=0") {
    const QGTensor t = qgt(qutrit_model(), {0.0, 0.0, 0.0});
    CHECK(std::abs(t.chi(2, 2)) <= 1e-10);
}

TEST_CASE("qgt: qutrit matches the closed forms at alpha=pi/4") {
    const auto [g, f] = split(qgt(qutrit_model(), {pi / 4.0, 0.3, 1.1}));
    RealMatrix j = g.g;
    j *= 4.0;
    CHECK(max_abs_diff(j, oracles::qutrit_qfim_ref(pi / 4.0)) <= 1e-9);
    CHECK(max_abs_diff(f.f, oracles::qutrit_curvature_ref(pi / 4.0)) <= 1e-9);
    CHECK(f.f(0, 1) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(f.f(0, 2) == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(std::abs(f.f(1, 2)) <= 1e-9);
}

TEST_CASE("split: definition on a hand-built tensor") {
    ComplexMatrix chi(2, 2);
    chi(0, 0) = 0.4;
    chi(1, 1) = 0.3;
    chi(0, 1) = cdouble{0.1, 0.25};
    chi(1, 0) = std::conj(chi(0, 1));
    const auto [g, f] = split(QGTensor{chi, {0.0, 0.0}, DiffScheme::analytic});
    CHECK(g.g(0, 1) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(f.f(0, 1) == doctest::Approx(0.5).epsilon(1e-15));

    ComplexMatrix diag(2, 2);
    diag(0, 0) = 0.2;
    diag(1, 1) = 0.7;
    const auto [gd, fd] = split(QGTensor{diag, {0.0, 0.0}, DiffScheme::analytic});
    CHECK(max_abs(fd.f) == 0.0);
}

TEST_CASE("qgt_from_generators: eigenstate of a single generator has no geometry") {
    const StateModel m = unitary_family({0.5 * pauli('z')}, {1.0, 0.0});
    const QGTensor t = qgt_from_generators(m, {0.7});
    CHECK(max_abs(t.chi) <= 1e-12);
}

TEST_CASE("qgt_from_generators: commuting generators give zero curvature") {
    ComplexMatrix d2(2, 2);
    d2(0, 0) = 0.3;
    d2(1, 1) = 0.9;
    const double isq2 = 1.0 / std::sqrt(2.0);
    const StateModel m = unitary_family({0.5 * pauli('z'), d2}, {isq2, isq2});
    const auto [g, f] = split(qgt_from_generators(m, {0.4, 1.3}));
    CHECK(max_abs(f.f) <= 1e-12);
    CHECK(g.g(0, 0) > 0.0);
}

TEST_CASE("qgt_from_generators: agrees with the tangent route") {
    Rng rng(52);
    for (const StateModel& m : {qubit_model(), qutrit_model(), ququart_model()}) {
        for (int trial = 0; trial < 6; ++trial) {
            const RealVector t = random_interior_point(m, rng);
            const QGTensor direct = qgt(m, t, DiffScheme::central4_richardson);
            const QGTensor gen = qgt_from_generators(m, t);
            CHECK(max_abs_diff(direct.chi, gen.chi) <= 1e-7);
        }
    }
    const StateModel no_gens = gauge_twisted(qubit_model(), 0.0, 0.0);
    CHECK_THROWS_AS(qgt_from_generators(no_gens, {1.0, 1.0}), MissingGenerators);
}

TEST_CASE("gauge invariance of the finite-difference QGT") {
    Rng rng(62);
    for (int trial = 0; trial < 6; ++trial) {
        const double a = rng.uniform(-1.5, 1.5), b = rng.uniform(-1.5, 1.5);
        for (const StateModel& base : {qubit_model(), qutrit_model()}) {
            const StateModel twisted = gauge_twisted(base, a, b);
            const RealVector t = random_interior_point(base, rng);
            const QGTensor plain = qgt(base, t, DiffScheme::central4_richardson);
            const QGTensor gauged = qgt(twisted, t, DiffScheme::central4_richardson);
            CHECK(max_abs_diff(plain.chi, gauged.chi) <= 1e-7);
        }
    }
}

TEST_CASE("qgt: positive semidefinite with nonnegative metric determinant") {
    Rng rng(72);
    for (const StateModel& m : {qubit_model(), qutrit_model(), ququart_model()}) {
        for (int trial = 0; trial < 100; ++trial) {
            const RealVector t = random_interior_point(m, rng);
            const QGTensor tensor = qgt(m, t, best_scheme(m));  // PSD checked on construction
            const auto [g, f] = split(tensor);
            const SymEigResult e = sym_eig(g.g);
            double det = 1.0;
            for (double lv : e.values) det *= lv;
            CHECK(det >= -1e-9);
        }
    }
}

TEST_CASE("three_form: qutrit values") {
    const RealMatrix j = oracles::qutrit_qfim_ref(pi / 4.0);
    const RealMatrix f = oracles::qutrit_curvature_ref(pi / 4.0);
    CHECK(three_form(j, f) == doctest::Approx(0.5).epsilon(1e-12));

    CHECK(three_form(j, RealMatrix(3, 3)) == 0.0);

    const RealMatrix j0 = oracles::qutrit_qfim_ref(0.0);
    const RealMatrix f0 = oracles::qutrit_curvature_ref(0.0);
    CHECK(three_form(j0, f0) == 0.0);

    // role permutation: swapping the beta-like and phi-like axes at this point
    CHECK(three_form(j, f, {0, 2, 1}) == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(three_form(RealMatrix(2, 2), RealMatrix(2, 2)), DimensionMismatch);
    CHECK_THROWS_AS(three_form(j, f, {0, 1, 1}), DimensionMismatch);
}

TEST_CASE("qutrit closed forms: sqrt(det J) = sin(2 alpha) and 2H = sqrt(det J)") {
    for (int k = 0; k < 20; ++k) {
        const double alpha = 0.05 + (pi / 2.0 - 0.1) * k / 19.0;
        const auto [g, f] = split(qgt(qutrit_model(), {alpha, 0.4, 2.2}, DiffScheme::analytic));
        RealMatrix j = g.g;
        j *= 4.0;
        const double det = oracles::det3(j);
        CHECK(std::sqrt(std::max(det, 0.0)) == doctest::Approx(std::sin(2.0 * alpha)).epsilon(1e-6));
        const double h = three_form(j, f.f);
        CHECK(2.0 * h / std::sqrt(det) == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("chern number: qubit monopole and a flat family") {
    CHECK(chern_number(qubit_model(), 50, 50) == doctest::Approx(1.0).epsilon(1e-2));

    // family with no azimuthal dependence at all: zero curvature, zero flux
    StateModel flat = qubit_model();
    flat.analytic_tangent = nullptr;
    flat.generator_set = nullptr;
    flat.evaluator = [](const RealVector& t) {
        return ComplexVector{std::cos(t[0] / 2.0), std::sin(t[0] / 2.0)};
    };
    CHECK(std::abs(chern_number(flat, 30, 8, DiffScheme::central4_richardson)) <= 1e-9);

    CHECK_THROWS_AS(chern_number(qutrit_model(), 10, 10), DomainError);
}

TEST_CASE("dixmier-douady invariant: qutrit tensor monopole") {
    CHECK(dd_invariant(qutrit_model(), 50, 8, 8) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK_THROWS_AS(dd_invariant(qubit_model(), 10, 4, 4), DomainError);
}
