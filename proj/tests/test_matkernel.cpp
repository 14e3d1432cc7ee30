#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "qgeo/eig.hpp"
#include "qgeo/matrix.hpp"
#include "qgeo/rng.hpp"

using namespace qgeo;

namespace {

const cdouble I{0.0, 1.0};

RealMatrix random_symmetric(Rng& rng, std::size_t n) {
    RealMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = rng.normal();
    return m;
}

RealMatrix random_spd(Rng& rng, std::size_t n) {
    RealMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.normal();
    RealMatrix m = transpose(a) * a;
    for (std::size_t i = 0; i < n; ++i) m(i, i) += 0.5;
    return m;
}

RealMatrix random_antisymmetric(Rng& rng, std::size_t n) {
    RealMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double x = rng.normal();
            m(i, j) = x;
            m(j, i) = -x;
        }
    return m;
}

ComplexMatrix random_hermitian(Rng& rng, std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = rng.normal();
        for (std::size_t j = i + 1; j < n; ++j) {
            const cdouble x{rng.normal(), rng.normal()};
            m(i, j) = x;
            m(j, i) = std::conj(x);
        }
    }
    return m;
}

// 2i S^{-1/2} F S^{-1/2} built directly from a spectral decomposition of S.
ComplexMatrix symmetrized_curvature(const RealMatrix& s, const RealMatrix& f) {
    const SymSupport sup = sym_support(s);
    const RealMatrix m = sup.inv_sqrt * f * sup.inv_sqrt;
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = 2.0 * I * m(i, j);
    return out;
}

}  // namespace

TEST_CASE("herm_eig: identity") {
    const EigResult e = herm_eig(HermitianMatrix(ComplexMatrix::identity(2)));
    CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("herm_eig: pauli-y spectrum") {
    ComplexMatrix m(2, 2);
    m(0, 1) = -I;
    m(1, 0) = I;
    const EigResult e = herm_eig(HermitianMatrix(m));
    CHECK(e.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("herm_eig: symmetrized qutrit curvature at alpha=pi/4") {
    const RealMatrix j = oracles::qutrit_qfim_ref(std::numbers::pi / 4.0);
    const RealMatrix f = oracles::qutrit_curvature_ref(std::numbers::pi / 4.0);
    const ComplexMatrix y = symmetrized_curvature(j, f);

    const auto ref = oracles::eig3_charpoly(y);
    CHECK(ref[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(ref[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ref[2] == doctest::Approx(1.0).epsilon(1e-12));

    const EigResult e = herm_eig(HermitianMatrix(y, 1e-9));
    for (int k = 0; k < 3; ++k) CHECK(e.values[k] == doctest::Approx(ref[k]).epsilon(1e-10));
}

TEST_CASE("herm_eig: reconstruction and orthonormality on random hermitians") {
    Rng rng(101);
    for (std::size_t n = 2; n <= 8; ++n) {
        const ComplexMatrix m = random_hermitian(rng, n);
        const EigResult e = herm_eig(HermitianMatrix(m, 1e-9));

        ComplexMatrix recon(n, n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    recon(i, j) += e.values[k] * e.vectors(i, k) * std::conj(e.vectors(j, k));
        CHECK(max_abs_diff(recon, m) <= 1e-10 * std::max(max_abs(m), 1.0));

        const ComplexMatrix gram = adjoint(e.vectors) * e.vectors;
        CHECK(max_abs_diff(gram, ComplexMatrix::identity(n)) <= 1e-10);

        // ascending order
        for (std::size_t k = 1; k < n; ++k) CHECK(e.values[k - 1] <= e.values[k] + 1e-14);
    }
}

TEST_CASE("herm_eig: paired spectrum of 2i S^-1/2 F S^-1/2") {
    Rng rng(202);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + trial % 6;
        const RealMatrix s = random_spd(rng, n);
        const RealMatrix f = random_antisymmetric(rng, n);
        const EigResult e = herm_eig(HermitianMatrix(symmetrized_curvature(s, f), 1e-9));
        for (std::size_t k = 0; k < n; ++k)
            CHECK(std::abs(e.values[k] + e.values[n - 1 - k]) <= 1e-9);
        if (n % 2 == 1) CHECK(std::abs(e.values[n / 2]) <= 1e-9);
    }
}

TEST_CASE("pinv_sym: diagonal inverse") {
    RealMatrix m(3, 3);
    m(0, 0) = 2.0;
    m(1, 1) = 0.75;
    m(2, 2) = 0.75;
    const RealMatrix p = pinv_sym(m);
    CHECK(p(0, 0) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(p(1, 1) == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
    CHECK(p(2, 2) == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
    CHECK(std::abs(p(0, 1)) + std::abs(p(0, 2)) + std::abs(p(1, 2)) <= 1e-13);
}

TEST_CASE("pinv_sym: qutrit QFIM block at alpha=pi/4") {
    const RealMatrix p = pinv_sym(oracles::qutrit_qfim_ref(std::numbers::pi / 4.0));
    CHECK(p(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p(1, 1) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(p(2, 2) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(p(1, 2) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(p(0, 1)) <= 1e-12);
    CHECK(std::abs(p(0, 2)) <= 1e-12);
}

TEST_CASE("pinv_sym: rank-deficient qutrit QFIM at alpha=0") {
    const RealMatrix p = pinv_sym(oracles::qutrit_qfim_ref(0.0));
    CHECK(p(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
    for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(p(2, k)) <= 1e-12);
        CHECK(std::abs(p(k, 2)) <= 1e-12);
    }
}

TEST_CASE("pinv_sym: zero maps to zero") {
    const RealMatrix p = pinv_sym(RealMatrix(3, 3));
    CHECK(max_abs(p) == 0.0);
}

TEST_CASE("pinv_sym: involution on full-rank matrices") {
    Rng rng(303);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + trial % 5;
        RealMatrix m = random_symmetric(rng, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) += 4.0;  // keep away from singularity
        const RealMatrix back = pinv_sym(pinv_sym(m));
        CHECK(max_abs_diff(back, m) <= 1e-9 * std::max(max_abs(m), 1.0));
    }
}

TEST_CASE("trace_norm: zero matrix") { CHECK(trace_norm(ComplexMatrix(3, 3)) == 0.0); }

TEST_CASE("trace_norm: diag(3,-4)") {
    RealMatrix m(2, 2);
    m(0, 0) = 3.0;
    m(1, 1) = -4.0;
    CHECK(trace_norm(m) == doctest::Approx(7.0).epsilon(1e-13));
}

TEST_CASE("trace_norm: qubit sandwich matrix vs closed-form SVD") {
    // sqrt(W) J^-1 F J^-1 sqrt(W) with W = J at theta = pi/2, where J is the
    // identity, so the matrix reduces to F itself.
    const RealMatrix j = oracles::qubit_qfim_ref(std::numbers::pi / 2.0);
    const RealMatrix f = oracles::qubit_curvature_ref(std::numbers::pi / 2.0);
    const SymSupport w = sym_support(j);
    const RealMatrix jinv = pinv_sym(j);
    const RealMatrix m = w.sqrt * jinv * f * jinv * w.sqrt;

    const auto sv = oracles::svd2(m);
    const double expected = sv[0] + sv[1];
    CHECK(expected == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(trace_norm(m) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("trace_norm: unitary conjugation invariance") {
    Rng rng(404);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + trial % 5;
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = cdouble{rng.normal(), rng.normal()};
        const ComplexMatrix u = herm_eig(HermitianMatrix(random_hermitian(rng, n), 1e-9)).vectors;
        const ComplexMatrix conj_m = u * m * adjoint(u);
        CHECK(std::abs(trace_norm(conj_m) - trace_norm(m)) <= 1e-9 * std::max(1.0, trace_norm(m)));
    }
}

TEST_CASE("hermitian validation rejects asymmetric input") {
    ComplexMatrix m(2, 2);
    m(0, 1) = cdouble{0.5, 0.0};
    m(1, 0) = cdouble{0.5, 0.3};  // not conj-symmetric
    CHECK_THROWS_AS(HermitianMatrix{m}, NumericalInconsistency);
}

TEST_CASE("herm_exp: unitary propagator of a hermitian generator") {
    Rng rng(505);
    const ComplexMatrix h = random_hermitian(rng, 4);
    const ComplexMatrix u = herm_exp(HermitianMatrix(h, 1e-9), -I * 0.37);
    const ComplexMatrix gram = adjoint(u) * u;
    CHECK(max_abs_diff(gram, ComplexMatrix::identity(4)) <= 1e-12);
}
