#pragma once

// Seeded random unitary-family models for the audit machinery and the
// property suites.

#include <cstdint>
#include <vector>

#include "qgeo/matrix.hpp"
#include "qgeo/model.hpp"
#include "qgeo/rng.hpp"

namespace qgeo {

inline ComplexMatrix random_hermitian(Rng& rng, std::size_t n) {
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

inline ComplexVector random_state(Rng& rng, std::size_t n) {
    ComplexVector v(n);
    for (auto& x : v) x = cdouble{rng.normal(), rng.normal()};
    const double nv = norm(v);
    for (auto& x : v) x /= nv;
    return v;
}

struct RandomModelSample {
    StateModel model;
    RealVector theta;
};

// Unitary family with GUE-like generators and a random initial state,
// evaluated at a random parameter point.
inline RandomModelSample random_unitary_model(Rng& rng, std::size_t hilbert_dim,
                                              std::size_t param_dim) {
    std::vector<ComplexMatrix> gens;
    gens.reserve(param_dim);
    for (std::size_t a = 0; a < param_dim; ++a) gens.push_back(random_hermitian(rng, hilbert_dim));
    RandomModelSample s{unitary_family(gens, random_state(rng, hilbert_dim)), {}};
    s.theta.resize(param_dim);
    for (auto& x : s.theta) x = rng.uniform(0.0, 2.0);
    return s;
}

}  // namespace qgeo
