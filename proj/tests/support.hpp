#pragma once

#include <cmath>
#include <random>

#include "nhdqpt/linalg.hpp"

namespace testing {

using nhdqpt::CMatrix;
using nhdqpt::CScalar;

inline double dist(CScalar a, CScalar b) { return std::abs(a - b); }

inline double dist(const CMatrix& a, const CMatrix& b) { return (a - b).max_abs(); }

template <typename V>
double dist_vec(const V& a, const V& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Entries uniform in the unit box [-1, 1] x [-1, 1].
inline CMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = {u(rng), u(rng)};
    return m;
}

inline CMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
    const CMatrix a = random_matrix(rng, n);
    return 0.5 * (a + a.adjoint());
}

template <typename V>
V random_vector(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    V v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = {u(rng), u(rng)};
    return v;
}

}  // namespace testing
