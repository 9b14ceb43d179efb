#pragma once

#include "mpq/linalg.hpp"

#include <cmath>
#include <random>

namespace test {

inline double rel(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

inline mpq::CMatrix random_symmetric(int n, std::mt19937& rng, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, 1.0);
    mpq::CMatrix m(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c <= r; ++c) {
            m(r, c) = m(c, r) = scale * mpq::cplx(g(rng), g(rng));
        }
    }
    return m;
}

} // namespace test
