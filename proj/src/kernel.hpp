#pragma once

#include "mpq/linalg.hpp"

namespace mpq::detail {

// Integrals of exp(-jkR)/R over a pair of collinear-direction segments,
// R = sqrt((z - z')^2 + rho^2). The observation segment is [a1, a1 + la], the
// source segment [b1, b1 + lb]. Ramps are rise(z) = z - start and
// fall(z) = end - z, indexed 0 and 1.
struct PairIntegrals {
    cplx ramp[2][2];   // int int ramp_obs(z) ramp_src(z') G
    cplx plain;        // int int G
};

PairIntegrals segment_pair(double a1, double la, double b1, double lb, double rho, double k);

// Closed-form static parts: int int p(z) q(z') / R with linear p on
// [a1, a2] and linear q on [b1, b2]; p and q given by their end values.
double static_double_integral(double a1, double a2, double p_a1, double p_a2,
                              double b1, double b2, double q_b1, double q_b2, double rho);

} // namespace mpq::detail
