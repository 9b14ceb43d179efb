#include "kernel.hpp"

#include <algorithm>
#include <cmath>

namespace mpq::detail {

namespace {

constexpr double gauss4_x[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                0.8611363115940526};
constexpr double gauss4_w[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                0.3478548451374538};
constexpr double gauss8_x[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                0.7966664774136267,  0.9602898564975363};
constexpr double gauss8_w[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                0.2223810344533745, 0.1012285362903763};

// Successive antiderivatives of 1/sqrt(u^2 + rho^2) in u.
struct Antiderivatives {
    double rho;

    double k(int order, double u) const {
        const double r2 = rho * rho;
        const double s = std::sqrt(u * u + r2);
        const double a = std::asinh(u / rho);
        switch (order) {
        case 1: return a;
        case 2: return u * a - s;
        case 3: return (0.5 * u * u - 0.25 * r2) * a - 0.75 * u * s;
        case 4: return (u * u * u / 6.0 - 0.25 * r2 * u) * a - (11.0 / 36.0) * s * s * s + (5.0 / 12.0) * r2 * s;
        default: return 0.0;
        }
    }
};

// (exp(-jx) - 1) / R without cancellation for small x = kR.
cplx smooth_kernel(double k, double r) {
    const double x = k * r;
    if (x < 1e-4) {
        return cplx(-0.5 * k * x, -k * (1.0 - x * x / 6.0));
    }
    const double half = std::sin(0.5 * x);
    return cplx(-2.0 * half * half, -std::sin(x)) / r;
}

cplx full_kernel(double k, double r) {
    return std::exp(cplx(0.0, -k * r)) / r;
}

} // namespace

double static_double_integral(double a1, double a2, double p_a1, double p_a2,
                              double b1, double b2, double q_b1, double q_b2, double rho) {
    const Antiderivatives kk{rho};
    const double p1 = (p_a2 - p_a1) / (a2 - a1);
    const double q1 = (q_b2 - q_b1) / (b2 - b1);
    // Outer integral of p(z) K_n(z - c) over [a1, a2], by parts.
    auto outer = [&](int n, double c) {
        return p_a2 * kk.k(n + 1, a2 - c) - p_a1 * kk.k(n + 1, a1 - c) -
               p1 * (kk.k(n + 2, a2 - c) - kk.k(n + 2, a1 - c));
    };
    return q_b1 * outer(1, b1) - q_b2 * outer(1, b2) + q1 * (outer(2, b1) - outer(2, b2));
}

PairIntegrals segment_pair(double a1, double la, double b1, double lb, double rho, double k) {
    PairIntegrals out{};
    const double a2 = a1 + la;
    const double b2 = b1 + lb;
    const double h = std::max(la, lb);
    const double zgap = std::max(0.0, std::max(a1, b1) - std::min(a2, b2));
    const double dist = std::hypot(zgap, rho);
    const bool near = dist < 4.0 * h;
    const bool high_order = dist < 12.0 * h;
    const int n = high_order ? 8 : 4;
    const double* gx = high_order ? gauss8_x : gauss4_x;
    const double* gw = high_order ? gauss8_w : gauss4_w;

    // Gauss part: full kernel for far pairs, the regular remainder for near
    // ones. The remainder still has a kink along z = z' when rho << h, so
    // touching pairs get composite panels.
    const int panels = dist < 0.5 * h ? 4 : 1;
    const double pa = la / panels;
    const double pb = lb / panels;
    for (int ia = 0; ia < panels; ++ia) {
        for (int ib = 0; ib < panels; ++ib) {
            for (int i = 0; i < n; ++i) {
                const double z = a1 + pa * (ia + 0.5 * (1.0 + gx[i]));
                const double wz = 0.5 * pa * gw[i];
                const double obs[2] = {z - a1, a2 - z};
                for (int j = 0; j < n; ++j) {
                    const double zp = b1 + pb * (ib + 0.5 * (1.0 + gx[j]));
                    const double w = wz * 0.5 * pb * gw[j];
                    const double src[2] = {zp - b1, b2 - zp};
                    const double r = std::hypot(z - zp, rho);
                    const cplx g = w * (near ? smooth_kernel(k, r) : full_kernel(k, r));
                    out.plain += g;
                    for (int p = 0; p < 2; ++p) {
                        for (int q = 0; q < 2; ++q) {
                            out.ramp[p][q] += obs[p] * src[q] * g;
                        }
                    }
                }
            }
        }
    }
    if (near) {
        // Closed-form 1/R part in coordinates scaled by h, origin at a1.
        const double A2 = la / h;
        const double B1 = (b1 - a1) / h;
        const double B2 = B1 + lb / h;
        const double r = rho / h;
        const double ends_obs[2][2] = {{0.0, A2}, {A2, 0.0}};   // rise, fall at (a1, a2)
        const double ends_src[2][2] = {{0.0, lb / h}, {lb / h, 0.0}};
        out.plain += h * static_double_integral(0.0, A2, 1.0, 1.0, B1, B2, 1.0, 1.0, r);
        const double h3 = h * h * h;
        for (int p = 0; p < 2; ++p) {
            for (int q = 0; q < 2; ++q) {
                out.ramp[p][q] += h3 * static_double_integral(0.0, A2, ends_obs[p][0], ends_obs[p][1], B1, B2,
                                                              ends_src[q][0], ends_src[q][1], r);
            }
        }
    }
    return out;
}

} // namespace mpq::detail
