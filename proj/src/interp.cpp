#include "mpq/error.hpp"
#include "mpq/netparam.hpp"

#include <algorithm>

namespace mpq {

namespace {

// Slope weights at node i as (node, weight) triples from the three-point
// parabola through its neighbours; one-sided at the ends.
int slope_weights(std::span<const double> x, std::size_t i, std::size_t idx[3], double w[3]) {
    const std::size_t n = x.size();
    if (n == 1) {
        return 0;
    }
    if (n == 2) {
        const double h = x[1] - x[0];
        idx[0] = 0;
        idx[1] = 1;
        w[0] = -1.0 / h;
        w[1] = 1.0 / h;
        return 2;
    }
    if (i == 0) {
        const double h0 = x[1] - x[0];
        const double h1 = x[2] - x[1];
        idx[0] = 0;
        idx[1] = 1;
        idx[2] = 2;
        w[0] = -(2.0 * h0 + h1) / (h0 * (h0 + h1));
        w[1] = (h0 + h1) / (h0 * h1);
        w[2] = -h0 / (h1 * (h0 + h1));
        return 3;
    }
    if (i == n - 1) {
        const double h0 = x[n - 2] - x[n - 3];
        const double h1 = x[n - 1] - x[n - 2];
        idx[0] = n - 3;
        idx[1] = n - 2;
        idx[2] = n - 1;
        w[0] = h1 / (h0 * (h0 + h1));
        w[1] = -(h0 + h1) / (h0 * h1);
        w[2] = (2.0 * h1 + h0) / (h1 * (h0 + h1));
        return 3;
    }
    const double hm = x[i] - x[i - 1];
    const double hp = x[i + 1] - x[i];
    idx[0] = i - 1;
    idx[1] = i;
    idx[2] = i + 1;
    w[0] = -hp / (hm * (hm + hp));
    w[1] = (hp - hm) / (hm * hp);
    w[2] = hm / (hp * (hm + hp));
    return 3;
}

} // namespace

HermiteStencil hermite_stencil(std::span<const double> x, double at) {
    HermiteStencil st{};
    const std::size_t n = x.size();
    if (n == 0 || at < x.front() || at > x.back()) {
        fail(ErrorCode::range, "interpolation point outside the sampled range");
    }
    const auto hit = std::lower_bound(x.begin(), x.end(), at);
    if (hit != x.end() && *hit == at) {
        st.count = 1;
        st.index[0] = static_cast<std::size_t>(hit - x.begin());
        st.weight[0] = 1.0;
        return st;
    }
    const std::size_t i = static_cast<std::size_t>(hit - x.begin()) - 1;
    const double h = x[i + 1] - x[i];
    const double t = (at - x[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;

    // Stencil spans at most nodes i-1 .. i+2.
    const std::size_t lo = (i == 0) ? 0 : std::min(i - 1, n >= 4 ? n - 4 : 0);
    const int width = static_cast<int>(std::min<std::size_t>(4, n));
    st.count = width;
    for (int k = 0; k < width; ++k) {
        st.index[k] = lo + static_cast<std::size_t>(k);
        st.weight[k] = 0.0;
    }
    auto add = [&](std::size_t node, double w) { st.weight[node - lo] += w; };
    add(i, h00);
    add(i + 1, h01);
    std::size_t idx[3];
    double w[3];
    int m = slope_weights(x, i, idx, w);
    for (int k = 0; k < m; ++k) {
        add(idx[k], h10 * h * w[k]);
    }
    m = slope_weights(x, i + 1, idx, w);
    for (int k = 0; k < m; ++k) {
        add(idx[k], h11 * h * w[k]);
    }
    return st;
}

CubicInterpolant::CubicInterpolant(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    if (x_.empty() || x_.size() != y_.size()) {
        fail(ErrorCode::invalid_argument, "interpolant needs matching, non-empty abscissae and values");
    }
    for (std::size_t i = 1; i < x_.size(); ++i) {
        if (!(x_[i] > x_[i - 1])) {
            fail(ErrorCode::invalid_argument, "interpolant abscissae must be strictly increasing");
        }
    }
}

double CubicInterpolant::operator()(double at) const {
    const HermiteStencil st = hermite_stencil(x_, at);
    double v = 0.0;
    for (int k = 0; k < st.count; ++k) {
        v += st.weight[k] * y_[st.index[k]];
    }
    return v;
}

} // namespace mpq
