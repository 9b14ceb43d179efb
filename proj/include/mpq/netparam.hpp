#pragma once

#include "mpq/linalg.hpp"

#include <span>
#include <string>
#include <vector>

namespace mpq {

enum class FrequencyUnit { hz, khz, mhz, ghz };

double unit_scale(FrequencyUnit unit) noexcept;   // Hz per unit
const char* unit_name(FrequencyUnit unit) noexcept;

/// Angular frequencies in rad/s. The unit is only remembered for output.
class FrequencyGrid {
public:
    FrequencyGrid() = default;
    explicit FrequencyGrid(std::vector<double> omega, FrequencyUnit unit = FrequencyUnit::hz);

    /// `count` points evenly spaced over omega0 * [1 - span, 1 + span].
    static FrequencyGrid around(double omega0, double span, int count,
                                FrequencyUnit unit = FrequencyUnit::hz);

    const std::vector<double>& omega() const noexcept { return omega_; }
    std::size_t size() const noexcept { return omega_.size(); }
    double operator[](std::size_t i) const { return omega_[i]; }
    double front() const { return omega_.front(); }
    double back() const { return omega_.back(); }
    FrequencyUnit unit() const noexcept { return unit_; }

    /// Index of the grid point equal to omega, or -1.
    long find(double omega) const noexcept;

private:
    std::vector<double> omega_;
    FrequencyUnit unit_ = FrequencyUnit::hz;
};

enum class NetworkKind { scattering, impedance, admittance };

const char* kind_letter(NetworkKind kind) noexcept;   // "S", "Z", "Y"

class MultiportNetwork {
public:
    MultiportNetwork(FrequencyGrid grid, NetworkKind kind, std::vector<CMatrix> samples,
                     std::vector<double> reference);

    /// Convenience: same reference resistance on every port.
    MultiportNetwork(FrequencyGrid grid, NetworkKind kind, std::vector<CMatrix> samples,
                     double reference = 50.0);

    const FrequencyGrid& grid() const noexcept { return grid_; }
    NetworkKind kind() const noexcept { return kind_; }
    int ports() const noexcept { return ports_; }
    const std::vector<CMatrix>& samples() const noexcept { return samples_; }
    const CMatrix& sample(std::size_t i) const { return samples_[i]; }
    const std::vector<double>& reference() const noexcept { return reference_; }

    /// Largest relative transpose asymmetry over all samples.
    double reciprocity_defect() const;

private:
    FrequencyGrid grid_;
    NetworkKind kind_;
    int ports_ = 0;
    std::vector<CMatrix> samples_;
    std::vector<double> reference_;
};

// Conversions. The reference resistances travel with the network; converting
// to scattering re-uses them. All throw ErrorCode::singular naming the
// offending frequency when an inversion fails.
MultiportNetwork to_admittance(const MultiportNetwork& net);
MultiportNetwork to_impedance(const MultiportNetwork& net);
MultiportNetwork to_scattering(const MultiportNetwork& net);

// Single-matrix forms, reference given per port.
CMatrix s_to_y(const CMatrix& s, std::span<const double> reference);
CMatrix s_to_z(const CMatrix& s, std::span<const double> reference);
CMatrix y_to_s(const CMatrix& y, std::span<const double> reference);
CMatrix z_to_s(const CMatrix& z, std::span<const double> reference);

/// Entrywise Catmull-Rom interpolation (real and imaginary parts separately).
/// Grid points are returned bit-identical. Throws ErrorCode::range outside the grid.
CMatrix sample_at(const MultiportNetwork& net, double omega);

/// Central difference of the interpolated samples at omega with a step equal to
/// the local grid spacing. omega must lie strictly inside the grid.
CMatrix sampled_derivative(const MultiportNetwork& net, double omega);

/// Piecewise cubic Hermite interpolant with three-point (parabolic) slopes.
/// Reproduces quadratics exactly on any grid, and degenerates to linear with
/// two points.
class CubicInterpolant {
public:
    CubicInterpolant(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double xmin() const { return x_.front(); }
    double xmax() const { return x_.back(); }

private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> slope_;
};

/// Catmull-Rom weights for the four neighbours of interval `i` at `x`; the
/// shared core of CubicInterpolant and sample_at.
struct HermiteStencil {
    std::size_t index[4];
    double weight[4];
    int count;
};
HermiteStencil hermite_stencil(std::span<const double> x, double at);

} // namespace mpq
