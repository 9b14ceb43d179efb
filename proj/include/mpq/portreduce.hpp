#pragma once

#include "mpq/momwire.hpp"

#include <initializer_list>
#include <vector>

namespace mpq {

/// Frequency-independent complex port voltages.
class PortExcitation {
public:
    PortExcitation() = default;
    explicit PortExcitation(CVector v) : v_(std::move(v)) {}
    PortExcitation(std::initializer_list<double> real_values);

    const CVector& vector() const noexcept { return v_; }
    int size() const noexcept { return static_cast<int>(v_.size()); }

    /// Throws invalid_argument unless the size matches and the norm is > 0.
    void require_nonzero(int ports) const;

private:
    CVector v_;
};

/// Maps basis space to port space: column p of P selects the basis function
/// carrying port p, D scales port rows by the port segment length.
class PortReduction {
public:
    PortReduction(int basis_count, std::vector<int> port_rows, RVector diagonal);

    static PortReduction of(const MoMSystem& system);
    static PortReduction of(const WireArrayGeometry& geometry);

    int basis_count() const noexcept { return n_; }
    int port_count() const noexcept { return static_cast<int>(rows_.size()); }
    const std::vector<int>& port_rows() const noexcept { return rows_; }
    const RVector& d() const noexcept { return d_; }

    RMatrix P() const;
    RMatrix D() const { return d_.asDiagonal(); }

    /// D P as a dense N x Pn matrix.
    CMatrix DP() const;

private:
    int n_;
    std::vector<int> rows_;
    RVector d_;
};

/// V = D P v.
CVector expand_voltage(const PortReduction& red, const PortExcitation& v);

/// y0 = P^H D^H (Z + R_L)^{-1} D P.
CMatrix port_admittance(const MoMSystem& system, const LossModel& loss, const PortReduction& red);

/// dy0/domega = -P^H D^H Y (dZ/domega) Y D P with plain (unconjugated) Y on the left.
CMatrix port_admittance_derivative(const MoMSystem& system, const CMatrix& dZ, const LossModel& loss,
                                   const PortReduction& red);

/// v^H P^H D^H Y^H M Y D P v through one solve for I = Y D P v.
cplx reduce_bilinear(const CMatrix& M, const MoMSystem& system, const LossModel& loss,
                     const PortReduction& red, const PortExcitation& v);

/// Full reduced matrix m = P^H D^H Y^H M Y D P.
CMatrix reduce_matrix(const CMatrix& M, const MoMSystem& system, const LossModel& loss,
                      const PortReduction& red);

/// Everything the Q formulas need at one frequency, from a single LU.
struct PortResponse {
    double omega = 0.0;
    CMatrix y0;        // port admittance (includes R_L)
    CMatrix dy0;       // analytic derivative
    CMatrix w;         // reduction of dX/domega (port stored-energy matrix)
    CMatrix g_rad;     // reduction of Re Z (radiated-power matrix)
    CMatrix x;         // reduction of Im Z
};

PortResponse port_response(const MoMSystem& system, const CMatrix& dZ, const LossModel& loss,
                           const PortReduction& red);

} // namespace mpq
