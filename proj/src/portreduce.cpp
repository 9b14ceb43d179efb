#include "mpq/portreduce.hpp"

#include "mpq/error.hpp"

#include <algorithm>

namespace mpq {

PortExcitation::PortExcitation(std::initializer_list<double> real_values) : v_(real_values.size()) {
    Eigen::Index i = 0;
    for (double x : real_values) {
        v_[i++] = x;
    }
}

void PortExcitation::require_nonzero(int ports) const {
    if (size() != ports) {
        fail(ErrorCode::invalid_argument, "feeding vector has " + std::to_string(size()) + " entries, the antenna " +
                                              std::to_string(ports) + " ports");
    }
    if (!v_.allFinite() || !(v_.norm() > 0.0)) {
        fail(ErrorCode::invalid_argument, "feeding vector must be finite and non-zero");
    }
}

PortReduction::PortReduction(int basis_count, std::vector<int> port_rows, RVector diagonal)
    : n_(basis_count), rows_(std::move(port_rows)), d_(std::move(diagonal)) {
    if (n_ < 1 || d_.size() != n_) {
        fail(ErrorCode::invalid_argument, "port reduction: D must have one entry per basis function");
    }
    if (rows_.empty()) {
        fail(ErrorCode::invalid_argument, "port reduction needs at least one port");
    }
    std::vector<int> sorted = rows_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        fail(ErrorCode::invalid_argument, "port reduction: two ports share a basis function");
    }
    for (int r : rows_) {
        if (r < 0 || r >= n_) {
            fail(ErrorCode::invalid_argument, "port reduction: port row out of range");
        }
    }
    if (!(d_.minCoeff() > 0.0)) {
        fail(ErrorCode::invalid_argument, "port reduction: D entries must be positive");
    }
}

PortReduction PortReduction::of(const MoMSystem& system) {
    return PortReduction::of(system.geometry);
}

PortReduction PortReduction::of(const WireArrayGeometry& geometry) {
    const BasisLayout lay = BasisLayout::of(geometry);
    RVector d = RVector::Ones(lay.size());
    for (int r : lay.port_rows) {
        d[r] = lay.segment_length[static_cast<std::size_t>(r)];
    }
    return PortReduction(lay.size(), lay.port_rows, std::move(d));
}

RMatrix PortReduction::P() const {
    RMatrix p = RMatrix::Zero(n_, port_count());
    for (int c = 0; c < port_count(); ++c) {
        p(rows_[static_cast<std::size_t>(c)], c) = 1.0;
    }
    return p;
}

CMatrix PortReduction::DP() const {
    CMatrix dp = CMatrix::Zero(n_, port_count());
    for (int c = 0; c < port_count(); ++c) {
        const int r = rows_[static_cast<std::size_t>(c)];
        dp(r, c) = d_[r];
    }
    return dp;
}

CVector expand_voltage(const PortReduction& red, const PortExcitation& v) {
    if (v.size() != red.port_count()) {
        fail(ErrorCode::invalid_argument, "excitation size disagrees with the port count");
    }
    return red.DP() * v.vector();
}

namespace {

void check_sizes(const MoMSystem& system, const PortReduction& red) {
    if (system.size() != red.basis_count()) {
        fail(ErrorCode::invalid_argument, "port reduction and system sizes disagree");
    }
}

// Y D P, N x Pn.
CMatrix port_currents(const MoMSystem& system, const LossModel& loss, const PortReduction& red) {
    check_sizes(system, red);
    auto lu = checked_lu(loaded_impedance(system, loss), "port reduction");
    return lu.solve(red.DP());
}

CMatrix symmetrised(const CMatrix& m) {
    return 0.5 * (m + m.transpose());
}

CMatrix hermitised(const CMatrix& m) {
    return 0.5 * (m + m.adjoint());
}

} // namespace

CMatrix port_admittance(const MoMSystem& system, const LossModel& loss, const PortReduction& red) {
    const CMatrix ydp = port_currents(system, loss, red);
    return symmetrised(red.DP().transpose() * ydp);
}

CMatrix port_admittance_derivative(const MoMSystem& system, const CMatrix& dZ, const LossModel& loss,
                                   const PortReduction& red) {
    if (dZ.rows() != system.size() || dZ.cols() != system.size()) {
        fail(ErrorCode::invalid_argument, "dZ dimensions disagree with the system");
    }
    const CMatrix ydp = port_currents(system, loss, red);
    // P^T D^T Y = (Y D P)^T since Y is complex symmetric: transpose, not adjoint.
    return symmetrised(-(ydp.transpose() * dZ * ydp));
}

cplx reduce_bilinear(const CMatrix& M, const MoMSystem& system, const LossModel& loss, const PortReduction& red,
                     const PortExcitation& v) {
    check_sizes(system, red);
    if (M.rows() != system.size() || M.cols() != system.size()) {
        fail(ErrorCode::invalid_argument, "bilinear form dimensions disagree with the system");
    }
    const CVector I = solve_current(system, loss, expand_voltage(red, v));
    return I.dot(M * I);
}

CMatrix reduce_matrix(const CMatrix& M, const MoMSystem& system, const LossModel& loss, const PortReduction& red) {
    const CMatrix ydp = port_currents(system, loss, red);
    return ydp.adjoint() * M * ydp;
}

PortResponse port_response(const MoMSystem& system, const CMatrix& dZ, const LossModel& loss,
                           const PortReduction& red) {
    const CMatrix ydp = port_currents(system, loss, red);
    const CMatrix dpt = red.DP().transpose();
    PortResponse r;
    r.omega = system.omega;
    r.y0 = symmetrised(dpt * ydp);
    if (dZ.size() > 0) {
        r.dy0 = symmetrised(-(ydp.transpose() * dZ * ydp));
        r.w = hermitised(ydp.adjoint() * dZ.imag().cast<cplx>() * ydp);
    }
    r.g_rad = hermitised(ydp.adjoint() * system.Z.real().cast<cplx>() * ydp);
    r.x = hermitised(ydp.adjoint() * system.Z.imag().cast<cplx>() * ydp);
    return r;
}

} // namespace mpq
