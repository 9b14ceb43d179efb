#include "mpq/linalg.hpp"

#include "mpq/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>

namespace mpq {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::parse: return "parse error";
    case ErrorCode::range: return "range error";
    case ErrorCode::singular: return "singular system";
    case ErrorCode::geometry: return "geometry error";
    case ErrorCode::synthesis: return "match synthesis error";
    case ErrorCode::unbounded_bandwidth: return "unbounded bandwidth";
    case ErrorCode::empty_band: return "empty band";
    case ErrorCode::io: return "i/o error";
    }
    return "unknown error";
}

double symmetry_defect(const CMatrix& a) {
    if (a.size() == 0) {
        return 0.0;
    }
    const double scale = a.cwiseAbs().maxCoeff();
    if (scale == 0.0) {
        return 0.0;
    }
    return (a - a.transpose()).cwiseAbs().maxCoeff() / scale;
}

double relative_difference(const CMatrix& a, const CMatrix& b) {
    const double denom = std::max(b.norm(), std::numeric_limits<double>::min());
    return (a - b).norm() / denom;
}

double relative_difference(cplx a, cplx b) {
    return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min());
}

double relative_difference(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min());
}

Eigen::PartialPivLU<CMatrix> checked_lu(const CMatrix& a, const std::string& context,
                                        double rcond_floor) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        fail(ErrorCode::invalid_argument, context + ": matrix must be square and non-empty");
    }
    if (!a.allFinite()) {
        fail(ErrorCode::singular, context + ": matrix has non-finite entries");
    }
    Eigen::PartialPivLU<CMatrix> lu(a);
    const double rcond = lu.rcond();
    if (!(rcond > rcond_floor)) {
        fail(ErrorCode::singular,
             context + ": matrix is singular to working precision (rcond estimate " +
                 std::to_string(rcond) + ")");
    }
    return lu;
}

double min_eigenvalue(const RMatrix& a) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

} // namespace mpq
