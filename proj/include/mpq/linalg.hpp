#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>

namespace mpq {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double c0 = 299792458.0;          // m/s
inline constexpr double mu0 = 1.25663706212e-6;    // H/m
inline constexpr double eps0 = 1.0 / (mu0 * c0 * c0);
inline constexpr cplx j1{0.0, 1.0};

/// max |A - A^T| / max |A|; zero for an empty matrix.
double symmetry_defect(const CMatrix& a);

/// ||a - b||_F / max(||b||_F, tiny).
double relative_difference(const CMatrix& a, const CMatrix& b);
double relative_difference(cplx a, cplx b);
double relative_difference(double a, double b);

/// Throws ErrorCode::singular when the LU reciprocal condition estimate of
/// `a` is below `rcond_floor`. `context` is prepended to the message.
Eigen::PartialPivLU<CMatrix> checked_lu(const CMatrix& a, const std::string& context,
                                        double rcond_floor = 1e-14);

/// Smallest eigenvalue of the real symmetric matrix `a`.
double min_eigenvalue(const RMatrix& a);

} // namespace mpq
