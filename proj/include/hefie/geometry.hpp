#pragma once

#include <Eigen/Dense>
#include <complex>

namespace hefie {

using Vec3 = Eigen::Vector3d;
using Complex = std::complex<double>;
using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;

namespace constants {
inline constexpr double c0 = 299792458.0;            // m/s
inline constexpr double mu0 = 1.25663706212e-6;      // H/m
inline constexpr double eps0 = 8.8541878128e-12;     // F/m
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

}  // namespace hefie
