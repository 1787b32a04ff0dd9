#pragma once

#include <Eigen/Core>
#include <complex>
#include <numbers>

namespace mzi {

template <typename Scalar>
using ArrayX = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using CArrayX = Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, 1>;

using ArrayXd = ArrayX<double>;
using CArrayXd = CArrayX<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace mzi
