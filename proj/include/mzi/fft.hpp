#pragma once

// Unitary DFT on Eigen arrays. Eigen::FFT keeps a mutable plan cache, so each
// thread gets its own engine.

#include <unsupported/Eigen/FFT>
#include <cmath>

#include "mzi/types.hpp"

namespace mzi {

namespace detail {
template <typename Scalar>
Eigen::FFT<Scalar>& fft_engine()
{
  thread_local Eigen::FFT<Scalar> engine = [] {
    Eigen::FFT<Scalar> e;
    e.SetFlag(Eigen::FFT<Scalar>::Unscaled);
    return e;
  }();
  return engine;
}
}  // namespace detail

template <typename Scalar>
CArrayX<Scalar> fft_unitary(const CArrayX<Scalar>& in)
{
  CArrayX<Scalar> out(in.size());
  detail::fft_engine<Scalar>().fwd(out.data(), in.data(), in.size());
  out *= Scalar(1) / std::sqrt(Scalar(in.size()));
  return out;
}

template <typename Scalar>
CArrayX<Scalar> ifft_unitary(const CArrayX<Scalar>& in)
{
  CArrayX<Scalar> out(in.size());
  detail::fft_engine<Scalar>().inv(out.data(), in.data(), in.size());
  out *= Scalar(1) / std::sqrt(Scalar(in.size()));
  return out;
}

}  // namespace mzi
