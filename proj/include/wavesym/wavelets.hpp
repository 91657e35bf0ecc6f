#pragma once

#include "wavesym/types.hpp"

namespace wavesym {

// zero-mean, unit-energy complex Morlet patch; `angle` is the wave-vector
// direction, i.e. the carrier oscillates along (cos angle, sin angle)
template <class T>
struct MorletKernelT {
  T angle{};
  int support{};
  ComplexMapT<T> values;
};
using MorletKernel = MorletKernelT<double>;

struct HaarKernel {
  int size{};
  Eigen::ArrayXd values;
};

template <class T>
MorletKernelT<T> make_morlet(T angle, T wavelength = T(8), T envelope_sigma = T(4),
                             int support = 17) {
  if (!(wavelength > T(0)) || !(envelope_sigma > T(0)))
    throw std::invalid_argument("make_morlet: wavelength and sigma must be positive");
  if (support < 3 || support % 2 == 0)
    throw std::invalid_argument("make_morlet: support must be odd and >= 3");

  const int c = support / 2;
  const T k = T(2) * T(kPi) / wavelength;
  const T cs = std::cos(angle), sn = std::sin(angle);
  ImageT<T> env(support, support);
  ComplexMapT<T> vals(support, support);
  for (int y = 0; y < support; ++y) {
    for (int x = 0; x < support; ++x) {
      const T ux = T(x - c), uy = T(y - c);
      env(y, x) = std::exp(-(ux * ux + uy * uy) / (T(2) * envelope_sigma * envelope_sigma));
      const T ph = k * (ux * cs + uy * sn);
      vals(y, x) = env(y, x) * std::complex<T>(std::cos(ph), std::sin(ph));
    }
  }
  // subtract the envelope-weighted DC component, then normalize energy
  const std::complex<T> kappa = vals.sum() / env.sum();
  vals -= kappa * env.template cast<std::complex<T>>();
  vals /= std::sqrt(vals.abs2().sum());

  T a = std::fmod(angle, T(2) * T(kPi));
  if (a < 0) a += T(2) * T(kPi);
  return {a, support, std::move(vals)};
}

inline HaarKernel make_haar(int size) {
  if (size < 2 || size % 2 != 0)
    throw std::invalid_argument("make_haar: size must be even and >= 2");
  Eigen::ArrayXd v(size);
  v.head(size / 2).setConstant(1.0 / size);
  v.tail(size / 2).setConstant(-1.0 / size);
  return {size, std::move(v)};
}

}  // namespace wavesym
