#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace wavesym {

// all 2D grids are (row = y, col = x)
template <class T>
using ImageT = Eigen::Array<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using ComplexMapT = Eigen::Array<std::complex<T>, Eigen::Dynamic, Eigen::Dynamic>;

using Image = ImageT<double>;
using ComplexMap = ComplexMapT<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct io_error : std::runtime_error {
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct format_error : std::runtime_error {
  explicit format_error(const std::string& msg) : std::runtime_error(msg) {}
};

// acute difference between two undirected line angles, in [0, pi/2]
template <class T>
T acute_angle_diff(T a, T b) {
  T d = std::fmod(std::abs(a - b), T(kPi));
  return std::min(d, T(kPi) - d);
}

// reduce an angle into [0, pi) treating directions as undirected
template <class T>
T wrap_half_turn(T a) {
  a = std::fmod(a, T(kPi));
  if (a < 0) a += T(kPi);
  return a;
}

}  // namespace wavesym
