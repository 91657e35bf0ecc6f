#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "wavesym/conv.hpp"
#include "wavesym/parallel.hpp"

namespace wavesym {

struct WaveletGeometry {
  double wavelength = 8.0;
  double sigma = 4.0;
  int support = 17;
};

// one orbiting wavelet pair: outer angle alpha of the line joining the
// wavelet centers, inner angle beta, inner distance d between the centers
struct StencilConfig {
  double alpha{};
  double beta{};
  double d{};
};

struct SweepParams {
  int n_alpha = 32;
  std::vector<double> betas{-kPi / 4, 0.0, kPi / 4};
  std::vector<double> distances;
  double exponent = 2.0;
  WaveletGeometry wavelet;
};

struct SymmetryLine {
  double rho{};    // line direction angle in [0, pi)
  double delta{};  // signed displacement: points satisfy x*sin(rho) - y*cos(rho) = delta
  double score{};
};

template <class T>
struct LineAccumulatorT {
  int rho_bins{};
  int delta_bins{};  // 2 * delta_max + 1, 1 px per bin
  int delta_max{};
  ImageT<T> votes;   // rho_bins x delta_bins
};
using LineAccumulator = LineAccumulatorT<double>;

template <class T>
using CenterLikelihoodMapT = ImageT<T>;
using CenterLikelihoodMap = CenterLikelihoodMapT<double>;

// wave-vector directions of the stencil pair; reflecting direction v about
// the candidate axis (direction alpha + pi/2) gives direction w, so the two
// kernels are mirror images of each other about that axis
inline std::pair<double, double> stencil_angles(double alpha, double beta) {
  return {alpha + beta, alpha - beta + kPi};
}

template <class T = double>
std::pair<MorletKernelT<T>, MorletKernelT<T>> stencil_kernels(const StencilConfig& cfg,
                                                              const WaveletGeometry& g) {
  auto [av, aw] = stencil_angles(cfg.alpha, cfg.beta);
  return {make_morlet<T>(T(av), T(g.wavelength), T(g.sigma), g.support),
          make_morlet<T>(T(aw), T(g.wavelength), T(g.sigma), g.support)};
}

inline Eigen::Vector2i stencil_offset(double alpha, double d) {
  return {int(std::lround(d / 2 * std::cos(alpha))), int(std::lround(d / 2 * std::sin(alpha)))};
}

// rho = alpha + pi/2 reduced into [0, pi); delta's sign flips on each half-turn
// so (rho, delta) names a unique undirected line through p perpendicular to alpha
inline std::pair<double, double> line_params(Eigen::Vector2d p, double alpha) {
  double rho = alpha + kPi / 2;
  double delta = p.x() * std::cos(alpha) + p.y() * std::sin(alpha);
  while (rho >= kPi) {
    rho -= kPi;
    delta = -delta;
  }
  while (rho < 0) {
    rho += kPi;
    delta = -delta;
  }
  return {rho, delta};
}

// caches image responses per wave-vector angle; responses at theta + pi are
// conjugates of those at theta, so only angles in [0, pi) are materialized
template <class T>
class WaveletResponseCacheT {
 public:
  WaveletResponseCacheT(const ImageT<T>& image, const WaveletGeometry& g)
      : image_(image), geom_(g) {}

  // (map, conjugate?) — the response at `theta` is conj(map) when the flag is set
  std::pair<const ComplexMapT<T>*, bool> response(double theta) const {
    auto [key, conj] = canonical(theta);
    auto it = maps_.find(key);
    if (it == maps_.end()) it = maps_.emplace(key, convolve(image_, kernel_for(key))).first;
    return {&it->second, conj};
  }

  void prefetch(const std::vector<double>& thetas) {
    std::vector<long long> missing;
    for (double t : thetas) {
      long long key = canonical(t).first;
      if (!maps_.count(key)) {
        maps_.emplace(key, ComplexMapT<T>());
        missing.push_back(key);
      }
    }
    parallel_for(int(missing.size()), [&](int i) {
      maps_[missing[i]] = convolve(image_, kernel_for(missing[i]));
    });
  }

 private:
  // picoradian angle grid: coarse enough to collapse FP twins of the same
  // sweep angle, far below any numerically visible kernel change
  static constexpr double kAngleGrid = 1e-12;

  MorletKernelT<T> kernel_for(long long key) const {
    const double angle = double(key) * kAngleGrid;
    return make_morlet<T>(T(angle), T(geom_.wavelength), T(geom_.sigma), geom_.support);
  }

  static std::pair<long long, bool> canonical(double theta) {
    theta = std::fmod(theta, 2 * kPi);
    if (theta < 0) theta += 2 * kPi;
    bool conj = theta >= kPi;
    if (conj) theta -= kPi;
    long long key = std::llround(theta / kAngleGrid);
    if (key >= std::llround(kPi / kAngleGrid)) {  // rounded up to pi itself
      key = 0;
      conj = !conj;
    }
    return {key, conj};
  }

  const ImageT<T>& image_;
  WaveletGeometry geom_;
  mutable std::map<long long, ComplexMapT<T>> maps_;
};
using WaveletResponseCache = WaveletResponseCacheT<double>;

namespace detail {

inline void validate_sweep(const SweepParams& p) {
  if (p.n_alpha < 1) throw std::invalid_argument("sweep: n_alpha must be >= 1");
  if (p.betas.empty()) throw std::invalid_argument("sweep: beta set must be nonempty");
  if (p.distances.empty()) throw std::invalid_argument("sweep: distance set must be nonempty");
  for (size_t i = 0; i < p.distances.size(); ++i) {
    if (!(p.distances[i] > 0)) throw std::invalid_argument("sweep: distances must be positive");
    if (i > 0 && p.distances[i] < p.distances[i - 1])
      throw std::invalid_argument("sweep: distances must be sorted ascending");
  }
  if (!(p.exponent > 0)) throw std::invalid_argument("sweep: exponent must be positive");
}

template <class T>
std::vector<double> sweep_angles(const SweepParams& p) {
  std::vector<double> thetas;
  thetas.reserve(2 * size_t(p.n_alpha) * p.betas.size());
  for (int k = 0; k < p.n_alpha; ++k) {
    const double alpha = k * kPi / p.n_alpha;
    for (double beta : p.betas) {
      auto [av, aw] = stencil_angles(alpha, beta);
      thetas.push_back(av);
      thetas.push_back(aw);
    }
  }
  return thetas;
}

template <class T>
T to_power(T sqnorm, double n) {
  if (n == 2.0) return sqnorm;
  if (n == 1.0) return std::sqrt(sqnorm);
  return std::pow(sqnorm, T(0.5 * n));
}

// complex sum over (beta, d) of stencil coefficients for one alpha row
template <class T>
ComplexMapT<T> row_coefficient_sum(const WaveletResponseCacheT<T>& cache, const SweepParams& p,
                                   double alpha, int H, int W) {
  ComplexMapT<T> total = ComplexMapT<T>::Zero(H, W);
  for (double beta : p.betas) {
    auto [av, aw] = stencil_angles(alpha, beta);
    auto [A, ca] = cache.response(av);
    auto [B, cb] = cache.response(aw);
    for (double d : p.distances) {
      Eigen::Vector2i off = stencil_offset(alpha, d);
      shifted_product_acc(total, *A, *B, off.x(), off.y(), ca, cb);
    }
  }
  return total;
}

}  // namespace detail

// map of Eq.-1 products for a single stencil config, computed along the
// block-shifted path: convolve twice, then one shifted elementwise product
template <class T>
ComplexMapT<T> stencil_coefficient_map(const ImageT<T>& image, const StencilConfig& cfg,
                                       const WaveletGeometry& g = {}) {
  if (!(cfg.d > 0)) throw std::invalid_argument("stencil: d must be positive");
  auto [v, w] = stencil_kernels<T>(cfg, g);
  ComplexMapT<T> iv = convolve(image, v), iw = convolve(image, w);
  return shifted_product(iv, iw, stencil_offset(cfg.alpha, cfg.d));
}

template <class T>
LineAccumulatorT<T> accumulate_lines(const ImageT<T>& image, const SweepParams& params) {
  detail::validate_sweep(params);
  const int H = int(image.rows()), W = int(image.cols());
  const int D = int(std::ceil(std::hypot(W - 1, H - 1)));
  LineAccumulatorT<T> acc{params.n_alpha, 2 * D + 1, D,
                          ImageT<T>::Zero(params.n_alpha, 2 * D + 1)};

  WaveletResponseCacheT<T> cache(image, params.wavelet);
  cache.prefetch(detail::sweep_angles<T>(params));

  parallel_for(params.n_alpha, [&](int k) {
    const double alpha = k * kPi / params.n_alpha;
    ComplexMapT<T> total = detail::row_coefficient_sum(cache, params, alpha, H, W);

    double rho = alpha + kPi / 2;
    bool flip = rho >= kPi;
    if (flip) rho -= kPi;
    int irho = int(std::lround(rho / (kPi / params.n_alpha)));
    if (irho >= params.n_alpha) {  // nearest row is rho = pi, i.e. row 0 mirrored
      irho = 0;
      flip = !flip;
    }
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        double delta = x * ca + y * sa;
        if (flip) delta = -delta;
        const int bin = int(std::lround(delta)) + D;
        acc.votes(irho, bin) += detail::to_power(std::norm(total(y, x)), params.exponent);
      }
    }
  });
  return acc;
}

// image-space accumulator for ellipse/circle centers: beta is pinned to 0 and
// the coefficient sum stays coherent across every (alpha, d) pair
template <class T>
CenterLikelihoodMapT<T> accumulate_centers(const ImageT<T>& image, const SweepParams& params) {
  detail::validate_sweep(params);
  if (params.betas.size() != 1 || params.betas[0] != 0.0)
    throw std::invalid_argument("accumulate_centers: beta set must be exactly {0}");
  const int H = int(image.rows()), W = int(image.cols());

  WaveletResponseCacheT<T> cache(image, params.wavelet);
  cache.prefetch(detail::sweep_angles<T>(params));

  std::vector<ComplexMapT<T>> partials(size_t(params.n_alpha));
  parallel_for(params.n_alpha, [&](int k) {
    const double alpha = k * kPi / params.n_alpha;
    partials[size_t(k)] = detail::row_coefficient_sum(cache, params, alpha, H, W);
  });

  ComplexMapT<T> total = ComplexMapT<T>::Zero(H, W);
  for (const auto& p : partials) total += p;  // fixed order, deterministic

  CenterLikelihoodMapT<T> out(H, W);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x)
      out(y, x) = detail::to_power(std::norm(total(y, x)), params.exponent);
  return out;
}

namespace detail {

// magnitudes of the per-(beta, d) stencil coefficients at integer pixel p,
// stencil axis along `alpha`; out-of-bounds samples contribute 0
template <class T>
void stencil_magnitudes_at(std::vector<T>& out, const WaveletResponseCacheT<T>& cache,
                           const SweepParams& p, double alpha, int px, int py, int W, int H) {
  out.clear();
  for (double beta : p.betas) {
    auto [av, aw] = stencil_angles(alpha, beta);
    auto [A, ca] = cache.response(av);
    auto [B, cb] = cache.response(aw);
    (void)ca;
    (void)cb;  // conjugation does not change magnitudes
    for (double d : p.distances) {
      Eigen::Vector2i off = stencil_offset(alpha, d);
      const int vx = px + off.x(), vy = py + off.y();
      const int wx = px - off.x(), wy = py - off.y();
      if (vx < 0 || vx >= W || vy < 0 || vy >= H || wx < 0 || wx >= W || wy < 0 || wy >= H) {
        out.push_back(T(0));
        continue;
      }
      out.push_back(std::abs((*A)(vy, vx)) * std::abs((*B)(wy, wx)));
    }
  }
}

// sum of the largest min(5, K) values; `vals` is clobbered
template <class T>
T top5_sum(std::vector<T>& vals) {
  const size_t k = std::min<size_t>(5, vals.size());
  std::partial_sort(vals.begin(), vals.begin() + k, vals.end(), std::greater<T>());
  T s = 0;
  for (size_t i = 0; i < k; ++i) s += vals[i];
  return s;
}

// clip the line q(t) = delta * n(rho) + t * (cos rho, sin rho) to the image
// rectangle [0, W-1] x [0, H-1]; reports the first integer t inside and the
// count of integer arc positions
template <class T>
bool clip_line_to_image(const SymmetryLine& line, int W, int H, Eigen::Vector2d& entry,
                        Eigen::Vector2d& dir, int& count) {
  dir = {std::cos(line.rho), std::sin(line.rho)};
  const Eigen::Vector2d n{std::sin(line.rho), -std::cos(line.rho)};
  const Eigen::Vector2d q0 = line.delta * n;
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  const double lo[2] = {0.0, 0.0}, hi[2] = {double(W - 1), double(H - 1)};
  for (int axis = 0; axis < 2; ++axis) {
    const double o = q0[axis], u = dir[axis];
    if (std::abs(u) < 1e-12) {
      if (o < lo[axis] - 1e-9 || o > hi[axis] + 1e-9) return false;
    } else {
      double ta = (lo[axis] - o) / u, tb = (hi[axis] - o) / u;
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
    }
  }
  if (t1 < t0) return false;
  const double tb0 = std::ceil(t0 - 1e-9), tb1 = std::floor(t1 + 1e-9);
  count = int(tb1 - tb0) + 1;
  entry = q0 + tb0 * dir;
  return count > 0;
}

}  // namespace detail

// rescores candidate lines with the robust statistic: at each integer arc
// position along the line, the mean of the five largest per-(beta, d)
// coefficient magnitudes, summed over positions; sorted by new score
template <class T>
std::vector<SymmetryLine> refine_line_scores(const ImageT<T>& image,
                                             std::vector<SymmetryLine> candidates,
                                             const SweepParams& params) {
  if (candidates.empty()) return candidates;
  detail::validate_sweep(params);
  const int H = int(image.rows()), W = int(image.cols());
  WaveletResponseCacheT<T> cache(image, params.wavelet);

  const size_t k = std::min<size_t>(5, params.betas.size() * params.distances.size());
  std::vector<T> mags;
  for (auto& line : candidates) {
    Eigen::Vector2d entry, dir;
    int count = 0;
    double score = 0;
    if (detail::clip_line_to_image<T>(line, W, H, entry, dir, count)) {
      const double alpha = wrap_half_turn(line.rho - kPi / 2);
      for (int t = 0; t < count; ++t) {
        const Eigen::Vector2d q = entry + double(t) * dir;
        const int px = int(std::lround(q.x())), py = int(std::lround(q.y()));
        detail::stencil_magnitudes_at(mags, cache, params, alpha, px, py, W, H);
        score += detail::top5_sum(mags) / double(k);
      }
    }
    line.score = score;
  }
  std::sort(candidates.begin(), candidates.end(), [](const SymmetryLine& a, const SymmetryLine& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.rho != b.rho) return a.rho < b.rho;
    return a.delta < b.delta;
  });
  return candidates;
}

}  // namespace wavesym
