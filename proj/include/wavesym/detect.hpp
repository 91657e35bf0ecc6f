#pragma once

#include <optional>

#include "wavesym/symmetry.hpp"

namespace wavesym {

struct SymmetrySegment {
  SymmetryLine line;
  Eigen::Vector2d endpoint_a;
  Eigen::Vector2d endpoint_b;
  Eigen::Vector2d center;
  double length{};
};

struct CenterPoint {
  Eigen::Vector2d position;
  double score{};
};

struct PeakParams {
  int max_detections = 5;
  double nms_rho_window = 2 * kPi / 32;  // two rho bins at the default sweep resolution
  double nms_delta_window = 10.0;
  double threshold_fraction = 0.1;
};

namespace detail {

inline void validate_peaks(const PeakParams& pk) {
  if (pk.max_detections < 1) throw std::invalid_argument("peaks: max_detections must be >= 1");
  if (!(pk.nms_rho_window > 0) || !(pk.nms_delta_window > 0))
    throw std::invalid_argument("peaks: NMS windows must be positive");
  if (!(pk.threshold_fraction > 0) || pk.threshold_fraction > 1)
    throw std::invalid_argument("peaks: threshold_fraction must be in (0, 1]");
}

}  // namespace detail

template <class T>
std::vector<SymmetryLine> extract_lines(const LineAccumulatorT<T>& acc, const PeakParams& pk) {
  detail::validate_peaks(pk);
  const T gmax = acc.votes.maxCoeff();
  if (!(gmax > 0)) return {};

  struct Bin {
    T score;
    int i, j;
  };
  std::vector<Bin> cand;
  const T thr = T(pk.threshold_fraction) * gmax;
  for (int i = 0; i < acc.rho_bins; ++i)
    for (int j = 0; j < acc.delta_bins; ++j)
      if (acc.votes(i, j) >= thr) cand.push_back({acc.votes(i, j), i, j});
  std::sort(cand.begin(), cand.end(), [](const Bin& a, const Bin& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });

  const double bin_width = kPi / acc.rho_bins;
  const int wr = int(std::lround(pk.nms_rho_window / bin_width));
  const int wd = int(std::lround(pk.nms_delta_window));
  std::vector<SymmetryLine> out;
  std::vector<Bin> kept;
  for (const Bin& c : cand) {
    bool suppressed = false;
    for (const Bin& k : kept) {
      int dr = std::abs(c.i - k.i);
      dr = std::min(dr, acc.rho_bins - dr);  // rho is circular mod pi
      if (dr <= wr && std::abs(c.j - k.j) <= wd) {
        suppressed = true;
        break;
      }
    }
    if (suppressed) continue;
    kept.push_back(c);
    out.push_back({c.i * bin_width, double(c.j - acc.delta_max), double(c.score)});
    if (int(out.size()) >= pk.max_detections) break;
  }
  return out;
}

// per integer arc position along the line's intersection with the image, the
// sum of the five largest stencil coefficient magnitudes over (beta, d), the
// stencil axis lying along the line's normal
template <class T>
std::vector<T> segment_histogram(const ImageT<T>& image, const SymmetryLine& line,
                                 const SweepParams& params) {
  detail::validate_sweep(params);
  const int H = int(image.rows()), W = int(image.cols());
  Eigen::Vector2d entry, dir;
  int count = 0;
  if (!detail::clip_line_to_image<T>(line, W, H, entry, dir, count)) return {};

  WaveletResponseCacheT<T> cache(image, params.wavelet);
  const double alpha = wrap_half_turn(line.rho - kPi / 2);
  std::vector<T> hist(static_cast<size_t>(count));
  std::vector<T> mags;
  for (int t = 0; t < count; ++t) {
    const Eigen::Vector2d q = entry + double(t) * dir;
    const int px = int(std::lround(q.x())), py = int(std::lround(q.y()));
    detail::stencil_magnitudes_at(mags, cache, params, alpha, px, py, W, H);
    hist[size_t(t)] = detail::top5_sum(mags);
  }
  return hist;
}

// a = global maximum of the Haar response (rise), b = global minimum (fall),
// searched over the fully-supported region; if the minimum comes first, the
// best rise/fall pair among local extrema with a < b is taken instead
inline std::optional<std::pair<int, int>> find_endpoints(const std::vector<double>& histogram,
                                                         const HaarKernel& haar) {
  const int L = int(histogram.size()), n = haar.size, c = n / 2;
  if (L <= n) throw std::invalid_argument("find_endpoints: histogram no longer than kernel");

  std::vector<double> r(size_t(L), 0.0);
  for (int t = 0; t < L; ++t) {
    double s = 0;
    for (int k = 0; k < n; ++k) {
      const int idx = t + c - 1 - k;
      if (idx >= 0 && idx < L) s += haar.values[k] * histogram[size_t(idx)];
    }
    r[size_t(t)] = s;
  }

  const int lo = c, hi = L - c;
  double rmax = -std::numeric_limits<double>::infinity(), rmin = -rmax, rabs = 0;
  int ia = lo, ib = lo;
  for (int t = lo; t < hi; ++t) {
    if (r[size_t(t)] > rmax) rmax = r[size_t(t)], ia = t;
    if (r[size_t(t)] < rmin) rmin = r[size_t(t)], ib = t;
    rabs = std::max(rabs, std::abs(r[size_t(t)]));
  }
  if (hi <= lo || rmax - rmin < 1e-9 * std::max(1.0, rabs)) return std::nullopt;  // flat
  if (ia < ib) return std::make_pair(ia, ib);

  std::vector<int> ext;
  for (int t = lo; t < hi; ++t) {
    const bool boundary = (t == lo || t == hi - 1);
    if (boundary || (r[size_t(t)] >= r[size_t(t) - 1] && r[size_t(t)] >= r[size_t(t) + 1]) ||
        (r[size_t(t)] <= r[size_t(t) - 1] && r[size_t(t)] <= r[size_t(t) + 1]))
      ext.push_back(t);
  }
  double best = -std::numeric_limits<double>::infinity();
  std::optional<std::pair<int, int>> out;
  for (int i : ext)
    for (int j : ext)
      if (i < j && r[size_t(i)] - r[size_t(j)] > best) {
        best = r[size_t(i)] - r[size_t(j)];
        out = std::make_pair(i, j);
      }
  return out;
}

// composes segment_histogram and find_endpoints per line; lines whose
// endpoint detection fails are dropped; score ordering is preserved
template <class T>
std::vector<SymmetrySegment> extract_segments(const ImageT<T>& image,
                                              const std::vector<SymmetryLine>& lines,
                                              const SweepParams& params, const HaarKernel& haar) {
  std::vector<SymmetrySegment> out;
  const int H = int(image.rows()), W = int(image.cols());
  for (const SymmetryLine& line : lines) {
    Eigen::Vector2d entry, dir;
    int count = 0;
    if (!detail::clip_line_to_image<T>(line, W, H, entry, dir, count)) continue;
    std::vector<T> hist = segment_histogram(image, line, params);
    if (int(hist.size()) <= haar.size) continue;
    std::vector<double> histd(hist.begin(), hist.end());
    auto ends = find_endpoints(histd, haar);
    if (!ends) continue;
    SymmetrySegment seg;
    seg.line = line;
    seg.endpoint_a = entry + double(ends->first) * dir;
    seg.endpoint_b = entry + double(ends->second) * dir;
    seg.center = (seg.endpoint_a + seg.endpoint_b) / 2;
    seg.length = (seg.endpoint_b - seg.endpoint_a).norm();
    out.push_back(seg);
  }
  return out;
}

template <class T>
std::vector<CenterPoint> extract_centers(const CenterLikelihoodMapT<T>& map,
                                         const PeakParams& pk) {
  detail::validate_peaks(pk);
  const int H = int(map.rows()), W = int(map.cols());
  const T gmax = map.maxCoeff();
  if (!(gmax > 0)) return {};

  struct Pt {
    T score;
    int x, y;
  };
  std::vector<Pt> cand;
  const T thr = T(pk.threshold_fraction) * gmax;
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const T v = map(y, x);
      if (v < thr) continue;
      bool peak = true;
      for (int dy = -1; dy <= 1 && peak; ++dy)
        for (int dx = -1; dx <= 1 && peak; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const int nx = x + dx, ny = y + dy;
          if (nx < 0 || nx >= W || ny < 0 || ny >= H) continue;
          if (map(ny, nx) > v) peak = false;
        }
      if (peak) cand.push_back({v, x, y});
    }
  }
  std::sort(cand.begin(), cand.end(), [](const Pt& a, const Pt& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
  });

  std::vector<CenterPoint> out;
  std::vector<Pt> kept;
  for (const Pt& c : cand) {
    bool suppressed = false;
    for (const Pt& k : kept)
      if (std::hypot(double(c.x - k.x), double(c.y - k.y)) <= pk.nms_delta_window) {
        suppressed = true;
        break;
      }
    if (suppressed) continue;
    kept.push_back(c);
    out.push_back({{double(c.x), double(c.y)}, double(c.score)});
    if (int(out.size()) >= pk.max_detections) break;
  }
  return out;
}

}  // namespace wavesym
