#pragma once

#include <random>

#include "wavesym/types.hpp"

namespace fixtures {

using wavesym::Image;
using wavesym::kPi;

inline Image randn_image(int H, int W, unsigned seed, double lo = 0.0, double scale = 1.0) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Image img(H, W);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) img(y, x) = lo + scale * dist(rng);
  return img;
}

inline Image uniform_image(int H, int W, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  Image img(H, W);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) img(y, x) = dist(rng);
  return img;
}

inline Image separable_blur(const Image& a, double sigma = 1.0, int radius = 4) {
  const int H = int(a.rows()), W = int(a.cols());
  Eigen::ArrayXd k(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i) k(i + radius) = std::exp(-i * i / (2 * sigma * sigma));
  k /= k.sum();

  Image tmp = Image::Zero(H, W), out = Image::Zero(H, W);
  for (int i = 0; i < 2 * radius + 1; ++i) {
    const int s = i - radius;
    const int lo = std::max(0, -s), hi = std::min(W, W - s);
    if (hi > lo) tmp.block(0, lo, H, hi - lo) += k(i) * a.block(0, lo + s, H, hi - lo);
  }
  for (int i = 0; i < 2 * radius + 1; ++i) {
    const int s = i - radius;
    const int lo = std::max(0, -s), hi = std::min(H, H - s);
    if (hi > lo) out.block(lo, 0, hi - lo, W) += k(i) * tmp.block(lo + s, 0, hi - lo, W);
  }
  return out;
}

inline double bilinear_at(const Image& a, double ys, double xs) {
  const int H = int(a.rows()), W = int(a.cols());
  int x0 = std::min(std::max(int(std::floor(xs)), 0), W - 2);
  int y0 = std::min(std::max(int(std::floor(ys)), 0), H - 2);
  const double fx = std::min(std::max(xs - x0, 0.0), 1.0);
  const double fy = std::min(std::max(ys - y0, 0.0), 1.0);
  return a(y0, x0) * (1 - fx) * (1 - fy) + a(y0, x0 + 1) * fx * (1 - fy) +
         a(y0 + 1, x0) * (1 - fx) * fy + a(y0 + 1, x0 + 1) * fx * fy;
}

// blurred white noise mirrored about an axis through the image center at
// angle omega, contrast-normalized, under a radial raised-cosine taper
inline Image mirrored_blur_noise(int H, int W, double omega, unsigned seed, double blur = 1.0,
                                 double r0frac = 0.20, double r1frac = 0.48) {
  const int pad = 16;
  Image g = separable_blur(randn_image(H + 2 * pad, W + 2 * pad, seed), blur);
  const double cx = (W - 1) / 2.0, cy = (H - 1) / 2.0;
  const double c2 = std::cos(2 * omega), s2 = std::sin(2 * omega);

  Image tex(H, W);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) {
      const double xr = cx + c2 * (x - cx) + s2 * (y - cy);
      const double yr = cy + s2 * (x - cx) - c2 * (y - cy);
      tex(y, x) = g(y + pad, x + pad) + bilinear_at(g, yr + pad, xr + pad);
    }
  const double mean = tex.mean();
  const double sd = std::sqrt((tex - mean).square().mean());
  tex = (tex / (3.0 * sd)).cwiseMax(-1.0).cwiseMin(1.0);

  const double m = std::min(H, W);
  Image img(H, W);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) {
      const double r = std::hypot(x - cx, y - cy);
      const double t = std::min(std::max((r1frac * m - r) / ((r1frac - r0frac) * m), 0.0), 1.0);
      img(y, x) = (0.5 + 0.5 * tex(y, x)) * (0.5 - 0.5 * std::cos(kPi * t));
    }
  return img;
}

// noise on the left half mirrored exactly onto the right; odd width puts the
// axis on the integer column (W-1)/2
inline Image vertical_mirrored_noise(int H, int W, unsigned seed) {
  Image img = separable_blur(randn_image(H, W, seed));
  img = 0.5 + 0.5 * (img / std::sqrt(img.square().mean())).cwiseMax(-1.0).cwiseMin(1.0) * 0.9;
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W / 2; ++x) img(y, W - 1 - x) = img(y, x);
  return img;
}

// mirrored noise confined to rows [row0, row1], zero elsewhere; vertical axis
inline Image mirrored_strip(int H, int W, int row0, int row1, unsigned seed) {
  Image noise = vertical_mirrored_noise(H, W, seed);
  Image img = Image::Zero(H, W);
  for (int y = row0; y <= row1 && y < H; ++y)
    for (int x = 0; x < W; ++x) img(y, x) = noise(y, x);
  return img;
}

inline Image filled_square(int H, int W, int lo, int hi) {
  Image img = Image::Zero(H, W);
  for (int y = lo; y <= hi; ++y)
    for (int x = lo; x <= hi; ++x) img(y, x) = 1.0;
  return img;
}

inline Image disk(int H, int W, double cx, double cy, double r, Image base = {}) {
  Image img = base.size() ? std::move(base) : Image::Zero(H, W);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) {
      const double cover = r + 0.5 - std::hypot(x - cx, y - cy);
      img(y, x) = std::max(img(y, x), std::min(1.0, std::max(0.0, cover)));
    }
  return img;
}

inline std::vector<double> boxcar(int length, int lo, int hi, double value = 1.0) {
  std::vector<double> x(size_t(length), 0.0);
  for (int i = lo; i < hi && i < length; ++i) x[size_t(i)] = value;
  return x;
}

}  // namespace fixtures
