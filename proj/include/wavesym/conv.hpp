#pragma once

#include "wavesym/wavelets.hpp"

namespace wavesym {

// out(p) = sum_u image(p + u) * kernel(c + u), zero padded: the kernel is
// "placed at p", so a unit impulse reproduces the flipped kernel array
template <class T>
ComplexMapT<T> convolve(const ImageT<T>& image, const MorletKernelT<T>& kernel) {
  const int H = int(image.rows()), W = int(image.cols());
  const int S = kernel.support, c = S / 2;
  if (S > std::min(W, H))
    throw std::invalid_argument("convolve: kernel larger than image");

  ImageT<T> re = ImageT<T>::Zero(H, W), im = ImageT<T>::Zero(H, W);
  for (int ky = 0; ky < S; ++ky) {
    const int dy = ky - c;
    const int y0 = std::max(0, -dy), y1 = std::min(H, H - dy);
    if (y1 <= y0) continue;
    for (int kx = 0; kx < S; ++kx) {
      const int dx = kx - c;
      const int x0 = std::max(0, -dx), x1 = std::min(W, W - dx);
      if (x1 <= x0) continue;
      const std::complex<T> kv = kernel.values(ky, kx);
      auto blk = image.block(y0 + dy, x0 + dx, y1 - y0, x1 - x0);
      re.block(y0, x0, y1 - y0, x1 - x0) += blk * kv.real();
      im.block(y0, x0, y1 - y0, x1 - x0) += blk * kv.imag();
    }
  }
  ComplexMapT<T> out(H, W);
  out.real() = re;
  out.imag() = im;
  return out;
}

// out(p) += A(p + off) * conj(B(p - off)) with zero contribution out of
// bounds; conj_a / conj_b mean the stored map is the conjugate of the
// response actually wanted (responses at theta + pi are conjugates)
template <class T>
void shifted_product_acc(ComplexMapT<T>& out, const ComplexMapT<T>& a, const ComplexMapT<T>& b,
                         int ox, int oy, bool conj_a = false, bool conj_b = false) {
  const int H = int(a.rows()), W = int(a.cols());
  if (b.rows() != H || b.cols() != W || out.rows() != H || out.cols() != W)
    throw std::invalid_argument("shifted_product: dimension mismatch");
  const int x0 = std::abs(ox), x1 = W - std::abs(ox);
  const int y0 = std::abs(oy), y1 = H - std::abs(oy);
  if (x1 <= x0 || y1 <= y0) return;
  const int h = y1 - y0, w = x1 - x0;
  auto A = a.block(y0 + oy, x0 + ox, h, w);
  auto B = b.block(y0 - oy, x0 - ox, h, w);
  auto O = out.block(y0, x0, h, w);
  if (!conj_a && !conj_b)
    O += A * B.conjugate();
  else if (conj_a && !conj_b)
    O += A.conjugate() * B.conjugate();
  else if (!conj_a && conj_b)
    O += A * B;
  else
    O += A.conjugate() * B;
}

template <class T>
ComplexMapT<T> shifted_product(const ComplexMapT<T>& a, const ComplexMapT<T>& b,
                               Eigen::Vector2i offset) {
  ComplexMapT<T> out = ComplexMapT<T>::Zero(a.rows(), a.cols());
  shifted_product_acc(out, a, b, offset.x(), offset.y());
  return out;
}

}  // namespace wavesym
