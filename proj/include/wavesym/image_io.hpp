#pragma once

#include <string>

#include "wavesym/types.hpp"

namespace wavesym {

struct LoadedImage {
  Image image;
  double scale = 1.0;  // factor applied to the source; 1 when not resized
};

// decode PNG or PGM (P2/P5) to grayscale in [0, 1]; no resizing
Image load_image_raw(const std::string& path);

// area-average downscale by `scale` in (0, 1]; output dims are the rounded
// scaled source dims
Image box_downscale(const Image& img, double scale);

// decode + grayscale + normalize, then downscale so max(W, H) = resize_max
// when the source is larger; never upscales
LoadedImage load_image(const std::string& path, int resize_max);

// binary 16-bit PGM, values linearly rescaled so the max maps to 65535
void save_pgm16(const std::string& path, const Image& img);

// 8-bit grayscale PNG of values clamped to [0, 1]
void save_png8(const std::string& path, const Image& img);

}  // namespace wavesym
