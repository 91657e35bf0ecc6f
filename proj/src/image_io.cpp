#include "wavesym/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

namespace wavesym {

namespace {

// next whitespace-delimited token, skipping '#' comments to end of line
bool next_pnm_token(std::istream& in, std::string& tok) {
  tok.clear();
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (!std::isspace(c)) break;
  }
  if (c == EOF) return false;
  do {
    tok.push_back(char(c));
  } while ((c = in.get()) != EOF && !std::isspace(c) && c != '#');
  if (c == '#') in.unget();
  return true;
}

long parse_pnm_int(std::istream& in, const std::string& path, const char* what) {
  std::string tok;
  if (!next_pnm_token(in, tok)) throw format_error(path + ": truncated PGM header (" + what + ")");
  try {
    size_t pos = 0;
    long v = std::stol(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw format_error(path + ": bad PGM " + what + " '" + tok + "'");
  }
}

Image load_pgm(std::ifstream& in, const std::string& path, bool binary) {
  const long w = parse_pnm_int(in, path, "width");
  const long h = parse_pnm_int(in, path, "height");
  const long maxval = parse_pnm_int(in, path, "maxval");
  if (w <= 0 || h <= 0) throw format_error(path + ": nonpositive PGM dimensions");
  if (maxval <= 0 || maxval > 65535) throw format_error(path + ": PGM maxval out of range");

  Image img(h, w);
  if (!binary) {
    for (long y = 0; y < h; ++y)
      for (long x = 0; x < w; ++x) {
        const long v = parse_pnm_int(in, path, "sample");
        if (v < 0 || v > maxval) throw format_error(path + ": PGM sample out of range");
        img(y, x) = double(v) / double(maxval);
      }
    return img;
  }

  const int bytes = maxval > 255 ? 2 : 1;
  std::vector<unsigned char> row(size_t(w) * size_t(bytes));
  for (long y = 0; y < h; ++y) {
    in.read(reinterpret_cast<char*>(row.data()), std::streamsize(row.size()));
    if (!in) throw format_error(path + ": truncated PGM pixel data");
    for (long x = 0; x < w; ++x) {
      long v = bytes == 2 ? (long(row[size_t(2 * x)]) << 8) | row[size_t(2 * x + 1)]
                          : long(row[size_t(x)]);
      if (v > maxval) throw format_error(path + ": PGM sample out of range");
      img(y, x) = double(v) / double(maxval);
    }
  }
  return img;
}

Image load_png(const std::string& path) {
  png_image im;
  std::memset(&im, 0, sizeof im);
  im.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&im, path.c_str()))
    throw io_error(path + ": " + im.message);
  im.format = PNG_FORMAT_RGBA;
  std::vector<unsigned char> buf(PNG_IMAGE_SIZE(im));
  if (!png_image_finish_read(&im, nullptr, buf.data(), 0, nullptr)) {
    std::string msg = im.message;
    png_image_free(&im);
    throw format_error(path + ": " + msg);
  }
  Image img(im.height, im.width);
  for (png_uint_32 y = 0; y < im.height; ++y)
    for (png_uint_32 x = 0; x < im.width; ++x) {
      const unsigned char* p = &buf[4 * (size_t(y) * im.width + x)];
      img(int(y), int(x)) = (int(p[0]) + p[1] + p[2]) / (3.0 * 255.0);
    }
  return img;
}

}  // namespace

Image load_image_raw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error(path + ": cannot open file");
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (in && magic[0] == 'P' && (magic[1] == '2' || magic[1] == '5'))
    return load_pgm(in, path, magic[1] == '5');
  in.close();
  return load_png(path);
}

Image box_downscale(const Image& img, double scale) {
  if (!(scale > 0) || scale > 1) throw std::invalid_argument("box_downscale: scale not in (0, 1]");
  if (scale == 1.0) return img;
  const int H = int(img.rows()), W = int(img.cols());
  const int oh = std::max(1, int(std::lround(H * scale)));
  const int ow = std::max(1, int(std::lround(W * scale)));

  // separable coverage weights: output cell i averages source span [i*c, (i+1)*c)
  auto weights = [](int out, int in) {
    std::vector<std::vector<std::pair<int, double>>> w(static_cast<size_t>(out));
    const double c = double(in) / double(out);  // exact cell width in source units
    for (int i = 0; i < out; ++i) {
      const double lo = i * c, hi = (i + 1) * c;
      for (int j = int(std::floor(lo)); j < in && j < int(std::ceil(hi)); ++j) {
        const double cover = std::min(hi, double(j + 1)) - std::max(lo, double(j));
        if (cover > 1e-12) w[size_t(i)].push_back({j, cover / c});
      }
    }
    return w;
  };
  const auto wx = weights(ow, W), wy = weights(oh, H);

  Image out(oh, ow);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0;
      for (auto [sy, fy] : wy[size_t(y)])
        for (auto [sx, fx] : wx[size_t(x)]) s += fy * fx * img(sy, sx);
      out(y, x) = s;
    }
  return out;
}

LoadedImage load_image(const std::string& path, int resize_max) {
  if (resize_max < 32) throw std::invalid_argument("load_image: resize_max must be >= 32");
  Image img = load_image_raw(path);
  const int maxdim = int(std::max(img.rows(), img.cols()));
  if (maxdim <= resize_max) return {std::move(img), 1.0};
  const double scale = double(resize_max) / double(maxdim);
  return {box_downscale(img, scale), scale};
}

void save_pgm16(const std::string& path, const Image& img) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw io_error(path + ": cannot open for writing");
  const int H = int(img.rows()), W = int(img.cols());
  std::fprintf(f, "P5\n%d %d\n65535\n", W, H);
  const double mx = img.maxCoeff();
  const double k = mx > 0 ? 65535.0 / mx : 0.0;
  std::vector<unsigned char> row(size_t(W) * 2);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const long v = std::lround(std::max(0.0, img(y, x)) * k);
      const unsigned u = unsigned(std::min(65535L, v));
      row[size_t(2 * x)] = (unsigned char)(u >> 8);
      row[size_t(2 * x + 1)] = (unsigned char)(u & 0xff);
    }
    std::fwrite(row.data(), 1, row.size(), f);
  }
  std::fclose(f);
}

void save_png8(const std::string& path, const Image& img) {
  const int H = int(img.rows()), W = int(img.cols());
  std::vector<unsigned char> buf(size_t(H) * size_t(W));
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) {
      const double v = std::min(1.0, std::max(0.0, img(y, x)));
      buf[size_t(y) * size_t(W) + size_t(x)] = (unsigned char)std::lround(v * 255.0);
    }
  png_image im;
  std::memset(&im, 0, sizeof im);
  im.version = PNG_IMAGE_VERSION;
  im.width = png_uint_32(W);
  im.height = png_uint_32(H);
  im.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&im, path.c_str(), 0, buf.data(), 0, nullptr))
    throw io_error(path + ": " + im.message);
}

}  // namespace wavesym
