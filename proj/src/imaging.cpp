#include "ffm/imaging.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "ffm/error.hpp"

namespace ffm {
namespace {

std::uint8_t scale_pixel(double v, double lo, double hi) {
  if (!(hi > lo)) return 128;
  const double scaled = std::round((v - lo) / (hi - lo) * 255.0);
  return static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
}

void write_bytes(const std::string& bytes, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

}  // namespace

GrayImage to_gray(const Matrix& image) {
  if (image.empty()) throw Error(ErrorKind::Dimension, "image is empty");
  const auto [lo, hi] = std::minmax_element(image.data().begin(), image.data().end());
  GrayImage g{image.cols(), image.rows(), {}};
  g.pixels.reserve(image.data().size());
  for (double v : image.data()) g.pixels.push_back(scale_pixel(v, *lo, *hi));
  return g;
}

GrayImage tile_images(std::span<const Matrix> images, std::size_t columns) {
  if (images.empty()) throw Error(ErrorKind::Dimension, "no images to tile");
  if (columns == 0) throw Error(ErrorKind::Configuration, "columns must be positive");
  const std::size_t h = images.front().rows();
  const std::size_t w = images.front().cols();
  if (h == 0 || w == 0) throw Error(ErrorKind::Dimension, "image is empty");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& img : images) {
    if (img.rows() != h || img.cols() != w) {
      throw Error(ErrorKind::Dimension, "strip images must share one size");
    }
    for (double v : img.data()) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const std::size_t cols = std::min(columns, images.size());
  const std::size_t rows = (images.size() + cols - 1) / cols;
  GrayImage g;
  g.width = cols * w + (cols - 1);
  g.height = rows * h + (rows - 1);
  g.pixels.assign(g.width * g.height, 0);
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::size_t x0 = (i % cols) * (w + 1);
    const std::size_t y0 = (i / cols) * (h + 1);
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        g.pixels[(y0 + y) * g.width + x0 + x] = scale_pixel(images[i](y, x), lo, hi);
      }
    }
  }
  return g;
}

std::string encode_pgm(const GrayImage& image) {
  std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) +
                    "\n255\n";
  out.append(image.pixels.begin(), image.pixels.end());
  return out;
}

void write_pgm(const Matrix& image, const std::filesystem::path& path) {
  write_bytes(encode_pgm(to_gray(image)), path);
}

void write_strip(std::span<const Matrix> images, std::size_t columns,
                 const std::filesystem::path& path) {
  write_bytes(encode_pgm(tile_images(images, columns)), path);
}

void write_scatter_csv(const Matrix& R, std::span<const int> labels,
                       const std::filesystem::path& path) {
  if (!labels.empty() && labels.size() != R.rows()) {
    throw Error(ErrorKind::Dimension, "label count does not match metadescription rows");
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << "chunk_index,concept_id";
  for (std::size_t j = 0; j < R.cols(); ++j) out << ",r" << j;
  out << '\n';
  char buf[32];
  for (std::size_t t = 0; t < R.rows(); ++t) {
    out << t << ',' << (labels.empty() ? 0 : labels[t]);
    for (double v : R.row(t)) {
      const auto res = std::to_chars(buf, buf + sizeof buf, v);
      out << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

}  // namespace ffm
