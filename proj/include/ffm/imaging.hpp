#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ffm/matrix.hpp"

namespace ffm {

/// 8-bit grayscale raster.
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major
};

/// Affine rescale of `image` onto 0..255 using its own min/max; a constant
/// image maps to 128.
GrayImage to_gray(const Matrix& image);

/// Tiles images left to right, `columns` per row, with 1-pixel black
/// separators and one rescale shared by all tiles. Missing tiles in the last
/// row are black.
GrayImage tile_images(std::span<const Matrix> images, std::size_t columns);

/// Binary PGM (P5, maxval 255).
std::string encode_pgm(const GrayImage& image);

void write_pgm(const Matrix& image, const std::filesystem::path& path);
void write_strip(std::span<const Matrix> images, std::size_t columns,
                 const std::filesystem::path& path);

/// CSV rows `chunk_index,concept_id,r0,...` for scatter plots of R.
void write_scatter_csv(const Matrix& R, std::span<const int> labels,
                       const std::filesystem::path& path);

}  // namespace ffm
