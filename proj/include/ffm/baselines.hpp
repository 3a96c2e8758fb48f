#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "ffm/matrix.hpp"
#include "ffm/stream.hpp"

namespace ffm {

/// Ten statistical metafeatures of a chunk: (mean, std) across attributes of
/// each per-attribute statistic, in the order
/// mean, std, correlation, skewness, kurtosis.
struct CedVector {
  static constexpr std::size_t kSize = 10;
  std::array<double, kSize> values{};
};

CedVector ced_metafeatures(const ChunkMatrix& chunk);

struct PcaModel {
  std::vector<double> mean_vector;
  Matrix components;  // 2 x d, orthonormal rows
  std::array<double, 2> explained_variance{};
};

/// Fits two principal components to the rows of `chunk_means` (one row per
/// chunk). Each component's largest-magnitude entry is made positive.
PcaModel pca_fit(const Matrix& chunk_means);

std::array<double, 2> pca_project(const PcaModel& model, std::span<const double> vector);

/// Column means of a chunk, in double precision.
std::vector<double> chunk_mean(const ChunkMatrix& chunk);

/// k x 10 matrix of CED vectors.
Matrix ced_describe(const ChunkedStream& stream);
/// k x 2 matrix of PCA projections of chunk means.
Matrix pca_describe(const ChunkedStream& stream);
Matrix pca_describe_means(const Matrix& chunk_means);

}  // namespace ffm
