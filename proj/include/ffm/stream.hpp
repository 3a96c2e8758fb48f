#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ffm/matrix.hpp"

namespace ffm {

/// Ordered sequence of equally shaped chunks (chunk_size x features).
struct ChunkedStream {
  std::vector<ChunkMatrix> chunks;
  std::size_t chunk_size = 0;
  std::size_t features = 0;
  std::string source_name;
  /// Concept identifier per chunk, when known.
  std::optional<std::vector<int>> ground_truth;

  std::size_t size() const noexcept { return chunks.size(); }
};

/// Throws a dimension error unless every chunk is chunk_size x features and
/// the ground truth (if any) has one entry per chunk.
void validate_shape(const ChunkedStream& stream);

}  // namespace ffm
