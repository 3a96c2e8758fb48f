#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ffm/matrix.hpp"
#include "ffm/stream.hpp"

namespace ffm {

/// Mean real half-spectrum over the samples of one chunk.
struct FrequencySignature {
  std::vector<double> values;
};

struct FrequencySelection {
  /// Indices of the highest-variance frequencies, by descending variance.
  std::vector<std::size_t> selected;
  /// Population variance of every frequency across chunks.
  std::vector<double> variances;
};

/// The stream metadescription: one row of selected frequency values per chunk.
struct Metadescription {
  Matrix R;  // chunks x n
  std::vector<std::size_t> selected;
  std::vector<double> variances;
  std::size_t n = 0;
  std::size_t d = 0;
};

FrequencySignature chunk_frequency_signature(const ChunkMatrix& chunk);

/// Ties on variance go to the lower frequency index.
FrequencySelection select_frequencies(std::span<const FrequencySignature> signatures,
                                      std::size_t n);

/// Builds R from precomputed signatures. `d` is the sample dimensionality.
Metadescription assemble_metadescription(std::span<const FrequencySignature> signatures,
                                         std::size_t n, std::size_t d);

Metadescription metadescribe(const ChunkedStream& stream, std::size_t n);

/// n x n image: row j is the selected frequency j of the chunk brought back
/// to the feature domain, truncated to n samples.
Matrix render_chunk_image(const Metadescription& meta, std::size_t chunk_index);

}  // namespace ffm
