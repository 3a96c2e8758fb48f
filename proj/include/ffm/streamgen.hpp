#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "ffm/matrix.hpp"
#include "ffm/stream.hpp"

namespace ffm {

enum class DriftType { Sudden, Gradual, Incremental };

std::string_view to_string(DriftType type) noexcept;
DriftType parse_drift_type(std::string_view text);

struct StreamConfig {
  std::size_t n_chunks = 0;
  std::size_t chunk_size = 0;
  std::size_t n_features = 0;
  std::size_t n_drifts = 0;
  DriftType drift_type = DriftType::Sudden;
  bool recurring = false;
  std::uint64_t seed = 0;
  /// Standard deviation of the normal distribution the class-component
  /// centers are drawn from. Components themselves have unit covariance.
  double center_spread = kDefaultCenterSpread;

  static constexpr double kDefaultCenterSpread = 0.42;
  static constexpr std::size_t kComponentsPerConcept = 2;
};

/// Throws a configuration error for invalid configurations.
void validate(const StreamConfig& config);

struct SyntheticStream {
  ChunkedStream stream;  // ground_truth always populated
  /// Component (class) index of every sample, per chunk. Metadata only.
  std::vector<std::vector<int>> class_labels;

  const std::vector<int>& ground_truth() const { return *stream.ground_truth; }
};

/// sigmoid((chunk_index - boundary) / width).
double concept_weight(double chunk_index, double boundary, double width);

/// Mixing state of one chunk: samples come from `previous` and `next` with
/// weight `weight` on `next`.
struct ChunkSchedule {
  int previous = 0;
  int next = 0;
  double weight = 0.0;
  int ground_truth = 0;
};

/// Chunk-addressable generator. Each chunk draws its randomness from
/// (seed, chunk index), so chunks can be produced in any order or in
/// parallel with identical results.
class StreamGenerator {
 public:
  explicit StreamGenerator(const StreamConfig& config);

  const StreamConfig& config() const noexcept { return config_; }
  const std::vector<std::size_t>& boundaries() const noexcept { return boundaries_; }
  std::size_t concept_count() const noexcept { return centers_.size(); }
  double transition_width() const noexcept { return width_; }

  ChunkSchedule schedule(std::size_t chunk_index) const;
  std::vector<int> ground_truth() const;

  /// Generates chunk `chunk_index`; class labels are written to
  /// `class_labels` when non-null.
  ChunkMatrix chunk(std::size_t chunk_index, std::vector<int>* class_labels = nullptr) const;

 private:
  int concept_of_segment(std::size_t segment) const;

  StreamConfig config_;
  std::vector<std::size_t> boundaries_;
  double width_ = 0.0;
  // centers_[concept] is a kComponentsPerConcept x n_features matrix.
  std::vector<Matrix> centers_;
};

SyntheticStream make_stream(const StreamConfig& config);

}  // namespace ffm
