#include "ffm/streamgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "ffm/error.hpp"
#include "ffm/parallel.hpp"

namespace ffm {
namespace {

constexpr std::uint64_t kCentersStream = 0;
constexpr std::uint64_t kChunkStream = 1;

}  // namespace

std::string_view to_string(DriftType type) noexcept {
  switch (type) {
    case DriftType::Sudden: return "sudden";
    case DriftType::Gradual: return "gradual";
    case DriftType::Incremental: return "incremental";
  }
  return "unknown";
}

DriftType parse_drift_type(std::string_view text) {
  if (text == "sudden") return DriftType::Sudden;
  if (text == "gradual") return DriftType::Gradual;
  if (text == "incremental") return DriftType::Incremental;
  throw Error(ErrorKind::Configuration, "unknown drift type '" + std::string(text) + "'");
}

void validate(const StreamConfig& config) {
  if (config.n_chunks == 0 || config.chunk_size == 0 || config.n_features == 0) {
    throw Error(ErrorKind::Configuration, "chunk count, chunk size and feature count must be positive");
  }
  if (config.n_drifts + 1 > config.n_chunks) {
    throw Error(ErrorKind::Configuration, "need at least one chunk per concept segment");
  }
  if (config.recurring && config.n_drifts < 2) {
    // With a single drift the recurring final segment would be concept 0 again
    // and the stream would contain no change at all.
    throw Error(ErrorKind::Configuration, "recurring streams need at least 2 drifts");
  }
  if (!(config.center_spread > 0.0) || !std::isfinite(config.center_spread)) {
    throw Error(ErrorKind::Configuration, "center spread must be positive and finite");
  }
}

double concept_weight(double chunk_index, double boundary, double width) {
  const double z = (chunk_index - boundary) / width;
  return 1.0 / (1.0 + std::exp(-z));
}

StreamGenerator::StreamGenerator(const StreamConfig& config) : config_(config) {
  validate(config_);
  const std::size_t segments = config_.n_drifts + 1;
  for (std::size_t i = 0; i < config_.n_drifts; ++i) {
    // round((i + 1) * n_chunks / segments), half rounding up
    const std::size_t num = 2 * (i + 1) * config_.n_chunks + segments;
    boundaries_.push_back(num / (2 * segments));
  }
  width_ = static_cast<double>(config_.n_chunks) / (10.0 * static_cast<double>(segments));

  const std::size_t concepts = config_.recurring ? config_.n_drifts : segments;
  std::mt19937_64 rng(derive_seed(config_.seed, kCentersStream));
  std::normal_distribution<double> normal(0.0, config_.center_spread);
  centers_.reserve(concepts);
  for (std::size_t j = 0; j < concepts; ++j) {
    Matrix centers(StreamConfig::kComponentsPerConcept, config_.n_features);
    for (double& v : centers.data()) v = normal(rng);
    centers_.push_back(std::move(centers));
  }
}

int StreamGenerator::concept_of_segment(std::size_t segment) const {
  if (config_.recurring && segment == config_.n_drifts) return 0;
  return static_cast<int>(segment);
}

ChunkSchedule StreamGenerator::schedule(std::size_t chunk_index) const {
  if (chunk_index >= config_.n_chunks) {
    throw Error(ErrorKind::Index, "chunk index " + std::to_string(chunk_index) + " out of range");
  }
  ChunkSchedule s;
  if (config_.drift_type == DriftType::Sudden || boundaries_.empty()) {
    const auto passed = static_cast<std::size_t>(
        std::upper_bound(boundaries_.begin(), boundaries_.end(), chunk_index) - boundaries_.begin());
    s.previous = s.next = s.ground_truth = concept_of_segment(passed);
    s.weight = 0.0;
    return s;
  }
  // Nearest transition; its midpoint sits half a chunk before the boundary so
  // the first chunk at the boundary already leans toward the new concept.
  const double t = static_cast<double>(chunk_index);
  std::size_t nearest = 0;
  double best = std::abs(t + 0.5 - static_cast<double>(boundaries_[0]));
  for (std::size_t i = 1; i < boundaries_.size(); ++i) {
    const double dist = std::abs(t + 0.5 - static_cast<double>(boundaries_[i]));
    if (dist < best) {
      best = dist;
      nearest = i;
    }
  }
  s.previous = concept_of_segment(nearest);
  s.next = concept_of_segment(nearest + 1);
  s.weight = concept_weight(t, static_cast<double>(boundaries_[nearest]) - 0.5, width_);
  s.ground_truth = s.weight > 0.5 ? s.next : s.previous;
  return s;
}

std::vector<int> StreamGenerator::ground_truth() const {
  std::vector<int> truth(config_.n_chunks);
  for (std::size_t t = 0; t < config_.n_chunks; ++t) truth[t] = schedule(t).ground_truth;
  return truth;
}

ChunkMatrix StreamGenerator::chunk(std::size_t chunk_index, std::vector<int>* class_labels) const {
  const ChunkSchedule s = schedule(chunk_index);
  const std::size_t d = config_.n_features;
  const std::size_t components = StreamConfig::kComponentsPerConcept;

  std::mt19937_64 rng(derive_seed(config_.seed, kChunkStream, chunk_index));
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const Matrix& prev = centers_[static_cast<std::size_t>(s.previous)];
  const Matrix& next = centers_[static_cast<std::size_t>(s.next)];
  Matrix blended;
  if (config_.drift_type == DriftType::Incremental) {
    blended = Matrix(components, d);
    for (std::size_t i = 0; i < blended.data().size(); ++i) {
      blended.data()[i] = s.weight * next.data()[i] + (1.0 - s.weight) * prev.data()[i];
    }
  }

  ChunkMatrix out(config_.chunk_size, d);
  if (class_labels) class_labels->assign(config_.chunk_size, 0);
  for (std::size_t row = 0; row < config_.chunk_size; ++row) {
    const auto component = static_cast<std::size_t>(unit(rng) < 0.5 ? 0 : 1);
    const Matrix* source = &prev;
    switch (config_.drift_type) {
      case DriftType::Sudden:
        break;
      case DriftType::Gradual:
        if (unit(rng) < s.weight) source = &next;
        break;
      case DriftType::Incremental:
        source = &blended;
        break;
    }
    const auto center = source->row(component);
    auto sample = out.row(row);
    for (std::size_t f = 0; f < d; ++f) {
      sample[f] = static_cast<float>(center[f] + noise(rng));
    }
    if (class_labels) (*class_labels)[row] = static_cast<int>(component);
  }
  return out;
}

SyntheticStream make_stream(const StreamConfig& config) {
  const StreamGenerator generator(config);
  SyntheticStream result;
  result.stream.chunk_size = config.chunk_size;
  result.stream.features = config.n_features;
  result.stream.source_name = "synthetic";
  result.stream.chunks.resize(config.n_chunks);
  result.class_labels.resize(config.n_chunks);
  parallel_for(config.n_chunks, [&](std::size_t t) {
    result.stream.chunks[t] = generator.chunk(t, &result.class_labels[t]);
  });
  result.stream.ground_truth = generator.ground_truth();
  return result;
}

}  // namespace ffm
