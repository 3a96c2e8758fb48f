#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "ffm/clustering.hpp"
#include "ffm/metadescriptor.hpp"
#include "ffm/metrics.hpp"
#include "ffm/streamgen.hpp"

namespace ffm::bench {

enum class Method { Ced, Ffm, Pca };

std::string_view to_string(Method m) noexcept;

/// Chunk-level features of one synthetic stream, computed chunk by chunk so
/// the raw samples never have to be held in memory at once.
struct StreamFeatures {
  std::size_t d = 0;
  std::vector<FrequencySignature> signatures;
  Matrix ced;    // k x 10, empty unless requested
  Matrix means;  // k x d, empty unless requested
  std::vector<int> truth;
};

StreamFeatures extract_features(const StreamConfig& config, bool with_ced, bool with_means);

/// Clusters `R` (after normalization) into `concepts` groups and scores the
/// result against `truth`.
ExternalScores score_description(const Matrix& R, const std::vector<int>& truth,
                                 std::size_t concepts, std::uint64_t seed,
                                 std::size_t kmeans_replications, Normalization norm);

struct Settings {
  std::uint64_t seed = 0;
  std::size_t replicas = 10;
  std::size_t kmeans_replications = 10;
  Normalization normalization = Normalization::MinMax;
  bool force_ced = false;
  /// When nonzero, replaces the chunk count of every stream (smoke runs).
  std::size_t chunks_override = 0;
  /// Spread of the generator's component centers.
  double center_spread = StreamConfig::kDefaultCenterSpread;
};

struct Experiment1Grid {
  std::size_t n_chunks = 500;
  std::size_t features = 500;
  std::vector<std::size_t> chunk_sizes{50, 100, 200};
  std::vector<std::size_t> drifts{1, 3, 5, 7, 9};
  std::vector<std::size_t> components{1, 2, 4, 8, 16};
};

struct Experiment2Grid {
  std::size_t n_chunks = 1000;
  std::size_t chunk_size = 256;
  std::size_t features = 64;
  std::size_t drifts = 3;
  std::vector<DriftType> drift_types{DriftType::Sudden, DriftType::Gradual, DriftType::Incremental};
  std::size_t components = 8;
};

struct Experiment3Grid {
  std::size_t n_chunks = 500;
  std::size_t features = 500;
  std::vector<std::size_t> chunk_sizes{100, 200, 400};
  std::vector<std::size_t> drifts{1, 3, 5, 7, 9};
  std::size_t components = 16;
  int c_min = 2;
  int c_max = 11;
};

struct StreamRecord {
  StreamConfig config;
  std::size_t replica = 0;
};

struct Experiment1Row {
  std::size_t stream = 0;  // index into streams
  Method method = Method::Ffm;
  std::size_t components = 0;  // 0 for baselines
  double nmi = 0.0;
};

struct Experiment1Result {
  std::vector<StreamRecord> streams;
  std::vector<Experiment1Row> rows;
  bool ced_skipped = false;
};

struct Experiment2Row {
  std::size_t stream = 0;
  Method method = Method::Ffm;
  ExternalScores scores;
};

struct Experiment2Result {
  std::vector<StreamRecord> streams;
  std::vector<Experiment2Row> rows;
};

struct Experiment3Row {
  std::size_t stream = 0;
  int true_concepts = 0;
  ConceptCountReport report;
};

struct Experiment3Result {
  std::vector<StreamRecord> streams;
  std::vector<Experiment3Row> rows;
  /// Visualization of chunks per concept from the last stream with the
  /// largest chunk size, ten per concept (row = concept).
  std::vector<Matrix> gallery;
  std::size_t gallery_columns = 10;
};

Experiment1Result run_experiment1(const Settings& settings, const Experiment1Grid& grid = {});
Experiment2Result run_experiment2(const Settings& settings, const Experiment2Grid& grid = {});
Experiment3Result run_experiment3(const Settings& settings, const Experiment3Grid& grid = {});

/// Pairwise comparison for one metric and drift type.
struct Comparison {
  Method better;
  Method worse;
  TTestResult test;
};

/// Writes per-stream CSV, aggregates, significance tables and a manifest
/// into `out_dir`.
void write_outputs(const Experiment1Result& r, const Settings& s, const Experiment1Grid& g,
                   const std::filesystem::path& out_dir);
void write_outputs(const Experiment2Result& r, const Settings& s, const Experiment2Grid& g,
                   const std::filesystem::path& out_dir);
void write_outputs(const Experiment3Result& r, const Settings& s, const Experiment3Grid& g,
                   const std::filesystem::path& out_dir);

/// Metric values of `method` for drift type `drift`, in replica order.
std::vector<double> metric_series(const Experiment2Result& r, DriftType drift, Method method,
                                  double ExternalScores::*metric);

}  // namespace ffm::bench
