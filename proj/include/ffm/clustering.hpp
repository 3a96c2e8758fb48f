#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

#include "ffm/matrix.hpp"
#include "ffm/metrics.hpp"

namespace ffm {

enum class Normalization { MinMax, ZScore };

std::string_view to_string(Normalization norm) noexcept;
Normalization parse_normalization(std::string_view text);

/// Maps each column affinely onto [0, 1]; constant columns become 0.5.
Matrix normalize_minmax(const Matrix& R);
/// Standardizes each column (population std); constant columns become 0.
Matrix normalize_zscore(const Matrix& R);
Matrix normalize(const Matrix& R, Normalization norm);

struct KMeansOptions {
  std::size_t replications = 10;
  std::size_t max_iter = 300;
};

struct ClusteringResult {
  std::vector<int> labels;
  Matrix centroids;  // c x n
  double inertia = 0.0;
  /// Seed of the winning replication.
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  /// Inertia after every Lloyd iteration of the winning replication.
  std::vector<double> inertia_trace;
};

/// Lloyd's algorithm with k-means++ seeding. Each replication r runs with
/// seed derive_seed(seed, r); the lowest-inertia run wins (earliest on ties).
/// Rows are clustered in lexicographic order, so permuting them permutes the
/// labels and nothing else.
ClusteringResult kmeans(const Matrix& X, std::size_t clusters, std::uint64_t seed,
                        const KMeansOptions& options = {});

struct ConceptCountReport {
  std::map<int, double> scores;  // candidate c -> mean silhouette
  int best_c = 0;
  std::vector<int> best_labels;
  InternalScores best_internal;
};

/// Clusters the normalized metadescription for every c in [c_min, c_max] and
/// keeps the count with the highest silhouette (smaller c on ties).
ConceptCountReport identify_concept_count(const Matrix& R, int c_min, int c_max,
                                          std::uint64_t seed, std::size_t replications = 10,
                                          Normalization norm = Normalization::MinMax);

}  // namespace ffm
