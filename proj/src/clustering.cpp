#include "ffm/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "ffm/error.hpp"
#include "ffm/parallel.hpp"

namespace ffm {
namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

Matrix plus_plus_init(const Matrix& X, std::size_t clusters, std::mt19937_64& rng) {
  const std::size_t k = X.rows();
  Matrix centers(clusters, X.cols());
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::size_t first = pick(rng);
  std::copy(X.row(first).begin(), X.row(first).end(), centers.row(0).begin());
  std::vector<double> nearest(k);
  for (std::size_t i = 0; i < k; ++i) nearest[i] = squared_distance(X.row(i), centers.row(0));

  for (std::size_t c = 1; c < clusters; ++c) {
    double total = 0.0;
    for (double v : nearest) total += v;
    std::size_t chosen = 0;
    if (total <= 0.0) {
      chosen = pick(rng);  // every point already coincides with a center
    } else {
      const double target = unit(rng) * total;
      double acc = 0.0;
      chosen = k - 1;
      for (std::size_t i = 0; i < k; ++i) {
        acc += nearest[i];
        if (acc > target && nearest[i] > 0.0) {
          chosen = i;
          break;
        }
      }
    }
    std::copy(X.row(chosen).begin(), X.row(chosen).end(), centers.row(c).begin());
    for (std::size_t i = 0; i < k; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(X.row(i), centers.row(c)));
    }
  }
  return centers;
}

void assign(const Matrix& X, const Matrix& centers, std::vector<int>& labels) {
  for (std::size_t i = 0; i < X.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (std::size_t c = 0; c < centers.rows(); ++c) {
      const double d = squared_distance(X.row(i), centers.row(c));
      if (d < best) {
        best = d;
        arg = static_cast<int>(c);
      }
    }
    labels[i] = arg;
  }
}

// Moves, for every empty cluster, the point farthest from its own center
// (taken from a cluster with more than one member) into that cluster.
void fill_empty(const Matrix& X, Matrix& centers, std::vector<int>& labels) {
  std::vector<std::size_t> sizes(centers.rows(), 0);
  for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
  for (std::size_t c = 0; c < centers.rows(); ++c) {
    if (sizes[c] > 0) continue;
    double far = -1.0;
    std::size_t arg = X.rows();
    for (std::size_t i = 0; i < X.rows(); ++i) {
      const auto own = static_cast<std::size_t>(labels[i]);
      if (sizes[own] < 2) continue;
      const double d = squared_distance(X.row(i), centers.row(own));
      if (d > far) {
        far = d;
        arg = i;
      }
    }
    if (arg == X.rows()) break;
    --sizes[static_cast<std::size_t>(labels[arg])];
    labels[arg] = static_cast<int>(c);
    ++sizes[c];
    std::copy(X.row(arg).begin(), X.row(arg).end(), centers.row(c).begin());
  }
}

void update_centers(const Matrix& X, const std::vector<int>& labels, Matrix& centers) {
  std::vector<std::size_t> sizes(centers.rows(), 0);
  Matrix sums(centers.rows(), centers.cols());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const auto l = static_cast<std::size_t>(labels[i]);
    ++sizes[l];
    auto dst = sums.row(l);
    const auto src = X.row(i);
    for (std::size_t j = 0; j < src.size(); ++j) dst[j] += src[j];
  }
  for (std::size_t c = 0; c < centers.rows(); ++c) {
    if (sizes[c] == 0) continue;  // keep the previous position
    auto dst = centers.row(c);
    const auto src = sums.row(c);
    for (std::size_t j = 0; j < src.size(); ++j) dst[j] = src[j] / static_cast<double>(sizes[c]);
  }
}

double inertia_of(const Matrix& X, const std::vector<int>& labels, const Matrix& centers) {
  double s = 0.0;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    s += squared_distance(X.row(i), centers.row(static_cast<std::size_t>(labels[i])));
  }
  return s;
}

ClusteringResult lloyd(const Matrix& X, std::size_t clusters, std::uint64_t seed,
                       std::size_t max_iter) {
  std::mt19937_64 rng(seed);
  ClusteringResult r;
  r.seed = seed;
  r.centroids = plus_plus_init(X, clusters, rng);
  r.labels.assign(X.rows(), 0);
  assign(X, r.centroids, r.labels);
  fill_empty(X, r.centroids, r.labels);
  update_centers(X, r.labels, r.centroids);
  r.inertia = inertia_of(X, r.labels, r.centroids);
  r.inertia_trace.push_back(r.inertia);
  r.iterations = 1;

  std::vector<int> next(X.rows());
  while (r.iterations < max_iter) {
    assign(X, r.centroids, next);
    fill_empty(X, r.centroids, next);
    if (next == r.labels) break;
    r.labels.swap(next);
    update_centers(X, r.labels, r.centroids);
    const double inertia = inertia_of(X, r.labels, r.centroids);
    if (inertia > r.inertia * (1.0 + 1e-12) + 1e-300) {
      throw std::logic_error("k-means inertia increased between iterations");
    }
    r.inertia = inertia;
    r.inertia_trace.push_back(inertia);
    ++r.iterations;
  }
  return r;
}

}  // namespace

std::string_view to_string(Normalization norm) noexcept {
  return norm == Normalization::MinMax ? "minmax" : "zscore";
}

Normalization parse_normalization(std::string_view text) {
  if (text == "minmax") return Normalization::MinMax;
  if (text == "zscore") return Normalization::ZScore;
  throw Error(ErrorKind::Configuration, "unknown normalization '" + std::string(text) + "'");
}

Matrix normalize_minmax(const Matrix& R) {
  Matrix out(R.rows(), R.cols());
  for (std::size_t j = 0; j < R.cols(); ++j) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < R.rows(); ++i) {
      lo = std::min(lo, R(i, j));
      hi = std::max(hi, R(i, j));
    }
    const double range = hi - lo;
    for (std::size_t i = 0; i < R.rows(); ++i) {
      out(i, j) = range > 0.0 ? std::clamp((R(i, j) - lo) / range, 0.0, 1.0) : 0.5;
    }
  }
  return out;
}

Matrix normalize_zscore(const Matrix& R) {
  Matrix out(R.rows(), R.cols());
  for (std::size_t j = 0; j < R.cols(); ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < R.rows(); ++i) mean += R(i, j);
    mean /= static_cast<double>(R.rows());
    double ss = 0.0;
    for (std::size_t i = 0; i < R.rows(); ++i) ss += (R(i, j) - mean) * (R(i, j) - mean);
    const double sd = std::sqrt(ss / static_cast<double>(R.rows()));
    for (std::size_t i = 0; i < R.rows(); ++i) out(i, j) = sd > 0.0 ? (R(i, j) - mean) / sd : 0.0;
  }
  return out;
}

Matrix normalize(const Matrix& R, Normalization norm) {
  return norm == Normalization::MinMax ? normalize_minmax(R) : normalize_zscore(R);
}

ClusteringResult kmeans(const Matrix& X, std::size_t clusters, std::uint64_t seed,
                        const KMeansOptions& options) {
  if (clusters == 0 || clusters > X.rows()) {
    throw Error(ErrorKind::Configuration, "cannot form " + std::to_string(clusters) +
                                              " clusters from " + std::to_string(X.rows()) + " points");
  }
  if (options.replications == 0 || options.max_iter == 0) {
    throw Error(ErrorKind::Configuration, "replications and max_iter must be positive");
  }
  // Cluster the rows in lexicographic order so the result does not depend on
  // how the input happens to be ordered.
  std::vector<std::size_t> order(X.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ra = X.row(a), rb = X.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  Matrix sorted(X.rows(), X.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::copy(X.row(order[i]).begin(), X.row(order[i]).end(), sorted.row(i).begin());
  }

  ClusteringResult best;
  for (std::size_t r = 0; r < options.replications; ++r) {
    ClusteringResult run = lloyd(sorted, clusters, derive_seed(seed, r), options.max_iter);
    if (r == 0 || run.inertia < best.inertia) best = std::move(run);
  }
  std::vector<int> labels(X.rows());
  for (std::size_t i = 0; i < order.size(); ++i) labels[order[i]] = best.labels[i];
  best.labels = std::move(labels);
  return best;
}

ConceptCountReport identify_concept_count(const Matrix& R, int c_min, int c_max,
                                          std::uint64_t seed, std::size_t replications,
                                          Normalization norm) {
  if (c_min < 2 || c_max < c_min || static_cast<std::size_t>(c_max) > R.rows() - 1 ||
      R.rows() < 3) {
    throw Error(ErrorKind::Configuration, "invalid concept range [" + std::to_string(c_min) + ", " +
                                              std::to_string(c_max) + "] for " +
                                              std::to_string(R.rows()) + " chunks");
  }
  const Matrix X = normalize(R, norm);
  const std::size_t candidates = static_cast<std::size_t>(c_max - c_min + 1);
  std::vector<ClusteringResult> runs(candidates);
  std::vector<double> scores(candidates);
  parallel_for(candidates, [&](std::size_t i) {
    const int c = c_min + static_cast<int>(i);
    runs[i] = kmeans(X, static_cast<std::size_t>(c), derive_seed(seed, c), {replications, 300});
    const std::set<int> used(runs[i].labels.begin(), runs[i].labels.end());
    // A run that collapsed onto one cluster has no defined silhouette.
    scores[i] = used.size() < 2 ? -1.0 : silhouette_score(X, runs[i].labels);
  });

  ConceptCountReport report;
  std::size_t best = 0;
  for (std::size_t i = 0; i < candidates; ++i) {
    report.scores[c_min + static_cast<int>(i)] = scores[i];
    if (scores[i] > scores[best]) best = i;
  }
  report.best_c = c_min + static_cast<int>(best);
  report.best_labels = runs[best].labels;
  report.best_internal = internal_clustering_scores(X, report.best_labels);
  return report;
}

}  // namespace ffm
