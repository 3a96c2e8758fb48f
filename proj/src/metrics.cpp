#include "ffm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "ffm/error.hpp"

namespace ffm {
namespace {

std::vector<std::size_t> dense_labels(std::span<const int> labels, std::size_t& distinct) {
  std::map<int, std::size_t> index;
  for (int l : labels) index.emplace(l, 0);
  std::size_t next = 0;
  for (auto& [label, idx] : index) idx = next++;
  distinct = next;
  std::vector<std::size_t> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = index.at(labels[i]);
  return out;
}

double entropy(std::span<const long long> totals, double n) {
  double h = 0.0;
  for (long long c : totals) {
    if (c > 0) {
      const double p = static_cast<double>(c) / n;
      h -= p * std::log(p);
    }
  }
  return h;
}

double comb2(long long x) { return 0.5 * static_cast<double>(x) * static_cast<double>(x - 1); }

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

struct Clusters {
  std::vector<std::size_t> index;  // dense cluster index per point
  std::size_t count = 0;
  std::vector<std::size_t> sizes;
};

Clusters group(const Matrix& X, std::span<const int> labels) {
  if (labels.size() != X.rows()) {
    throw Error(ErrorKind::Dimension, "label count does not match number of points");
  }
  Clusters c;
  c.index = dense_labels(labels, c.count);
  if (c.count < 2) {
    throw Error(ErrorKind::UndefinedMetric, "internal metrics need at least 2 clusters");
  }
  c.sizes.assign(c.count, 0);
  for (std::size_t i : c.index) ++c.sizes[i];
  return c;
}

Matrix centroids_of(const Matrix& X, const Clusters& c) {
  Matrix centroids(c.count, X.cols());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    auto dst = centroids.row(c.index[i]);
    const auto src = X.row(i);
    for (std::size_t j = 0; j < src.size(); ++j) dst[j] += src[j];
  }
  for (std::size_t k = 0; k < c.count; ++k) {
    for (double& v : centroids.row(k)) v /= static_cast<double>(c.sizes[k]);
  }
  return centroids;
}

double silhouette_impl(const Matrix& X, const Clusters& c) {
  const std::size_t n = X.rows();
  std::vector<double> sums(c.count);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      sums[c.index[j]] += std::sqrt(squared_distance(X.row(i), X.row(j)));
    }
    const std::size_t own = c.index[i];
    if (c.sizes[own] == 1) continue;  // singleton: s = 0
    const double a = sums[own] / static_cast<double>(c.sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < c.count; ++k) {
      if (k != own) b = std::min(b, sums[k] / static_cast<double>(c.sizes[k]));
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

}  // namespace

ContingencyTable contingency_table(std::span<const int> truth, std::span<const int> pred) {
  if (truth.size() != pred.size()) {
    throw Error(ErrorKind::Dimension, "labelings differ in length (" + std::to_string(truth.size()) +
                                          " vs " + std::to_string(pred.size()) + ")");
  }
  if (truth.empty()) throw Error(ErrorKind::DegenerateInput, "labelings are empty");
  std::size_t rows = 0, cols = 0;
  const auto t = dense_labels(truth, rows);
  const auto p = dense_labels(pred, cols);
  ContingencyTable table;
  table.counts = BasicMatrix<long long>(rows, cols, 0);
  table.truth_totals.assign(rows, 0);
  table.pred_totals.assign(cols, 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    ++table.counts(t[i], p[i]);
    ++table.truth_totals[t[i]];
    ++table.pred_totals[p[i]];
  }
  table.total = static_cast<long long>(t.size());
  return table;
}

ExternalScores external_clustering_scores(std::span<const int> truth, std::span<const int> pred,
                                          NmiNormalization nmi) {
  const ContingencyTable table = contingency_table(truth, pred);
  const double n = static_cast<double>(table.total);
  const double h_truth = entropy(table.truth_totals, n);
  const double h_pred = entropy(table.pred_totals, n);

  double mi = 0.0;
  for (std::size_t r = 0; r < table.counts.rows(); ++r) {
    for (std::size_t c = 0; c < table.counts.cols(); ++c) {
      const long long nij = table.counts(r, c);
      if (nij == 0) continue;
      const double pij = static_cast<double>(nij) / n;
      mi += pij * std::log(static_cast<double>(nij) * n /
                           (static_cast<double>(table.truth_totals[r]) *
                            static_cast<double>(table.pred_totals[c])));
    }
  }
  mi = std::max(0.0, mi);

  ExternalScores s;
  if (h_truth == 0.0 && h_pred == 0.0) {
    s.nmi = 1.0;
  } else if (h_truth == 0.0 || h_pred == 0.0) {
    s.nmi = 0.0;
  } else {
    const double denom = nmi == NmiNormalization::Geometric ? std::sqrt(h_truth * h_pred)
                                                            : 0.5 * (h_truth + h_pred);
    s.nmi = std::clamp(mi / denom, 0.0, 1.0);
  }
  // H(truth | pred) = H(truth) - MI and symmetrically.
  s.homogeneity = h_truth == 0.0 ? 1.0 : std::clamp(mi / h_truth, 0.0, 1.0);
  s.completeness = h_pred == 0.0 ? 1.0 : std::clamp(mi / h_pred, 0.0, 1.0);

  double index = 0.0;
  for (long long v : table.counts.data()) index += comb2(v);
  double sum_truth = 0.0, sum_pred = 0.0;
  for (long long v : table.truth_totals) sum_truth += comb2(v);
  for (long long v : table.pred_totals) sum_pred += comb2(v);
  const double pairs = comb2(table.total);
  const double expected = pairs > 0.0 ? sum_truth * sum_pred / pairs : 0.0;
  const double maximum = 0.5 * (sum_truth + sum_pred);
  // A zero denominator only happens when both partitions are the same
  // trivial partition (all singletons or one block).
  s.adjusted_rand = maximum == expected ? 1.0 : (index - expected) / (maximum - expected);
  return s;
}

double silhouette_score(const Matrix& X, std::span<const int> labels) {
  return silhouette_impl(X, group(X, labels));
}

InternalScores internal_clustering_scores(const Matrix& X, std::span<const int> labels) {
  const Clusters c = group(X, labels);
  const std::size_t n = X.rows();
  InternalScores s;
  s.silhouette = silhouette_impl(X, c);

  const Matrix centroids = centroids_of(X, c);
  std::vector<double> overall(X.cols(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = X.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) overall[j] += row[j];
  }
  for (double& v : overall) v /= static_cast<double>(n);

  double between = 0.0, within = 0.0;
  for (std::size_t k = 0; k < c.count; ++k) {
    between += static_cast<double>(c.sizes[k]) * squared_distance(centroids.row(k), overall);
  }
  std::vector<double> scatter(c.count, 0.0);  // mean distance to centroid
  for (std::size_t i = 0; i < n; ++i) {
    const double sq = squared_distance(X.row(i), centroids.row(c.index[i]));
    within += sq;
    scatter[c.index[i]] += std::sqrt(sq);
  }
  for (std::size_t k = 0; k < c.count; ++k) scatter[k] /= static_cast<double>(c.sizes[k]);

  if (within == 0.0) {
    s.calinski_harabasz = between > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  } else {
    s.calinski_harabasz = (between / static_cast<double>(c.count - 1)) /
                          (within / static_cast<double>(n - c.count));
  }

  double db = 0.0;
  for (std::size_t a = 0; a < c.count; ++a) {
    double worst = 0.0;
    for (std::size_t b = 0; b < c.count; ++b) {
      if (a == b) continue;
      const double dist = std::sqrt(squared_distance(centroids.row(a), centroids.row(b)));
      if (dist == 0.0) continue;  // coincident centroids contribute 0
      worst = std::max(worst, (scatter[a] + scatter[b]) / dist);
    }
    db += worst;
  }
  s.davies_bouldin = db / static_cast<double>(c.count);
  return s;
}

double student_t_two_sided_p(double t, double dof) {
  if (std::isinf(t)) return 0.0;
  const double x = dof / (dof + t * t);
  return boost::math::ibeta(0.5 * dof, 0.5, x);
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b, double alpha) {
  if (a.size() != b.size()) throw Error(ErrorKind::Dimension, "paired samples differ in length");
  const std::size_t m = a.size();
  if (m < 2) throw Error(ErrorKind::DegenerateInput, "paired t-test needs at least 2 pairs");

  double mean = 0.0;
  for (std::size_t i = 0; i < m; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(m);
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dev = (a[i] - b[i]) - mean;
    ss += dev * dev;
  }
  const double sd = std::sqrt(ss / static_cast<double>(m - 1));

  TTestResult r;
  if (sd == 0.0) {
    if (mean == 0.0) {
      r.t = 0.0;
      r.p = 1.0;
    } else {
      r.t = std::copysign(std::numeric_limits<double>::infinity(), mean);
      r.p = 0.0;
    }
  } else {
    r.t = mean / (sd / std::sqrt(static_cast<double>(m)));
    r.p = student_t_two_sided_p(r.t, static_cast<double>(m - 1));
  }
  r.significant = r.p < alpha;
  return r;
}

}  // namespace ffm
