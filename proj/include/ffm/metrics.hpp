#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ffm/matrix.hpp"

namespace ffm {

/// Counts of (truth class, predicted cluster) pairs. Labels are remapped to
/// dense indices in ascending label order.
struct ContingencyTable {
  BasicMatrix<long long> counts;
  std::vector<long long> truth_totals;
  std::vector<long long> pred_totals;
  long long total = 0;
};

ContingencyTable contingency_table(std::span<const int> truth, std::span<const int> pred);

enum class NmiNormalization { Geometric, Arithmetic };

struct ExternalScores {
  double nmi = 0.0;
  double adjusted_rand = 0.0;
  double completeness = 0.0;
  double homogeneity = 0.0;
};

/// Natural-log entropies throughout.
ExternalScores external_clustering_scores(std::span<const int> truth, std::span<const int> pred,
                                          NmiNormalization nmi = NmiNormalization::Geometric);

struct InternalScores {
  double silhouette = 0.0;
  double calinski_harabasz = 0.0;
  double davies_bouldin = 0.0;
};

/// Euclidean internal validity indices. Labels may be arbitrary integers;
/// at least two distinct labels are required.
InternalScores internal_clustering_scores(const Matrix& X, std::span<const int> labels);

/// Mean silhouette only (the costly part of internal_clustering_scores).
double silhouette_score(const Matrix& X, std::span<const int> labels);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  bool significant = false;
};

/// Two-sided paired t-test on a - b with m - 1 degrees of freedom.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b,
                          double alpha = 0.05);

/// Two-sided tail probability P(|T| >= |t|) for Student's t with `dof`
/// degrees of freedom.
double student_t_two_sided_p(double t, double dof);

}  // namespace ffm
