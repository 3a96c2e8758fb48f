#include "ffm/baselines.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "ffm/error.hpp"
#include "ffm/parallel.hpp"

namespace ffm {
namespace {

std::pair<double, double> mean_and_std(std::span<const double> values) {
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size()))};
}

}  // namespace

CedVector ced_metafeatures(const ChunkMatrix& chunk) {
  const std::size_t rows = chunk.rows();
  const std::size_t d = chunk.cols();
  if (rows < 2) throw Error(ErrorKind::DegenerateInput, "CED metafeatures need at least 2 samples");
  if (d == 0) throw Error(ErrorKind::Dimension, "chunk has no attributes");

  const double inv_rows = 1.0 / static_cast<double>(rows);
  std::vector<double> mean(d, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row = chunk.row(r);
    for (std::size_t j = 0; j < d; ++j) mean[j] += row[j];
  }
  for (double& m : mean) m *= inv_rows;

  // Centered copy, attribute-major, for the moment and correlation passes.
  Matrix centered(d, rows);
  std::vector<double> m2(d, 0.0), m3(d, 0.0), m4(d, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row = chunk.row(r);
    for (std::size_t j = 0; j < d; ++j) {
      const double c = row[j] - mean[j];
      centered(j, r) = c;
      const double c2 = c * c;
      m2[j] += c2;
      m3[j] += c2 * c;
      m4[j] += c2 * c2;
    }
  }
  std::vector<double> stdev(d), skew(d), kurt(d);
  for (std::size_t j = 0; j < d; ++j) {
    m2[j] *= inv_rows;
    m3[j] *= inv_rows;
    m4[j] *= inv_rows;
    stdev[j] = std::sqrt(m2[j]);
    if (m2[j] > 0.0) {
      skew[j] = m3[j] / std::pow(m2[j], 1.5);
      kurt[j] = m4[j] / (m2[j] * m2[j]) - 3.0;
    } else {
      skew[j] = 0.0;
      kurt[j] = 0.0;
    }
  }

  // Mean absolute Pearson correlation against every other attribute;
  // pairs involving a constant attribute count as 0.
  std::vector<double> corr_sum(d, 0.0);
  for (std::size_t a = 0; a < d; ++a) {
    if (m2[a] <= 0.0) continue;
    const auto ca = centered.row(a);
    for (std::size_t b = a + 1; b < d; ++b) {
      if (m2[b] <= 0.0) continue;
      const auto cb = centered.row(b);
      double cov = 0.0;
      for (std::size_t r = 0; r < rows; ++r) cov += ca[r] * cb[r];
      const double rho = std::abs(cov * inv_rows / (stdev[a] * stdev[b]));
      corr_sum[a] += rho;
      corr_sum[b] += rho;
    }
  }
  std::vector<double> corr(d, 0.0);
  if (d > 1) {
    for (std::size_t j = 0; j < d; ++j) corr[j] = corr_sum[j] / static_cast<double>(d - 1);
  }

  CedVector out;
  const std::vector<double>* stats[] = {&mean, &stdev, &corr, &skew, &kurt};
  for (std::size_t s = 0; s < 5; ++s) {
    const auto [mu, sigma] = mean_and_std(*stats[s]);
    out.values[2 * s] = mu;
    out.values[2 * s + 1] = sigma;
  }
  return out;
}

PcaModel pca_fit(const Matrix& chunk_means) {
  const std::size_t k = chunk_means.rows();
  const std::size_t d = chunk_means.cols();
  if (k < 3) throw Error(ErrorKind::DegenerateInput, "PCA needs at least 3 rows");
  if (d < 2) throw Error(ErrorKind::Dimension, "PCA with 2 components needs at least 2 columns");

  PcaModel model;
  model.mean_vector.assign(d, 0.0);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t j = 0; j < d; ++j) model.mean_vector[j] += chunk_means(r, j);
  }
  for (double& m : model.mean_vector) m /= static_cast<double>(k);

  Eigen::MatrixXd centered(k, d);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t j = 0; j < d; ++j) {
      centered(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
          chunk_means(r, j) - model.mean_vector[j];
    }
  }
  const Eigen::MatrixXd covariance =
      (centered.transpose() * centered) / static_cast<double>(k - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::DegenerateInput, "covariance eigendecomposition failed");
  }
  // Eigen orders eigenvalues ascending.
  model.components = Matrix(2, d);
  for (std::size_t c = 0; c < 2; ++c) {
    const auto col = static_cast<Eigen::Index>(d - 1 - c);
    Eigen::VectorXd v = solver.eigenvectors().col(col);
    Eigen::Index pivot = 0;
    for (Eigen::Index j = 1; j < v.size(); ++j) {
      if (std::abs(v(j)) > std::abs(v(pivot))) pivot = j;
    }
    if (v(pivot) < 0) v = -v;
    for (std::size_t j = 0; j < d; ++j) model.components(c, j) = v(static_cast<Eigen::Index>(j));
    model.explained_variance[c] = std::max(0.0, solver.eigenvalues()(col));
  }
  return model;
}

std::array<double, 2> pca_project(const PcaModel& model, std::span<const double> vector) {
  if (vector.size() != model.mean_vector.size()) {
    throw Error(ErrorKind::Dimension, "vector has " + std::to_string(vector.size()) +
                                          " entries, model expects " +
                                          std::to_string(model.mean_vector.size()));
  }
  std::array<double, 2> out{};
  for (std::size_t c = 0; c < 2; ++c) {
    double acc = 0.0;
    for (std::size_t j = 0; j < vector.size(); ++j) {
      acc += (vector[j] - model.mean_vector[j]) * model.components(c, j);
    }
    out[c] = acc;
  }
  return out;
}

std::vector<double> chunk_mean(const ChunkMatrix& chunk) {
  std::vector<double> mean(chunk.cols(), 0.0);
  for (std::size_t r = 0; r < chunk.rows(); ++r) {
    const auto row = chunk.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) mean[j] += row[j];
  }
  for (double& m : mean) m /= static_cast<double>(chunk.rows());
  return mean;
}

Matrix ced_describe(const ChunkedStream& stream) {
  Matrix out(stream.chunks.size(), CedVector::kSize);
  parallel_for(stream.chunks.size(), [&](std::size_t t) {
    const auto v = ced_metafeatures(stream.chunks[t]);
    std::copy(v.values.begin(), v.values.end(), out.row(t).begin());
  });
  return out;
}

Matrix pca_describe_means(const Matrix& chunk_means) {
  const PcaModel model = pca_fit(chunk_means);
  Matrix out(chunk_means.rows(), 2);
  for (std::size_t t = 0; t < chunk_means.rows(); ++t) {
    const auto p = pca_project(model, chunk_means.row(t));
    out(t, 0) = p[0];
    out(t, 1) = p[1];
  }
  return out;
}

Matrix pca_describe(const ChunkedStream& stream) {
  Matrix means(stream.chunks.size(), stream.features);
  for (std::size_t t = 0; t < stream.chunks.size(); ++t) {
    const auto m = chunk_mean(stream.chunks[t]);
    std::copy(m.begin(), m.end(), means.row(t).begin());
  }
  return pca_describe_means(means);
}

}  // namespace ffm
