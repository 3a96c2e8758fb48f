#include "ffm/metadescriptor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ffm/error.hpp"
#include "ffm/parallel.hpp"
#include "ffm/signal.hpp"

namespace ffm {

FrequencySignature chunk_frequency_signature(const ChunkMatrix& chunk) {
  if (chunk.rows() == 0) throw Error(ErrorKind::Dimension, "chunk has no samples");
  const std::size_t d = chunk.cols();
  if (d < 2) throw Error(ErrorKind::Dimension, "samples need at least 2 features");
  for (float v : chunk.data()) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InputDomain, "chunk contains non-finite values");
  }

  const FftPlan& plan = cached_plan(d);
  std::vector<Complex> work;
  std::vector<Complex> scratch;
  std::vector<double> spectrum(d / 2);
  std::vector<double> sum(d / 2, 0.0);
  // Rows are accumulated in order, so the result never depends on threading.
  for (std::size_t r = 0; r < chunk.rows(); ++r) {
    dft_real_half_into(chunk.row(r), plan, work, scratch, std::span<double>(spectrum));
    for (std::size_t f = 0; f < sum.size(); ++f) sum[f] += spectrum[f];
  }
  const double inv = 1.0 / static_cast<double>(chunk.rows());
  for (double& v : sum) v *= inv;
  return {std::move(sum)};
}

FrequencySelection select_frequencies(std::span<const FrequencySignature> signatures,
                                      std::size_t n) {
  if (signatures.size() < 2) {
    throw Error(ErrorKind::DegenerateInput, "frequency selection needs at least 2 chunk signatures");
  }
  const std::size_t half = signatures.front().values.size();
  for (const auto& s : signatures) {
    if (s.values.size() != half) throw Error(ErrorKind::Dimension, "signatures differ in length");
  }
  if (n == 0 || n > half) {
    throw Error(ErrorKind::Configuration, "cannot select " + std::to_string(n) + " of " +
                                              std::to_string(half) + " frequencies");
  }

  const double k = static_cast<double>(signatures.size());
  std::vector<double> mean(half, 0.0);
  for (const auto& s : signatures) {
    for (std::size_t f = 0; f < half; ++f) mean[f] += s.values[f];
  }
  for (double& m : mean) m /= k;
  std::vector<double> variances(half, 0.0);
  for (const auto& s : signatures) {
    for (std::size_t f = 0; f < half; ++f) {
      const double dev = s.values[f] - mean[f];
      variances[f] += dev * dev;
    }
  }
  for (double& v : variances) v /= k;

  std::vector<std::size_t> order(half);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return variances[a] > variances[b]; });
  order.resize(n);
  return {std::move(order), std::move(variances)};
}

Metadescription assemble_metadescription(std::span<const FrequencySignature> signatures,
                                         std::size_t n, std::size_t d) {
  auto selection = select_frequencies(signatures, n);
  if (signatures.front().values.size() != d / 2) {
    throw Error(ErrorKind::Dimension, "signature length does not match d/2");
  }
  Metadescription meta;
  meta.n = n;
  meta.d = d;
  meta.R = Matrix(signatures.size(), n);
  for (std::size_t t = 0; t < signatures.size(); ++t) {
    for (std::size_t j = 0; j < n; ++j) meta.R(t, j) = signatures[t].values[selection.selected[j]];
  }
  meta.selected = std::move(selection.selected);
  meta.variances = std::move(selection.variances);
  return meta;
}

Metadescription metadescribe(const ChunkedStream& stream, std::size_t n) {
  validate_shape(stream);
  if (stream.chunks.size() < 2) {
    throw Error(ErrorKind::DegenerateInput, "metadescription needs at least 2 chunks");
  }
  if (stream.features < 2) throw Error(ErrorKind::Dimension, "samples need at least 2 features");
  if (n == 0 || n > stream.features / 2) {
    throw Error(ErrorKind::Configuration, "cannot select " + std::to_string(n) + " of " +
                                              std::to_string(stream.features / 2) + " frequencies");
  }
  std::vector<FrequencySignature> signatures(stream.chunks.size());
  parallel_for(stream.chunks.size(), [&](std::size_t t) {
    signatures[t] = chunk_frequency_signature(stream.chunks[t]);
  });
  return assemble_metadescription(signatures, n, stream.features);
}

Matrix render_chunk_image(const Metadescription& meta, std::size_t chunk_index) {
  if (chunk_index >= meta.R.rows()) {
    throw Error(ErrorKind::Index, "chunk index " + std::to_string(chunk_index) + " out of range (" +
                                      std::to_string(meta.R.rows()) + " chunks)");
  }
  if (meta.n > meta.d) throw Error(ErrorKind::Dimension, "image side n exceeds d");
  Matrix image(meta.n, meta.n);
  for (std::size_t j = 0; j < meta.n; ++j) {
    const auto row = idft_single_component(meta.R(chunk_index, j), meta.selected[j], meta.d, meta.n);
    std::copy(row.begin(), row.end(), image.row(j).begin());
  }
  return image;
}

}  // namespace ffm
