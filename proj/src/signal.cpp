#include "ffm/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "ffm/error.hpp"

namespace ffm {
namespace {

Complex unit_root(std::size_t numerator, std::size_t denominator) {
  // exp(-2 pi i numerator / denominator), with the argument reduced first.
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(numerator % denominator) /
                       static_cast<double>(denominator);
  return {std::cos(angle), std::sin(angle)};
}

std::vector<std::size_t> factorize(std::size_t n) {
  std::vector<std::size_t> factors;
  while (n % 4 == 0) {
    factors.push_back(4);
    n /= 4;
  }
  while (n % 2 == 0) {
    factors.push_back(2);
    n /= 2;
  }
  for (std::size_t p = 3; p * p <= n; p += 2) {
    while (n % p == 0) {
      factors.push_back(p);
      n /= p;
    }
  }
  if (n > 1) factors.push_back(n);
  return factors;
}

std::size_t next_power_of_two(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

}  // namespace

struct FftPlan::Bluestein {
  std::size_t padded;
  FftPlan inner;
  std::vector<Complex> chirp;           // exp(-pi i t^2 / n)
  std::vector<Complex> kernel_spectrum;  // FFT of the conjugate chirp, wrapped

  explicit Bluestein(std::size_t n)
      : padded(next_power_of_two(2 * n - 1)), inner(padded), chirp(n), kernel_spectrum(padded) {
    for (std::size_t t = 0; t < n; ++t) {
      // t^2 mod 2n keeps the argument small for large t.
      const std::size_t sq = (t * t) % (2 * n);
      const double angle = -std::numbers::pi * static_cast<double>(sq) / static_cast<double>(n);
      chirp[t] = {std::cos(angle), std::sin(angle)};
    }
    kernel_spectrum[0] = std::conj(chirp[0]);
    for (std::size_t t = 1; t < n; ++t) {
      kernel_spectrum[t] = std::conj(chirp[t]);
      kernel_spectrum[padded - t] = std::conj(chirp[t]);
    }
    std::vector<Complex> scratch(inner.scratch_size());
    inner.forward(kernel_spectrum, scratch);
  }
};

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (n == 0) throw Error(ErrorKind::Dimension, "FFT length must be positive");
  const auto factors = factorize(n);
  if (!factors.empty() && factors.back() > kMaxDirectRadix) {
    bluestein_ = std::make_unique<Bluestein>(n);
    return;
  }
  std::size_t span = n;
  for (std::size_t p : factors) {
    Stage stage{p, span, {}};
    const std::size_t m = span / p;
    stage.twiddles.resize(m * p);
    for (std::size_t q = 0; q < m; ++q) {
      for (std::size_t u = 0; u < p; ++u) stage.twiddles[q * p + u] = unit_root(q * u, span);
    }
    std::vector<Complex> roots(p);
    for (std::size_t j = 0; j < p; ++j) roots[j] = unit_root(j, p);
    radix_roots_.push_back(std::move(roots));
    stages_.push_back(std::move(stage));
    span = m;
  }
}

FftPlan::~FftPlan() = default;
FftPlan::FftPlan(FftPlan&&) noexcept = default;
FftPlan& FftPlan::operator=(FftPlan&&) noexcept = default;

std::size_t FftPlan::scratch_size() const noexcept {
  return bluestein_ ? 2 * bluestein_->padded + bluestein_->inner.scratch_size() : n_;
}

void FftPlan::stockham(std::span<Complex> data, std::span<Complex> scratch) const {
  Complex* x = data.data();
  Complex* y = scratch.data();
  std::size_t stride = 1;
  std::vector<Complex> gathered;
  for (std::size_t s = 0; s < stages_.size(); ++s) {
    const Stage& stage = stages_[s];
    const std::size_t p = stage.radix;
    const std::size_t m = stage.span / p;
    const Complex* tw = stage.twiddles.data();
    if (p == 2) {
      for (std::size_t q = 0; q < m; ++q) {
        const Complex w1 = tw[q * 2 + 1];
        for (std::size_t r = 0; r < stride; ++r) {
          const Complex a0 = x[r + stride * q];
          const Complex a1 = x[r + stride * (q + m)];
          y[r + stride * (2 * q)] = a0 + a1;
          y[r + stride * (2 * q + 1)] = (a0 - a1) * w1;
        }
      }
    } else if (p == 4) {
      for (std::size_t q = 0; q < m; ++q) {
        const Complex w1 = tw[q * 4 + 1];
        const Complex w2 = tw[q * 4 + 2];
        const Complex w3 = tw[q * 4 + 3];
        for (std::size_t r = 0; r < stride; ++r) {
          const Complex a0 = x[r + stride * q];
          const Complex a1 = x[r + stride * (q + m)];
          const Complex a2 = x[r + stride * (q + 2 * m)];
          const Complex a3 = x[r + stride * (q + 3 * m)];
          const Complex b0 = a0 + a2;
          const Complex b1 = a0 - a2;
          const Complex b2 = a1 + a3;
          const Complex diff = a1 - a3;
          const Complex b3(diff.imag(), -diff.real());  // -i * (a1 - a3)
          y[r + stride * (4 * q)] = b0 + b2;
          y[r + stride * (4 * q + 1)] = (b1 + b3) * w1;
          y[r + stride * (4 * q + 2)] = (b0 - b2) * w2;
          y[r + stride * (4 * q + 3)] = (b1 - b3) * w3;
        }
      }
    } else {
      const std::vector<Complex>& roots = radix_roots_[s];
      gathered.resize(p);
      for (std::size_t q = 0; q < m; ++q) {
        for (std::size_t r = 0; r < stride; ++r) {
          for (std::size_t k = 0; k < p; ++k) gathered[k] = x[r + stride * (q + k * m)];
          for (std::size_t u = 0; u < p; ++u) {
            Complex acc = gathered[0];
            std::size_t idx = 0;
            for (std::size_t k = 1; k < p; ++k) {
              idx += u;
              if (idx >= p) idx -= p;
              acc += gathered[k] * roots[idx];
            }
            y[r + stride * (p * q + u)] = acc * tw[q * p + u];
          }
        }
      }
    }
    std::swap(x, y);
    stride *= p;
  }
  if (x != data.data()) std::copy(x, x + n_, data.data());
}

void FftPlan::forward(std::span<Complex> data, std::span<Complex> scratch) const {
  if (data.size() != n_ || scratch.size() < scratch_size()) {
    throw Error(ErrorKind::Dimension, "FFT buffer size mismatch");
  }
  if (!bluestein_) {
    stockham(data, scratch);
    return;
  }
  const Bluestein& b = *bluestein_;
  std::span<Complex> padded = scratch.subspan(0, b.padded);
  std::span<Complex> inner_scratch = scratch.subspan(b.padded);
  std::fill(padded.begin(), padded.end(), Complex{});
  for (std::size_t t = 0; t < n_; ++t) padded[t] = data[t] * b.chirp[t];
  b.inner.forward(padded, inner_scratch);
  for (std::size_t j = 0; j < b.padded; ++j) padded[j] *= b.kernel_spectrum[j];
  b.inner.inverse(padded, inner_scratch);
  for (std::size_t k = 0; k < n_; ++k) data[k] = padded[k] * b.chirp[k];
}

void FftPlan::inverse(std::span<Complex> data, std::span<Complex> scratch) const {
  for (auto& v : data) v = std::conj(v);
  forward(data, scratch);
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& v : data) v = std::conj(v) * scale;
}

const FftPlan& cached_plan(std::size_t n) {
  thread_local std::unordered_map<std::size_t, std::unique_ptr<FftPlan>> plans;
  auto& slot = plans[n];
  if (!slot) slot = std::make_unique<FftPlan>(n);
  return *slot;
}

RealSpectrum dft_real_half(std::span<const double> x) {
  if (x.size() < 2) throw Error(ErrorKind::Dimension, "DFT input needs at least 2 values");
  for (double v : x) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InputDomain, "DFT input contains non-finite values");
  }
  RealSpectrum spectrum;
  spectrum.source_dim = x.size();
  spectrum.values.resize(x.size() / 2);
  thread_local std::vector<Complex> work;
  thread_local std::vector<Complex> scratch;
  dft_real_half_into(x, cached_plan(x.size()), work, scratch, std::span<double>(spectrum.values));
  return spectrum;
}

std::vector<double> idft_single_component(double value, std::size_t freq_index, std::size_t d,
                                          std::size_t n_out) {
  if (d == 0 || n_out == 0) throw Error(ErrorKind::Dimension, "dimensions must be positive");
  if (freq_index >= d / 2) {
    throw Error(ErrorKind::Index, "frequency index " + std::to_string(freq_index) +
                                      " out of range for d=" + std::to_string(d));
  }
  if (n_out > d) throw Error(ErrorKind::Dimension, "cannot return more samples than d");

  std::vector<Complex> spectrum(d);
  spectrum[freq_index] = value;
  if (freq_index > 0) spectrum[d - freq_index] = value;
  std::vector<Complex> scratch(cached_plan(d).scratch_size());
  cached_plan(d).inverse(spectrum, scratch);

  std::vector<double> out(n_out);
  for (std::size_t t = 0; t < n_out; ++t) out[t] = spectrum[t].real();
  return out;
}

}  // namespace ffm
