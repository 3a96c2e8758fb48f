#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace ffm {

using Complex = std::complex<double>;

/// Complex DFT of arbitrary length with the unnormalized forward convention
/// X[f] = sum_t x[t] exp(-2 pi i f t / n).
///
/// Lengths whose prime factors are all small run through a mixed-radix
/// Stockham autosort pass sequence. Anything with a prime factor above
/// `kMaxDirectRadix` goes through Bluestein's chirp-z reformulation on a
/// power-of-two grid, so coefficient k always corresponds to the true
/// length-n frequency k (no zero-padding of the input).
class FftPlan {
 public:
  static constexpr std::size_t kMaxDirectRadix = 31;

  explicit FftPlan(std::size_t n);
  ~FftPlan();
  FftPlan(FftPlan&&) noexcept;
  FftPlan& operator=(FftPlan&&) noexcept;

  std::size_t size() const noexcept { return n_; }

  /// In-place forward transform. `scratch` must hold at least scratch_size()
  /// elements; it is overwritten.
  void forward(std::span<Complex> data, std::span<Complex> scratch) const;
  /// In-place inverse transform including the 1/n factor.
  void inverse(std::span<Complex> data, std::span<Complex> scratch) const;

  std::size_t scratch_size() const noexcept;

 private:
  struct Stage {
    std::size_t radix;
    std::size_t span;                 // length of the sub-transform at this stage
    std::vector<Complex> twiddles;    // (span / radix) * radix entries
  };
  struct Bluestein;

  void stockham(std::span<Complex> data, std::span<Complex> scratch) const;

  std::size_t n_;
  std::vector<Stage> stages_;
  std::vector<std::vector<Complex>> radix_roots_;  // indexed by stage
  std::unique_ptr<Bluestein> bluestein_;
};

/// Per-thread cache of plans keyed by length.
const FftPlan& cached_plan(std::size_t n);

/// Real part of the first floor(d/2) coefficients of an unnormalized DFT.
struct RealSpectrum {
  std::vector<double> values;
  std::size_t source_dim = 0;
};

RealSpectrum dft_real_half(std::span<const double> x);

/// Fills `out` (length floor(d/2)) with the real half-spectrum of `x`, using
/// caller-owned buffers. `work` and `scratch` are resized as needed.
/// Input finiteness is not checked here.
template <typename T>
void dft_real_half_into(std::span<const T> x, const FftPlan& plan, std::vector<Complex>& work,
                        std::vector<Complex>& scratch, std::span<double> out) {
  work.resize(x.size());
  scratch.resize(plan.scratch_size());
  for (std::size_t t = 0; t < x.size(); ++t) work[t] = Complex(static_cast<double>(x[t]), 0.0);
  plan.forward(work, scratch);
  for (std::size_t f = 0; f < out.size(); ++f) out[f] = work[f].real();
}

/// Inverse DFT (with 1/d) of a spectrum that is zero everywhere except
/// `value` at `freq_index` and, for freq_index > 0, the same value at the
/// mirrored index d - freq_index. Returns the first `n_out` samples.
std::vector<double> idft_single_component(double value, std::size_t freq_index, std::size_t d,
                                          std::size_t n_out);

}  // namespace ffm
