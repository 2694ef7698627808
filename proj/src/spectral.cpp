#include "twinbeam/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <memory>
#include <mutex>
#include <numbers>

#include "twinbeam/errors.hpp"
#include "twinbeam/rng.hpp"

namespace twinbeam::spectral {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FFTW planning is not thread-safe; executing distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex mutex;
  return mutex;
}

struct FftwRealBuffer {
  double* data = nullptr;
  explicit FftwRealBuffer(std::size_t n)
      : data(static_cast<double*>(fftw_malloc(sizeof(double) * n))) {}
  ~FftwRealBuffer() { fftw_free(data); }
  FftwRealBuffer(const FftwRealBuffer&) = delete;
  FftwRealBuffer& operator=(const FftwRealBuffer&) = delete;
};

struct FftwComplexBuffer {
  fftw_complex* data = nullptr;
  explicit FftwComplexBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(
            fftw_malloc(sizeof(fftw_complex) * n))) {}
  ~FftwComplexBuffer() { fftw_free(data); }
  FftwComplexBuffer(const FftwComplexBuffer&) = delete;
  FftwComplexBuffer& operator=(const FftwComplexBuffer&) = delete;
};

struct R2cPlan {
  fftw_plan plan = nullptr;
  std::size_t length = 0;
  FftwRealBuffer in;
  FftwComplexBuffer out;

  explicit R2cPlan(std::size_t n) : length(n), in(n), out(n / 2 + 1) {
    std::lock_guard<std::mutex> guard(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data, out.data,
                                FFTW_ESTIMATE);
  }
  ~R2cPlan() {
    std::lock_guard<std::mutex> guard(planner_mutex());
    fftw_destroy_plan(plan);
  }
};

std::vector<double> hann_window(std::size_t n) {
  std::vector<double> window(n);
  for (std::size_t i = 0; i < n; ++i) {
    window[i] = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(i) /
                                      static_cast<double>(n)));
  }
  return window;
}

void fill_gaussian_chunk(std::vector<double>& series, std::size_t chunk_index,
                         std::uint64_t seed, std::uint64_t stream_base) {
  const std::size_t begin = chunk_index * kStreamChunk;
  const std::size_t end = std::min(begin + kStreamChunk, series.size());
  GaussianStream stream(seed, stream_base + chunk_index);
  for (std::size_t i = begin; i < end; ++i) {
    series[i] = stream.next();
  }
}

// Windowed, mean-removed periodogram of one segment into |X_k|^2.
void segment_periodogram(std::span<const double> series, std::size_t offset,
                         std::span<const double> window, const R2cPlan& plan,
                         double* in, fftw_complex* out,
                         std::vector<double>& power) {
  const std::size_t length = window.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < length; ++i) mean += series[offset + i];
  mean /= static_cast<double>(length);
  for (std::size_t i = 0; i < length; ++i) {
    in[i] = (series[offset + i] - mean) * window[i];
  }
  fftw_execute_dft_r2c(plan.plan, in, out);
  for (std::size_t k = 0; k < power.size(); ++k) {
    power[k] = out[k][0] * out[k][0] + out[k][1] * out[k][1];
  }
}

struct WelchLayout {
  std::size_t segment = 0;
  std::size_t hop = 0;
  std::size_t n_segments = 0;
};

WelchLayout welch_layout(std::span<const double> series,
                         const AnalyzerSettings& settings) {
  validate(settings);
  WelchLayout layout;
  layout.segment = segment_length(settings);
  layout.hop = layout.segment / 2;
  if (series.size() < layout.segment) {
    throw analysis_error(
        "welch: insufficient samples, need at least one segment");
  }
  layout.n_segments = (series.size() - layout.segment) / layout.hop + 1;
  if (layout.n_segments < required_averages(settings)) {
    throw analysis_error(
        "welch: insufficient samples for the rbw/vbw average count");
  }
  return layout;
}

Psd finish_psd(const AnalyzerSettings& settings, const WelchLayout& layout,
               std::span<const double> window, std::vector<double> accum) {
  double window_power = 0.0;
  for (double w : window) window_power += w * w;
  const double scale = 1.0 / (static_cast<double>(layout.n_segments) *
                              settings.sample_rate * window_power);
  Psd psd;
  psd.n_averages = layout.n_segments;
  psd.frequencies.resize(accum.size());
  psd.values.resize(accum.size());
  const double df =
      settings.sample_rate / static_cast<double>(layout.segment);
  for (std::size_t k = 0; k < accum.size(); ++k) {
    psd.frequencies[k] = df * static_cast<double>(k);
    psd.values[k] = accum[k] * scale;
  }
  return psd;
}

}  // namespace

void validate(const AnalyzerSettings& settings) {
  if (!(settings.sample_rate > 0.0)) {
    throw validation_error("analyzer: sample_rate must be > 0");
  }
  if (settings.n_samples == 0) {
    throw validation_error("analyzer: n_samples must be > 0");
  }
  if (!(settings.rbw > 0.0 && settings.vbw > 0.0)) {
    throw validation_error("analyzer: rbw and vbw must be > 0");
  }
  if (!(settings.rbw > settings.vbw)) {
    throw validation_error("analyzer: rbw must exceed vbw");
  }
  if (segment_length(settings) < 8) {
    throw validation_error("analyzer: rbw too coarse for the sample rate");
  }
}

void check_alias_free(const AnalyzerSettings& settings,
                      double max_analysis_hz) {
  if (!(settings.sample_rate > 2.0 * max_analysis_hz)) {
    throw analysis_error(
        "aliasing: sample_rate must exceed twice the analysis band");
  }
}

std::size_t segment_length(const AnalyzerSettings& settings) {
  return static_cast<std::size_t>(
      std::llround(settings.sample_rate / settings.rbw));
}

std::size_t hop_length(const AnalyzerSettings& settings) {
  return segment_length(settings) / 2;
}

std::size_t required_averages(const AnalyzerSettings& settings) {
  return static_cast<std::size_t>(std::ceil(settings.rbw / settings.vbw));
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<double> gaussian_series(std::size_t n, std::uint64_t seed,
                                    std::uint64_t stream_base) {
  std::vector<double> series(n);
  const std::size_t n_chunks = (n + kStreamChunk - 1) / kStreamChunk;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(n_chunks); ++c) {
    fill_gaussian_chunk(series, static_cast<std::size_t>(c), seed,
                        stream_base);
  }
  return series;
}

Psd welch_psd(std::span<const double> series,
              const AnalyzerSettings& settings) {
  const WelchLayout layout = welch_layout(series, settings);
  const std::vector<double> window = hann_window(layout.segment);
  const std::size_t n_bins = layout.segment / 2 + 1;
  const R2cPlan plan(layout.segment);

  // Segments are statically split into blocks; block partial sums are merged
  // in index order, so the result does not depend on the thread count.
  const std::size_t n_blocks = std::min<std::size_t>(64, layout.n_segments);
  std::vector<std::vector<double>> block_sums(
      n_blocks, std::vector<double>(n_bins, 0.0));

#pragma omp parallel
  {
    FftwRealBuffer in(layout.segment);
    FftwComplexBuffer out(n_bins);
    std::vector<double> power(n_bins);
#pragma omp for schedule(dynamic)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(n_blocks);
         ++b) {
      const std::size_t begin =
          layout.n_segments * static_cast<std::size_t>(b) / n_blocks;
      const std::size_t end =
          layout.n_segments * (static_cast<std::size_t>(b) + 1) / n_blocks;
      auto& sums = block_sums[static_cast<std::size_t>(b)];
      for (std::size_t s = begin; s < end; ++s) {
        segment_periodogram(series, s * layout.hop, window, plan, in.data,
                            out.data, power);
        for (std::size_t k = 0; k < n_bins; ++k) sums[k] += power[k];
      }
    }
  }

  std::vector<double> accum(n_bins, 0.0);
  for (const auto& sums : block_sums) {
    for (std::size_t k = 0; k < n_bins; ++k) accum[k] += sums[k];
  }
  return finish_psd(settings, layout, window, std::move(accum));
}

void shape_spectrum(std::vector<double>& series, double sample_rate,
                    const std::function<double(double)>& target_psd) {
  const std::size_t n = series.size();
  if (n < 2) throw analysis_error("shape_spectrum: series too short");
  const std::size_t n_bins = n / 2 + 1;

  FftwRealBuffer real(n);
  FftwComplexBuffer spectrum(n_bins);
  std::memcpy(real.data, series.data(), sizeof(double) * n);

  fftw_plan forward;
  fftw_plan backward;
  {
    std::lock_guard<std::mutex> guard(planner_mutex());
    forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), real.data,
                                   spectrum.data, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(static_cast<int>(n), spectrum.data,
                                    real.data, FFTW_ESTIMATE);
  }
  fftw_execute(forward);

  const double df = sample_rate / static_cast<double>(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n_bins; ++k) {
    const double target = target_psd(df * static_cast<double>(k));
    if (!(target >= 0.0)) {
      throw validation_error("shape_spectrum: target PSD must be >= 0");
    }
    const double gain = std::sqrt(target) * inv_n;
    spectrum.data[k][0] *= gain;
    spectrum.data[k][1] *= gain;
  }
  fftw_execute(backward);
  std::memcpy(series.data(), real.data, sizeof(double) * n);
  {
    std::lock_guard<std::mutex> guard(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
}

namespace reference {

std::vector<double> gaussian_series(std::size_t n, std::uint64_t seed,
                                    std::uint64_t stream_base) {
  std::vector<double> series(n);
  const std::size_t n_chunks = (n + kStreamChunk - 1) / kStreamChunk;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    fill_gaussian_chunk(series, c, seed, stream_base);
  }
  return series;
}

Psd welch_psd(std::span<const double> series,
              const AnalyzerSettings& settings) {
  const WelchLayout layout = welch_layout(series, settings);
  const std::vector<double> window = hann_window(layout.segment);
  const std::size_t n_bins = layout.segment / 2 + 1;
  const R2cPlan plan(layout.segment);

  FftwRealBuffer in(layout.segment);
  FftwComplexBuffer out(n_bins);
  std::vector<double> power(n_bins);
  std::vector<double> accum(n_bins, 0.0);
  for (std::size_t s = 0; s < layout.n_segments; ++s) {
    segment_periodogram(series, s * layout.hop, window, plan, in.data,
                        out.data, power);
    for (std::size_t k = 0; k < n_bins; ++k) accum[k] += power[k];
  }
  return finish_psd(settings, layout, window, std::move(accum));
}

}  // namespace reference

}  // namespace twinbeam::spectral
