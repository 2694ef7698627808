#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace twinbeam::spectral {

// Spectrum-analyzer emulation settings.  rbw sets the Welch segment length
// (round(sample_rate / rbw)), vbw the required number of averages (rbw/vbw).
struct AnalyzerSettings {
  double sample_rate = 50e6;        // Hz
  std::size_t n_samples = 1u << 22;
  double rbw = 1e5;                 // Hz
  double vbw = 1e2;                 // Hz
};
void validate(const AnalyzerSettings& settings);
// Throws analysis_error when sample_rate <= 2 * max_analysis_hz.
void check_alias_free(const AnalyzerSettings& settings,
                      double max_analysis_hz);

std::size_t segment_length(const AnalyzerSettings& settings);
std::size_t hop_length(const AnalyzerSettings& settings);  // 50% overlap
std::size_t required_averages(const AnalyzerSettings& settings);

// One-sided PSD estimate; a unit-variance white input at sample_rate gives a
// flat 1/sample_rate density.
struct Psd {
  std::vector<double> frequencies;  // Hz, k * sample_rate / segment_length
  std::vector<double> values;
  std::size_t n_averages = 0;
};

// Samples are generated in fixed chunks, each from its own (seed, stream)
// RNG, so the series is identical for any worker count.
inline constexpr std::size_t kStreamChunk = 4096;

std::size_t next_pow2(std::size_t n);

// Standard-normal series of length n; stream indices start at stream_base.
std::vector<double> gaussian_series(std::size_t n, std::uint64_t seed,
                                    std::uint64_t stream_base);

// Averaged periodogram: Hann window, 50% overlap, per-segment mean removal.
Psd welch_psd(std::span<const double> series,
              const AnalyzerSettings& settings);

// Circular frequency-domain filter: scales the spectrum of `series` by
// sqrt(target_psd(f)); target_psd is relative to the white input's density.
void shape_spectrum(std::vector<double>& series, double sample_rate,
                    const std::function<double(double)>& target_psd);

// Serial implementations kept as the reference path for testing and for the
// kernel benchmark; same contracts as the parallel versions above.
namespace reference {
std::vector<double> gaussian_series(std::size_t n, std::uint64_t seed,
                                    std::uint64_t stream_base);
Psd welch_psd(std::span<const double> series,
              const AnalyzerSettings& settings);
}  // namespace reference

}  // namespace twinbeam::spectral
