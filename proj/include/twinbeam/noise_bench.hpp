#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "twinbeam/opo_quantum.hpp"
#include "twinbeam/spectral.hpp"

namespace twinbeam::bench {

// Analysis band of the twin-beam bench.
inline constexpr double kBandLoHz = 1e6;
inline constexpr double kBandHiHz = 10e6;

// Semiclassical noise budget of the balanced detection chain.  All PSDs are
// relative to the shot-noise limit (shot_level).
struct TwinBeamNoiseModel {
  std::function<double(double)> diff_spectrum;  // pre-detection S(omega)
  double excess_common_db = 15.0;  // common-mode excess on each beam
  double eta_det = 0.9024;         // detection efficiency, vacuum admixture
  double cmrr_db = 28.0;           // balanced-subtractor rejection
  double electronic_floor_db = -22.0;  // difference-channel floor, light off
  double shot_level = 1.0;
  std::uint64_t seed = 1;
  std::optional<double> mean_power_w;  // per beam, for the saturation guard
  double saturation_w = 7.5e-3;
};
void validate(const TwinBeamNoiseModel& model);

// True when the declared mean optical power stays below detector saturation.
bool power_within_saturation(const TwinBeamNoiseModel& model);

struct PhotocurrentPair {
  std::vector<double> i1, i2;
};

// Twin photocurrents: difference channel shaped to eta*S + (1-eta), common
// channel at the excess level, independent per-detector electronic noise.
PhotocurrentPair synthesize_photocurrents(
    const TwinBeamNoiseModel& model, const spectral::AnalyzerSettings& settings);

// Electronic noise only (light off), for floor calibration.
PhotocurrentPair synthesize_dark(const TwinBeamNoiseModel& model,
                                 const spectral::AnalyzerSettings& settings);

// i1 - i2, optionally with common-mode leakage at -cmrr_db.
std::vector<double> balanced_difference(const PhotocurrentPair& currents,
                                        std::optional<double> cmrr_db);
std::vector<double> beam_sum(const PhotocurrentPair& currents);

// Welch PSD scaled to units of the shot-noise limit.
opo::NoiseSpectrum relative_psd(std::span<const double> series,
                                const spectral::AnalyzerSettings& settings,
                                double shot_level);

// 45-degree splitting of uncorrelated beams: the flat reference trace (a).
opo::NoiseSpectrum shot_noise_calibration(
    const TwinBeamNoiseModel& model, const spectral::AnalyzerSettings& settings);

// Divide by the mean over [lo, hi]; idempotent.
opo::NoiseSpectrum normalize_by_mean(const opo::NoiseSpectrum& spectrum,
                                     double lo_hz, double hi_hz);
double band_mean(const opo::NoiseSpectrum& spectrum, double lo_hz,
                 double hi_hz);

// Pointwise 10 log10(b/a); values of the returned spectrum are in dB.
opo::NoiseSpectrum measure_squeezing(const opo::NoiseSpectrum& trace_b,
                                     const opo::NoiseSpectrum& trace_a);

struct BandMinimum {
  double value = 0.0;
  double frequency = 0.0;
};
BandMinimum minimum_in_band(const opo::NoiseSpectrum& spectrum, double lo_hz,
                            double hi_hz);

// Model predictions for the same traces, used for reporting and as the
// Monte-Carlo cross-check level.
double analytic_difference_psd(const TwinBeamNoiseModel& model, double f_hz,
                               bool with_cmrr);
double analytic_calibration_psd(const TwinBeamNoiseModel& model);

}  // namespace twinbeam::bench
