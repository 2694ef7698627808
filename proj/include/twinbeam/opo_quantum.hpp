#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace twinbeam::opo {

// Loss budget and geometry of the semimonolithic signal/idler cavity.
struct OpoConfig {
  double t1 = 0.03;          // output-coupler intensity transmission, signal
  double t2_pump = 0.11;     // coupler transmission at the pump wavelength
  double l_diss = 0.0036;    // round-trip dissipative intensity loss, signal
  double crystal_length = 7e-3;  // m
  double crystal_index = 1.83;
  double air_gap = 23e-3;        // m
  double pump_wavelength = 540.0065e-9;   // m
  double signal_wavelength = 1080.030e-9; // m
  double idler_wavelength = 1079.996e-9;  // m
  double p_threshold = 3.7e-3;            // W
};
void validate(const OpoConfig& cfg);

struct CavityLinewidth {
  double fsr = 0.0;         // Hz
  double finesse = 0.0;
  double fwhm = 0.0;        // Hz
  double half_width = 0.0;  // Hz, the Lorentzian corner frequency
};

struct DetectionChain {
  double quantum_efficiency = 0.94;
  double path_transmission = 0.96;
  double electronic_floor_db = -22.0;  // relative to shot noise
  double cmrr_db = 28.0;
  double saturation = 7.5e-3;  // W per photodiode

  double eta() const { return quantum_efficiency * path_transmission; }
};
void validate(const DetectionChain& det);

// Frequency-indexed PSD normalized to the shot-noise limit (1.0 = shot).
struct NoiseSpectrum {
  std::vector<double> frequencies;  // Hz, strictly increasing
  std::vector<double> values;       // > 0
};

// CSV serialization: header freq_hz,psd_rel_shot,psd_db.
std::string to_csv(const NoiseSpectrum& spectrum);

// Fraction of the signal loss rate that leaves through the useful coupler:
// t1 / (t1 + l_diss).
double escape_efficiency(const OpoConfig& cfg);

// Linear-cavity linewidth: one-way optical length air_gap + n * crystal,
// fsr = c / (2 L_opt), finesse = 2 pi / (t1 + l_diss), fwhm = fsr / finesse.
CavityLinewidth linewidth(const OpoConfig& cfg);

// Intensity-difference noise PSD relative to shot at analysis frequency
// omega_hz: S = 1 - eta_det * eta_esc / (1 + (omega/omega_c)^2).
double squeezing_spectrum(const OpoConfig& cfg, double eta_det,
                          double omega_hz);
double squeezing_spectrum(const OpoConfig& cfg, const DetectionChain& det,
                          double omega_hz);

NoiseSpectrum sample_spectrum(const OpoConfig& cfg, double eta_det,
                              double f_lo, double f_hi, std::size_t points);

// Invert a measured relative PSD for detection loss:
// s0 = (s_measured - (1 - eta_det)) / eta_det.
double detection_corrected(double s_measured, double eta_det);

// Loss applied to a relative PSD as vacuum admixture; inverse of the above.
double apply_loss(double s, double eta);

// Pump-depletion conversion: eta_esc * (4/sigma) * (sqrt(sigma) - 1) above
// threshold (sigma = pump / p_threshold), clamped to [0, 1].
double conversion_efficiency(const OpoConfig& cfg, double pump_w);

// |1/ls + 1/li - 1/lp| / (1/lp).
double check_energy_conservation(const OpoConfig& cfg);

// Store a measured threshold and return the updated config.
OpoConfig calibrate_threshold(OpoConfig cfg, double measured_p_th);

// Effective nonlinear-coupling scalar recorded for reporting only.
double effective_coupling(const OpoConfig& cfg);

// (total loss)^2 scaling of the threshold when re-coupling the cavity:
// p_th(new_t1) / p_th = ((new_t1 + l) / (t1 + l))^2.
double threshold_scale(const OpoConfig& cfg, double new_t1);

}  // namespace twinbeam::opo
