#include "twinbeam/opo_quantum.hpp"

#include <algorithm>
#include <cmath>

#include "twinbeam/constants.hpp"
#include "twinbeam/errors.hpp"
#include "twinbeam/io_util.hpp"

namespace twinbeam::opo {

void validate(const OpoConfig& cfg) {
  if (!(cfg.t1 > 0.0 && cfg.t1 < 1.0)) {
    throw validation_error("opo.t1 must be in (0,1)");
  }
  if (!(cfg.l_diss >= 0.0 && cfg.l_diss < 1.0)) {
    throw validation_error("opo.l_diss must be in [0,1)");
  }
  if (!(cfg.t1 + cfg.l_diss < 1.0)) {
    throw validation_error("opo: t1 + l_diss must be < 1");
  }
  if (!(cfg.t2_pump > 0.0 && cfg.t2_pump < 1.0)) {
    throw validation_error("opo.t2_pump must be in (0,1)");
  }
  if (!(cfg.crystal_index >= 1.0)) {
    throw validation_error("opo.crystal_index must be >= 1");
  }
  if (!(cfg.crystal_length > 0.0) || !(cfg.air_gap >= 0.0)) {
    throw validation_error("opo: cavity lengths must be positive");
  }
  if (!(cfg.p_threshold > 0.0)) {
    throw validation_error("opo.p_threshold must be > 0");
  }
  if (!(cfg.pump_wavelength > 0.0 && cfg.signal_wavelength > 0.0 &&
        cfg.idler_wavelength > 0.0)) {
    throw validation_error("opo: wavelengths must be positive");
  }
  if (check_energy_conservation(cfg) >= 1e-4) {
    throw validation_error(
        "opo: signal/idler/pump wavelengths violate energy conservation");
  }
}

std::string to_csv(const NoiseSpectrum& spectrum) {
  std::string out = "freq_hz,psd_rel_shot,psd_db\n";
  for (std::size_t i = 0; i < spectrum.frequencies.size(); ++i) {
    out += fmt_sig(spectrum.frequencies[i]);
    out += ',';
    out += fmt_sig(spectrum.values[i]);
    out += ',';
    out += fmt_sig(to_db(spectrum.values[i]));
    out += '\n';
  }
  return out;
}

double escape_efficiency(const OpoConfig& cfg) {
  validate(cfg);
  return cfg.t1 / (cfg.t1 + cfg.l_diss);
}

CavityLinewidth linewidth(const OpoConfig& cfg) {
  validate(cfg);
  const double l_opt = cfg.air_gap + cfg.crystal_index * cfg.crystal_length;
  CavityLinewidth lw;
  lw.fsr = kSpeedOfLight / (2.0 * l_opt);
  lw.finesse = 2.0 * std::numbers::pi / (cfg.t1 + cfg.l_diss);
  lw.fwhm = lw.fsr / lw.finesse;
  lw.half_width = 0.5 * lw.fwhm;
  return lw;
}

double squeezing_spectrum(const OpoConfig& cfg, double eta_det,
                          double omega_hz) {
  if (!(eta_det > 0.0 && eta_det <= 1.0)) {
    throw validation_error("eta_det must be in (0,1]");
  }
  if (omega_hz < 0.0) {
    throw validation_error("analysis frequency must be >= 0");
  }
  const double omega_c = linewidth(cfg).half_width;
  const double lorentzian = 1.0 / (1.0 + (omega_hz / omega_c) * (omega_hz / omega_c));
  return 1.0 - eta_det * escape_efficiency(cfg) * lorentzian;
}

double squeezing_spectrum(const OpoConfig& cfg, const DetectionChain& det,
                          double omega_hz) {
  validate(det);
  return squeezing_spectrum(cfg, det.eta(), omega_hz);
}

NoiseSpectrum sample_spectrum(const OpoConfig& cfg, double eta_det,
                              double f_lo, double f_hi, std::size_t points) {
  if (points < 2 || !(f_hi > f_lo) || f_lo < 0.0) {
    throw analysis_error("sample_spectrum: bad frequency grid");
  }
  NoiseSpectrum spectrum;
  spectrum.frequencies.resize(points);
  spectrum.values.resize(points);
  const double step = (f_hi - f_lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double f = f_lo + step * static_cast<double>(i);
    spectrum.frequencies[i] = f;
    spectrum.values[i] = squeezing_spectrum(cfg, eta_det, f);
  }
  return spectrum;
}

double detection_corrected(double s_measured, double eta_det) {
  if (!(eta_det > 0.0 && eta_det <= 1.0)) {
    throw validation_error("eta_det must be in (0,1]");
  }
  const double vacuum = 1.0 - eta_det;
  if (s_measured < vacuum) {
    throw validation_error(
        "detection_corrected: measured PSD below the vacuum floor implies a "
        "negative inferred PSD");
  }
  return (s_measured - vacuum) / eta_det;
}

double apply_loss(double s, double eta) {
  return eta * s + (1.0 - eta);
}

double conversion_efficiency(const OpoConfig& cfg, double pump_w) {
  validate(cfg);
  if (!(pump_w > 0.0)) {
    throw validation_error("conversion: pump must be > 0");
  }
  const double sigma = pump_w / cfg.p_threshold;
  if (sigma <= 1.0) return 0.0;
  const double depletion = (4.0 / sigma) * (std::sqrt(sigma) - 1.0);
  return std::clamp(escape_efficiency(cfg) * depletion, 0.0, 1.0);
}

double check_energy_conservation(const OpoConfig& cfg) {
  const double inv_pump = 1.0 / cfg.pump_wavelength;
  const double residual =
      1.0 / cfg.signal_wavelength + 1.0 / cfg.idler_wavelength - inv_pump;
  return std::abs(residual) / inv_pump;
}

OpoConfig calibrate_threshold(OpoConfig cfg, double measured_p_th) {
  if (!(measured_p_th > 0.0)) {
    throw validation_error("threshold calibration: p_th must be > 0");
  }
  cfg.p_threshold = measured_p_th;
  validate(cfg);
  return cfg;
}

double effective_coupling(const OpoConfig& cfg) {
  validate(cfg);
  return (cfg.t1 + cfg.l_diss) *
         std::sqrt(cfg.t2_pump / (4.0 * cfg.p_threshold));
}

double threshold_scale(const OpoConfig& cfg, double new_t1) {
  validate(cfg);
  if (!(new_t1 > 0.0 && new_t1 + cfg.l_diss < 1.0)) {
    throw validation_error("threshold_scale: new t1 out of range");
  }
  const double ratio = (new_t1 + cfg.l_diss) / (cfg.t1 + cfg.l_diss);
  return ratio * ratio;
}

}  // namespace twinbeam::opo
