#include "twinbeam/laser_model.hpp"

#include <algorithm>
#include <cmath>

#include "twinbeam/errors.hpp"

namespace twinbeam::laser {

void validate(const GainMedium& medium) {
  if (!(medium.absorption_coefficient > 0.0)) {
    throw validation_error("gain medium: absorption coefficient must be > 0");
  }
  if (!(medium.length >= 0.0)) {
    throw validation_error("gain medium: length must be >= 0");
  }
}

double absorbed_fraction(const GainMedium& medium) {
  validate(medium);
  return -std::expm1(-medium.absorption_coefficient * medium.length);
}

void validate(const LaserConfig& config) {
  if (!(config.threshold_pump > 0.0)) {
    throw validation_error("laser config: threshold_pump must be > 0");
  }
  if (!(config.slope_efficiency > 0.0 && config.slope_efficiency < 1.0)) {
    throw validation_error("laser config: slope_efficiency must be in (0,1)");
  }
  if (!(config.round_trip_loss > 0.0 && config.round_trip_loss < 1.0)) {
    throw validation_error("laser config: round_trip_loss must be in (0,1)");
  }
}

double green_output_linear(const LaserConfig& config, double pump_w) {
  validate(config);
  if (pump_w < 0.0) throw validation_error("laser: pump must be >= 0");
  return std::max(0.0, config.slope_efficiency *
                           (pump_w - config.threshold_pump));
}

double green_output_shg(const LaserConfig& config, double pump_w) {
  validate(config);
  if (!config.shg_coupling || !config.saturation_power) {
    throw config_error(
        "laser config: green_output_shg needs shg_coupling and "
        "saturation_power");
  }
  if (pump_w < 0.0) throw validation_error("laser: pump must be >= 0");
  const double kappa = *config.shg_coupling;
  const double psat = *config.saturation_power;
  if (!(kappa > 0.0) || !(psat > 0.0)) {
    throw config_error("laser config: shg parameters must be positive");
  }
  const double loss = config.round_trip_loss;
  const double g0 = loss * pump_w / config.threshold_pump;
  if (g0 <= loss) return 0.0;  // at or below threshold
  // kappa/psat * Pc^2 + (kappa + loss/psat) * Pc + (loss - g0) = 0
  const double qa = kappa / psat;
  const double qb = kappa + loss / psat;
  const double qc = loss - g0;  // <= 0 above threshold
  const double pc =
      (-qb + std::sqrt(qb * qb - 4.0 * qa * qc)) / (2.0 * qa);
  return kappa * pc * pc;
}

LaserConfig calibrate_laser(double threshold_w,
                            std::pair<double, double> output_at,
                            double round_trip_loss, double saturation_power) {
  const auto [pump_w, green_w] = output_at;
  if (!(threshold_w > 0.0)) {
    throw validation_error("calibration: threshold must be > 0");
  }
  if (!(pump_w > threshold_w)) {
    throw validation_error("calibration: anchor pump must exceed threshold");
  }
  if (!(green_w > 0.0)) {
    throw validation_error(
        "calibration: zero or negative output at the anchor is infeasible");
  }
  const double slope = green_w / (pump_w - threshold_w);
  if (slope >= 1.0) {
    throw validation_error(
        "calibration: anchor implies slope efficiency >= 1");
  }
  const double loss = round_trip_loss;
  const double psat = saturation_power;
  const double g0 = loss * pump_w / threshold_w;
  const double max_green =
      psat * (std::sqrt(g0) - std::sqrt(loss)) * (std::sqrt(g0) - std::sqrt(loss));
  if (!(green_w < max_green)) {
    throw validation_error(
        "calibration: requested output exceeds the saturated limit for this "
        "saturation power");
  }
  // green(Pc) = Pc * (g0/(1 + Pc/psat) - loss) rises monotonically up to the
  // peak circulating power; bisect the rising branch.
  const double pc_peak = psat * (std::sqrt(g0 / loss) - 1.0);
  auto green_of = [&](double pc) {
    return pc * (g0 / (1.0 + pc / psat) - loss);
  };
  double lo = 0.0, hi = pc_peak;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (green_of(mid) < green_w ? lo : hi) = mid;
  }
  const double pc = 0.5 * (lo + hi);
  LaserConfig config;
  config.threshold_pump = threshold_w;
  config.slope_efficiency = slope;
  config.round_trip_loss = loss;
  config.shg_coupling = green_w / (pc * pc);
  config.saturation_power = psat;
  return config;
}

}  // namespace twinbeam::laser
