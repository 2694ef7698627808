#pragma once

#include <optional>
#include <string>
#include <utility>

namespace twinbeam::laser {

struct GainMedium {
  double absorption_coefficient = 0.0;      // 1/cm at the pump wavelength
  double length = 0.0;                      // cm
  double emission_cross_section = 3.0e-19;  // cm^2, descriptive only
  std::string doping_note;
};
void validate(const GainMedium& medium);

// Fraction of pump power absorbed in a single pass: 1 - exp(-alpha * L).
double absorbed_fraction(const GainMedium& medium);

struct LaserConfig {
  double threshold_pump = 0.0;    // W, pump incident on the rod
  double slope_efficiency = 0.0;  // green out per pump in, above threshold
  double round_trip_loss = 0.03;
  std::optional<double> shg_coupling;      // kappa, 1/W
  std::optional<double> saturation_power;  // W
};
void validate(const LaserConfig& config);

// Piecewise-linear phenomenological model: max(0, slope * (pump - threshold)).
double green_output_linear(const LaserConfig& config, double pump_w);

// Intracavity-SHG steady state.  The circulating power solves the gain
// clamping equation g0(pump) / (1 + Pc/Psat) = loss + kappa*Pc with
// g0 = loss * pump / threshold; the green output is kappa * Pc^2.
double green_output_shg(const LaserConfig& config, double pump_w);

// Fit kappa so that green_output_shg passes through (pump_w, green_w) at the
// given threshold.  saturation_power is the remaining family parameter; the
// fit picks the circulating power on the rising branch of the output curve.
LaserConfig calibrate_laser(double threshold_w,
                            std::pair<double, double> output_at,
                            double round_trip_loss = 0.03,
                            double saturation_power = 10.0);

}  // namespace twinbeam::laser
