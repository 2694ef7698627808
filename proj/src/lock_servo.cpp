#include "twinbeam/lock_servo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "twinbeam/errors.hpp"
#include "twinbeam/io_util.hpp"
#include "twinbeam/rng.hpp"

namespace twinbeam::lock {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double CavityResponse::finesse() const {
  const double rho = r1 * r2 * amplitude_factor();
  return std::numbers::pi * std::sqrt(rho) / (1.0 - rho);
}

void validate(const CavityResponse& cavity) {
  if (!(cavity.r1 > 0.0 && cavity.r1 < 1.0)) {
    throw validation_error("cavity.r1 must be in (0,1)");
  }
  if (!(cavity.r2 > 0.0 && cavity.r2 < 1.0)) {
    throw validation_error("cavity.r2 must be in (0,1)");
  }
  if (!(cavity.round_trip_amplitude_loss >= 0.0 &&
        cavity.round_trip_amplitude_loss < 1.0)) {
    throw validation_error("cavity loss must be in [0,1)");
  }
  if (!(cavity.fsr > 0.0)) {
    throw validation_error("cavity.fsr must be > 0");
  }
}

std::complex<double> reflection_coefficient(const CavityResponse& cavity,
                                            double detuning_phase) {
  validate(cavity);
  const double a = cavity.amplitude_factor();
  const std::complex<double> phase = std::polar(1.0, detuning_phase);
  return (cavity.r1 - a * cavity.r2 * phase) /
         (1.0 - cavity.r1 * cavity.r2 * a * phase);
}

double circulating_buildup(const CavityResponse& cavity,
                           double detuning_phase) {
  validate(cavity);
  const double a = cavity.amplitude_factor();
  const double t1_sq = 1.0 - cavity.r1 * cavity.r1;
  const std::complex<double> denom =
      1.0 - cavity.r1 * cavity.r2 * a * std::polar(1.0, detuning_phase);
  return t1_sq / std::norm(denom);
}

void validate(const ModulationSource& mod) {
  if (!(mod.frequency > 0.0)) {
    throw validation_error("modulation frequency must be > 0");
  }
  if (!(mod.depth > 0.0 && mod.depth < 0.5)) {
    throw validation_error("modulation depth must be in (0, 0.5)");
  }
}

double pdh_error(const CavityResponse& cavity, const ModulationSource& mod,
                 double detuning_hz) {
  validate(cavity);
  validate(mod);
  if (!(std::abs(detuning_hz) < 0.5 * cavity.fsr)) {
    throw validation_error("pdh_error: |detuning| must be below fsr/2");
  }
  const double delta = kTwoPi * detuning_hz / cavity.fsr;
  const double delta_m = kTwoPi * mod.frequency / cavity.fsr;
  const auto f0 = reflection_coefficient(cavity, delta);
  const auto fp = reflection_coefficient(cavity, delta + delta_m);
  const auto fm = reflection_coefficient(cavity, delta - delta_m);
  const double carrier_sideband =
      std::cyl_bessel_j(0, mod.depth) * std::cyl_bessel_j(1, mod.depth);
  return 2.0 * carrier_sideband *
         std::imag(f0 * std::conj(fp) - std::conj(f0) * fm);
}

double pdh_slope(const CavityResponse& cavity, const ModulationSource& mod) {
  const double h = cavity.fwhm() * 1e-5;
  return (pdh_error(cavity, mod, h) - pdh_error(cavity, mod, -h)) / (2.0 * h);
}

void validate(const PidGains& gains) {
  if (!(gains.sample_period > 0.0)) {
    throw validation_error("pid: sample_period must be > 0");
  }
  if (!(gains.min_output < gains.max_output)) {
    throw validation_error("pid: min_output must be below max_output");
  }
}

std::pair<PidState, double> pid_step(PidState state, double error,
                                     const PidGains& gains) {
  validate(gains);
  const double dt = gains.sample_period;
  const double derivative =
      state.primed ? (error - state.previous_error) / dt : 0.0;
  const double integral_candidate = state.integral + error * dt;
  double output = gains.kp * error + gains.ki * integral_candidate +
                  gains.kd * derivative;
  if (output > gains.max_output) {
    output = gains.max_output;
    if (error <= 0.0) state.integral = integral_candidate;
  } else if (output < gains.min_output) {
    output = gains.min_output;
    if (error >= 0.0) state.integral = integral_candidate;
  } else {
    state.integral = integral_candidate;
  }
  state.previous_error = error;
  state.primed = true;
  return {state, output};
}

void validate(const DisturbanceModel& disturbance) {
  if (disturbance.drift_rate < 0.0 || disturbance.white_noise_rms < 0.0) {
    throw validation_error("disturbance magnitudes must be >= 0");
  }
}

LockTrace simulate_lock(const CavityResponse& cavity,
                        const ModulationSource& mod, const PidGains& gains,
                        const DisturbanceModel& disturbance,
                        double duration_s) {
  validate(cavity);
  validate(mod);
  validate(gains);
  validate(disturbance);
  if (!(duration_s > 0.0)) {
    throw validation_error("simulate_lock: duration must be > 0");
  }

  const double dt = gains.sample_period;
  const auto n_steps = static_cast<std::size_t>(std::llround(duration_s / dt));
  if (n_steps == 0) {
    throw validation_error("simulate_lock: duration below one sample period");
  }
  const double fwhm = cavity.fwhm();
  const double slope = pdh_slope(cavity, mod);

  GaussianStream rng(disturbance.seed, 0);
  LockTrace trace;
  trace.samples.resize(n_steps);

  const bool open_loop =
      gains.kp == 0.0 && gains.ki == 0.0 && gains.kd == 0.0;
  PidState state;
  double raw = 0.0;
  double actuation = 0.0;
  const double unlock_threshold = 0.5 * fwhm;
  const auto unlock_run_limit =
      static_cast<std::size_t>(std::ceil(10e-3 / dt));
  std::size_t unlock_run = 0;
  bool locked = true;

  for (std::size_t k = 0; k < n_steps; ++k) {
    const double detuning = raw - actuation;
    double error = 0.0;
    if (std::abs(detuning) < 0.45 * cavity.fsr) {
      error = pdh_error(cavity, mod, detuning);
    }
    trace.samples[k] = {static_cast<double>(k) * dt, detuning, error,
                        actuation};
    if (std::abs(detuning) > unlock_threshold) {
      if (++unlock_run > unlock_run_limit) locked = false;
    } else {
      unlock_run = 0;
    }
    if (!open_loop) {
      auto [next_state, output] = pid_step(state, error / slope, gains);
      state = next_state;
      actuation = output;
    }
    raw += disturbance.drift_rate * dt;
    if (disturbance.white_noise_rms > 0.0) {
      raw += disturbance.white_noise_rms * rng.next();
    }
  }

  auto& summary = trace.summary;
  summary.locked = locked;
  summary.fwhm = fwhm;

  const double settle_window = std::min(0.2, 0.5 * duration_s);
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (const auto& sample : trace.samples) {
    if (sample.t < settle_window) continue;
    sum_sq += sample.detuning * sample.detuning;
    ++count;
  }
  summary.rms_detuning =
      count > 0 ? std::sqrt(sum_sq / static_cast<double>(count)) : 0.0;

  const double settle_threshold = fwhm / 50.0;
  double settle_time = 0.0;
  for (std::size_t k = n_steps; k-- > 0;) {
    if (std::abs(trace.samples[k].detuning) >= settle_threshold) {
      settle_time = trace.samples[k].t + dt;
      break;
    }
  }
  summary.settle_time = settle_time;
  return trace;
}

std::string trace_csv(const LockTrace& trace) {
  std::string out = "t_s,detuning_hz,error,actuation_hz\n";
  for (const auto& sample : trace.samples) {
    out += fmt_sig(sample.t);
    out += ',';
    out += fmt_sig(sample.detuning);
    out += ',';
    out += fmt_sig(sample.error);
    out += ',';
    out += fmt_sig(sample.actuation);
    out += '\n';
  }
  return out;
}

}  // namespace twinbeam::lock
