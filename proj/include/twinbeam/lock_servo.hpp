#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace twinbeam::lock {

// Lumped Fabry-Perot response: coupler r1, back face r2, distributed
// round-trip amplitude loss (1 - a).
struct CavityResponse {
  double r1 = 0.0;
  double r2 = 0.0;
  double round_trip_amplitude_loss = 0.0;
  double fsr = 0.0;  // Hz

  double amplitude_factor() const { return 1.0 - round_trip_amplitude_loss; }
  double finesse() const;
  double fwhm() const { return fsr / finesse(); }
};
void validate(const CavityResponse& cavity);

// F(delta) = (r1 - a r2 e^{i delta}) / (1 - r1 r2 a e^{i delta}) for the
// round-trip phase delta.
std::complex<double> reflection_coefficient(const CavityResponse& cavity,
                                            double detuning_phase);

// Intracavity power buildup and the resonant energy split, for bookkeeping:
// |F|^2 + circulating*(1-a^2) + circulating*a^2*(1-r2^2) = 1 at resonance.
double circulating_buildup(const CavityResponse& cavity, double detuning_phase);

struct ModulationSource {
  double frequency = 19.2e6;  // Hz
  double depth = 0.1;         // rad, sideband-linear regime
};
void validate(const ModulationSource& mod);

// Demodulated dispersion-shaped discriminant; zero at resonance, odd in
// detuning, 2 pi periodic in round-trip phase.
double pdh_error(const CavityResponse& cavity, const ModulationSource& mod,
                 double detuning_hz);

// d(pdh_error)/d(detuning) at resonance, per Hz.
double pdh_slope(const CavityResponse& cavity, const ModulationSource& mod);

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;  // 1/s
  double kd = 0.0;  // s
  double sample_period = 1e-5;       // s
  double min_output = -2e6;          // Hz
  double max_output = 2e6;           // Hz
};
void validate(const PidGains& gains);

struct PidState {
  double integral = 0.0;
  double previous_error = 0.0;
  bool primed = false;
};

// One servo update; integrator clamps at the output limits (anti-windup).
std::pair<PidState, double> pid_step(PidState state, double error,
                                     const PidGains& gains);

struct DisturbanceModel {
  double drift_rate = 50e3;       // Hz/s
  double white_noise_rms = 0.0;   // Hz per sample
  std::uint64_t seed = 1;
};
void validate(const DisturbanceModel& disturbance);

struct LockSample {
  double t = 0.0;          // s
  double detuning = 0.0;   // Hz
  double error = 0.0;      // arb. discriminant units
  double actuation = 0.0;  // Hz
};

struct LockSummary {
  double rms_detuning = 0.0;  // Hz, after the settling window
  bool locked = true;
  double settle_time = 0.0;   // s
  double fwhm = 0.0;          // Hz, of the modeled cavity
};

struct LockTrace {
  std::vector<LockSample> samples;
  LockSummary summary;
};

// Closed-loop simulation: drift + white detuning noise, PDH discriminant,
// PID feedback applied with one sample of delay.  Flags locked = false when
// |detuning| exceeds fwhm/2 for more than 10 ms.
LockTrace simulate_lock(const CavityResponse& cavity,
                        const ModulationSource& mod, const PidGains& gains,
                        const DisturbanceModel& disturbance,
                        double duration_s);

// CSV with header t_s,detuning_hz,error,actuation_hz.
std::string trace_csv(const LockTrace& trace);

}  // namespace twinbeam::lock
