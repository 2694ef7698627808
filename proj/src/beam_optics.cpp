#include "twinbeam/beam_optics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "twinbeam/errors.hpp"

namespace twinbeam::beam_optics {

namespace {

constexpr double kPi = std::numbers::pi;

void check_beam(const BeamParameter& beam) {
  if (!(beam.wavelength > 0.0)) {
    throw validation_error("beam: wavelength must be positive");
  }
  if (!(beam.m2 >= 1.0)) {
    throw validation_error("beam: m2 must be >= 1");
  }
  if (!(beam.q.imag() > 0.0)) {
    throw validation_error("beam: Im(q) must be positive for a physical beam");
  }
}

}  // namespace

BeamParameter BeamParameter::from_q(complexd q, double wavelength, double m2) {
  BeamParameter beam{q, wavelength, m2};
  check_beam(beam);
  return beam;
}

BeamParameter BeamParameter::from_waist(double waist_radius, double wavelength,
                                        double m2) {
  if (!(waist_radius > 0.0)) {
    throw validation_error("beam: waist radius must be positive");
  }
  const double rayleigh =
      kPi * waist_radius * waist_radius / (wavelength * m2);
  return from_q(complexd(0.0, rayleigh), wavelength, m2);
}

double BeamParameter::waist_radius() const {
  return std::sqrt(wavelength * m2 * q.imag() / kPi);
}

double BeamParameter::beam_radius() const {
  return std::sqrt(wavelength * m2 * std::norm(q) / (kPi * q.imag()));
}

double BeamParameter::curvature_radius() const {
  if (q.real() == 0.0) return std::numeric_limits<double>::infinity();
  return std::norm(q) / q.real();
}

RayMatrix operator*(const RayMatrix& lhs, const RayMatrix& rhs) {
  return {lhs.a * rhs.a + lhs.b * rhs.c, lhs.a * rhs.b + lhs.b * rhs.d,
          lhs.c * rhs.a + lhs.d * rhs.c, lhs.c * rhs.b + lhs.d * rhs.d};
}

RayMatrix ray_matrix(const OpticalElement& element, Plane plane) {
  struct Visitor {
    Plane plane;
    RayMatrix operator()(const FreeSpace& fs) const {
      if (!(fs.length >= 0.0)) {
        throw validation_error("invalid element: free_space length < 0");
      }
      return {1.0, fs.length, 0.0, 1.0};
    }
    RayMatrix operator()(const ThinLens& lens) const {
      if (lens.focal_length == 0.0 || !std::isfinite(lens.focal_length)) {
        throw validation_error("invalid element: thin_lens f must be nonzero");
      }
      return {1.0, 0.0, -1.0 / lens.focal_length, 1.0};
    }
    RayMatrix operator()(const CurvedMirror& mirror) const {
      if (mirror.radius == 0.0 || !std::isfinite(mirror.radius)) {
        throw validation_error("invalid element: curved_mirror R must be nonzero");
      }
      const double cos_theta = std::cos(mirror.incidence_angle);
      if (!(cos_theta > 0.0)) {
        throw validation_error("invalid element: grazing incidence on mirror");
      }
      const double f = plane == Plane::tangential
                           ? mirror.radius * cos_theta / 2.0
                           : mirror.radius / (2.0 * cos_theta);
      return {1.0, 0.0, -1.0 / f, 1.0};
    }
    RayMatrix operator()(const Slab& slab) const {
      if (!(slab.length >= 0.0) || !(slab.refractive_index >= 1.0)) {
        throw validation_error("invalid element: slab needs d >= 0 and n >= 1");
      }
      return {1.0, slab.length / slab.refractive_index, 0.0, 1.0};
    }
  };
  return std::visit(Visitor{plane}, element);
}

double path_length(const OpticalElement& element) {
  if (const auto* fs = std::get_if<FreeSpace>(&element)) return fs->length;
  if (const auto* slab = std::get_if<Slab>(&element)) return slab->length;
  return 0.0;
}

RayMatrix round_trip_matrix(const RingCavity& cavity, Plane plane) {
  RayMatrix m = RayMatrix::identity();
  for (const auto& element : cavity.elements) {
    m = ray_matrix(element, plane) * m;
  }
  return m;
}

double stability_parameter(const RingCavity& cavity, Plane plane) {
  const RayMatrix m = round_trip_matrix(cavity, plane);
  return 0.5 * (m.a + m.d);
}

bool is_stable(const RingCavity& cavity, Plane plane) {
  return std::abs(stability_parameter(cavity, plane)) < 1.0;
}

BeamParameter propagate_q(const BeamParameter& beam, const RayMatrix& m) {
  check_beam(beam);
  const complexd denominator = m.c * beam.q + m.d;
  const double scale = std::abs(m.c * beam.q) + std::abs(m.d);
  if (std::abs(denominator) <= 1e-14 * std::max(scale, 1.0)) {
    throw validation_error("propagation singularity: c*q + d vanishes");
  }
  BeamParameter out = beam;
  out.q = (m.a * beam.q + m.b) / denominator;
  return out;
}

BeamParameter cavity_eigenmode(const RingCavity& cavity, Plane plane) {
  const RayMatrix m = round_trip_matrix(cavity, plane);
  const double half_trace = 0.5 * (m.a + m.d);
  if (!(std::abs(half_trace) < 1.0)) {
    std::ostringstream msg;
    msg << "unstable cavity: |(a+d)/2| = " << std::abs(half_trace);
    throw instability_error(msg.str(), std::abs(half_trace));
  }
  // Fixed point of q = (a q + b)/(c q + d): c q^2 + (d - a) q - b = 0.
  // |half_trace| < 1 rules out c == 0 for a unimodular matrix.
  const double imag = std::sqrt(1.0 - half_trace * half_trace) / std::abs(m.c);
  const double real = (m.a - m.d) / (2.0 * m.c);
  return BeamParameter::from_q(complexd(real, imag), cavity.wavelength,
                               cavity.m2);
}

double mode_match_overlap(const BeamParameter& q1, const BeamParameter& q2) {
  check_beam(q1);
  check_beam(q2);
  const double dl = std::abs(q1.wavelength - q2.wavelength);
  if (dl > 1e-9 * q1.wavelength) {
    throw validation_error("incompatible beams: wavelength mismatch");
  }
  if (q1.q == q2.q) return 1.0;
  return 4.0 * q1.q.imag() * q2.q.imag() / std::norm(std::conj(q1.q) - q2.q);
}

std::vector<BeamSample> trace_eigenmode(const RingCavity& cavity, Plane plane) {
  BeamParameter beam = cavity_eigenmode(cavity, plane);
  std::vector<BeamSample> samples;
  samples.reserve(cavity.elements.size() + 1);
  double position = 0.0;
  auto record = [&](std::size_t index) {
    samples.push_back({index, position, beam.beam_radius(),
                       beam.waist_radius(), beam.waist_position()});
  };
  record(0);
  for (std::size_t i = 0; i < cavity.elements.size(); ++i) {
    beam = propagate_q(beam, ray_matrix(cavity.elements[i], plane));
    position += path_length(cavity.elements[i]);
    record(i + 1);
  }
  return samples;
}

double thermal_focal_length(const ThermalLensModel& model,
                            double absorbed_pump_w) {
  if (!(model.k_thermal > 0.0)) {
    throw validation_error("thermal lens: k_thermal must be positive");
  }
  if (!(absorbed_pump_w > 0.0)) {
    throw validation_error("thermal lens: absorbed pump must be positive");
  }
  return model.k_thermal / absorbed_pump_w;
}

}  // namespace twinbeam::beam_optics
