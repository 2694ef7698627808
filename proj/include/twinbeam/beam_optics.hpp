#pragma once

#include <complex>
#include <cstddef>
#include <variant>
#include <vector>

namespace twinbeam::beam_optics {

using complexd = std::complex<double>;

// Complex Gaussian beam parameter q = z + i*z_R at some transverse plane.
// Re(q) is the signed distance past the waist, Im(q) the Rayleigh range of
// the embedded fundamental Gaussian.  Real beam radii carry the sqrt(m2)
// embedded-Gaussian scaling; m2 is otherwise inert in propagation.
struct BeamParameter {
  complexd q;              // m
  double wavelength = 0.0; // m
  double m2 = 1.0;         // beam-quality factor, >= 1

  static BeamParameter from_q(complexd q, double wavelength, double m2 = 1.0);
  // Beam at its waist plane: q = i * pi*w0^2 / (lambda*m2).
  static BeamParameter from_waist(double waist_radius, double wavelength,
                                  double m2 = 1.0);

  double rayleigh_range() const { return q.imag(); }
  double waist_radius() const;     // w0 (1/e^2 field radius)
  double beam_radius() const;      // w at this plane
  double waist_position() const { return -q.real(); }  // plane -> waist
  // Wavefront curvature radius; +inf at a waist.
  double curvature_radius() const;
};

struct RayMatrix {
  double a = 1.0, b = 0.0;  // b in m
  double c = 0.0, d = 1.0;  // c in 1/m

  double determinant() const { return a * d - b * c; }
  static RayMatrix identity() { return {}; }
};

// lhs * rhs: apply rhs first, then lhs.
RayMatrix operator*(const RayMatrix& lhs, const RayMatrix& rhs);

enum class Plane { tangential, sagittal };

struct FreeSpace {
  double length = 0.0;  // m, >= 0
};
struct ThinLens {
  double focal_length = 0.0;  // m, != 0
};
struct CurvedMirror {
  double radius = 0.0;           // m, != 0 (positive = concave)
  double incidence_angle = 0.0;  // rad
};
struct Slab {
  double length = 0.0;            // m, >= 0
  double refractive_index = 1.0;  // >= 1
};

using OpticalElement = std::variant<FreeSpace, ThinLens, CurvedMirror, Slab>;

// ABCD transfer matrix for the requested transverse plane.  Only curved
// mirrors at non-normal incidence distinguish tangential from sagittal:
// f_t = R cos(theta) / 2, f_s = R / (2 cos(theta)).
RayMatrix ray_matrix(const OpticalElement& element,
                     Plane plane = Plane::tangential);

// Geometric path length contributed by an element (free space and slabs).
double path_length(const OpticalElement& element);

// One full round trip starting from a declared reference plane.
struct RingCavity {
  std::vector<OpticalElement> elements;
  double wavelength = 0.0;  // m
  double m2 = 1.0;
};

RayMatrix round_trip_matrix(const RingCavity& cavity, Plane plane);
// (a + d) / 2; the cavity is geometrically stable iff this lies in (-1, 1).
double stability_parameter(const RingCavity& cavity, Plane plane);
bool is_stable(const RingCavity& cavity, Plane plane);

// q' = (a q + b) / (c q + d).  Preserves wavelength and m2.
BeamParameter propagate_q(const BeamParameter& beam, const RayMatrix& m);

// Self-consistent eigenmode q at the reference plane.  Throws
// instability_error (carrying |(a+d)/2|) for unstable geometry.
BeamParameter cavity_eigenmode(const RingCavity& cavity,
                               Plane plane = Plane::tangential);

// Power coupling between two Gaussian modes of the same wavelength:
// eta = 4 Im(q1) Im(q2) / |conj(q1) - q2|^2, in [0, 1], 1 iff q1 == q2.
double mode_match_overlap(const BeamParameter& q1, const BeamParameter& q2);

// Beam radius along the round trip, sampled at every element boundary.
struct BeamSample {
  std::size_t element_index = 0;  // boundary after this many elements
  double position = 0.0;          // accumulated path length, m
  double beam_radius = 0.0;       // m
  double waist_radius = 0.0;      // m, of the local beam segment
  double waist_position = 0.0;    // m, relative to this boundary
};
std::vector<BeamSample> trace_eigenmode(const RingCavity& cavity, Plane plane);

// Pump-induced lens in the gain rod: f = k_thermal / absorbed pump power.
struct ThermalLensModel {
  double k_thermal = 0.0;  // W*m, > 0
};
double thermal_focal_length(const ThermalLensModel& model,
                            double absorbed_pump_w);

}  // namespace twinbeam::beam_optics
