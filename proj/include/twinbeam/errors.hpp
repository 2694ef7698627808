#pragma once

#include <stdexcept>
#include <string>

namespace twinbeam {

// Exit-code contract of the CLI: 0 success, 2 config, 3 physics/validation,
// 4 analysis.  Library code throws one of these; the front end maps them.

// Malformed or incomplete input: bad scenario file, unknown keys, missing
// sections, missing optional parameters required by a command.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Physically inconsistent input: invalid optical elements, unstable
// cavities, unphysical noise levels, infeasible calibrations.
class validation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation that cannot proceed on otherwise valid input: mismatched
// spectra, insufficient samples, aliasing.
class analysis_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unstable resonator; carries |(a+d)/2| so callers can report it.
class instability_error : public validation_error {
 public:
  instability_error(const std::string& what, double stability)
      : validation_error(what), stability_parameter(stability) {}
  double stability_parameter;
};

}  // namespace twinbeam
