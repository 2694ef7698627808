#pragma once

#include <cmath>

namespace twinbeam {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Power ratio -> dB.
inline double to_db(double ratio) { return 10.0 * std::log10(ratio); }

/// dB -> power ratio.
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace twinbeam
