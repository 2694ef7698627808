#pragma once

#include <string>

namespace twinbeam {

// Shortest round-trip-safe decimal with at least 10 significant digits.
std::string fmt_sig(double value);

// Write via a temp file in the same directory, then rename into place.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace twinbeam
