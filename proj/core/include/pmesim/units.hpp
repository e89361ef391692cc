#pragma once

#include "pmesim/errors.hpp"

#include <numbers>
#include <optional>
#include <string>
#include <string_view>

namespace pmesim {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// All rates inside the library are angular frequencies in rad/s.  Input
// values carry a frequency-unit suffix (Hz, kHz, MHz, GHz) and a convention
// flag saying whether they denote ordinary frequencies (converted by 2*pi)
// or angular rates quoted in the same scale.
enum class UnitsConvention { Ordinary, Angular };

inline std::string to_string(UnitsConvention c) {
    return c == UnitsConvention::Ordinary ? "ordinary" : "angular";
}

inline UnitsConvention units_convention_from_string(std::string_view s) {
    if (s == "ordinary") return UnitsConvention::Ordinary;
    if (s == "angular") return UnitsConvention::Angular;
    throw DomainError("unknown units convention '" + std::string(s) +
                      "' (expected 'ordinary' or 'angular')");
}

// Scale factor for a frequency suffix, or nullopt if the suffix is not a
// frequency unit.
inline std::optional<double> frequency_unit_scale(std::string_view suffix) {
    if (suffix == "Hz") return 1.0;
    if (suffix == "kHz") return 1e3;
    if (suffix == "MHz") return 1e6;
    if (suffix == "GHz") return 1e9;
    return std::nullopt;
}

// Scale factor (to seconds) for a time suffix.
inline std::optional<double> time_unit_scale(std::string_view suffix) {
    if (suffix == "s") return 1.0;
    if (suffix == "ms") return 1e-3;
    if (suffix == "us") return 1e-6;
    if (suffix == "ns") return 1e-9;
    return std::nullopt;
}

// value in units of `scale` (e.g. 150 with scale 1e6 for "150 MHz") ->
// internal angular rate in rad/s.
inline double to_angular_rate(double value, double scale, UnitsConvention conv) {
    const double factor = (conv == UnitsConvention::Ordinary) ? two_pi : 1.0;
    return value * scale * factor;
}

// Inverse of to_angular_rate for reporting in the input units.
inline double from_angular_rate(double angular, double scale, UnitsConvention conv) {
    const double factor = (conv == UnitsConvention::Ordinary) ? two_pi : 1.0;
    return angular / (scale * factor);
}

// A frequency-integrated rate (1/2pi) * integral(... domega) is already an
// ordinary rate in 1/s; report it in MHz irrespective of convention.
inline double rate_to_mhz(double rate_per_s) { return rate_per_s / 1e6; }

} // namespace pmesim
