#pragma once

// Internal unit system: SI (metres, radians, hertz, tesla, watts).

namespace pfl::units {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double speed_of_light = 299792458.0;  // m/s

inline constexpr double m = 1.0;
inline constexpr double mm = 1e-3;
inline constexpr double um = 1e-6;
inline constexpr double nm = 1e-9;

inline constexpr double Hz = 1.0;
inline constexpr double kHz = 1e3;
inline constexpr double MHz = 1e6;
inline constexpr double GHz = 1e9;

inline constexpr double tesla = 1.0;
inline constexpr double gauss = 1e-4;

inline constexpr double mrad = 1e-3;

}  // namespace pfl::units
