#ifndef MOLCOOL_CONSTANTS_HPP
#define MOLCOOL_CONSTANTS_HPP

namespace molcool {
namespace constants {

// CODATA / SI exact values
inline constexpr double boltzmann = 1.380649e-23;      // J/K (exact)
inline constexpr double planck = 6.62607015e-34;       // J s (exact)
inline constexpr double light_speed = 299792458.0;     // m/s (exact)
inline constexpr double amu = 1.66053906660e-27;       // kg
inline constexpr double debye = 3.33564e-30;           // C m per Debye

// 1 cm^-1 -> J
inline constexpr double wavenumber_cm_to_joule = planck * light_speed * 100.0;

}  // namespace constants
}  // namespace molcool

#endif
