#pragma once

// Unit system used throughout: lengths in um, charge in fC, potential in V,
// capacitance in fF, energy in fJ. This keeps Galerkin matrix entries near
// unity for typical qubit-scale layouts.

namespace sepr {

inline constexpr double kEps0 = 8.8541878128e-3;  // vacuum permittivity, fF/um

// Exact SI values (2019 redefinition)
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kPlanck = 6.62607015e-34;             // J*s

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace sepr
