#pragma once

#include <array>
#include <optional>

#include "stiffplate/material.hpp"
#include "stiffplate/regime.hpp"

namespace stiffplate {

struct PlateStrain {
  double e11 = 0, e22 = 0, e12 = 0;
};

struct BeamStrain {
  double e11 = 0, e12 = 0, e13 = 0;
};

/// Plane-stress density E/(2(1-nu^2)) (e11^2 + e22^2 + 2 nu e11 e22 + 2(1-nu) e12^2).
double plate_density(const IsotropicMaterial& mat, const PlateStrain& e);

/// Uniaxial-plus-shear density (E/2) e11^2 + 2 mu (e12^2 + e13^2).
/// With a branch tag the component that vanishes on that branch is checked.
double beam_density(const IsotropicMaterial& mat, const BeamStrain& e,
                    std::optional<Branch> branch = std::nullopt);

SymStrain relaxed_plate_tensor(const IsotropicMaterial& mat, const PlateStrain& e);
SymStrain relaxed_beam_tensor(const IsotropicMaterial& mat, const BeamStrain& e);

/// Components flagged `true` are free and minimized over; the others are
/// taken from `fixed`.
using FreeMask = std::array<bool, 6>;

FreeMask plate_free_mask();  // 33, 23, 13
FreeMask beam_free_mask();   // 22, 33, 23

SymStrain plate_constrained(const PlateStrain& e);
SymStrain beam_constrained(const BeamStrain& e);

/// Exact minimizer of f over the free components (solves the stationarity
/// system). Throws std::logic_error if that system is singular.
SymStrain oracle_minimizer(const IsotropicMaterial& mat, const SymStrain& fixed, const FreeMask& free);
double oracle_min_density(const IsotropicMaterial& mat, const SymStrain& fixed, const FreeMask& free);

}  // namespace stiffplate
