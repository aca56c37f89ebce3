#pragma once

/**
 * @file representation.hpp
 * @brief Clebsch-Gordan series of N spin-1/2 systems: irrep classes, their
 *        multiplicities, the number of usable equivalent copies, and
 *        Clebsch-Gordan coefficients.
 */

#include <cstdint>
#include <vector>

#include "spinframe/su2.hpp"

namespace spinframe {

/// Largest N for which multiplicities are computed exactly in 64 bits.
inline constexpr int kMaxExactSpins = 62;

struct IrrepClass {
  HalfInt j;
  std::uint64_t multiplicity = 0;

  bool operator==(const IrrepClass&) const = default;
};

/// (j, n_j) pairs for N spins, j descending from J = N/2.
struct IrrepDecomposition {
  int n_spins = 0;
  std::vector<IrrepClass> entries;
};

/// Classes J, J-1, ..., 0 or 1/2 present in N spins, descending.
std::vector<HalfInt> spin_classes(int n_spins);

/// n_j = (2j+1)/(J+j+1) * binom(2J, J+j), exact. Throws std::invalid_argument
/// for j > N/2, parity mismatch, or N outside [1, kMaxExactSpins].
std::uint64_t multiplicity(int n_spins, HalfInt j);

IrrepDecomposition clebsch_series(int n_spins);

/// k_j = min(n_j, 2j+1).
std::uint64_t max_useful_reps(int n_spins, HalfInt j);

/// <j1 m1, j2 m2 | j m> (Racah single sum, Condon-Shortley). Projections are
/// doubled. Labels violating a selection rule give 0.
double cg_coefficient(HalfInt j1, int twice_m1, HalfInt j2, int twice_m2, HalfInt j, int twice_m);

/// (2J+1) + sum_{j<J} (2j+1)^2: the largest orbit dimension reachable with
/// one irrep copy per magnetic number.
std::uint64_t orbit_dimension(int n_spins);

}  // namespace spinframe
