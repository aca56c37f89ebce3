#include "spinframe/representation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace spinframe {

namespace {

__extension__ typedef unsigned __int128 u128;

void check_spins(int n_spins) {
  if (n_spins < 1) throw std::invalid_argument("number of spins must be at least 1");
}

void check_class(int n_spins, HalfInt j) {
  check_spins(n_spins);
  if (n_spins > kMaxExactSpins) {
    throw std::invalid_argument("multiplicity: N=" + std::to_string(n_spins) +
                                " exceeds exact 64-bit range (N <= 62)");
  }
  if (j.twice() > n_spins) {
    throw std::invalid_argument("class j=" + std::to_string(j.value()) + " exceeds N/2");
  }
  if ((n_spins - j.twice()) % 2 != 0) {
    throw std::invalid_argument("class j=" + std::to_string(j.value()) +
                                " has the wrong parity for N=" + std::to_string(n_spins));
  }
}

u128 binomial(int n, int k) {
  k = std::min(k, n - k);
  u128 c = 1;
  for (int i = 1; i <= k; ++i) c = c * static_cast<u128>(n - k + i) / static_cast<u128>(i);
  return c;
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

bool valid_projection(HalfInt j, int twice_m) {
  return std::abs(twice_m) <= j.twice() && (j.twice() - twice_m) % 2 == 0;
}

}  // namespace

std::vector<HalfInt> spin_classes(int n_spins) {
  check_spins(n_spins);
  std::vector<HalfInt> classes;
  for (int twice = n_spins; twice >= 0; twice -= 2) classes.push_back(HalfInt::from_twice(twice));
  return classes;
}

std::uint64_t multiplicity(int n_spins, HalfInt j) {
  check_class(n_spins, j);
  const int upper = (n_spins + j.twice()) / 2;  // J + j
  const u128 c = binomial(n_spins, upper);
  const u128 numerator = c * static_cast<u128>(j.dim());
  const u128 denominator = static_cast<u128>(upper + 1);
  if (numerator % denominator != 0) throw std::logic_error("multiplicity: inexact division");
  const u128 n = numerator / denominator;
  if (n > std::numeric_limits<std::uint64_t>::max()) {
    throw std::invalid_argument("multiplicity overflows 64 bits");
  }
  return static_cast<std::uint64_t>(n);
}

IrrepDecomposition clebsch_series(int n_spins) {
  IrrepDecomposition d;
  d.n_spins = n_spins;
  for (HalfInt j : spin_classes(n_spins)) d.entries.push_back({j, multiplicity(n_spins, j)});
  return d;
}

std::uint64_t max_useful_reps(int n_spins, HalfInt j) {
  return std::min<std::uint64_t>(multiplicity(n_spins, j), static_cast<std::uint64_t>(j.dim()));
}

double cg_coefficient(HalfInt j1, int twice_m1, HalfInt j2, int twice_m2, HalfInt j, int twice_m) {
  if (twice_m1 + twice_m2 != twice_m) return 0.0;
  if (!valid_projection(j1, twice_m1) || !valid_projection(j2, twice_m2) ||
      !valid_projection(j, twice_m)) {
    return 0.0;
  }
  const int a = j1.twice(), b = j2.twice(), c = j.twice();
  if (c < std::abs(a - b) || c > a + b || (a + b + c) % 2 != 0) return 0.0;

  // Integer arguments of the factorials, all halved from doubled labels.
  const int j1_j2_mj = (a + b - c) / 2;       // j1 + j2 - j
  const int j_j1_mj2 = (c + a - b) / 2;       // j + j1 - j2
  const int j_mj1_j2 = (c - a + b) / 2;       // j - j1 + j2
  const int sum_plus1 = (a + b + c) / 2 + 1;  // j1 + j2 + j + 1
  const int j1_m = (a - twice_m1) / 2, j1_p = (a + twice_m1) / 2;
  const int j2_m = (b - twice_m2) / 2, j2_p = (b + twice_m2) / 2;
  const int j_m = (c - twice_m) / 2, j_p = (c + twice_m) / 2;

  const double log_prefactor =
      0.5 * (std::log(static_cast<double>(c + 1)) + log_factorial(j_j1_mj2) +
             log_factorial(j_mj1_j2) + log_factorial(j1_j2_mj) - log_factorial(sum_plus1) +
             log_factorial(j_p) + log_factorial(j_m) + log_factorial(j1_m) + log_factorial(j1_p) +
             log_factorial(j2_m) + log_factorial(j2_p));

  const int shift_a = (c - b + twice_m1) / 2;  // j - j2 + m1
  const int shift_b = (c - a - twice_m2) / 2;  // j - j1 - m2
  const int k_min = std::max({0, -shift_a, -shift_b});
  const int k_max = std::min({j1_j2_mj, j1_m, j2_p});
  double sum = 0.0;
  for (int k = k_min; k <= k_max; ++k) {
    const double log_den = log_factorial(k) + log_factorial(j1_j2_mj - k) +
                           log_factorial(j1_m - k) + log_factorial(j2_p - k) +
                           log_factorial(shift_a + k) + log_factorial(shift_b + k);
    const double term = std::exp(log_prefactor - log_den);
    sum += (k % 2 == 0) ? term : -term;
  }
  return sum;
}

std::uint64_t orbit_dimension(int n_spins) {
  const auto classes = spin_classes(n_spins);
  std::uint64_t total = static_cast<std::uint64_t>(classes.front().dim());
  for (std::size_t k = 1; k < classes.size(); ++k) {
    const auto d = static_cast<std::uint64_t>(classes[k].dim());
    total += d * d;
  }
  return total;
}

}  // namespace spinframe
