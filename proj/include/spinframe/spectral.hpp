#pragma once

/**
 * @file spectral.hpp
 * @brief The tridiagonal fidelity matrix M^(N), its truncation T^(N), and
 *        the leading eigenpair that defines the optimal protocol.
 *
 * Rows are labelled by the irrep classes j = J, J-1, ..., 0 (1/2). For a
 * state with class weights A_j the average j=1 character of the
 * maximum-likelihood estimate is A^T M A.
 */

#include <cstddef>
#include <vector>

#include "spinframe/su2.hpp"

namespace spinframe {

struct TridiagonalSymmetric {
  std::vector<double> diag;
  std::vector<double> offdiag;  // offdiag[i] couples rows i and i+1
  std::vector<HalfInt> row_labels;

  std::size_t size() const noexcept { return diag.size(); }
  /// Entry (row, col); zero outside the band.
  double at(std::size_t row, std::size_t col) const;
  /// y = T x.
  std::vector<double> apply(const std::vector<double>& x) const;
  /// x^T T x.
  double quadratic_form(const std::vector<double>& x) const;
};

/// diag [J/(J+1), 1, ..., 1, zeta], offdiag [1/sqrt(2J+1), 1, ..., 1], with
/// zeta = 0 for even N and 1 for odd N. Requires N >= 2.
TridiagonalSymmetric build_M(int n_spins);

/// M^(N) with the j = J row and column removed. Requires N >= 4.
TridiagonalSymmetric build_T(int n_spins);

/// 1 + 2 cos(2 pi / (N+1)).
double sigma_closed_form(int n_spins);

/// Number of eigenvalues strictly below x (Sturm sequence count).
std::size_t sturm_count(const TridiagonalSymmetric& t, double x);

struct Eigenpair {
  double value = 0.0;
  std::vector<double> vector;
  double residual = 0.0;  // max |T v - value v|
  int iterations = 0;     // inverse-iteration sweeps
};

/// Largest eigenvalue by Sturm bisection, eigenvector by inverse iteration.
/// The vector is unit-norm with non-negative sum. Throws NumericalError if
/// the residual does not reach tol * (1 + |lambda|).
Eigenpair leading_eigenpair(const TridiagonalSymmetric& t, double tol = 1e-12);

struct OptimalProtocol {
  int n_spins = 0;
  double lambda = 0.0;               // optimal average character
  std::vector<double> coefficients;  // A_j, indexed like row_labels
  std::vector<HalfInt> row_labels;   // J, J-1, ...
};

/// Leading eigenpair of build_M(N). Throws std::invalid_argument for N < 2.
OptimalProtocol optimal_protocol(int n_spins);

/// 8 pi^2 / N^2.
double asymptotic_error(double n_spins);

/// Best average character when each class contributes a single irrep copy:
/// the state sum_j A_j |j, m> with one common m and the matching
/// maximum-likelihood vector sum_j sqrt(2j+1) |j, m>. Maximized over m.
double single_copy_baseline(int n_spins);

/// Average-character matrix of the single-copy scheme for doubled
/// projection `twice_m`; rows are the classes with j >= |m|.
TridiagonalSymmetric single_copy_matrix(int n_spins, int twice_m);

}  // namespace spinframe
