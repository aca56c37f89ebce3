#pragma once

/**
 * @file fullspace.hpp
 * @brief Brute-force checks in the explicit 2^N-dimensional space of N <= 6
 *        spins.
 *
 * The Schur basis |j alpha, m> is built by coupling spins left to right with
 * Clebsch-Gordan coefficients. alpha is the lexicographic rank (from 1) of
 * the sequence of intermediate total spins among all sequences ending in j.
 * Single-spin basis order is (m = -1/2, m = +1/2) and spin 1 is the most
 * significant tensor factor, matching wigner_D's m = -j ... +j ordering.
 */

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "spinframe/protocol.hpp"
#include "spinframe/su2.hpp"

namespace spinframe::oracle {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr int kMaxOracleSpins = 6;
inline constexpr int kMaxQuadratureSpins = 4;

struct SchurLabel {
  int twice_j = 0;
  int alpha = 1;
  int twice_m = 0;

  auto operator<=>(const SchurLabel&) const = default;
};

class SchurBasis {
 public:
  int n_spins() const noexcept { return n_spins_; }
  int dimension() const noexcept { return 1 << n_spins_; }

  const ComplexVector& vector(const SchurLabel& label) const;
  const ComplexVector& vector(HalfInt j, int alpha, int twice_m) const {
    return vector({j.twice(), alpha, twice_m});
  }
  /// Number of alpha labels in class j (zero if the class is absent).
  int copies(HalfInt j) const;
  /// Doubled intermediate spins after coupling 1, 2, ..., N spins.
  const std::vector<int>& path(HalfInt j, int alpha) const;
  /// All labels in ascending order.
  std::vector<SchurLabel> labels() const;
  /// Columns are the basis vectors in labels() order.
  ComplexMatrix as_matrix() const;

 private:
  friend SchurBasis schur_basis(int n_spins);

  int n_spins_ = 0;
  std::map<SchurLabel, ComplexVector> vectors_;
  std::map<std::pair<int, int>, std::vector<int>> paths_;
};

/// Throws std::invalid_argument unless 1 <= N <= 6.
SchurBasis schur_basis(int n_spins);

/// U_g^{(x)N}: N-fold Kronecker power of wigner_D(1/2, g).
ComplexMatrix tensor_rotation(int n_spins, const GroupElement& g);

/// T^(j)_{alpha beta} = sum_m |j alpha, m><j beta, m|.
struct IsoTransferOperator {
  HalfInt j;
  int alpha = 1;
  int beta = 1;
  ComplexMatrix matrix;
};

IsoTransferOperator iso_transfer(const SchurBasis& basis, HalfInt j, int alpha, int beta);

/// Projector onto the class-j copy alpha.
ComplexMatrix block_projector(const SchurBasis& basis, HalfInt j, int alpha);

/// A_J |J,alpha=1,J> + sum_{j<J} A_j/sqrt(2j+1) sum_alpha |j alpha, m(alpha)>.
/// The assignment is not validated, so non-injective controls are possible.
ComplexVector embed_reference(const SchurBasis& basis, const std::vector<double>& coefficients,
                              const MAssignment& assignment);

/// Bob's vector with per-class weights (J first); an empty list means the
/// maximum-likelihood weights sqrt(2j+1).
ComplexVector ml_vector(const SchurBasis& basis, const MAssignment& assignment,
                        const std::vector<double>& class_weights = {});

/// Projector onto K = H_J + sum_{j<J} sum_{alpha <= 2j+1} H_{j alpha}.
ComplexMatrix projector_K(const SchurBasis& basis);

/// |<B|U_g^dag|A>|^2 evaluated with explicit matrices.
double fullspace_likelihood(const ComplexVector& reference, const ComplexVector& ml,
                            const ComplexMatrix& rotation);

/// max |<j alpha, n|U_g|j' beta, m> - delta D^j_{nm}(g)| over all label pairs.
double block_action_residual(const SchurBasis& basis, const GroupElement& g);

/// max |(S^2 - j(j+1)) v| and |(S_z - m) v| over all basis vectors.
double casimir_residual(const SchurBasis& basis);

/// Rank of projector_K.
int dimension_K(const SchurBasis& basis);

enum class MlWeights { maximum_likelihood, broken };

/// max-abs entry of Integral dg U_g|B><B|U_g^dag - P_K. `broken` replaces
/// the j = J weight sqrt(2J+1) by 1 as a negative control. N <= 4.
double verify_completeness(int n_spins, const QuadratureGrid& grid,
                           MlWeights weights = MlWeights::maximum_likelihood);

struct MEntryReport {
  std::vector<std::vector<double>> quadrature;  // recomputed M, rows like build_M
  double max_deviation = 0.0;                    // against build_M, all entries
  double max_off_tridiagonal = 0.0;              // |j - l| >= 2 entries
  double max_imaginary = 0.0;
};

/// M_jl = Re Integral dg chi_1(g) conj(a_j(g)) a_l(g) with a_k = <B|U_g^dag|A_k>
/// and A_k the state concentrated on class k. N <= 4.
MEntryReport verify_M_entries(int n_spins, const QuadratureGrid& grid);

struct IsoReport {
  double max_cross_overlap = 0.0;  // |<psi_a|T_ab|psi_b>|, a != b
  double max_self_error = 0.0;     // |<psi_a|T_aa|psi_a> - |psi_a|^2|
  bool passed = false;
};

/// Iso-orthogonality of the class components of the embedded reference.
IsoReport verify_iso_orthogonality(const SchurBasis& basis, const std::vector<double>& coefficients,
                                   const MAssignment& assignment, double tol = 1e-12);

struct SchmidtReport {
  HalfInt j;
  std::vector<double> coefficients;  // nonzero Schmidt coefficients, descending
  double expected = 0.0;             // 1/sqrt(2j+1) for j < J, 1 for j = J
  double max_deviation = 0.0;
  int rank = 0;
};

/// Schmidt spectra of each normalized class component across H_j (x) M_j.
std::vector<SchmidtReport> verify_entanglement_structure(const SchurBasis& basis,
                                                         const std::vector<double>& coefficients,
                                                         const MAssignment& assignment);

}  // namespace spinframe::oracle
