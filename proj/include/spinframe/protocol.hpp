#pragma once

/**
 * @file protocol.hpp
 * @brief Alice's reference state, Bob's maximum-likelihood covariant
 *        measurement, the likelihood p(g|e), and Monte Carlo estimation of
 *        the average transmission error.
 *
 * States live on K = H_J + sum_{j<J} sum_{alpha=1}^{2j+1} H_{j alpha}:
 *   |A> = A_J |J,J> + sum_{j<J} sum_alpha A_j / sqrt(2j+1) |j alpha, m(alpha)>
 *   |B> = sqrt(2J+1) |J,J> + sum_{j<J} sum_alpha sqrt(2j+1) |j alpha, m(alpha)>
 * With an injective m(alpha) the alpha sums in <B|U_g^dag|A> collapse to
 * characters, so
 *   p(g|e) = | sum_{j<J} A_j chi_j(g) + sqrt(2J+1) A_J D^J_{JJ}(g) |^2.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinframe/errors.hpp"
#include "spinframe/random.hpp"
#include "spinframe/spectral.hpp"
#include "spinframe/su2.hpp"

namespace spinframe {

/// Doubled magnetic numbers 2m(alpha) for every class j < J, ordered like
/// the classes (J-1, J-2, ...). Entry alpha-1 holds 2m(alpha).
struct MAssignment {
  std::vector<std::vector<int>> twice_m;

  /// m(alpha) = alpha - j - 1, i.e. alpha = 1 ... 2j+1 maps onto -j ... j.
  static MAssignment canonical(int n_spins);
  bool injective() const;
};

class ReferenceState {
 public:
  /// Coefficients are indexed like spin_classes(N) (J first). Throws
  /// std::invalid_argument unless they are non-negative with unit norm and
  /// the assignment is an injection into [-j, j] for each class j < J.
  ReferenceState(int n_spins, std::vector<double> coefficients, MAssignment assignment);
  ReferenceState(int n_spins, std::vector<double> coefficients);

  static ReferenceState from_protocol(const OptimalProtocol& protocol);

  int n_spins() const noexcept { return n_spins_; }
  const std::vector<double>& coefficients() const noexcept { return coefficients_; }
  const MAssignment& assignment() const noexcept { return assignment_; }
  const std::vector<HalfInt>& classes() const noexcept { return classes_; }

 private:
  int n_spins_;
  std::vector<double> coefficients_;
  MAssignment assignment_;
  std::vector<HalfInt> classes_;
};

class LikelihoodModel {
 public:
  explicit LikelihoodModel(ReferenceState reference);

  const ReferenceState& reference() const noexcept { return reference_; }
  /// dim K; Cauchy-Schwarz bound on p(g|e) for a unit-norm state.
  double envelope() const noexcept { return envelope_; }
  /// p(e|e) = (sum_{j<J} A_j (2j+1) + sqrt(2J+1) A_J)^2.
  double peak() const;

 private:
  ReferenceState reference_;
  double envelope_;
};

/// Probability density (w.r.t. normalized Haar measure) of estimating g when
/// the true rotation is the identity.
double likelihood(const LikelihoodModel& model, const GroupElement& g);

enum class CharacterMethod { analytic, quadrature };

struct CharacterEstimate {
  double value = 0.0;
  /// Set when the quadrature grid is too coarse to resolve the integrand's
  /// Euler-angle frequencies.
  std::optional<std::string> warning;
};

/// <chi> = A^T M A (analytic) or the Haar integral of chi_1(g) p(g|e).
CharacterEstimate average_character(const ReferenceState& state, CharacterMethod method,
                                    const QuadratureGrid& grid = QuadratureGrid::cube(48));

/// <e> = 6 - 2 A^T M A.
double average_error(const ReferenceState& state);

/// Proposal budget per draw of the rejection sampler.
inline constexpr std::uint64_t kMaxProposalsPerDraw = 1'000'000;

class SamplerCapExceeded : public NumericalError {
 public:
  SamplerCapExceeded(std::uint64_t proposals, double envelope);
  std::uint64_t proposals() const noexcept { return proposals_; }

 private:
  std::uint64_t proposals_;
};

struct SamplerStats {
  std::uint64_t accepted = 0;
  std::uint64_t proposals = 0;
};

/// Draw from p(.|e) by rejection against the uniform Haar proposal.
GroupElement sample_relative(const LikelihoodModel& model, RandomStream& rng,
                             SamplerStats* stats = nullptr);

/// Draw an estimate with density p(g|g_star) = p(g_star^-1 g | e).
GroupElement sample_estimate(const LikelihoodModel& model, const GroupElement& g_star,
                             RandomStream& rng, SamplerStats* stats = nullptr);

struct EstimationResult {
  int n_spins = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double mean_error = 0.0;
  double std_error = 0.0;        // sample standard deviation / sqrt(trials)
  double analytic_error = 0.0;   // 6 - 2 A^T M A
  double acceptance_rate = 0.0;  // accepted / proposed

  /// |mean - analytic| / std_error.
  double z_score() const;
};

/// Mean transmission error over `trials` rounds with Haar-random true
/// rotations. Trial k uses make_stream(seed, k), so the result does not
/// depend on `workers`. Requires trials >= 100.
EstimationResult monte_carlo_error(const LikelihoodModel& model, std::uint64_t trials,
                                   std::uint64_t seed, unsigned workers = 1);

/// Pairwise (cascade) summation; fixed association order for a given size.
double pairwise_sum(const double* values, std::size_t count);

}  // namespace spinframe
