#include "spinframe/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <set>
#include <stdexcept>
#include <thread>

#include "spinframe/representation.hpp"

namespace spinframe {

namespace {

std::complex<double> highest_weight_element(HalfInt j, const GroupElement& g) {
  // D^J_{JJ} = (cos(beta/2) e^{-i(alpha+gamma)/2})^{2J} = (w - i z)^{2J}.
  const std::complex<double> a(g.w(), -g.z());
  std::complex<double> result = 1.0;
  for (int k = 0; k < j.twice(); ++k) result *= a;
  return result;
}

}  // namespace

MAssignment MAssignment::canonical(int n_spins) {
  MAssignment a;
  const auto classes = spin_classes(n_spins);
  for (std::size_t k = 1; k < classes.size(); ++k) {
    const HalfInt j = classes[k];
    std::vector<int> ms;
    for (int alpha = 1; alpha <= j.dim(); ++alpha) ms.push_back(2 * alpha - j.twice() - 2);
    a.twice_m.push_back(std::move(ms));
  }
  return a;
}

bool MAssignment::injective() const {
  for (const auto& ms : twice_m) {
    if (std::set<int>(ms.begin(), ms.end()).size() != ms.size()) return false;
  }
  return true;
}

ReferenceState::ReferenceState(int n_spins, std::vector<double> coefficients,
                               MAssignment assignment)
    : n_spins_(n_spins),
      coefficients_(std::move(coefficients)),
      assignment_(std::move(assignment)),
      classes_(spin_classes(n_spins)) {
  if (n_spins_ < 2) throw std::invalid_argument("N must be >= 2");
  if (coefficients_.size() != classes_.size()) {
    throw std::invalid_argument("ReferenceState: expected one coefficient per class");
  }
  double norm2 = 0.0;
  for (double a : coefficients_) {
    if (!(a >= 0.0)) throw std::invalid_argument("ReferenceState: coefficients must be >= 0");
    norm2 += a * a;
  }
  if (std::abs(norm2 - 1.0) > 1e-12) {
    throw std::invalid_argument("ReferenceState: coefficients must have unit norm");
  }
  if (assignment_.twice_m.size() + 1 != classes_.size()) {
    throw std::invalid_argument("ReferenceState: assignment must cover every class j < J");
  }
  for (std::size_t k = 0; k < assignment_.twice_m.size(); ++k) {
    const HalfInt j = classes_[k + 1];
    const auto& ms = assignment_.twice_m[k];
    if (ms.size() != static_cast<std::size_t>(j.dim())) {
      throw std::invalid_argument("ReferenceState: class j needs 2j+1 assigned copies");
    }
    for (int m : ms) {
      if (std::abs(m) > j.twice() || (j.twice() - m) % 2 != 0) {
        throw std::invalid_argument("ReferenceState: assigned m outside [-j, j]");
      }
    }
  }
  if (!assignment_.injective()) {
    throw std::invalid_argument("ReferenceState: m assignment must be injective");
  }
}

ReferenceState::ReferenceState(int n_spins, std::vector<double> coefficients)
    : ReferenceState(n_spins, std::move(coefficients), MAssignment::canonical(n_spins)) {}

ReferenceState ReferenceState::from_protocol(const OptimalProtocol& protocol) {
  return ReferenceState(protocol.n_spins, protocol.coefficients);
}

LikelihoodModel::LikelihoodModel(ReferenceState reference)
    : reference_(std::move(reference)),
      envelope_(static_cast<double>(orbit_dimension(reference_.n_spins()))) {}

double LikelihoodModel::peak() const {
  const auto& a = reference_.coefficients();
  const auto& classes = reference_.classes();
  double amp = std::sqrt(static_cast<double>(classes[0].dim())) * a[0];
  for (std::size_t k = 1; k < classes.size(); ++k) amp += a[k] * classes[k].dim();
  return amp * amp;
}

double likelihood(const LikelihoodModel& model, const GroupElement& g) {
  const auto& a = model.reference().coefficients();
  const auto& classes = model.reference().classes();
  double chi_sum = 0.0;
  for (std::size_t k = 1; k < classes.size(); ++k) chi_sum += a[k] * character(classes[k], g);
  const std::complex<double> amp =
      chi_sum + std::sqrt(static_cast<double>(classes[0].dim())) * a[0] *
                    highest_weight_element(classes[0], g);
  return std::norm(amp);
}

CharacterEstimate average_character(const ReferenceState& state, CharacterMethod method,
                                    const QuadratureGrid& grid) {
  CharacterEstimate est;
  if (method == CharacterMethod::analytic) {
    est.value = build_M(state.n_spins()).quadratic_form(state.coefficients());
    return est;
  }
  const int n = state.n_spins();
  if (grid.n_alpha <= n + 1 || grid.n_gamma <= 2 * (n + 1) || grid.n_beta < n / 2 + 2) {
    est.warning = "quadrature grid too coarse for N=" + std::to_string(n) +
                  ": need n_alpha > N+1, n_gamma > 2(N+1), n_beta >= N/2+2";
  }
  const LikelihoodModel model(state);
  const HalfInt one = HalfInt::from_twice(2);
  est.value = haar_integrate(
      [&](const GroupElement& g) { return character(one, g) * likelihood(model, g); }, grid);
  return est;
}

double average_error(const ReferenceState& state) {
  return 6.0 - 2.0 * average_character(state, CharacterMethod::analytic).value;
}

SamplerCapExceeded::SamplerCapExceeded(std::uint64_t proposals, double envelope)
    : NumericalError("rejection sampler exceeded " + std::to_string(proposals) +
                     " proposals for one draw (envelope dim K = " + std::to_string(envelope) +
                     ", expected acceptance ~ 1/dim K)"),
      proposals_(proposals) {}

GroupElement sample_relative(const LikelihoodModel& model, RandomStream& rng,
                             SamplerStats* stats) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double bound = model.envelope();
  for (std::uint64_t k = 1; k <= kMaxProposalsPerDraw; ++k) {
    const GroupElement h = haar_sample(rng);
    const double u = uniform(rng);
    if (u * bound < likelihood(model, h)) {
      if (stats) {
        stats->proposals += k;
        stats->accepted += 1;
      }
      return h;
    }
  }
  if (stats) stats->proposals += kMaxProposalsPerDraw;
  throw SamplerCapExceeded(kMaxProposalsPerDraw, bound);
}

GroupElement sample_estimate(const LikelihoodModel& model, const GroupElement& g_star,
                             RandomStream& rng, SamplerStats* stats) {
  return g_star * sample_relative(model, rng, stats);
}

double EstimationResult::z_score() const {
  return std::abs(mean_error - analytic_error) / std_error;
}

double pairwise_sum(const double* values, std::size_t count) {
  if (count <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += values[i];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(values, half) + pairwise_sum(values + half, count - half);
}

EstimationResult monte_carlo_error(const LikelihoodModel& model, std::uint64_t trials,
                                   std::uint64_t seed, unsigned workers) {
  if (trials < 100) throw std::invalid_argument("monte_carlo_error: trials must be >= 100");
  workers = std::max(1u, workers);
  std::vector<double> errors(trials);
  std::vector<SamplerStats> stats(workers);
  std::vector<std::exception_ptr> failures(workers);

  const auto run = [&](unsigned worker, std::uint64_t begin, std::uint64_t end) {
    try {
      for (std::uint64_t k = begin; k < end; ++k) {
        RandomStream rng = make_stream(seed, k);
        const GroupElement g_star = haar_sample(rng);
        const GroupElement estimate = sample_estimate(model, g_star, rng, &stats[worker]);
        errors[k] = transmission_error(estimate, g_star);
      }
    } catch (...) {
      failures[worker] = std::current_exception();
    }
  };

  if (workers == 1) {
    run(0, 0, trials);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (trials + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = std::min<std::uint64_t>(trials, w * chunk);
      const std::uint64_t end = std::min<std::uint64_t>(trials, begin + chunk);
      pool.emplace_back(run, w, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  EstimationResult r;
  r.n_spins = model.reference().n_spins();
  r.trials = trials;
  r.seed = seed;
  const double n = static_cast<double>(trials);
  r.mean_error = pairwise_sum(errors.data(), errors.size()) / n;
  std::vector<double> sq(trials);
  for (std::size_t k = 0; k < errors.size(); ++k) {
    const double d = errors[k] - r.mean_error;
    sq[k] = d * d;
  }
  const double variance = pairwise_sum(sq.data(), sq.size()) / (n - 1.0);
  r.std_error = std::sqrt(variance / n);
  r.analytic_error = average_error(model.reference());
  SamplerStats total;
  for (const auto& s : stats) {
    total.accepted += s.accepted;
    total.proposals += s.proposals;
  }
  r.acceptance_rate = static_cast<double>(total.accepted) / static_cast<double>(total.proposals);
  return r;
}

}  // namespace spinframe
