#include "spinframe/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "spinframe/errors.hpp"
#include "spinframe/representation.hpp"

namespace spinframe {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double pivot_floor(const TridiagonalSymmetric& t) {
  double emax = 1.0;
  for (double e : t.offdiag) emax = std::max(emax, e * e);
  return std::numeric_limits<double>::min() * emax;
}

/// Solves (T - shift I) x = rhs in place by Gaussian elimination with
/// partial pivoting. Vanishing pivots are replaced by `tiny`, which is what
/// inverse iteration wants at an eigenvalue shift.
void shifted_solve(const TridiagonalSymmetric& t, double shift, double tiny,
                   std::vector<double>& rhs) {
  const std::size_t n = t.size();
  std::vector<double> d(n), du(t.offdiag), dl(t.offdiag);
  for (std::size_t i = 0; i < n; ++i) d[i] = t.diag[i] - shift;
  auto& b = rhs;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = tiny;
      const double fact = dl[i] / d[i];
      d[i + 1] -= fact * du[i];
      b[i + 1] -= fact * b[i];
      if (i + 2 < n) dl[i] = 0.0;
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      const double temp = d[i + 1];
      d[i + 1] = du[i] - fact * temp;
      if (i + 2 < n) {
        dl[i] = du[i + 1];
        du[i + 1] = -fact * dl[i];
      }
      du[i] = temp;
      const double bi = b[i];
      b[i] = b[i + 1];
      b[i + 1] = bi - fact * b[i + 1];
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = tiny;
  b[n - 1] /= d[n - 1];
  if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
  for (std::size_t k = n; k-- > 2;) {
    const std::size_t i = k - 2;
    b[i] = (b[i] - du[i] * b[i + 1] - dl[i] * b[i + 2]) / d[i];
  }
}

double normalize(std::vector<double>& v) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return norm;
}

double residual_inf(const TridiagonalSymmetric& t, const std::vector<double>& v, double lambda) {
  const auto tv = t.apply(v);
  double r = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) r = std::max(r, std::abs(tv[i] - lambda * v[i]));
  return r;
}

}  // namespace

double TridiagonalSymmetric::at(std::size_t row, std::size_t col) const {
  if (row == col) return diag.at(row);
  if (row + 1 == col) return offdiag.at(row);
  if (col + 1 == row) return offdiag.at(col);
  return 0.0;
}

std::vector<double> TridiagonalSymmetric::apply(const std::vector<double>& x) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += offdiag[i - 1] * x[i - 1];
    if (i + 1 < n) s += offdiag[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

double TridiagonalSymmetric::quadratic_form(const std::vector<double>& x) const {
  const auto y = apply(x);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

TridiagonalSymmetric build_M(int n_spins) {
  if (n_spins < 2) throw std::invalid_argument("N must be >= 2");
  TridiagonalSymmetric m;
  m.row_labels = spin_classes(n_spins);
  const std::size_t k = m.row_labels.size();
  const double big_j = 0.5 * n_spins;
  m.diag.assign(k, 1.0);
  m.offdiag.assign(k - 1, 1.0);
  m.diag.front() = big_j / (big_j + 1.0);
  m.offdiag.front() = 1.0 / std::sqrt(2.0 * big_j + 1.0);
  // zeta: the j=0 class has no j=1 self-coupling, j=1/2 has.
  m.diag.back() = (n_spins % 2 == 0) ? 0.0 : 1.0;
  return m;
}

TridiagonalSymmetric build_T(int n_spins) {
  if (n_spins < 4) throw std::invalid_argument("build_T requires N >= 4");
  TridiagonalSymmetric m = build_M(n_spins);
  TridiagonalSymmetric t;
  t.diag.assign(m.diag.begin() + 1, m.diag.end());
  t.offdiag.assign(m.offdiag.begin() + 1, m.offdiag.end());
  t.row_labels.assign(m.row_labels.begin() + 1, m.row_labels.end());
  if (t.size() == 0) throw std::invalid_argument("build_T: empty truncation");
  return t;
}

double sigma_closed_form(int n_spins) {
  if (n_spins < 1) throw std::invalid_argument("N must be positive");
  return 1.0 + 2.0 * std::cos(2.0 * std::numbers::pi / (n_spins + 1));
}

std::size_t sturm_count(const TridiagonalSymmetric& t, double x) {
  const double pivmin = pivot_floor(t);
  std::size_t count = 0;
  double q = t.diag[0] - x;
  for (std::size_t i = 0;;) {
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
    if (++i == t.size()) break;
    q = t.diag[i] - x - t.offdiag[i - 1] * t.offdiag[i - 1] / q;
  }
  return count;
}

Eigenpair leading_eigenpair(const TridiagonalSymmetric& t, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("leading_eigenpair: tol must be positive");
  const std::size_t n = t.size();
  if (n == 0 || t.offdiag.size() + 1 != n) {
    throw std::invalid_argument("leading_eigenpair: malformed tridiagonal matrix");
  }

  // Gershgorin bracket, then bisection on the Sturm count.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(t.offdiag[i - 1]);
    if (i + 1 < n) radius += std::abs(t.offdiag[i]);
    lo = std::min(lo, t.diag[i] - radius);
    hi = std::max(hi, t.diag[i] + radius);
  }
  const double span = std::max(std::abs(lo), std::abs(hi));
  lo -= 2 * kEps * span + std::numeric_limits<double>::min();
  hi += 2 * kEps * span + std::numeric_limits<double>::min();
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= 2 * kEps * std::max(std::abs(lo), std::abs(hi))) break;
    if (sturm_count(t, mid) == n) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  Eigenpair result;
  result.value = 0.5 * (lo + hi);
  result.vector.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
  const double tiny = kEps * std::max(span, 1.0);
  const double target = tol * (1.0 + std::abs(result.value));
  constexpr int kMaxSweeps = 10;
  for (int sweep = 1; sweep <= kMaxSweeps; ++sweep) {
    shifted_solve(t, result.value, tiny, result.vector);
    normalize(result.vector);
    result.iterations = sweep;
    result.residual = residual_inf(t, result.vector, result.value);
    if (result.residual <= target && sweep >= 2) break;
  }
  double sum = 0.0;
  for (double x : result.vector) sum += x;
  if (sum < 0.0) {
    for (double& x : result.vector) x = -x;
  }
  if (!(result.residual <= target)) {
    throw NumericalError("leading_eigenpair: inverse iteration stalled at residual " +
                         std::to_string(result.residual));
  }
  return result;
}

OptimalProtocol optimal_protocol(int n_spins) {
  if (n_spins < 2) throw std::invalid_argument("N must be >= 2");
  const TridiagonalSymmetric m = build_M(n_spins);
  Eigenpair pair = leading_eigenpair(m);
  // Perron vector: clear round-off sign noise on vanishing entries.
  for (double& a : pair.vector) a = std::max(a, 0.0);
  normalize(pair.vector);
  return {n_spins, pair.value, std::move(pair.vector), m.row_labels};
}

double asymptotic_error(double n_spins) {
  if (!(n_spins > 0.0)) throw std::invalid_argument("N must be positive");
  return 8.0 * std::numbers::pi * std::numbers::pi / (n_spins * n_spins);
}

TridiagonalSymmetric single_copy_matrix(int n_spins, int twice_m) {
  if (n_spins < 1) throw std::invalid_argument("N must be positive");
  if ((n_spins - twice_m) % 2 != 0 || std::abs(twice_m) > n_spins) {
    throw std::invalid_argument("single_copy_matrix: projection incompatible with N");
  }
  TridiagonalSymmetric s;
  for (HalfInt j : spin_classes(n_spins)) {
    if (j.twice() >= std::abs(twice_m)) s.row_labels.push_back(j);
  }
  const HalfInt one = HalfInt::from_twice(2);
  for (std::size_t r = 0; r < s.row_labels.size(); ++r) {
    const HalfInt j = s.row_labels[r];
    const double cg = cg_coefficient(one, 0, j, twice_m, j, twice_m);
    s.diag.push_back(cg * cg);
    if (r + 1 < s.row_labels.size()) {
      const HalfInt l = s.row_labels[r + 1];
      const double c = cg_coefficient(one, 0, j, twice_m, l, twice_m);
      s.offdiag.push_back(std::sqrt(static_cast<double>(j.dim()) / l.dim()) * c * c);
    }
  }
  return s;
}

double single_copy_baseline(int n_spins) {
  double best = 0.0;
  for (int twice_m = n_spins % 2; twice_m <= n_spins; twice_m += 2) {
    best = std::max(best, leading_eigenpair(single_copy_matrix(n_spins, twice_m)).value);
  }
  return best;
}

}  // namespace spinframe
