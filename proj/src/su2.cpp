#include "spinframe/su2.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace spinframe {

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<double>& factorial_table() {
  static const std::vector<double> table = [] {
    std::vector<double> f(171, 1.0);
    for (std::size_t n = 1; n < f.size(); ++n) f[n] = f[n - 1] * static_cast<double>(n);
    return f;
  }();
  return table;
}

double factorial(int n) {
  const auto& f = factorial_table();
  if (n < 0 || n >= static_cast<int>(f.size())) {
    throw std::invalid_argument("factorial argument out of range: " + std::to_string(n));
  }
  return f[static_cast<std::size_t>(n)];
}

double ipow(double base, int exponent) {
  double result = 1.0;
  for (int k = 0; k < exponent; ++k) result *= base;
  return result;
}

void check_projection(HalfInt j, int twice_m) {
  if (std::abs(twice_m) > j.twice() || (j.twice() - twice_m) % 2 != 0) {
    throw std::invalid_argument("projection 2m=" + std::to_string(twice_m) +
                                " incompatible with 2j=" + std::to_string(j.twice()));
  }
}

std::complex<double> unit_phase(double phase) {
  return {std::cos(phase), std::sin(phase)};
}

double wrap(double angle, double period) {
  double r = std::fmod(angle, period);
  if (r < 0.0) r += period;
  if (r >= period) r -= period;
  return r;
}

}  // namespace

GroupElement::GroupElement(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("GroupElement: quaternion must be finite and nonzero");
  }
  w_ = w / n;
  x_ = x / n;
  y_ = y / n;
  z_ = z / n;
}

GroupElement GroupElement::rx(double angle) {
  return {std::cos(angle / 2), std::sin(angle / 2), 0.0, 0.0};
}

GroupElement GroupElement::ry(double angle) {
  return {std::cos(angle / 2), 0.0, std::sin(angle / 2), 0.0};
}

GroupElement GroupElement::rz(double angle) {
  return {std::cos(angle / 2), 0.0, 0.0, std::sin(angle / 2)};
}

GroupElement GroupElement::axis_angle(const std::array<double, 3>& axis, double angle) {
  const double n = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (!(n > 0.0)) throw std::invalid_argument("axis_angle: zero axis");
  const double s = std::sin(angle / 2) / n;
  return {std::cos(angle / 2), axis[0] * s, axis[1] * s, axis[2] * s};
}

GroupElement GroupElement::from_euler(const EulerZYZ& e) {
  return rz(e.alpha) * ry(e.beta) * rz(e.gamma);
}

GroupElement GroupElement::operator*(const GroupElement& o) const {
  return {w_ * o.w_ - x_ * o.x_ - y_ * o.y_ - z_ * o.z_,
          w_ * o.x_ + x_ * o.w_ + y_ * o.z_ - z_ * o.y_,
          w_ * o.y_ - x_ * o.z_ + y_ * o.w_ + z_ * o.x_,
          w_ * o.z_ + x_ * o.y_ - y_ * o.x_ + z_ * o.w_};
}

EulerZYZ GroupElement::to_euler() const {
  // U = [[a, b], [-conj(b), conj(a)]] in the (+1/2, -1/2) basis, with
  // a = exp(-i(alpha+gamma)/2) cos(beta/2), b = -exp(-i(alpha-gamma)/2) sin(beta/2).
  const std::complex<double> a(w_, -z_);
  const std::complex<double> b(-y_, -x_);
  const double abs_a = std::abs(a);
  const double abs_b = std::abs(b);
  EulerZYZ e;
  e.beta = 2.0 * std::atan2(abs_b, abs_a);
  constexpr double tiny = 1e-14;
  double alpha = 0.0;
  double gamma = 0.0;
  if (abs_b < tiny) {
    gamma = -2.0 * std::arg(a);
  } else if (abs_a < tiny) {
    gamma = 2.0 * std::arg(-b);
  } else {
    const double sum = -2.0 * std::arg(a);
    const double diff = -2.0 * std::arg(-b);
    alpha = 0.5 * (sum + diff);
    gamma = 0.5 * (sum - diff);
  }
  // Shifting alpha and gamma together by 2pi leaves the SU(2) element fixed.
  const double turns = std::floor(alpha / (2 * kPi));
  e.alpha = wrap(alpha - 2 * kPi * turns, 2 * kPi);
  e.gamma = wrap(gamma - 2 * kPi * turns, 4 * kPi);
  return e;
}

double GroupElement::angle() const {
  return 2.0 * std::acos(std::clamp(w_, -1.0, 1.0));
}

Matrix3 rotation_matrix(const GroupElement& g) {
  const double w = g.w(), x = g.x(), y = g.y(), z = g.z();
  Matrix3 r{};
  r[0] = {1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)};
  r[1] = {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)};
  r[2] = {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)};
  return r;
}

double transmission_error(const GroupElement& g, const GroupElement& g_star) {
  const Matrix3 r = rotation_matrix(g);
  const Matrix3 s = rotation_matrix(g_star);
  double total = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    for (int row = 0; row < 3; ++row) {
      const double d = r[row][axis] - s[row][axis];
      total += d * d;
    }
  }
  return total;
}

std::complex<double> WignerMatrix::at(int twice_mp, int twice_m) const {
  check_projection(j_, twice_mp);
  check_projection(j_, twice_m);
  return (*this)((twice_mp + j_.twice()) / 2, (twice_m + j_.twice()) / 2);
}

std::complex<double> WignerMatrix::trace() const {
  std::complex<double> t = 0.0;
  for (int k = 0; k < dim(); ++k) t += (*this)(k, k);
  return t;
}

double wigner_small_d(HalfInt j, int twice_mp, int twice_m, double beta) {
  check_projection(j, twice_mp);
  check_projection(j, twice_m);
  const int jpmp = (j.twice() + twice_mp) / 2;  // j + m'
  const int jmmp = (j.twice() - twice_mp) / 2;  // j - m'
  const int jpm = (j.twice() + twice_m) / 2;    // j + m
  const int jmm = (j.twice() - twice_m) / 2;    // j - m
  const int mp_minus_m = (twice_mp - twice_m) / 2;
  const double c = std::cos(beta / 2);
  const double s = std::sin(beta / 2);
  const double prefactor =
      std::sqrt(factorial(jpmp) * factorial(jmmp) * factorial(jpm) * factorial(jmm));

  double sum = 0.0;
  const int s_min = std::max(0, -mp_minus_m);
  const int s_max = std::min(jpm, jmmp);
  for (int k = s_min; k <= s_max; ++k) {
    const double denom = factorial(jpm - k) * factorial(k) * factorial(mp_minus_m + k) *
                         factorial(jmmp - k);
    const double sign = ((mp_minus_m + k) % 2 == 0) ? 1.0 : -1.0;
    sum += sign / denom * ipow(c, j.twice() - mp_minus_m - 2 * k) * ipow(s, mp_minus_m + 2 * k);
  }
  return prefactor * sum;
}

std::complex<double> wigner_D_element(HalfInt j, int twice_mp, int twice_m, const GroupElement& g) {
  const EulerZYZ e = g.to_euler();
  const double phase = -0.5 * (twice_mp * e.alpha + twice_m * e.gamma);
  return wigner_small_d(j, twice_mp, twice_m, e.beta) * unit_phase(phase);
}

WignerMatrix wigner_D(HalfInt j, const GroupElement& g) {
  const EulerZYZ e = g.to_euler();
  WignerMatrix d(j);
  for (int row = 0; row < j.dim(); ++row) {
    const int twice_mp = 2 * row - j.twice();
    for (int col = 0; col < j.dim(); ++col) {
      const int twice_m = 2 * col - j.twice();
      const double phase = -0.5 * (twice_mp * e.alpha + twice_m * e.gamma);
      d(row, col) = wigner_small_d(j, twice_mp, twice_m, e.beta) * unit_phase(phase);
    }
  }
  return d;
}

double character(HalfInt j, const GroupElement& g) {
  const double c = g.w();  // cos(t/2)
  double prev = 1.0;       // U_0
  if (j.twice() == 0) return prev;
  double cur = 2.0 * c;    // U_1
  for (int n = 1; n < j.twice(); ++n) {
    const double next = 2.0 * c * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

GroupElement haar_sample(RandomStream& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    const double w = normal(rng), x = normal(rng), y = normal(rng), z = normal(rng);
    if (w * w + x * x + y * y + z * z > 1e-300) return {w, x, y, z};
  }
}

void QuadratureGrid::validate() const {
  if (n_alpha < 4 || n_beta < 4 || n_gamma < 4) {
    throw std::invalid_argument("quadrature grid needs at least 4 points per Euler angle");
  }
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  // Legendre P_n(x) and its derivative by the three-term recurrence.
  const auto legendre = [n](double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    return std::pair{p1, dp};
  };
  std::vector<double> nodes(static_cast<std::size_t>(n));
  std::vector<double> weights(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return {nodes, weights};
}

std::vector<QuadratureNode> haar_quadrature_nodes(const QuadratureGrid& grid) {
  grid.validate();
  const auto [u, wu] = gauss_legendre(grid.n_beta);
  std::vector<QuadratureNode> nodes;
  nodes.reserve(static_cast<std::size_t>(grid.n_alpha) * grid.n_beta * grid.n_gamma);
  const double scale = 0.5 / (static_cast<double>(grid.n_alpha) * grid.n_gamma);
  for (int ib = 0; ib < grid.n_beta; ++ib) {
    // Gauss-Legendre in cos(beta) absorbs the sin(beta) Jacobian.
    const double beta = std::acos(u[static_cast<std::size_t>(ib)]);
    const double wb = wu[static_cast<std::size_t>(ib)] * scale;
    for (int ia = 0; ia < grid.n_alpha; ++ia) {
      const double alpha = 2 * kPi * ia / grid.n_alpha;
      for (int ig = 0; ig < grid.n_gamma; ++ig) {
        const double gamma = 4 * kPi * ig / grid.n_gamma;
        nodes.push_back({GroupElement::from_euler({alpha, beta, gamma}), wb});
      }
    }
  }
  return nodes;
}

}  // namespace spinframe
