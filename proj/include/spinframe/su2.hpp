#pragma once

/**
 * @file su2.hpp
 * @brief SU(2) group arithmetic, Wigner matrices, characters, Haar sampling
 *        and Haar quadrature.
 *
 * Group elements are unit quaternions q = (w, x, y, z) acting on spin-1/2 as
 *   U(q) = w 1 - i (x sx + y sy + z sz),
 * so q = (cos t/2, n sin t/2) is the rotation by angle t about axis n and the
 * Hamilton product is the group law. q and -q are the same SO(3) rotation.
 */

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "spinframe/random.hpp"

namespace spinframe {

/// Angular momentum quantum number stored as 2j, so half-integers are exact.
class HalfInt {
 public:
  constexpr HalfInt() = default;

  static constexpr HalfInt from_twice(int twice) {
    if (twice < 0) throw std::invalid_argument("HalfInt: 2j must be non-negative");
    HalfInt h;
    h.twice_ = twice;
    return h;
  }

  constexpr int twice() const noexcept { return twice_; }
  constexpr double value() const noexcept { return 0.5 * twice_; }
  /// 2j + 1.
  constexpr int dim() const noexcept { return twice_ + 1; }
  constexpr bool is_integer() const noexcept { return twice_ % 2 == 0; }

  constexpr auto operator<=>(const HalfInt&) const = default;

 private:
  int twice_ = 0;
};

/// zyz Euler angles of an SU(2) element: alpha in [0, 2pi), beta in [0, pi],
/// gamma in [0, 4pi) (the double cover lives in gamma).
struct EulerZYZ {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

/// Unit quaternion. The constructor renormalizes.
class GroupElement {
 public:
  constexpr GroupElement() = default;
  GroupElement(double w, double x, double y, double z);

  static GroupElement identity() { return {}; }
  static GroupElement rx(double angle);
  static GroupElement ry(double angle);
  static GroupElement rz(double angle);
  /// Rotation by `angle` about the (not necessarily normalized) axis.
  static GroupElement axis_angle(const std::array<double, 3>& axis, double angle);
  static GroupElement from_euler(const EulerZYZ& e);

  double w() const noexcept { return w_; }
  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }
  double z() const noexcept { return z_; }

  GroupElement inverse() const noexcept { return raw(w_, -x_, -y_, -z_); }
  GroupElement operator-() const noexcept { return raw(-w_, -x_, -y_, -z_); }
  GroupElement operator*(const GroupElement& o) const;

  EulerZYZ to_euler() const;

  /// Rotation angle in SU(2), in [0, 2pi]; w = cos(angle/2).
  double angle() const;

 private:
  static GroupElement raw(double w, double x, double y, double z) noexcept {
    GroupElement g;
    g.w_ = w;
    g.x_ = x;
    g.y_ = y;
    g.z_ = z;
    return g;
  }

  double w_ = 1.0;
  double x_ = 0.0;
  double y_ = 0.0;
  double z_ = 0.0;
};

inline GroupElement compose(const GroupElement& g, const GroupElement& h) { return g * h; }
inline GroupElement inverse(const GroupElement& g) { return g.inverse(); }

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// SO(3) image of g; column k is the image of the k-th basis axis.
Matrix3 rotation_matrix(const GroupElement& g);

/// Sum over the three axes of |R(g) n - R(g*) n|^2. Range [0, 8].
double transmission_error(const GroupElement& g, const GroupElement& g_star);

/// Dense (2j+1)x(2j+1) Wigner matrix, rows/columns ordered m = -j ... +j.
class WignerMatrix {
 public:
  explicit WignerMatrix(HalfInt j)
      : j_(j), data_(static_cast<std::size_t>(j.dim() * j.dim())) {}

  HalfInt spin() const noexcept { return j_; }
  int dim() const noexcept { return j_.dim(); }

  std::complex<double>& operator()(int row, int col) { return data_[index(row, col)]; }
  const std::complex<double>& operator()(int row, int col) const { return data_[index(row, col)]; }

  /// Element D_{m'm} addressed by doubled projections 2m', 2m.
  std::complex<double> at(int twice_mp, int twice_m) const;

  std::complex<double> trace() const;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row * j_.dim() + col);
  }

  HalfInt j_;
  std::vector<std::complex<double>> data_;
};

/// Wigner small-d element d^j_{m'm}(beta), Condon-Shortley phases.
double wigner_small_d(HalfInt j, int twice_mp, int twice_m, double beta);

/// D^j_{m'm}(g) = exp(-i m' alpha) d^j_{m'm}(beta) exp(-i m gamma).
WignerMatrix wigner_D(HalfInt j, const GroupElement& g);

/// Single element D^j_{m'm}(g) without building the matrix.
std::complex<double> wigner_D_element(HalfInt j, int twice_mp, int twice_m, const GroupElement& g);

/// chi_j(g) = sin((2j+1)t/2) / sin(t/2), evaluated as the Chebyshev polynomial
/// U_{2j}(cos t/2) so that t -> 0 and t -> 2pi are exact.
double character(HalfInt j, const GroupElement& g);

/// Haar-uniform element: four standard normals, normalized.
GroupElement haar_sample(RandomStream& rng);

/// Resolution of the product Euler-angle rule used by haar_integrate.
struct QuadratureGrid {
  int n_alpha = 32;
  int n_beta = 32;
  int n_gamma = 32;

  static constexpr QuadratureGrid cube(int n) { return {n, n, n}; }
  /// Throws std::invalid_argument if any resolution is below 4.
  void validate() const;
};

struct QuadratureNode {
  GroupElement g;
  double weight;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

/// Nodes of Gauss-Legendre in beta (weight sin beta folded in) times the
/// trapezoidal rule in alpha over [0, 2pi) and gamma over [0, 4pi).
/// Weights sum to 1.
std::vector<QuadratureNode> haar_quadrature_nodes(const QuadratureGrid& grid);

/// Approximates the normalized Haar integral of f. Works for any result
/// type closed under addition and scaling by double (scalars, Eigen
/// matrices). Nodes are summed in a fixed order.
template <class F>
auto haar_integrate(F&& f, const QuadratureGrid& grid) {
  using Result = std::decay_t<std::invoke_result_t<F&, const GroupElement&>>;
  const auto nodes = haar_quadrature_nodes(grid);
  Result acc = f(nodes.front().g) * nodes.front().weight;
  for (std::size_t k = 1; k < nodes.size(); ++k) acc += f(nodes[k].g) * nodes[k].weight;
  return acc;
}

}  // namespace spinframe
