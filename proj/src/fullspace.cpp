#include "spinframe/fullspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "spinframe/representation.hpp"
#include "spinframe/spectral.hpp"

namespace spinframe::oracle {

namespace {

int index_of_m(int twice_m, int twice_j) { return (twice_m + twice_j) / 2; }

void check_oracle_range(int n_spins, int limit) {
  if (n_spins < 1 || n_spins > limit) {
    throw std::invalid_argument("oracle limited to N <= " + std::to_string(limit));
  }
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix to_eigen(const WignerMatrix& d) {
  ComplexMatrix m(d.dim(), d.dim());
  for (int r = 0; r < d.dim(); ++r) {
    for (int c = 0; c < d.dim(); ++c) m(r, c) = d(r, c);
  }
  return m;
}

/// Total-spin operators (S_z, S_+) on N spins.
std::pair<ComplexMatrix, ComplexMatrix> total_spin_ops(int n_spins) {
  ComplexMatrix sz1 = ComplexMatrix::Zero(2, 2);
  sz1(0, 0) = -0.5;
  sz1(1, 1) = 0.5;
  ComplexMatrix sp1 = ComplexMatrix::Zero(2, 2);
  sp1(1, 0) = 1.0;  // |-1/2> -> |+1/2>
  const int dim = 1 << n_spins;
  ComplexMatrix sz = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix sp = ComplexMatrix::Zero(dim, dim);
  for (int site = 0; site < n_spins; ++site) {
    ComplexMatrix z = ComplexMatrix::Identity(1, 1);
    ComplexMatrix p = ComplexMatrix::Identity(1, 1);
    for (int k = 0; k < n_spins; ++k) {
      const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
      z = kron(z, k == site ? sz1 : id);
      p = kron(p, k == site ? sp1 : id);
    }
    sz += z;
    sp += p;
  }
  return {sz, sp};
}

std::vector<double> unit_coefficients(std::size_t size, std::size_t k) {
  std::vector<double> e(size, 0.0);
  e[k] = 1.0;
  return e;
}

}  // namespace

const ComplexVector& SchurBasis::vector(const SchurLabel& label) const {
  const auto it = vectors_.find(label);
  if (it == vectors_.end()) {
    throw std::out_of_range("SchurBasis: no vector for 2j=" + std::to_string(label.twice_j) +
                            " alpha=" + std::to_string(label.alpha) +
                            " 2m=" + std::to_string(label.twice_m));
  }
  return it->second;
}

int SchurBasis::copies(HalfInt j) const {
  int count = 0;
  for (const auto& [key, path] : paths_) {
    if (key.first == j.twice()) ++count;
  }
  return count;
}

const std::vector<int>& SchurBasis::path(HalfInt j, int alpha) const {
  return paths_.at({j.twice(), alpha});
}

std::vector<SchurLabel> SchurBasis::labels() const {
  std::vector<SchurLabel> out;
  out.reserve(vectors_.size());
  for (const auto& [label, v] : vectors_) out.push_back(label);
  return out;
}

ComplexMatrix SchurBasis::as_matrix() const {
  ComplexMatrix m(dimension(), static_cast<Eigen::Index>(vectors_.size()));
  Eigen::Index col = 0;
  for (const auto& [label, v] : vectors_) m.col(col++) = v;
  return m;
}

SchurBasis schur_basis(int n_spins) {
  check_oracle_range(n_spins, kMaxOracleSpins);
  const HalfInt half = HalfInt::from_twice(1);

  // Coupled states after k spins, keyed by the intermediate-spin path; the
  // inner vector is indexed by m from -j to j.
  std::map<std::vector<int>, std::vector<ComplexVector>> level;
  {
    std::vector<ComplexVector> states(2, ComplexVector::Zero(2));
    states[0](0) = 1.0;
    states[1](1) = 1.0;
    level[{1}] = states;
  }
  for (int k = 2; k <= n_spins; ++k) {
    std::map<std::vector<int>, std::vector<ComplexVector>> next;
    const int dim = 1 << k;
    for (const auto& [path, states] : level) {
      const HalfInt jk = HalfInt::from_twice(path.back());
      for (int twice_new : {jk.twice() + 1, jk.twice() - 1}) {
        if (twice_new < 0) continue;
        const HalfInt jn = HalfInt::from_twice(twice_new);
        std::vector<ComplexVector> coupled;
        for (int twice_m = -twice_new; twice_m <= twice_new; twice_m += 2) {
          ComplexVector v = ComplexVector::Zero(dim);
          for (int twice_s : {-1, 1}) {
            const int twice_m1 = twice_m - twice_s;
            if (std::abs(twice_m1) > jk.twice()) continue;
            const double c = cg_coefficient(jk, twice_m1, half, twice_s, jn, twice_m);
            if (c == 0.0) continue;
            const ComplexVector& old = states[static_cast<std::size_t>(index_of_m(twice_m1, jk.twice()))];
            const int s_index = (twice_s + 1) / 2;
            for (Eigen::Index i = 0; i < old.size(); ++i) v(2 * i + s_index) += c * old(i);
          }
          coupled.push_back(std::move(v));
        }
        std::vector<int> extended = path;
        extended.push_back(twice_new);
        next[std::move(extended)] = std::move(coupled);
      }
    }
    level = std::move(next);
  }

  SchurBasis basis;
  basis.n_spins_ = n_spins;
  std::map<int, int> next_alpha;
  // std::map iterates paths in lexicographic order.
  for (const auto& [path, states] : level) {
    const int twice_j = path.back();
    const int alpha = ++next_alpha[twice_j];
    basis.paths_[{twice_j, alpha}] = path;
    for (int twice_m = -twice_j; twice_m <= twice_j; twice_m += 2) {
      basis.vectors_[{twice_j, alpha, twice_m}] =
          states[static_cast<std::size_t>(index_of_m(twice_m, twice_j))];
    }
  }
  return basis;
}

ComplexMatrix tensor_rotation(int n_spins, const GroupElement& g) {
  check_oracle_range(n_spins, kMaxOracleSpins);
  const ComplexMatrix u = to_eigen(wigner_D(HalfInt::from_twice(1), g));
  ComplexMatrix out = u;
  for (int k = 1; k < n_spins; ++k) out = kron(out, u);
  return out;
}

IsoTransferOperator iso_transfer(const SchurBasis& basis, HalfInt j, int alpha, int beta) {
  IsoTransferOperator t{j, alpha, beta, ComplexMatrix::Zero(basis.dimension(), basis.dimension())};
  for (int twice_m = -j.twice(); twice_m <= j.twice(); twice_m += 2) {
    t.matrix += basis.vector(j, alpha, twice_m) * basis.vector(j, beta, twice_m).adjoint();
  }
  return t;
}

ComplexMatrix block_projector(const SchurBasis& basis, HalfInt j, int alpha) {
  return iso_transfer(basis, j, alpha, alpha).matrix;
}

ComplexVector embed_reference(const SchurBasis& basis, const std::vector<double>& coefficients,
                              const MAssignment& assignment) {
  const auto classes = spin_classes(basis.n_spins());
  if (coefficients.size() != classes.size() || assignment.twice_m.size() + 1 != classes.size()) {
    throw std::invalid_argument("embed_reference: shape mismatch with the class list");
  }
  const HalfInt big_j = classes.front();
  ComplexVector a = coefficients[0] * basis.vector(big_j, 1, big_j.twice());
  for (std::size_t k = 1; k < classes.size(); ++k) {
    const HalfInt j = classes[k];
    const double scale = coefficients[k] / std::sqrt(static_cast<double>(j.dim()));
    const auto& ms = assignment.twice_m[k - 1];
    for (std::size_t alpha = 1; alpha <= ms.size(); ++alpha) {
      a += scale * basis.vector(j, static_cast<int>(alpha), ms[alpha - 1]);
    }
  }
  return a;
}

ComplexVector ml_vector(const SchurBasis& basis, const MAssignment& assignment,
                        const std::vector<double>& class_weights) {
  const auto classes = spin_classes(basis.n_spins());
  std::vector<double> weights = class_weights;
  if (weights.empty()) {
    for (HalfInt j : classes) weights.push_back(std::sqrt(static_cast<double>(j.dim())));
  }
  if (weights.size() != classes.size()) throw std::invalid_argument("ml_vector: weight count");
  const HalfInt big_j = classes.front();
  ComplexVector b = weights[0] * basis.vector(big_j, 1, big_j.twice());
  for (std::size_t k = 1; k < classes.size(); ++k) {
    const auto& ms = assignment.twice_m[k - 1];
    for (std::size_t alpha = 1; alpha <= ms.size(); ++alpha) {
      b += weights[k] * basis.vector(classes[k], static_cast<int>(alpha), ms[alpha - 1]);
    }
  }
  return b;
}

ComplexMatrix projector_K(const SchurBasis& basis) {
  const auto classes = spin_classes(basis.n_spins());
  ComplexMatrix p = block_projector(basis, classes.front(), 1);
  for (std::size_t k = 1; k < classes.size(); ++k) {
    for (int alpha = 1; alpha <= classes[k].dim(); ++alpha) {
      p += block_projector(basis, classes[k], alpha);
    }
  }
  return p;
}

double fullspace_likelihood(const ComplexVector& reference, const ComplexVector& ml,
                            const ComplexMatrix& rotation) {
  // <B|U^dag|A> = conj(<A|U|B>).
  return std::norm(reference.dot(rotation * ml));
}

double block_action_residual(const SchurBasis& basis, const GroupElement& g) {
  const ComplexMatrix u = tensor_rotation(basis.n_spins(), g);
  const auto labels = basis.labels();
  std::map<int, WignerMatrix> wigner;
  double worst = 0.0;
  for (const auto& col : labels) {
    const ComplexVector image = u * basis.vector(col);
    for (const auto& row : labels) {
      std::complex<double> expected = 0.0;
      if (row.twice_j == col.twice_j && row.alpha == col.alpha) {
        auto it = wigner.find(row.twice_j);
        if (it == wigner.end()) {
          it = wigner.emplace(row.twice_j, wigner_D(HalfInt::from_twice(row.twice_j), g)).first;
        }
        expected = it->second.at(row.twice_m, col.twice_m);
      }
      worst = std::max(worst, std::abs(basis.vector(row).dot(image) - expected));
    }
  }
  return worst;
}

double casimir_residual(const SchurBasis& basis) {
  const auto [sz, sp] = total_spin_ops(basis.n_spins());
  const ComplexMatrix sm = sp.adjoint();
  const ComplexMatrix s2 = sz * sz + 0.5 * (sp * sm + sm * sp);
  double worst = 0.0;
  for (const auto& label : basis.labels()) {
    const ComplexVector& v = basis.vector(label);
    const double j = 0.5 * label.twice_j;
    const double m = 0.5 * label.twice_m;
    worst = std::max(worst, (s2 * v - j * (j + 1) * v).cwiseAbs().maxCoeff());
    worst = std::max(worst, (sz * v - m * v).cwiseAbs().maxCoeff());
  }
  return worst;
}

int dimension_K(const SchurBasis& basis) {
  const ComplexMatrix p = projector_K(basis);
  return static_cast<int>(std::lround(p.trace().real()));
}

double verify_completeness(int n_spins, const QuadratureGrid& grid, MlWeights weights) {
  check_oracle_range(n_spins, kMaxQuadratureSpins);
  const SchurBasis basis = schur_basis(n_spins);
  const MAssignment assignment = MAssignment::canonical(n_spins);
  std::vector<double> class_weights;
  if (weights == MlWeights::broken) {
    for (HalfInt j : spin_classes(n_spins)) class_weights.push_back(std::sqrt(double(j.dim())));
    class_weights[0] = 1.0;
  }
  const ComplexVector b = ml_vector(basis, assignment, class_weights);
  const ComplexMatrix integral = haar_integrate(
      [&](const GroupElement& g) -> ComplexMatrix {
        const ComplexVector ub = tensor_rotation(n_spins, g) * b;
        return ub * ub.adjoint();
      },
      grid);
  return (integral - projector_K(basis)).cwiseAbs().maxCoeff();
}

MEntryReport verify_M_entries(int n_spins, const QuadratureGrid& grid) {
  check_oracle_range(n_spins, kMaxQuadratureSpins);
  const SchurBasis basis = schur_basis(n_spins);
  const MAssignment assignment = MAssignment::canonical(n_spins);
  const auto classes = spin_classes(n_spins);
  const std::size_t k = classes.size();
  const ComplexVector b = ml_vector(basis, assignment);
  std::vector<ComplexVector> states;
  for (std::size_t c = 0; c < k; ++c) {
    states.push_back(embed_reference(basis, unit_coefficients(k, c), assignment));
  }
  const HalfInt one = HalfInt::from_twice(2);
  const ComplexMatrix integral = haar_integrate(
      [&](const GroupElement& g) -> ComplexMatrix {
        const ComplexVector ub = tensor_rotation(n_spins, g) * b;
        ComplexVector amp(static_cast<Eigen::Index>(k));
        for (std::size_t c = 0; c < k; ++c) amp(static_cast<Eigen::Index>(c)) = std::conj(states[c].dot(ub));
        return character(one, g) * (amp.conjugate() * amp.transpose());
      },
      grid);

  const TridiagonalSymmetric m = build_M(n_spins);
  MEntryReport report;
  report.quadrature.assign(k, std::vector<double>(k, 0.0));
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      const auto z = integral(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      report.quadrature[r][c] = z.real();
      report.max_imaginary = std::max(report.max_imaginary, std::abs(z.imag()));
      report.max_deviation = std::max(report.max_deviation, std::abs(z.real() - m.at(r, c)));
      if ((r > c ? r - c : c - r) >= 2) {
        report.max_off_tridiagonal = std::max(report.max_off_tridiagonal, std::abs(z.real()));
      }
    }
  }
  return report;
}

IsoReport verify_iso_orthogonality(const SchurBasis& basis, const std::vector<double>& coefficients,
                                   const MAssignment& assignment, double tol) {
  const ComplexVector a = embed_reference(basis, coefficients, assignment);
  IsoReport report;
  for (HalfInt j : spin_classes(basis.n_spins())) {
    const int copies = basis.copies(j);
    std::vector<ComplexVector> parts;
    for (int alpha = 1; alpha <= copies; ++alpha) parts.push_back(block_projector(basis, j, alpha) * a);
    for (int alpha = 1; alpha <= copies; ++alpha) {
      for (int beta = 1; beta <= copies; ++beta) {
        const ComplexMatrix t = iso_transfer(basis, j, alpha, beta).matrix;
        const auto& pa = parts[static_cast<std::size_t>(alpha - 1)];
        const auto& pb = parts[static_cast<std::size_t>(beta - 1)];
        const std::complex<double> overlap = pa.dot(t * pb);
        if (alpha == beta) {
          report.max_self_error =
              std::max(report.max_self_error, std::abs(overlap - pa.squaredNorm()));
        } else {
          report.max_cross_overlap = std::max(report.max_cross_overlap, std::abs(overlap));
        }
      }
    }
  }
  report.passed = report.max_cross_overlap <= tol && report.max_self_error <= tol;
  return report;
}

std::vector<SchmidtReport> verify_entanglement_structure(const SchurBasis& basis,
                                                         const std::vector<double>& coefficients,
                                                         const MAssignment& assignment) {
  const ComplexVector a = embed_reference(basis, coefficients, assignment);
  const auto classes = spin_classes(basis.n_spins());
  std::vector<SchmidtReport> reports;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const HalfInt j = classes[k];
    const int copies = basis.copies(j);
    // Rows: m in H_j; columns: alpha in the multiplicity space M_j.
    ComplexMatrix c(j.dim(), copies);
    for (int alpha = 1; alpha <= copies; ++alpha) {
      for (int twice_m = -j.twice(); twice_m <= j.twice(); twice_m += 2) {
        c(index_of_m(twice_m, j.twice()), alpha - 1) = basis.vector(j, alpha, twice_m).dot(a);
      }
    }
    SchmidtReport r;
    r.j = j;
    r.expected = (k == 0) ? 1.0 : 1.0 / std::sqrt(static_cast<double>(j.dim()));
    const double norm = c.norm();
    if (norm > 0.0) {
      const Eigen::VectorXd sv = Eigen::JacobiSVD<ComplexMatrix>(c / norm).singularValues();
      const int expected_rank = (k == 0) ? 1 : j.dim();
      for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > 1e-12) r.coefficients.push_back(sv(i));
        const double target = (i < expected_rank) ? r.expected : 0.0;
        r.max_deviation = std::max(r.max_deviation, std::abs(sv(i) - target));
      }
      r.rank = static_cast<int>(r.coefficients.size());
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace spinframe::oracle
