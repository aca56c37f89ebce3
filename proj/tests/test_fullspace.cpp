#include <gtest/gtest.h>

#include <cmath>

#include "spinframe/fullspace.hpp"
#include "spinframe/protocol.hpp"
#include "spinframe/random.hpp"
#include "spinframe/representation.hpp"
#include "spinframe/spectral.hpp"
#include "test_support.hpp"

using namespace spinframe;
using namespace spinframe::oracle;

namespace {

HalfInt spin(int twice) { return HalfInt::from_twice(twice); }

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

ComplexMatrix identity(int n) { return ComplexMatrix::Identity(n, n); }

/// S^2 summed over single-spin generators, independent of the CG code.
ComplexMatrix total_spin_squared(int n) {
  const int dim = 1 << n;
  const auto gens = test_util::spin_generators(spin(1));
  ComplexMatrix jp = ComplexMatrix::Zero(2, 2);
  jp(1, 0) = 1.0;
  const ComplexMatrix sx = 0.5 * (jp + jp.adjoint());
  const std::array<ComplexMatrix, 3> single{sx, gens.jy, gens.jz};
  ComplexMatrix s2 = ComplexMatrix::Zero(dim, dim);
  for (const auto& op : single) {
    ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
    for (int site = 0; site < n; ++site) {
      ComplexMatrix term = ComplexMatrix::Identity(1, 1);
      for (int k = 0; k < n; ++k) {
        const ComplexMatrix factor = (k == site) ? op : identity(2);
        ComplexMatrix next(term.rows() * 2, term.cols() * 2);
        for (int r = 0; r < term.rows(); ++r) {
          for (int c = 0; c < term.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = term(r, c) * factor;
        }
        term = next;
      }
      total += term;
    }
    s2 += total * total;
  }
  return s2;
}

MAssignment colliding_assignment(int n) {
  MAssignment a = MAssignment::canonical(n);
  for (auto& v : a.twice_m) {
    if (v.size() > 1) v[1] = v[0];
  }
  return a;
}

}  // namespace

TEST(SchurBasis, SingleSpinIsComputationalBasis) {
  const auto b = schur_basis(1);
  EXPECT_EQ(b.dimension(), 2);
  EXPECT_NEAR(std::abs(b.vector(spin(1), 1, -1)(0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(b.vector(spin(1), 1, 1)(1) - 1.0), 0.0, 1e-15);
}

TEST(SchurBasis, ThreeSpinDecomposition) {
  const auto b = schur_basis(3);
  EXPECT_EQ(b.copies(spin(3)), 1);
  EXPECT_EQ(b.copies(spin(1)), 2);
  EXPECT_EQ(b.labels().size(), 8u);
  EXPECT_EQ(b.path(spin(1), 1), (std::vector<int>{1, 0, 1}));
  EXPECT_EQ(b.path(spin(1), 2), (std::vector<int>{1, 2, 1}));
}

TEST(SchurBasis, OrthonormalWithCorrectMultiplicities) {
  for (int n = 1; n <= kMaxOracleSpins; ++n) {
    const auto b = schur_basis(n);
    const ComplexMatrix v = b.as_matrix();
    ASSERT_EQ(v.cols(), b.dimension());
    EXPECT_LE(max_abs(v.adjoint() * v - identity(b.dimension())), 1e-12) << "N=" << n;
    for (const auto& cls : clebsch_series(n).entries) {
      EXPECT_EQ(static_cast<std::uint64_t>(b.copies(cls.j)), cls.multiplicity) << "N=" << n;
    }
    EXPECT_EQ(b.copies(spin(n + 2)), 0);
  }
}

TEST(SchurBasis, PathsAreLexicographicCouplingSequences) {
  const auto b = schur_basis(6);
  for (int twice_j : {0, 2, 4, 6}) {
    std::vector<int> previous;
    for (int alpha = 1; alpha <= b.copies(spin(twice_j)); ++alpha) {
      const auto& p = b.path(spin(twice_j), alpha);
      ASSERT_EQ(p.size(), 6u);
      EXPECT_EQ(p.front(), 1);
      EXPECT_EQ(p.back(), twice_j);
      for (std::size_t k = 1; k < p.size(); ++k) {
        EXPECT_EQ(std::abs(p[k] - p[k - 1]), 1);
        EXPECT_GE(p[k], 0);
      }
      if (!previous.empty()) EXPECT_LT(previous, p);
      previous = p;
    }
  }
}

TEST(SchurBasis, DiagonalizesTotalSpin) {
  for (int n = 1; n <= kMaxOracleSpins; ++n) {
    const auto b = schur_basis(n);
    EXPECT_LE(casimir_residual(b), 1e-10);
    const ComplexMatrix s2 = total_spin_squared(n);
    for (const auto& label : b.labels()) {
      const double j = label.twice_j / 2.0;
      const ComplexVector& v = b.vector(label);
      EXPECT_LE((s2 * v - j * (j + 1) * v).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(SchurBasis, RejectsOutOfRange) {
  EXPECT_THROW(schur_basis(0), std::invalid_argument);
  EXPECT_THROW(schur_basis(7), std::invalid_argument);
  EXPECT_THROW(verify_completeness(5, QuadratureGrid::cube(8)), std::invalid_argument);
  EXPECT_THROW(verify_M_entries(5, QuadratureGrid::cube(8)), std::invalid_argument);
}

TEST(TensorRotation, UnitaryHomomorphism) {
  RandomStream rng = make_stream(17, 0);
  for (int n = 1; n <= kMaxOracleSpins; ++n) {
    const int dim = 1 << n;
    EXPECT_LE(max_abs(tensor_rotation(n, GroupElement::identity()) - identity(dim)), 1e-14);
    for (int k = 0; k < 5; ++k) {
      const auto g = haar_sample(rng);
      const auto h = haar_sample(rng);
      const ComplexMatrix ug = tensor_rotation(n, g);
      EXPECT_LE(max_abs(ug.adjoint() * ug - identity(dim)), 1e-10);
      EXPECT_LE(max_abs(tensor_rotation(n, g * h) - ug * tensor_rotation(n, h)), 1e-9);
    }
  }
  const auto g = haar_sample(rng);
  EXPECT_LE(max_abs(tensor_rotation(1, g) - test_util::to_eigen(wigner_D(spin(1), g))), 1e-15);
}

TEST(TensorRotation, BlockActionMatchesWignerMatrices) {
  RandomStream rng = make_stream(18, 0);
  for (int n = 1; n <= kMaxOracleSpins; ++n) {
    const auto b = schur_basis(n);
    for (int k = 0; k < 3; ++k) EXPECT_LE(block_action_residual(b, haar_sample(rng)), 1e-9) << "N=" << n;
  }
}

TEST(IsoTransfer, MapsCopiesAndCommutesWithRotations) {
  RandomStream rng = make_stream(19, 0);
  const auto b = schur_basis(5);
  const HalfInt j = spin(1);
  ASSERT_EQ(b.copies(j), 5);
  for (int alpha = 1; alpha <= 5; ++alpha) {
    for (int beta = 1; beta <= 5; ++beta) {
      const auto t = iso_transfer(b, j, alpha, beta);
      for (int m : {-1, 1}) {
        EXPECT_LE((t.matrix * b.vector(j, beta, m) - b.vector(j, alpha, m)).cwiseAbs().maxCoeff(), 1e-12);
      }
      EXPECT_LE((t.matrix * b.vector(spin(3), 1, 1)).cwiseAbs().maxCoeff(), 1e-12);
      if (alpha != beta) EXPECT_LE((t.matrix * b.vector(j, alpha, 1)).cwiseAbs().maxCoeff(), 1e-12);
      const ComplexMatrix u = tensor_rotation(5, haar_sample(rng));
      EXPECT_LE(max_abs(t.matrix * u - u * t.matrix), 1e-9);
    }
  }
  const ComplexMatrix p = block_projector(b, j, 2);
  EXPECT_LE(max_abs(p * p - p), 1e-12);
  EXPECT_NEAR(p.trace().real(), 2.0, 1e-12);
}

TEST(ProjectorK, RankEqualsOrbitDimension) {
  for (int n = 1; n <= kMaxOracleSpins; ++n) {
    const auto b = schur_basis(n);
    EXPECT_EQ(static_cast<std::uint64_t>(dimension_K(b)), orbit_dimension(n)) << "N=" << n;
    const ComplexMatrix p = projector_K(b);
    EXPECT_LE(max_abs(p * p - p), 1e-12);
  }
}

TEST(FullspaceLikelihood, ClosedFormMatchesExplicitAmplitude) {
  RandomStream rng = make_stream(20, 0);
  for (int n = 2; n <= 4; ++n) {
    const auto b = schur_basis(n);
    const auto state = ReferenceState::from_protocol(optimal_protocol(n));
    const LikelihoodModel model(state);
    const ComplexVector a = embed_reference(b, state.coefficients(), state.assignment());
    const ComplexVector ml = ml_vector(b, state.assignment());
    EXPECT_NEAR(a.norm(), 1.0, 1e-12);
    EXPECT_NEAR(ml.squaredNorm(), static_cast<double>(orbit_dimension(n)), 1e-10);
    for (int k = 0; k < 1000; ++k) {
      const auto g = haar_sample(rng);
      EXPECT_NEAR(likelihood(model, g), fullspace_likelihood(a, ml, tensor_rotation(n, g)), 1e-9);
    }
  }
}

TEST(FullspaceLikelihood, MatchesForNonOptimalStatesAndAssignments) {
  RandomStream rng = make_stream(21, 0);
  const int n = 5;
  const auto b = schur_basis(n);
  MAssignment shuffled = MAssignment::canonical(n);
  std::rotate(shuffled.twice_m[0].begin(), shuffled.twice_m[0].begin() + 1, shuffled.twice_m[0].end());
  const ReferenceState state(n, {0.5, 0.5, std::sqrt(0.5)}, shuffled);
  const LikelihoodModel model(state);
  const ComplexVector a = embed_reference(b, state.coefficients(), state.assignment());
  const ComplexVector ml = ml_vector(b, state.assignment());
  for (int k = 0; k < 200; ++k) {
    const auto g = haar_sample(rng);
    EXPECT_NEAR(likelihood(model, g), fullspace_likelihood(a, ml, tensor_rotation(n, g)), 1e-9);
  }
}

TEST(Completeness, ResolvesIdentityOnK) {
  const auto grid = QuadratureGrid::cube(32);
  EXPECT_LT(verify_completeness(2, grid), 1e-6);
  EXPECT_LT(verify_completeness(3, grid), 1e-6);
  EXPECT_LT(verify_completeness(4, grid), 1e-6);
}

TEST(Completeness, BrokenWeightsAreDetected) {
  const auto grid = QuadratureGrid::cube(32);
  EXPECT_GT(verify_completeness(2, grid, MlWeights::broken), 0.1);
  EXPECT_GT(verify_completeness(3, grid, MlWeights::broken), 0.1);
}

TEST(MEntries, QuadratureReproducesTridiagonalMatrix) {
  const auto grid = QuadratureGrid::cube(32);
  for (int n = 2; n <= 4; ++n) {
    const auto r = verify_M_entries(n, grid);
    const auto m = build_M(n);
    ASSERT_EQ(r.quadrature.size(), m.size());
    EXPECT_LT(r.max_deviation, 1e-6) << "N=" << n;
    EXPECT_LT(r.max_off_tridiagonal, 1e-8) << "N=" << n;
    EXPECT_LT(r.max_imaginary, 1e-8) << "N=" << n;
  }
  const auto r2 = verify_M_entries(2, grid);
  EXPECT_NEAR(r2.quadrature[0][0], 0.5, 1e-6);
  EXPECT_NEAR(r2.quadrature[0][1], 1.0 / std::sqrt(3.0), 1e-6);
  EXPECT_NEAR(r2.quadrature[1][1], 0.0, 1e-6);
  const auto r3 = verify_M_entries(3, grid);
  EXPECT_NEAR(r3.quadrature[0][0], 0.6, 1e-6);
  EXPECT_NEAR(r3.quadrature[1][0], 0.5, 1e-6);
  EXPECT_NEAR(r3.quadrature[1][1], 1.0, 1e-6);
}

TEST(IsoOrthogonality, InjectiveAssignmentPasses) {
  for (int n = 3; n <= kMaxOracleSpins; ++n) {
    const auto b = schur_basis(n);
    const auto p = optimal_protocol(n);
    const auto r = verify_iso_orthogonality(b, p.coefficients, MAssignment::canonical(n));
    EXPECT_TRUE(r.passed) << "N=" << n;
    EXPECT_LE(r.max_cross_overlap, 1e-12);
    EXPECT_LE(r.max_self_error, 1e-12);
  }
}

TEST(IsoOrthogonality, CollidingAssignmentFails) {
  for (int n = 3; n <= kMaxOracleSpins; ++n) {
    const auto b = schur_basis(n);
    const auto p = optimal_protocol(n);
    const auto r = verify_iso_orthogonality(b, p.coefficients, colliding_assignment(n));
    EXPECT_FALSE(r.passed) << "N=" << n;
    EXPECT_GT(r.max_cross_overlap, 1e-3);
    EXPECT_LE(r.max_self_error, 1e-12);
  }
}

TEST(EntanglementStructure, UniformSchmidtSpectra) {
  for (int n = 2; n <= kMaxOracleSpins; ++n) {
    const auto b = schur_basis(n);
    const auto p = optimal_protocol(n);
    const auto reports = verify_entanglement_structure(b, p.coefficients, MAssignment::canonical(n));
    ASSERT_EQ(reports.size(), p.row_labels.size());
    for (const auto& r : reports) {
      if (r.j.twice() == n) {
        EXPECT_EQ(r.rank, 1);
        EXPECT_NEAR(r.expected, 1.0, 1e-15);
      } else {
        EXPECT_EQ(r.rank, r.j.dim()) << "N=" << n << " 2j=" << r.j.twice();
        EXPECT_NEAR(r.expected, 1.0 / std::sqrt(double(r.j.dim())), 1e-15);
      }
      EXPECT_LE(r.max_deviation, 1e-10) << "N=" << n << " 2j=" << r.j.twice();
    }
  }
  const auto three = verify_entanglement_structure(schur_basis(3), optimal_protocol(3).coefficients,
                                                   MAssignment::canonical(3));
  ASSERT_EQ(three[1].coefficients.size(), 2u);
  EXPECT_NEAR(three[1].coefficients[0], 1.0 / std::sqrt(2.0), 1e-10);
  EXPECT_NEAR(three[1].coefficients[1], 1.0 / std::sqrt(2.0), 1e-10);
}
