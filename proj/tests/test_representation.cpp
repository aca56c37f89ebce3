#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "spinframe/representation.hpp"

using namespace spinframe;

namespace {

HalfInt spin(int twice) { return HalfInt::from_twice(twice); }

/// Multiplicities by adding one spin at a time: n(N+1, j) = n(N, j-1/2) + n(N, j+1/2).
std::map<int, std::uint64_t> coupling_count(int n_spins) {
  std::map<int, std::uint64_t> counts{{1, 1}};
  for (int n = 2; n <= n_spins; ++n) {
    std::map<int, std::uint64_t> next;
    for (const auto& [twice_j, count] : counts) {
      next[twice_j + 1] += count;
      if (twice_j > 0) next[twice_j - 1] += count;
    }
    counts = std::move(next);
  }
  return counts;
}

}  // namespace

TEST(Multiplicity, KnownValues) {
  EXPECT_EQ(multiplicity(3, spin(1)), 2u);
  EXPECT_EQ(multiplicity(4, spin(2)), 3u);
  for (int n = 1; n <= 40; ++n) EXPECT_EQ(multiplicity(n, spin(n)), 1u);
}

TEST(Multiplicity, AgreesWithRecursiveCouplingCount) {
  for (int n = 1; n <= 20; ++n) {
    const auto counts = coupling_count(n);
    for (const auto& [twice_j, count] : counts) {
      EXPECT_EQ(multiplicity(n, spin(twice_j)), count) << "N=" << n << " 2j=" << twice_j;
    }
    EXPECT_EQ(counts.size(), spin_classes(n).size());
  }
}

TEST(Multiplicity, RejectsParityAndRange) {
  EXPECT_THROW(multiplicity(3, spin(2)), std::invalid_argument);
  EXPECT_THROW(multiplicity(3, spin(5)), std::invalid_argument);
  EXPECT_THROW(multiplicity(0, spin(0)), std::invalid_argument);
  EXPECT_THROW(multiplicity(kMaxExactSpins + 2, spin(0)), std::invalid_argument);
  EXPECT_NO_THROW(multiplicity(kMaxExactSpins, spin(0)));
}

TEST(ClebschSeries, SmallCases) {
  const auto one = clebsch_series(1);
  ASSERT_EQ(one.entries.size(), 1u);
  EXPECT_EQ(one.entries[0], (IrrepClass{spin(1), 1}));

  const auto three = clebsch_series(3);
  EXPECT_EQ(three.entries, (std::vector<IrrepClass>{{spin(3), 1}, {spin(1), 2}}));

  const auto four = clebsch_series(4);
  EXPECT_EQ(four.entries, (std::vector<IrrepClass>{{spin(4), 1}, {spin(2), 3}, {spin(0), 2}}));
}

TEST(ClebschSeries, DimensionSumRuleAndParity) {
  for (int n = 1; n <= 30; ++n) {
    const auto d = clebsch_series(n);
    std::uint64_t total = 0;
    for (const auto& e : d.entries) {
      total += e.multiplicity * static_cast<std::uint64_t>(e.j.dim());
      EXPECT_EQ(e.j.twice() % 2, n % 2);
      EXPECT_GT(e.multiplicity, 0u);
    }
    EXPECT_EQ(total, std::uint64_t{1} << n) << "N=" << n;
    EXPECT_EQ(d.entries.front().j.twice(), n);
    EXPECT_EQ(d.entries.front().multiplicity, 1u);
  }
}

TEST(MaxUsefulReps, KnownValues) {
  EXPECT_EQ(max_useful_reps(3, spin(1)), 2u);
  EXPECT_EQ(multiplicity(6, spin(2)), 9u);
  EXPECT_EQ(max_useful_reps(6, spin(2)), 3u);
  for (int n = 1; n <= 30; ++n) EXPECT_EQ(max_useful_reps(n, spin(n)), 1u);
}

TEST(MaxUsefulReps, EveryClassBelowTopIsFullyUsable) {
  for (int n = 2; n <= 40; ++n) {
    const auto classes = spin_classes(n);
    for (std::size_t k = 1; k < classes.size(); ++k) {
      EXPECT_EQ(max_useful_reps(n, classes[k]), static_cast<std::uint64_t>(classes[k].dim()))
          << "N=" << n << " 2j=" << classes[k].twice();
    }
  }
}

TEST(CgCoefficient, SingletAndStretchedStates) {
  EXPECT_NEAR(cg_coefficient(spin(1), 1, spin(1), -1, spin(0), 0), 1.0 / std::sqrt(2.0), 1e-15);
  for (int a = 0; a <= 6; ++a) {
    for (int b = 0; b <= 6; ++b) {
      EXPECT_NEAR(cg_coefficient(spin(a), a, spin(b), b, spin(a + b), a + b), 1.0, 1e-13);
    }
  }
}

TEST(CgCoefficient, ReferenceValues) {
  // Frozen from an exact symbolic evaluation.
  EXPECT_NEAR(cg_coefficient(spin(2), 0, spin(3), 1, spin(1), 1), -0.57735026918962576, 1e-14);
  EXPECT_NEAR(cg_coefficient(spin(4), 2, spin(2), -2, spin(4), 0), 0.70710678118654752, 1e-14);
  EXPECT_NEAR(cg_coefficient(spin(3), -1, spin(2), 2, spin(5), 1), 0.54772255750516611, 1e-14);
  EXPECT_NEAR(cg_coefficient(spin(2), 2, spin(2), -2, spin(0), 0), 0.57735026918962576, 1e-14);
  EXPECT_NEAR(cg_coefficient(spin(4), -4, spin(3), 3, spin(3), -1), 0.63245553203367587, 1e-14);
  EXPECT_NEAR(cg_coefficient(spin(1), 1, spin(1), -1, spin(2), 0), 0.70710678118654752, 1e-14);
}

TEST(CgCoefficient, SelectionRulesGiveZero) {
  EXPECT_EQ(cg_coefficient(spin(2), 2, spin(2), 0, spin(2), 0), 0.0);  // M != m1 + m2
  EXPECT_EQ(cg_coefficient(spin(2), 0, spin(2), 0, spin(6), 0), 0.0);  // triangle
  EXPECT_EQ(cg_coefficient(spin(2), 4, spin(2), -4, spin(0), 0), 0.0); // |m| > j
  EXPECT_EQ(cg_coefficient(spin(2), 1, spin(2), -1, spin(0), 0), 0.0); // parity
  EXPECT_EQ(cg_coefficient(spin(1), 1, spin(2), 0, spin(2), 1), 0.0);  // j1+j2+j not integer
}

TEST(CgCoefficient, CouplingMatrixIsOrthogonal) {
  // Rows (j, m), columns (m1, m2); orthogonal for every j1, j2 <= 2.
  for (int a = 0; a <= 4; ++a) {
    for (int b = 0; b <= 4; ++b) {
      std::vector<std::pair<int, int>> coupled, product;
      for (int c = std::abs(a - b); c <= a + b; c += 2) {
        for (int m = -c; m <= c; m += 2) coupled.emplace_back(c, m);
      }
      for (int m1 = -a; m1 <= a; m1 += 2) {
        for (int m2 = -b; m2 <= b; m2 += 2) product.emplace_back(m1, m2);
      }
      ASSERT_EQ(coupled.size(), product.size());
      for (const auto& [c1, mc1] : coupled) {
        for (const auto& [c2, mc2] : coupled) {
          double dot = 0.0;
          for (const auto& [m1, m2] : product) {
            dot += cg_coefficient(spin(a), m1, spin(b), m2, spin(c1), mc1) *
                   cg_coefficient(spin(a), m1, spin(b), m2, spin(c2), mc2);
          }
          EXPECT_NEAR(dot, (c1 == c2 && mc1 == mc2) ? 1.0 : 0.0, 1e-12);
        }
      }
    }
  }
}

TEST(OrbitDimension, KnownValuesAndCubicGrowth) {
  EXPECT_EQ(orbit_dimension(1), 2u);
  EXPECT_EQ(orbit_dimension(3), 8u);
  EXPECT_EQ(orbit_dimension(2), 3u + 1u);
  EXPECT_EQ(orbit_dimension(60), 36051u);
  const double ratio = static_cast<double>(orbit_dimension(60)) / (60.0 * 60.0 * 60.0);
  EXPECT_NEAR(ratio, 1.0 / 6.0, 0.1 / 6.0);
}
