#include <gtest/gtest.h>

#include <cmath>

#include "levelshift/error.hpp"
#include "levelshift/ground_engines.hpp"
#include "levelshift/models.hpp"
#include "levelshift/rng.hpp"

using namespace levelshift;

namespace {

HermitianOperator diagonal(const std::vector<double>& d) {
  DenseMatrix m = DenseMatrix::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Index>(i), static_cast<Index>(i)) = d[i];
  return HermitianOperator::from_dense(m);
}

ModelSpec heisenberg(int sites, double j, Boundary b = Boundary::open) {
  ModelSpec m;
  m.kind = ModelKind::heisenberg;
  m.sites = sites;
  m.params = {{"J", j}};
  m.boundary = b;
  return m;
}

// U diag(spectrum) U^H with a seeded random unitary.
HermitianOperator rotated(const std::vector<double>& spectrum, std::uint64_t seed) {
  const Index n = static_cast<Index>(spectrum.size());
  DenseMatrix a(n, n);
  SplitMix64 rng(seed);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = rng.normal_pair();
  const DenseMatrix q = Eigen::HouseholderQR<DenseMatrix>(a).householderQ();
  Eigen::VectorXd d(n);
  for (Index i = 0; i < n; ++i) d(i) = spectrum[static_cast<std::size_t>(i)];
  return HermitianOperator::from_dense(q * d.asDiagonal() * q.adjoint());
}

const std::vector<Engine> kIterative = {Engine::lanczos, Engine::rq_descent, Engine::shifted_power};
const std::vector<Engine> kAll = {Engine::exact, Engine::lanczos, Engine::rq_descent,
                                  Engine::shifted_power};

SolverConfig with_engine(Engine e) {
  SolverConfig cfg;
  cfg.engine = e;
  return cfg;
}

}  // namespace

TEST(ExactDiagonalize, UnsortedDiagonal) {
  const auto levels = exact_diagonalize(diagonal({2, 0, 1}));
  ASSERT_EQ(levels.size(), 3u);
  const double expected[] = {0, 1, 2};
  const Index axis[] = {1, 2, 0};
  for (int i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(levels[i].eigenvalue, expected[i]);
    ASSERT_EQ(levels[i].multiplicity(), 1u);
    EXPECT_NEAR(std::abs(levels[i].basis[0](axis[i])), 1.0, 1e-15);
  }
}

TEST(ExactDiagonalize, HeisenbergDimerSingletTriplet) {
  const auto levels = exact_diagonalize(build(heisenberg(2, 1.0)));
  ASSERT_EQ(levels.size(), 2u);
  EXPECT_NEAR(levels[0].eigenvalue, -0.75, 1e-14);
  EXPECT_EQ(levels[0].multiplicity(), 1u);
  EXPECT_NEAR(levels[1].eigenvalue, 0.25, 1e-14);
  EXPECT_EQ(levels[1].multiplicity(), 3u);
}

TEST(ExactDiagonalize, TightBindingTrimer) {
  ModelSpec m;
  m.kind = ModelKind::tight_binding;
  m.sites = 3;
  m.params = {{"t", 1.0}};
  const auto levels = exact_diagonalize(build(m));
  ASSERT_EQ(levels.size(), 3u);
  EXPECT_NEAR(levels[0].eigenvalue, -std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(levels[1].eigenvalue, 0.0, 1e-14);
  EXPECT_NEAR(levels[2].eigenvalue, std::sqrt(2.0), 1e-14);
}

TEST(ExactDiagonalize, MultiplicitiesSumToDimension) {
  const auto levels = exact_diagonalize(build(heisenberg(4, 1.0, Boundary::periodic)));
  std::size_t total = 0;
  for (const auto& l : levels) total += l.multiplicity();
  EXPECT_EQ(total, 16u);
}

TEST(ExactDiagonalize, RefusesAboveDenseLimit) {
  try {
    exact_diagonalize(diagonal({0, 1, 2}), 1e-8, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dense_limit_exceeded);
    EXPECT_NE(std::string(e.what()).find("lanczos"), std::string::npos);
  }
}

TEST(Lanczos, LargeDiagonal) {
  std::vector<double> d(100);
  for (int i = 0; i < 100; ++i) d[static_cast<std::size_t>(i)] = i;
  const auto r = lanczos_ground(diagonal(d), SolverConfig{});
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.eigenspace.eigenvalue, 0.0, 1e-10);
  ASSERT_EQ(r.eigenspace.multiplicity(), 1u);
  EXPECT_NEAR(std::abs(r.eigenspace.basis[0](0)), 1.0, 1e-10);
}

TEST(Lanczos, FerromagneticTriplet) {
  const auto r = lanczos_ground(build(heisenberg(2, -1.0)), SolverConfig{});
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.eigenspace.eigenvalue, -0.25, 1e-10);
  EXPECT_EQ(r.eigenspace.multiplicity(), 3u);
}

TEST(Lanczos, Random200MatchesOracle) {
  const auto h = random_hermitian(200, 77);
  const auto r = lanczos_ground(h, SolverConfig{});
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.eigenspace.eigenvalue, exact_diagonalize(h)[0].eigenvalue, 1e-8);
}

TEST(RqDescent, TwoLevelFromEqualSuperposition) {
  const StateVector start = StateVector::Ones(2) / std::sqrt(2.0);
  const auto r = rq_descent(diagonal({0, 5}), SolverConfig{}, start);
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.eigenspace.eigenvalue, 0.0, 1e-10);
  EXPECT_NEAR(std::abs(r.eigenspace.basis[0](0)), 1.0, 1e-10);
}

TEST(RqDescent, ExactGroundStartIsAFixedPoint) {
  const auto h = random_hermitian(30, 8);
  const auto oracle = exact_diagonalize(h);
  const auto r = rq_descent(h, SolverConfig{}, oracle[0].basis[0]);
  ASSERT_TRUE(r.converged);
  ASSERT_FALSE(r.run_iterations.empty());
  EXPECT_EQ(r.run_iterations[0], 0);
}

TEST(RqDescent, HubbardDimerGround) {
  ModelSpec m;
  m.kind = ModelKind::hubbard;
  m.sites = 2;
  m.params = {{"t", 1.0}, {"U", 2.0}};
  const auto r = rq_descent(build(m), SolverConfig{});
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.eigenspace.eigenvalue, (2.0 - std::sqrt(4.0 + 16.0)) / 2.0, 1e-6);
}

TEST(RqDescent, MonotoneRayleighQuotient) {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    const auto h = random_hermitian(60, seed);
    const auto r = rq_descent(h, SolverConfig{});
    ASSERT_GE(r.rayleigh_trace.size(), 2u);
    for (std::size_t i = 1; i < r.rayleigh_trace.size(); ++i) {
      EXPECT_LE(r.rayleigh_trace[i], r.rayleigh_trace[i - 1] + 1e-14 * r.spectral_scale);
    }
  }
}

TEST(ShiftedPower, DiagonalThreeLevel) {
  const auto r = shifted_power_ground(diagonal({0, 1, 2}), SolverConfig{});
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.eigenspace.eigenvalue, 0.0, 1e-10);
  EXPECT_NEAR(std::abs(r.eigenspace.basis[0](0)), 1.0, 1e-9);
}

TEST(ShiftedPower, DegenerateGroundByRestarts) {
  const auto r = shifted_power_ground(build(heisenberg(2, -1.0)), SolverConfig{});
  ASSERT_TRUE(r.converged);
  EXPECT_EQ(r.eigenspace.multiplicity(), 3u);
  EXPECT_GE(r.run_iterations.size(), 4u);
}

TEST(ShiftedPower, Random100MatchesOracle) {
  const auto h = random_hermitian(100, 5);
  const auto r = shifted_power_ground(h, SolverConfig{});
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.eigenspace.eigenvalue, exact_diagonalize(h)[0].eigenvalue, 1e-8);
}

TEST(ComplementMinimize, Examples) {
  const auto d = diagonal({0, 1, 2});
  const auto r = complement_minimize(d, Projector(std::vector<StateVector>{StateVector::Unit(3, 0)}),
                                     SolverConfig{});
  EXPECT_NEAR(r.eigenspace.eigenvalue, 1.0, 1e-10);

  const auto h = random_hermitian(16, 2);
  const auto plain = solve_ground(h, SolverConfig{});
  const auto none = complement_minimize(h, Projector(Index{16}), SolverConfig{});
  EXPECT_NEAR(plain.eigenspace.eigenvalue, none.eigenspace.eigenvalue, 1e-12);

  const auto heis = build(heisenberg(2, 1.0));
  const auto singlet = exact_diagonalize(heis)[0];
  for (Engine e : kAll) {
    const auto t = complement_minimize(heis, singlet.projector(), with_engine(e));
    EXPECT_NEAR(t.eigenspace.eigenvalue, 0.25, 1e-10) << to_string(e);
    EXPECT_EQ(t.eigenspace.multiplicity(), 3u) << to_string(e);
  }
}

TEST(ComplementMinimize, FullRankForbiddenIsEmpty) {
  const auto d = diagonal({0, 1});
  const Projector all(std::vector<StateVector>{StateVector::Unit(2, 0), StateVector::Unit(2, 1)});
  try {
    complement_minimize(d, all, SolverConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::empty_search_space);
  }
}

TEST(Engines, AgreeWithOracleOnSeededBattery) {
  for (Index dim : {8, 16, 64, 128, 256}) {
    const auto h = random_hermitian(dim, 500 + static_cast<std::uint64_t>(dim));
    const double e0 = exact_diagonalize(h)[0].eigenvalue;
    for (Engine e : kIterative) {
      const auto r = solve_ground(h, with_engine(e));
      ASSERT_TRUE(r.converged) << to_string(e) << " dim " << dim;
      EXPECT_NEAR(r.eigenspace.eigenvalue, e0, 1e-8 * r.spectral_scale)
          << to_string(e) << " dim " << dim;
      for (double res : r.eigenspace.residual_norms) {
        EXPECT_LE(res, SolverConfig{}.residual_tol * r.spectral_scale);
      }
    }
  }
}

TEST(Engines, ResolveDegenerateMultiplicity) {
  // Ground triple-degenerate, gap 0.5 far above the clustering tolerance.
  std::vector<double> spectrum = {-1, -1, -1, -0.5, 0, 0.3, 0.9, 1.4, 2, 2.5, 3, 4};
  const auto h = rotated(spectrum, 11);
  const auto oracle = exact_diagonalize(h)[0];
  ASSERT_EQ(oracle.multiplicity(), 3u);
  for (Engine e : kAll) {
    const auto r = solve_ground(h, with_engine(e));
    ASSERT_TRUE(r.converged) << to_string(e);
    EXPECT_EQ(r.eigenspace.multiplicity(), 3u) << to_string(e);
    EXPECT_LE(max_principal_angle(r.eigenspace.columns(), oracle.columns()), 1e-8)
        << to_string(e);
  }
}

TEST(Engines, CanonicalBasisIsEngineIndependent) {
  const auto h = build(heisenberg(2, -1.0));
  const auto a = solve_ground(h, with_engine(Engine::exact)).eigenspace;
  for (Engine e : kIterative) {
    const auto b = solve_ground(h, with_engine(e)).eigenspace;
    ASSERT_EQ(a.multiplicity(), b.multiplicity());
    for (std::size_t i = 0; i < a.basis.size(); ++i) {
      EXPECT_LE((a.basis[i] - b.basis[i]).norm(), 1e-8) << to_string(e);
    }
  }
}

TEST(Engines, VariationalLowerBound) {
  const auto h = random_hermitian(40, 21);
  const double e0 = exact_diagonalize(h)[0].eigenvalue;
  SplitMix64 rng(9);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_GE(expectation(h, random_state(40, rng.next())), e0 - 1e-10 * h.spectral_scale());
  }
}

TEST(Engines, BudgetExhaustionIsReportedNotHidden) {
  const auto h = random_hermitian(50, 3);
  for (Engine e : kIterative) {
    SolverConfig cfg = with_engine(e);
    cfg.max_iterations = 1;
    const auto r = solve_ground(h, cfg);
    EXPECT_FALSE(r.converged) << to_string(e);
    EXPECT_FALSE(r.notes.empty()) << to_string(e);
  }
}

TEST(Engines, SameSeedSameResult) {
  const auto h = random_hermitian(40, 4);
  for (Engine e : kIterative) {
    const auto a = solve_ground(h, with_engine(e));
    const auto b = solve_ground(h, with_engine(e));
    EXPECT_EQ(a.eigenspace.eigenvalue, b.eigenspace.eigenvalue);
    EXPECT_EQ(a.iterations, b.iterations);
    EXPECT_TRUE(a.eigenspace.basis[0] == b.eigenspace.basis[0]);
  }
}

TEST(SolverConfig, Validation) {
  SolverConfig cfg;
  cfg.residual_tol = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = SolverConfig{};
  cfg.max_iterations = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = SolverConfig{};
  EXPECT_EQ(cfg.iteration_budget(10), 100);
  EXPECT_EQ(cfg.iteration_budget(10000), 50000);
  EXPECT_EQ(engine_from_string("rq_descent"), Engine::rq_descent);
  EXPECT_THROW(engine_from_string("davidson"), Error);
}
