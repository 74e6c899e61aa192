#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "levelshift/error.hpp"
#include "levelshift/hermitian_operator.hpp"
#include "levelshift/models.hpp"
#include "levelshift/rng.hpp"
#include "levelshift/subspace.hpp"

using namespace levelshift;

namespace {

StateVector vec(std::initializer_list<Complex> v) {
  StateVector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (auto x : v) out(i++) = x;
  return out;
}

HermitianOperator diag(std::initializer_list<double> d) {
  DenseMatrix m = DenseMatrix::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
  Index i = 0;
  for (double x : d) m(i, i) = x, ++i;
  return HermitianOperator::from_dense(m);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no levelshift::Error thrown";
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST(Apply, EigenvectorOfDiagonal) {
  const StateVector out = levelshift::apply(diag({0, 1, 2}), vec({0, 1, 0}));
  EXPECT_TRUE(out == vec({0, 1, 0}));
}

TEST(Apply, ZeroMatrixGivesZero) {
  const auto h = HermitianOperator::from_dense(DenseMatrix::Zero(2, 2));
  EXPECT_EQ(levelshift::apply(h, vec({Complex(0.3, -1), 2})).norm(), 0.0);
}

TEST(Apply, HeisenbergDimerMatchesSpinAlgebraOracle) {
  // Basis index = bit0 (site 0 up) + 2 bit1 (site 1 up); J S0.S1 written out.
  DenseMatrix oracle = DenseMatrix::Zero(4, 4);
  oracle(0, 0) = oracle(3, 3) = 0.25;
  oracle(1, 1) = oracle(2, 2) = -0.25;
  oracle(1, 2) = oracle(2, 1) = 0.5;
  ModelSpec m;
  m.kind = ModelKind::heisenberg;
  m.sites = 2;
  m.params = {{"J", 1.0}};
  const StateVector up_down = StateVector::Unit(4, 1);
  EXPECT_LE((levelshift::apply(build(m), up_down) - oracle * up_down).norm(), 1e-15);
}

TEST(Apply, DimensionMismatchNamesBothDims) {
  try {
    levelshift::apply(diag({0, 1, 2}), vec({1, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dimension_mismatch);
    const std::string msg = e.what();
    EXPECT_NE(msg.find('3'), std::string::npos);
    EXPECT_NE(msg.find('2'), std::string::npos);
  }
}

TEST(Apply, MatrixFreeShiftTermsAddRankOneUpdates) {
  const auto h = diag({0, 1, 2});
  const StateVector v = vec({1, Complex(0, 1), 0}) / std::sqrt(2.0);
  const auto h1 = h.with_shift(3.0, Projector(std::vector<StateVector>{v}));
  const StateVector psi = random_state(3, 5);
  const StateVector expected = levelshift::apply(h, psi) + 3.0 * v.dot(psi) * v;
  EXPECT_LE((levelshift::apply(h1, psi) - expected).norm(), 1e-14);
}

TEST(Expectation, HalfOnDiagonal) {
  EXPECT_DOUBLE_EQ(expectation(diag({0, 1}), vec({1, 1}) / std::sqrt(2.0)), 0.5);
}

TEST(Expectation, DeflatedGroundPaysTheShift) {
  const auto h1 = diag({0, 1, 2}).with_shift(
      5.0, Projector(std::vector<StateVector>{StateVector::Unit(3, 0)}));
  EXPECT_DOUBLE_EQ(expectation(h1, StateVector::Unit(3, 0)), 5.0);
}

TEST(Expectation, HubbardDoublyOccupiedSuperposition) {
  // (|0up 0dn> + |1up 1dn>)/sqrt2: hopping cannot connect the two states in
  // one step and neither has a hopping diagonal, so the value is exactly U.
  ModelSpec m;
  m.kind = ModelKind::hubbard;
  m.sites = 2;
  m.params = {{"t", 1.0}, {"U", 2.0}};
  // Lexicographic pairs of orbitals 2*site+spin: (0,1) first, (2,3) last.
  StateVector psi = StateVector::Zero(6);
  psi(0) = psi(5) = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(expectation(build(m), psi), 2.0, 1e-14);
}

TEST(Expectation, RejectsUnnormalizedInput) {
  EXPECT_EQ(code_of([] { expectation(diag({0, 1}), vec({1, 1})); }),
            ErrorCode::invalid_argument);
}

TEST(Expectation, InvariantUnderGlobalPhase) {
  const auto h = random_hermitian(12, 3);
  SplitMix64 rng(17);
  for (int i = 0; i < 50; ++i) {
    const StateVector psi = random_state(12, rng.next());
    const Complex phase = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
    EXPECT_NEAR(expectation(h, psi), expectation(h, StateVector(phase * psi)), 1e-12);
  }
}

TEST(Overlap, Examples) {
  EXPECT_EQ(overlap(vec({1, 0}), vec({0, 1})), Complex(0, 0));
  const StateVector a = random_state(7, 3);
  EXPECT_NEAR(std::abs(overlap(a, a) - 1.0), 0.0, 1e-15);
  const Complex z = overlap(vec({1, Complex(0, 1)}) / std::sqrt(2.0), vec({1, 0}));
  EXPECT_NEAR(z.real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(z.imag(), 0.0, 1e-15);
  // Conjugate-linear in the first argument.
  EXPECT_EQ(overlap(vec({Complex(0, 1)}), vec({1})), Complex(0, -1));
}

TEST(Orthonormalize, HandGramSchmidt) {
  const auto r = orthonormalize({vec({1, 0}), vec({1, 1})});
  ASSERT_EQ(r.basis.size(), 2u);
  EXPECT_LE((r.basis[0] - vec({1, 0})).norm(), 1e-15);
  EXPECT_LE((r.basis[1] - vec({0, 1})).norm(), 1e-15);
  EXPECT_TRUE(r.dropped.empty());
}

TEST(Orthonormalize, DuplicateIsDroppedAndReported) {
  const auto r = orthonormalize({vec({1, 0, 0}), vec({1, 0, 0})});
  ASSERT_EQ(r.basis.size(), 1u);
  ASSERT_EQ(r.dropped.size(), 1u);
  EXPECT_EQ(r.dropped[0], 1u);
}

TEST(Orthonormalize, RandomVectorsGramIdentity) {
  std::vector<StateVector> v;
  for (std::uint64_t s = 0; s < 3; ++s) v.push_back(random_state(5, 100 + s) * 3.0);
  const auto r = orthonormalize(v);
  ASSERT_EQ(r.basis.size(), 3u);
  const DenseMatrix q = as_columns(r.basis);
  const DenseMatrix gram = q.adjoint() * q;
  EXPECT_LE((gram - DenseMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
  // Span preserved: every input is reproduced by its projection.
  for (const auto& x : v) EXPECT_LE((q * (q.adjoint() * x) - x).norm(), 1e-12);
}

TEST(Orthonormalize, BitReproducible) {
  std::vector<StateVector> v;
  for (std::uint64_t s = 0; s < 6; ++s) v.push_back(random_state(9, s));
  const auto a = orthonormalize(v);
  const auto b = orthonormalize(v);
  ASSERT_EQ(a.basis.size(), b.basis.size());
  for (std::size_t i = 0; i < a.basis.size(); ++i) EXPECT_TRUE(a.basis[i] == b.basis[i]);
}

TEST(Orthonormalize, Errors) {
  EXPECT_EQ(code_of([] { orthonormalize({}); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { orthonormalize({StateVector::Zero(3)}); }), ErrorCode::rank_deficient);
}

TEST(Project, Examples) {
  const Projector p(std::vector<StateVector>{StateVector::Unit(3, 0)});
  EXPECT_LE((project(p, vec({0.6, 0.8, 0})) - vec({0.6, 0, 0})).norm(), 1e-15);
  const Projector empty(Index{3});
  EXPECT_EQ(project(empty, random_state(3, 1)).norm(), 0.0);
}

TEST(Project, RankTwoMatchesDenseOracleAndIsIdempotent) {
  const auto r = orthonormalize({random_state(8, 1), random_state(8, 2)});
  const Projector p(r.basis);
  DenseMatrix dense = DenseMatrix::Zero(8, 8);
  for (const auto& v : r.basis) dense += v * v.adjoint();
  SplitMix64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const StateVector psi = random_state(8, rng.next());
    const StateVector once = project(p, psi);
    EXPECT_LE((once - dense * psi).norm(), 1e-12);
    EXPECT_LE((project(p, once) - once).norm(), 1e-12);
  }
}

TEST(Projector, RejectsNonOrthonormalBasis) {
  EXPECT_EQ(code_of([] { Projector(std::vector<StateVector>{vec({1, 0}), vec({1, 1})}); }),
            ErrorCode::invalid_argument);
}

TEST(HermitianOperator, RejectsNonHermitianMatrices) {
  DenseMatrix m(2, 2);
  m << 1, 2, 3, 4;
  EXPECT_EQ(code_of([&] { HermitianOperator::from_dense(m); }), ErrorCode::hermiticity_violation);
  SparseMatrix s = m.sparseView();
  EXPECT_EQ(code_of([&] { HermitianOperator::from_sparse(s); }),
            ErrorCode::hermiticity_violation);
  EXPECT_EQ(code_of([&] {
              HermitianOperator::from_action(
                  2, [m](const StateVector& in, StateVector& out) { out = m * in; });
            }),
            ErrorCode::hermiticity_violation);
}

TEST(HermitianOperator, LibraryOperatorsPassSelfAdjointnessProbes) {
  ModelSpec hub;
  hub.kind = ModelKind::hubbard;
  hub.sites = 3;
  hub.params = {{"t", 1.0}, {"U", 4.0}};
  ModelSpec heis;
  heis.kind = ModelKind::heisenberg;
  heis.sites = 5;
  heis.boundary = Boundary::periodic;
  const auto random = random_hermitian(20, 9);
  const auto deflated =
      random.with_shift(2.5, Projector(std::vector<StateVector>{random_state(20, 1)}));
  for (const auto& h : {build(hub), build(heis), random, deflated}) {
    EXPECT_LE(self_adjointness_defect(h), 1e-10);
  }
}

TEST(HermitianOperator, ShiftsShareTheBase) {
  const auto h = random_hermitian(6, 2);
  const auto h1 = h.with_shift(1.0, Projector(std::vector<StateVector>{random_state(6, 3)}));
  const auto h2 = h1.with_shift(2.0, Projector(std::vector<StateVector>{random_state(6, 4)}));
  EXPECT_EQ(h.shifts().size(), 0u);
  EXPECT_EQ(h2.shifts().size(), 2u);
  EXPECT_EQ(h2.storage(), StorageKind::dense);
  const StateVector psi = random_state(6, 8);
  EXPECT_TRUE(h2.base().apply(psi) == h.apply(psi));
}

TEST(HermitianOperator, GershgorinBounds) {
  DenseMatrix m(2, 2);
  m << 1, 2, 2, -3;
  const auto h = HermitianOperator::from_dense(m);
  EXPECT_DOUBLE_EQ(h.spectral_scale(), 5.0);
  EXPECT_DOUBLE_EQ(h.base_upper_bound(), 3.0);
  const auto h1 = h.with_shift(4.0, Projector(std::vector<StateVector>{StateVector::Unit(2, 0)}));
  EXPECT_DOUBLE_EQ(h1.spectral_scale(), 9.0);
  EXPECT_DOUBLE_EQ(h1.base_upper_bound(), 3.0);
  EXPECT_DOUBLE_EQ(h1.upper_bound(), 7.0);
  EXPECT_FALSE(h1.bounds_are_heuristic());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h1.to_dense());
  EXPECT_LE(es.eigenvalues().maxCoeff(), h1.upper_bound());
}

TEST(HermitianOperator, MatrixFreeBoundsAreHeuristic) {
  const DenseMatrix m = random_hermitian(10, 4).to_dense();
  const auto h = HermitianOperator::from_action(
      10, [m](const StateVector& in, StateVector& out) { out = m * in; });
  EXPECT_TRUE(h.bounds_are_heuristic());
  EXPECT_EQ(h.storage(), StorageKind::matrix_free);
  EXPECT_FALSE(h.has_entries());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(m);
  EXPECT_GE(h.base_upper_bound(), es.eigenvalues().maxCoeff());
  EXPECT_LE((h.to_dense() - m).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Subspace, CanonicalBasisIsBasisIndependent) {
  const auto r = orthonormalize({random_state(6, 1), random_state(6, 2)});
  const DenseMatrix q = as_columns(r.basis);
  // Same span, rotated and rephased basis.
  DenseMatrix u(2, 2);
  const double c = std::cos(0.7), s = std::sin(0.7);
  u << c, -s, s, c;
  const DenseMatrix q2 = q * u * Complex(0, 1);
  const auto a = canonical_basis(q);
  const auto b = canonical_basis(q2);
  ASSERT_EQ(a.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_LE((a[i] - b[i]).norm(), 1e-12);
  EXPECT_LE(max_principal_angle(q, as_columns(a)), 1e-10);
}

TEST(Subspace, PrincipalAngles) {
  const DenseMatrix e0 = as_columns({StateVector::Unit(3, 0)});
  const DenseMatrix e1 = as_columns({StateVector::Unit(3, 1)});
  const DenseMatrix e01 = as_columns({StateVector::Unit(3, 0), StateVector::Unit(3, 1)});
  EXPECT_NEAR(max_principal_angle(e0, e1), std::numbers::pi / 2, 1e-12);
  EXPECT_NEAR(max_principal_angle(e0, e0), 0.0, 1e-12);
  EXPECT_NEAR(containment_angle(e0, e01), 0.0, 1e-12);
  EXPECT_NEAR(max_principal_angle(e0, e01), std::numbers::pi / 2, 1e-12);
  const DenseMatrix comp = complement_basis(e01);
  EXPECT_EQ(comp.cols(), 1);
  EXPECT_NEAR(std::abs(comp(2, 0)), 1.0, 1e-12);
}
