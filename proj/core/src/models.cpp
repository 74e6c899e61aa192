#include "levelshift/models.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <limits>
#include <optional>
#include <unordered_map>
#include <utility>

#include "levelshift/error.hpp"
#include "levelshift/ground_engines.hpp"
#include "levelshift/rng.hpp"

namespace levelshift {

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::random: return "random";
    case ModelKind::tight_binding: return "tight_binding";
    case ModelKind::heisenberg: return "heisenberg";
    case ModelKind::hubbard: return "hubbard";
  }
  return "unknown";
}

std::string_view to_string(Boundary boundary) noexcept {
  return boundary == Boundary::open ? "open" : "periodic";
}

std::string_view to_string(HubbardSector sector) noexcept {
  return sector == HubbardSector::full ? "full" : "sz_zero";
}

ModelKind model_kind_from_string(std::string_view name) {
  if (name == "random") return ModelKind::random;
  if (name == "tight_binding") return ModelKind::tight_binding;
  if (name == "heisenberg") return ModelKind::heisenberg;
  if (name == "hubbard") return ModelKind::hubbard;
  throw Error(ErrorCode::config_error, "model.kind: unknown value '" +
                                           std::string(name) + "'");
}

Boundary boundary_from_string(std::string_view name) {
  if (name == "open") return Boundary::open;
  if (name == "periodic") return Boundary::periodic;
  throw Error(ErrorCode::config_error,
              "model.boundary: unknown value '" + std::string(name) + "'");
}

HubbardSector sector_from_string(std::string_view name) {
  if (name == "full") return HubbardSector::full;
  if (name == "sz_zero") return HubbardSector::sz_zero;
  throw Error(ErrorCode::config_error,
              "model.sector: unknown value '" + std::string(name) + "'");
}

namespace {

using Mask = std::uint64_t;

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

// All N-subsets of {0..orbitals-1} as bitmasks, lexicographic in the sorted
// list of members.
std::vector<Mask> combinations(int orbitals, int n) {
  std::vector<Mask> out;
  std::vector<int> pick(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pick[static_cast<std::size_t>(i)] = i;
  if (n == 0) return {Mask{0}};
  while (true) {
    Mask m = 0;
    for (int p : pick) m |= Mask{1} << p;
    out.push_back(m);
    int i = n - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == orbitals - n + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) {
      pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

std::vector<std::pair<int, int>> bonds(int sites, Boundary boundary) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i + 1 < sites; ++i) out.emplace_back(i, i + 1);
  if (boundary == Boundary::periodic && sites > 2) out.emplace_back(sites - 1, 0);
  return out;
}

// Sign and result of c†_p c_q on |mask>; nullopt if it annihilates.
std::optional<std::pair<Mask, double>> hop(Mask mask, int p, int q) {
  const Mask bq = Mask{1} << q;
  const Mask bp = Mask{1} << p;
  if (!(mask & bq)) return std::nullopt;
  Mask next = mask ^ bq;
  if (next & bp) return std::nullopt;
  const int below_q = std::popcount(mask & (bq - 1));
  const int below_p = std::popcount(next & (bp - 1));
  next |= bp;
  const double sign = ((below_q + below_p) % 2 == 0) ? 1.0 : -1.0;
  return std::make_pair(next, sign);
}

struct FermionBasis {
  int orbitals_per_site = 1;
  std::vector<Mask> states;
  std::unordered_map<Mask, Index> lookup;
};

FermionBasis fermion_basis(const ModelSpec& spec) {
  FermionBasis basis;
  const bool spinful = spec.kind == ModelKind::hubbard;
  basis.orbitals_per_site = spinful ? 2 : 1;
  const int orbitals = spec.sites * basis.orbitals_per_site;
  for (Mask m : combinations(orbitals, spec.particles())) {
    if (spinful && spec.sector == HubbardSector::sz_zero) {
      int up = 0;
      for (int s = 0; s < spec.sites; ++s) up += static_cast<int>((m >> (2 * s)) & 1U);
      if (2 * up != spec.particles()) continue;
    }
    basis.lookup.emplace(m, static_cast<Index>(basis.states.size()));
    basis.states.push_back(m);
  }
  return basis;
}

double site_occupation_fermion(Mask m, int site, int orbitals_per_site) {
  double n = 0.0;
  for (int o = 0; o < orbitals_per_site; ++o) {
    n += static_cast<double>((m >> (orbitals_per_site * site + o)) & 1U);
  }
  return n;
}

using Triplets = std::vector<Eigen::Triplet<Complex>>;

SparseMatrix from_triplets(Index dim, const Triplets& t) {
  SparseMatrix m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

HermitianOperator build_fermion(const ModelSpec& spec) {
  const FermionBasis basis = fermion_basis(spec);
  const Index dim = static_cast<Index>(basis.states.size());
  const double t = spec.param("t", 1.0);
  const double u = spec.param("U", 0.0);
  const auto v = spec.potential();
  const int per_site = basis.orbitals_per_site;
  Triplets triplets;
  for (Index col = 0; col < dim; ++col) {
    const Mask m = basis.states[static_cast<std::size_t>(col)];
    double diag = 0.0;
    for (int s = 0; s < spec.sites; ++s) {
      const double n = site_occupation_fermion(m, s, per_site);
      diag += v[static_cast<std::size_t>(s)] * n;
      if (per_site == 2 && n == 2.0) diag += u;
    }
    if (diag != 0.0) triplets.emplace_back(col, col, diag);
    if (t == 0.0) continue;
    for (const auto& [i, j] : bonds(spec.sites, spec.boundary)) {
      for (int o = 0; o < per_site; ++o) {
        const int a = per_site * i + o;
        const int b = per_site * j + o;
        for (const auto& [p, q] : {std::pair{a, b}, std::pair{b, a}}) {
          if (auto r = hop(m, p, q)) {
            const auto it = basis.lookup.find(r->first);
            if (it == basis.lookup.end()) continue;
            triplets.emplace_back(it->second, col, -t * r->second);
          }
        }
      }
    }
  }
  return HermitianOperator::from_sparse(from_triplets(dim, triplets));
}

HermitianOperator build_heisenberg(const ModelSpec& spec) {
  const Index dim = Index{1} << spec.sites;
  const double j = spec.param("J", 1.0);
  const auto v = spec.potential();
  Triplets triplets;
  for (Index state = 0; state < dim; ++state) {
    double diag = 0.0;
    for (int s = 0; s < spec.sites; ++s) {
      diag += v[static_cast<std::size_t>(s)] * static_cast<double>((state >> s) & 1);
    }
    for (const auto& [a, b] : bonds(spec.sites, spec.boundary)) {
      const bool up_a = (state >> a) & 1;
      const bool up_b = (state >> b) & 1;
      diag += j * (up_a == up_b ? 0.25 : -0.25);
      if (up_a != up_b) {
        // (S+_a S-_b + S-_a S+_b)/2 flips an antiparallel pair.
        const Index flipped = state ^ ((Index{1} << a) | (Index{1} << b));
        triplets.emplace_back(flipped, state, 0.5 * j);
      }
    }
    if (diag != 0.0) triplets.emplace_back(state, state, diag);
  }
  return HermitianOperator::from_sparse(from_triplets(dim, triplets));
}

}  // namespace

double ModelSpec::param(std::string_view name, double fallback) const {
  const auto it = params.find(std::string(name));
  return it == params.end() ? fallback : it->second;
}

std::uint64_t ModelSpec::seed() const {
  return static_cast<std::uint64_t>(param("seed", 0.0));
}

int ModelSpec::particles() const {
  if (particle_number > 0) return particle_number;
  if (kind == ModelKind::hubbard) return sites;
  return 1;
}

double ModelSpec::site_capacity() const {
  return kind == ModelKind::hubbard ? 2.0 : 1.0;
}

std::vector<double> ModelSpec::potential() const {
  if (external_potential.empty()) {
    return std::vector<double>(static_cast<std::size_t>(std::max(sites, 0)), 0.0);
  }
  return external_potential;
}

Index ModelSpec::dimension() const {
  switch (kind) {
    case ModelKind::random:
      return sites;
    case ModelKind::heisenberg:
      return sites >= 62 ? std::numeric_limits<Index>::max() : Index{1} << sites;
    case ModelKind::tight_binding:
      return static_cast<Index>(binomial(sites, particles()));
    case ModelKind::hubbard: {
      if (sector == HubbardSector::full) {
        return static_cast<Index>(binomial(2 * sites, particles()));
      }
      const int half = particles() / 2;
      return static_cast<Index>(binomial(sites, half) * binomial(sites, half));
    }
  }
  return 0;
}

void ModelSpec::validate() const {
  if (sites < 1) throw Error(ErrorCode::config_error, "model.sites: must be >= 1");
  if (sites > 30 && kind != ModelKind::random) {
    throw Error(ErrorCode::config_error, "model.sites: at most 30 lattice sites");
  }
  if (particle_number < 0) {
    throw Error(ErrorCode::config_error, "model.particle_number: must be >= 0");
  }
  if (!external_potential.empty() &&
      external_potential.size() != static_cast<std::size_t>(sites)) {
    throw Error(ErrorCode::config_error,
                "model.external_potential: length " +
                    std::to_string(external_potential.size()) + " != sites " +
                    std::to_string(sites));
  }
  if (kind == ModelKind::random && !external_potential.empty()) {
    throw Error(ErrorCode::config_error,
                "model.external_potential: random models have no sites");
  }
  const int n = particles();
  if (kind == ModelKind::tight_binding && n > sites) {
    throw Error(ErrorCode::config_error,
                "model.particle_number: more particles than sites");
  }
  if (kind == ModelKind::hubbard) {
    if (n > 2 * sites) {
      throw Error(ErrorCode::config_error,
                  "model.particle_number: more electrons than spin orbitals");
    }
    if (sector == HubbardSector::sz_zero && (n % 2 != 0 || n / 2 > sites)) {
      throw Error(ErrorCode::config_error,
                  "model.sector: sz_zero needs an even particle number <= 2*sites");
    }
  }
  if (kind != ModelKind::hubbard && sector != HubbardSector::full) {
    throw Error(ErrorCode::config_error, "model.sector: only hubbard has sectors");
  }
  if (dimension() < 1) throw Error(ErrorCode::config_error, "model: empty basis");
}

HermitianOperator random_hermitian(Index dim, std::uint64_t seed) {
  if (dim < 1) throw Error(ErrorCode::invalid_argument, "random_hermitian: dim must be >= 1");
  SplitMix64 rng(seed);
  DenseMatrix a(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    for (Index j = 0; j < dim; ++j) a(i, j) = rng.normal_pair();
  }
  return HermitianOperator::from_dense(0.5 * (a + a.adjoint()));
}

HermitianOperator build(const ModelSpec& spec, Index max_dimension) {
  spec.validate();
  const Index dim = spec.dimension();
  const Index limit = spec.kind == ModelKind::random
                          ? std::min<Index>(max_dimension, kDefaultDenseLimit)
                          : max_dimension;
  if (dim > limit) {
    throw Error(ErrorCode::dense_limit_exceeded,
                "model dimension " + std::to_string(dim) + " exceeds the limit " +
                    std::to_string(limit));
  }
  switch (spec.kind) {
    case ModelKind::random: return random_hermitian(dim, spec.seed());
    case ModelKind::heisenberg: return build_heisenberg(spec);
    case ModelKind::tight_binding:
    case ModelKind::hubbard: return build_fermion(spec);
  }
  throw Error(ErrorCode::invalid_argument, "unknown model kind");
}

Eigen::MatrixXd site_occupations(const ModelSpec& spec) {
  spec.validate();
  if (!spec.has_site_structure()) {
    throw Error(ErrorCode::unsupported, "random models have no site structure");
  }
  if (spec.dimension() > kMaxModelDimension) {
    throw Error(ErrorCode::dense_limit_exceeded, "model too large for occupations");
  }
  if (spec.kind == ModelKind::heisenberg) {
    const Index dim = spec.dimension();
    Eigen::MatrixXd occ(dim, spec.sites);
    for (Index s = 0; s < dim; ++s) {
      for (int i = 0; i < spec.sites; ++i) occ(s, i) = static_cast<double>((s >> i) & 1);
    }
    return occ;
  }
  const FermionBasis basis = fermion_basis(spec);
  Eigen::MatrixXd occ(static_cast<Index>(basis.states.size()), spec.sites);
  for (std::size_t s = 0; s < basis.states.size(); ++s) {
    for (int i = 0; i < spec.sites; ++i) {
      occ(static_cast<Index>(s), i) =
          site_occupation_fermion(basis.states[s], i, basis.orbitals_per_site);
    }
  }
  return occ;
}

std::vector<HermitianOperator> number_operators(const ModelSpec& spec) {
  const Eigen::MatrixXd occ = site_occupations(spec);
  std::vector<HermitianOperator> ops;
  for (Index i = 0; i < occ.cols(); ++i) {
    SparseMatrix n(occ.rows(), occ.rows());
    Triplets t;
    for (Index s = 0; s < occ.rows(); ++s) {
      if (occ(s, i) != 0.0) t.emplace_back(s, s, occ(s, i));
    }
    n.setFromTriplets(t.begin(), t.end());
    ops.push_back(HermitianOperator::from_sparse(std::move(n)));
  }
  return ops;
}

}  // namespace levelshift
