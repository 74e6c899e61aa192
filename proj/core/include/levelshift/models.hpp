#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "levelshift/hermitian_operator.hpp"

namespace levelshift {

enum class ModelKind { random, tight_binding, heisenberg, hubbard };
enum class Boundary { open, periodic };
/// Hubbard only: every fixed-N configuration, or the S_z = 0 subset.
enum class HubbardSector { full, sz_zero };

std::string_view to_string(ModelKind kind) noexcept;
std::string_view to_string(Boundary boundary) noexcept;
std::string_view to_string(HubbardSector sector) noexcept;
ModelKind model_kind_from_string(std::string_view name);
Boundary boundary_from_string(std::string_view name);
HubbardSector sector_from_string(std::string_view name);

inline constexpr Index kMaxModelDimension = 100000;

/// Lattice models:
///   tight_binding  H = -t Σ_<ij> (c†_i c_j + h.c.) + Σ_i v_i n_i   (spinless)
///   heisenberg     H = J Σ_<ij> S_i·S_j + Σ_i v_i n_i,  n_i = 1/2 + S^z_i
///   hubbard        H = -t Σ_<ij>σ (c†_iσ c_jσ + h.c.) + U Σ_i n_i↑ n_i↓
///                      + Σ_i v_i n_i
///   random         (A + A†)/2 of dimension `sites`, A iid from `seed`
///
/// Fermionic basis: configurations at fixed particle number, each a sorted
/// list of occupied orbitals o_1 < ... < o_N meaning c†_{o_1} ... c†_{o_N}|0>,
/// enumerated in lexicographic order of those lists. Hubbard orbitals are
/// numbered 2*site + spin (up = 0, down = 1).
///
/// Spin basis: index bit i set means site i is up.
struct ModelSpec {
  ModelKind kind = ModelKind::tight_binding;
  int sites = 2;
  /// t, U, J, seed as applicable.
  std::map<std::string, double> params;
  Boundary boundary = Boundary::open;
  /// Fermionic models only. Zero means the model default (1 for
  /// tight_binding, half filling for hubbard).
  int particle_number = 0;
  /// Per-site v_i; empty means zeros.
  std::vector<double> external_potential;
  HubbardSector sector = HubbardSector::full;

  double param(std::string_view name, double fallback) const;
  std::uint64_t seed() const;
  int particles() const;
  /// 1 for spinless fermions and spins, 2 for Hubbard.
  double site_capacity() const;
  bool has_site_structure() const noexcept { return kind != ModelKind::random; }
  std::vector<double> potential() const;
  Index dimension() const;
  /// Throws config_error naming the offending field.
  void validate() const;
};

HermitianOperator build(const ModelSpec& spec,
                        Index max_dimension = kMaxModelDimension);

/// Site-occupation operators n_i, diagonal in the model basis. For fermionic
/// models Σ_i n_i = N on the fixed-number sector.
std::vector<HermitianOperator> number_operators(const ModelSpec& spec);

/// occupations(s, i) = <s|n_i|s> for basis state s.
Eigen::MatrixXd site_occupations(const ModelSpec& spec);

/// (A + A†)/2, A(i, j) = SplitMix64(seed).normal_pair() filled row-major,
/// so each of Re A, Im A is standard normal.
HermitianOperator random_hermitian(Index dim, std::uint64_t seed);

}  // namespace levelshift
