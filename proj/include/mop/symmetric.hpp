#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "mop/errors.hpp"
#include "mop/trees.hpp"

namespace mop {

/// Self-map of the positive integers that is the identity outside a finite
/// set, stored as its support (entries with f(x) != x only). Equality is
/// support equality, giving a normal form.
class CfMap {
 public:
  CfMap() = default;  // identity
  explicit CfMap(std::map<std::uint32_t, std::uint32_t> support);

  std::uint32_t apply(std::uint32_t x) const;
  const std::map<std::uint32_t, std::uint32_t>& support() const { return support_; }
  bool is_identity() const { return support_.empty(); }
  /// True when the support values are a permutation of the support keys.
  bool is_bijective() const;

  friend bool operator==(const CfMap&, const CfMap&) = default;

 private:
  std::map<std::uint32_t, std::uint32_t> support_;
};

/// f then g (left-to-right composition throughout this library).
CfMap compose_cf(const CfMap& f, const CfMap& g);

/// Bijective cofinite map; these form the group S_infinity = union of all S_n.
class FinPermutation {
 public:
  FinPermutation() = default;  // identity
  static FinPermutation from_map(std::map<std::uint32_t, std::uint32_t> support);  // NotBijective
  static FinPermutation from_cf(const CfMap& m);                                   // NotBijective
  static FinPermutation transposition(std::uint32_t a, std::uint32_t b);

  /// Parses cycle notation, e.g. "(1 2)(3 7 5)"; "()" is the identity.
  static FinPermutation parse_cycles(const std::string& text);
  /// Cycle notation: cycles ordered by least element, each starting at it.
  std::string cycle_notation() const;

  const CfMap& cf() const { return map_; }
  std::uint32_t apply(std::uint32_t x) const { return map_.apply(x); }
  FinPermutation inverse() const;
  /// Smallest n with support inside {1..n}; 0 for the identity. Witnesses
  /// membership in S_n.
  std::uint32_t minimal_degree() const;

  friend bool operator==(const FinPermutation&, const FinPermutation&) = default;

 private:
  CfMap map_;
};

FinPermutation compose(const FinPermutation& f, const FinPermutation& g);  // f then g

/// Relabels the tree's tails by p. Satisfies the action law
/// act(compose(p,q), t) == act(q, act(p, t)).
StableTree act_on_tree(const FinPermutation& p, const StableTree& tree);

/// True iff p-then-glue and glue-then-p agree up to isomorphism; p must fix
/// both grafting tails for the right-hand side to be well formed.
bool equivariance_check(const FinPermutation& p,
                        const StableTree& t1, TailLabel tail1,
                        const StableTree& t2, TailLabel tail2);

}  // namespace mop
