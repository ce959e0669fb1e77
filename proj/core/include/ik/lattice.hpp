#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ik/verdict.hpp"

namespace ik {

class LatticeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using LElem = std::size_t;
using ElemSet = boost::dynamic_bitset<>;

/// Finite partial order given by its full (reflexive, transitive) relation.
struct Poset {
  std::vector<std::string> names;
  std::vector<std::vector<bool>> leq;

  std::size_t size() const { return names.size(); }
  /// Closes a relation reflexively and transitively; throws unless antisymmetric.
  static Poset from_relation(std::vector<std::string> names, std::vector<std::vector<bool>> rel);
};

/// Canonical form of a poset up to isomorphism; equal strings iff isomorphic.
std::string canonical_form(const Poset& p);

class FinLattice {
public:
  FinLattice() = default;
  /// Throws LatticeError unless the order is a bounded lattice.
  static FinLattice from_poset(const Poset& p);

  std::size_t size() const { return order_.size(); }
  bool leq(LElem a, LElem b) const { return order_.leq[a][b]; }
  LElem meet(LElem a, LElem b) const { return meet_[a][b]; }
  LElem join(LElem a, LElem b) const { return join_[a][b]; }
  LElem meet(const std::vector<LElem>& xs) const;
  LElem join(const std::vector<LElem>& xs) const;
  LElem bottom() const { return bottom_; }
  LElem top() const { return top_; }
  const std::string& name(LElem a) const { return order_.names[a]; }
  std::optional<LElem> index(std::string_view name) const;
  const Poset& order() const { return order_; }

  ElemSet up(LElem a) const;
  ElemSet down(LElem a) const;

private:
  Poset order_;
  std::vector<std::vector<LElem>> meet_, join_;
  LElem bottom_ = 0, top_ = 0;
};

/// A designated join (target = join of family) or meet.
struct Designated {
  LElem target;
  std::vector<LElem> family;
};

struct DesignatedJoins {
  std::vector<Designated> joins;
  std::vector<Designated> meets;
};

struct Filter {
  ElemSet members;
};

std::string print_set(const FinLattice& L, const ElemSet& s);

bool is_filter(const FinLattice& L, const ElemSet& s);
bool is_ideal(const FinLattice& L, const ElemSet& s);
/// Proper, prime for binary joins, and preserving every designated join and meet.
bool is_prime_filter(const FinLattice& L, const DesignatedJoins& S, const ElemSet& s);

struct Triple {
  LElem a, b, c;
};

/// Returns a triple with a ∧ (b ∨ c) != (a ∧ b) ∨ (a ∧ c), if any.
std::optional<Triple> distributivity_witness(const FinLattice& L);
bool is_distributive(const FinLattice& L);

/// Labelling of the gamma-branching tree of height d (addresses in
/// breadth-first order) and a bar, witnessing failure of tree distributivity.
struct TreeWitness {
  std::vector<std::vector<std::size_t>> addresses;
  std::vector<LElem> labels;
  std::vector<std::vector<std::size_t>> bar;
  LElem bar_join;
};

struct TreeDistResult {
  bool holds = true;
  std::optional<TreeWitness> witness;
};

/// Exact decision: every labelling with a_f <= join of the successors of f
/// satisfies a_root = join over the bar of the meets of the labels on the
/// path from the root to f.
TreeDistResult is_tree_distributive(const FinLattice& L, std::size_t gamma, std::size_t d,
                                    std::size_t budget = 50'000'000);

std::vector<Filter> prime_filters(const FinLattice& L, const DesignatedJoins& S = {});

/// Decompositions of x: antichains of size >= 2 with join x, then the
/// designated families with target x.
std::vector<std::vector<LElem>> decompositions(const FinLattice& L, const DesignatedJoins& S,
                                               LElem x);

/// Pairing (beta, gamma) -> step index with f(beta, gamma) >= gamma.
std::size_t schedule_index(std::size_t beta, std::size_t gamma);
std::pair<std::size_t, std::size_t> schedule_pair(std::size_t index);

struct BranchTrace {
  std::vector<LElem> values;  // weakly decreasing
  LElem stable = 0;
  std::size_t steps = 0;
};

struct ConstructResult {
  Filter filter;
  BranchTrace trace;
};

/// Builds a branch a = n0 >= n1 >= ... refining by decompositions of earlier
/// branch values, always keeping n_i not below b, until up(m) is prime.
ConstructResult construct_filter(const FinLattice& L, const DesignatedJoins& S, LElem a, LElem b);

Filter extend_filter(const FinLattice& L, const DesignatedJoins& S, const ElemSet& filter,
                     const ElemSet& ideal);

struct SpectralPoset {
  std::vector<Filter> points;
  Poset order;  // inclusion
  bool separation_ok = true;
  std::string separation_witness;
};

SpectralPoset spectrum(const FinLattice& L, const DesignatedJoins& S = {});

FinLattice upsets_lattice(const Poset& p);
FinLattice downsets_lattice(const Poset& p);

struct DualityReport {
  bool ok = false;
  std::string witness;
  std::vector<std::size_t> element_map;  // a -> index of phi(a) in upsets(spectrum)
  std::vector<std::size_t> point_map;    // p -> index of its filter in spectrum(upsets(P))
};

DualityReport duality_roundtrip(const FinLattice& L, const DesignatedJoins& S = {});
DualityReport poset_roundtrip(const Poset& p);

struct RsResult {
  std::optional<Filter> filter;
  bool hypothesis_vacuous = true;
  std::size_t candidates = 0;
  std::string certificate;  // exhaustion certificate when no filter exists
};

/// Prime filter containing a, not b, preserving the designated joins and
/// meets. Throws LatticeError when a <= b or a designated join/meet is not
/// distributive.
RsResult rs_filter(const FinLattice& L, const DesignatedJoins& S, LElem a, LElem b);

std::optional<Designated> nondistributive_designation(const FinLattice& L,
                                                      const DesignatedJoins& S);

/// Finite Baire check on the spectrum with basis phi(a) minus phi(b).
bool baire_check(const FinLattice& L, const DesignatedJoins& S = {});

/// All lattices with n elements up to isomorphism (n <= 8).
std::vector<FinLattice> lattice_catalog(std::size_t n);
/// All posets with n points up to isomorphism.
std::vector<Poset> poset_catalog(std::size_t n);
/// All distributive lattices with n elements up to isomorphism.
std::vector<FinLattice> distributive_catalog(std::size_t n);

FinLattice chain_lattice(std::size_t n);

struct LatticeFile {
  FinLattice lattice;
  DesignatedJoins designated;
};

LatticeFile parse_lattice_file(std::string_view text);
std::string write_lattice(const FinLattice& L, const DesignatedJoins& S = {});

}  // namespace ik
