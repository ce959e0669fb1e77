#pragma once

#include <boost/dynamic_bitset.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ik/calculus.hpp"
#include "ik/kripke.hpp"
#include "ik/lattice.hpp"
#include "ik/random.hpp"
#include "ik/syntax.hpp"

namespace ik {

/// A search exceeded its configured bound.
class ResourceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SaturateLimits {
  std::size_t max_atoms = 16;     // ground atoms for subset enumeration
  std::size_t nodes = 2'000'000;  // search nodes (chase, model search)
  std::size_t max_lattice = 256;  // Lindenbaum lattice elements
  std::size_t max_worlds = 1024;  // Herbrand models / canonical Kripke worlds
  std::size_t max_depth = 8;      // fragment formula depth
};

/// Reads the node bound from IK_RESOURCE_LIMIT when set.
SaturateLimits limits_from_env(SaturateLimits base = {});

bool is_coherent(const Formula& phi);
bool is_coherent(const Sequent& s);

/// Signature plus axioms. Theories read from files keep their names.
struct TheoryFile {
  Signature sig;
  Theory axioms;
};

/// Signature declarations followed by lines `name: phi |- [ctx] psi`.
TheoryFile parse_theory_file(std::string_view text, ParseOptions opts = {});
std::string write_theory(const TheoryFile& t);

/// Throws SortError unless the signature has constants only and every
/// axiom is coherent.
void check_coherent_theory(const TheoryFile& t);

// ---------------------------------------------------------------- Herbrand structures

struct GroundAtom {
  std::string rel;
  std::vector<std::string> args;
  auto operator<=>(const GroundAtom&) const = default;
};

using AtomSet = boost::dynamic_bitset<>;
/// Variables mapped to constant names.
using Grounding = std::map<Var, std::string>;

/// The ground atoms over the constants of a signature.
class HerbrandBase {
public:
  explicit HerbrandBase(const Signature& sig);

  const Signature& sig() const { return sig_; }
  std::size_t size() const { return atoms_.size(); }
  const GroundAtom& atom(std::size_t i) const { return atoms_[i]; }
  std::optional<std::size_t> find(const GroundAtom& a) const;
  AtomSet empty() const { return AtomSet(size()); }

private:
  Signature sig_;
  std::vector<GroundAtom> atoms_;
  std::map<GroundAtom, std::size_t> index_;
};

std::vector<Grounding> groundings(const Signature& sig, const Context& ctx);
std::string constant_of(const Term& t, const Grounding& g);

/// Classical truth in the Herbrand structure; quantifiers range over the
/// constants of their sort and equality is identity of constants.
bool evaluate(const HerbrandBase& base, const AtomSet& m, const Formula& phi, const Grounding& g);
bool satisfies(const HerbrandBase& base, const AtomSet& m, const Sequent& s);
bool satisfies(const HerbrandBase& base, const AtomSet& m, const Theory& t);
std::string print_model(const HerbrandBase& base, const AtomSet& m);

/// Disjunctive normal form of a ground coherent formula: the formula holds
/// in m iff some returned set is contained in m.
std::vector<AtomSet> ground_dnf(const HerbrandBase& base, const Formula& phi, const Grounding& g,
                                std::size_t budget = 100'000);

/// All Herbrand models of a coherent theory, by backtracking with propagation.
std::vector<AtomSet> herbrand_models(const HerbrandBase& base, const Theory& t,
                                     const SaturateLimits& lim = {});

// ---------------------------------------------------------------- entailment

bool entails_by_enumeration(const HerbrandBase& base, const Theory& t, const Sequent& s,
                            const SaturateLimits& lim = {});
/// Forward chaining with disjunction splitting. On failure, returns the
/// refuting grounding and the chased model through the optional outputs.
bool entails_by_chase(const HerbrandBase& base, const Theory& t, const Sequent& s,
                      const SaturateLimits& lim = {}, Grounding* where = nullptr,
                      AtomSet* model = nullptr);
/// Both procedures; throws std::logic_error if they disagree.
bool entails(const TheoryFile& t, const Sequent& s, const SaturateLimits& lim = {});

// ---------------------------------------------------------------- Lindenbaum algebra

struct LindenbaumLattice {
  FinLattice lattice;
  DesignatedJoins designated;
  std::vector<Formula> fragment;       // ground formulas
  std::vector<LElem> class_of;         // fragment index -> element
  std::vector<Formula> representative; // element -> formula
};

/// Ground subformula instances of the axioms and of the two sides of s
/// under g, closed under instances of existential bodies.
std::vector<Formula> ground_fragment(const TheoryFile& t, const Sequent& s, const Grounding& g);

/// Formulas ordered by entailment modulo the theory, closed under the
/// lattice operations. Designated joins come from disjunctions and
/// existentials, designated meets from conjunctions. Classes are sets of
/// models; passing `models` replaces the theory's models by a subset, which
/// yields the image of the algebra under restriction.
LindenbaumLattice lindenbaum(const TheoryFile& t, const std::vector<Formula>& fragment,
                             const SaturateLimits& lim = {},
                             const std::vector<AtomSet>* models = nullptr);

struct CountermodelResult {
  bool entailed = false;
  std::optional<AtomSet> model;
  Grounding grounding;
  std::size_t lattice_size = 0;
  bool restricted = false;  // lattice is the image on the minimal refuting models
};

/// Term model read off a prime filter of the Lindenbaum lattice that
/// contains the antecedent and omits the succedent. The model is checked
/// against the theory and the sequent before it is returned. When the full
/// algebra exceeds max_lattice, its image on the minimal refuting models is
/// used instead and the result says so.
CountermodelResult countermodel(const TheoryFile& t, const Sequent& s,
                                const SaturateLimits& lim = {});

// ---------------------------------------------------------------- Kripke completeness

/// Subformula closure, shallow formulas first.
std::vector<Formula> subformulas(const std::vector<Formula>& roots);

struct Morleyized {
  TheoryFile theory;                   // coherent, over the extended signature
  std::vector<Formula> fragment;
  std::vector<std::string> predicate;  // fragment index -> fresh relation
  std::vector<Context> args;           // fragment index -> its free variables
  Formula atom_for(std::size_t i) const;
  std::optional<std::size_t> index_of(const Formula& phi) const;
};

/// Fresh predicate `_m<i>` per fragment formula; linkage in both directions
/// for coherent connectives, elimination only for implication and universal
/// quantification, and each axiom translated.
Morleyized morleyize(const TheoryFile& t, const std::vector<Formula>& fragment);

/// Kripke model whose worlds are the given Herbrand structures ordered by
/// inclusion, with identity transitions. Only relations of `sig` are kept.
KripkeModel kripke_from_herbrand(const HerbrandBase& base, const std::vector<AtomSet>& worlds,
                                 const Signature& sig);

/// Every Herbrand model of the theory as a world.
KripkeModel canonical_kripke(const TheoryFile& tm, const SaturateLimits& lim = {});

struct CanonicalModel {
  HerbrandBase base;
  std::vector<AtomSet> worlds;
  std::size_t eliminated = 0;
};

/// Herbrand models of the Morleyization, minus the worlds whose fresh atoms
/// disagree with forcing (removed shallowest disagreement first, until none
/// remain). What survives is the largest set of worlds on which fresh atoms
/// and forcing agree.
CanonicalModel hintikka_model(const Morleyized& m, const SaturateLimits& lim = {});

struct ProofResult {
  bool provable = false;
  KripkeModel model;  // canonical model over the original signature
  std::optional<Refutation> refutation;
  std::size_t worlds = 0;
  std::size_t eliminated = 0;
  std::size_t fragment = 0;
  std::string certificate() const;
};

/// Validity of s in the canonical model of the Morleyized theory over the
/// subformulas of the axioms and of s.
ProofResult provable_ik(const TheoryFile& t, const Sequent& s, const SaturateLimits& lim = {});

struct PropertyWitness {
  bool premise = false;                 // the disjunction / existential is provable
  std::optional<std::size_t> index;     // provable disjunct
  std::optional<Grounding> terms;       // provable instance
};

PropertyWitness disjunction_property(const TheoryFile& t, const std::vector<Formula>& disjuncts,
                                     const SaturateLimits& lim = {});
PropertyWitness existence_property(const TheoryFile& t, const Formula& exists,
                                   const SaturateLimits& lim = {});

// ---------------------------------------------------------------- generators

struct TheoryGenOptions {
  std::size_t max_constants = 3;
  std::size_t max_relations = 3;
  std::size_t max_arity = 2;
  std::size_t max_atoms = 10;  // ground atoms, so that subset enumeration stays cheap
  std::size_t max_axioms = 3;
  std::size_t formula_depth = 2;
};

/// One sort S, constants c0.., relations R0.., and coherent axioms.
TheoryFile random_coherent_theory(Rng& rng, const TheoryGenOptions& opts = {});
/// Coherent sequent over sig, with context [] or [x:S].
Sequent random_coherent_sequent(Rng& rng, const Signature& sig, const TheoryGenOptions& opts = {});

}  // namespace ik
