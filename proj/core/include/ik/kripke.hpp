#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ik/calculus.hpp"
#include "ik/random.hpp"
#include "ik/syntax.hpp"
#include "ik/verdict.hpp"

namespace ik {

/// Index into a world's domain of some sort.
using Elem = std::uint32_t;
using Tuple = std::vector<Elem>;

struct World {
  std::string name;
  std::map<std::string, std::vector<std::string>> domain;  // sort -> element names
  std::map<std::string, std::set<Tuple>> rel;
  std::map<std::string, std::map<Tuple, Elem>> fun;        // constants use the empty tuple

  std::size_t size(const std::string& sort) const;
};

/// Transition along w <= w': one map per sort, indexed by source element.
using Transition = std::map<std::string, std::vector<Elem>>;

struct KripkeModel {
  Signature sig;
  std::vector<World> worlds;
  std::vector<std::vector<bool>> leq;  // leq[w][v]: w <= v
  std::map<std::pair<std::size_t, std::size_t>, Transition> maps;

  std::size_t add_world(std::string name);
  std::optional<std::size_t> world_index(const std::string& name) const;
  std::vector<std::size_t> above(std::size_t w) const;
  Elem transport(std::size_t from, std::size_t to, const std::string& sort, Elem e) const;
};

using Environment = std::map<Var, Elem>;

/// Closes the order reflexively and transitively, adds identity maps and
/// fills missing transitions by composition along intermediate worlds.
void complete_model(KripkeModel& m);

Verdict validate_model(const KripkeModel& m);

Elem eval(const KripkeModel& m, std::size_t w, const Environment& env, const Term& t);
bool force(const KripkeModel& m, std::size_t w, const Environment& env, const Formula& phi);

/// Environments at w over the given variables, in lexicographic order.
std::vector<Environment> environments(const KripkeModel& m, std::size_t w, const Context& ctx);
Environment transport_env(const KripkeModel& m, std::size_t from, std::size_t to,
                          const Environment& env);

struct Refutation {
  std::size_t world = 0;
  Environment env;
};

std::optional<Refutation> refute_sequent(const KripkeModel& m, const Sequent& s);
bool holds_sequent(const KripkeModel& m, const Sequent& s);
bool is_model_of(const KripkeModel& m, const Theory& t);

/// If every premise holds in m, the conclusion must too.
Verdict check_soundness(const std::vector<Sequent>& premises, const Sequent& conclusion,
                        const KripkeModel& m);

std::string describe(const KripkeModel& m, const Refutation& r);

struct ModelGenOptions {
  std::size_t max_worlds = 4;
  std::size_t max_elems = 3;
  double density = 0.5;
  double order_density = 0.5;
};

/// Random valid model; transitions are built so that all invariants hold.
KripkeModel random_model(Rng& rng, const Signature& sig, const ModelGenOptions& opts = {});

/// Model file: signature lines, then `worlds`, `order`, `domain`, `rel`,
/// `fun` and `map` lines. Certificates may add `refuted-at w` and
/// `env x = a` lines.
struct ModelFile {
  KripkeModel model;
  std::optional<std::size_t> refuted_at;
  std::map<std::string, std::string> env;  // variable name -> element name
};

ModelFile parse_model_file(std::string_view text);
std::string write_model(const KripkeModel& m, const Refutation* r = nullptr,
                        const Context* ctx = nullptr);

}  // namespace ik
