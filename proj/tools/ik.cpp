#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>

#include "cli.hpp"
#include "ik/calculus.hpp"
#include "ik/derivation_io.hpp"
#include "ik/kripke.hpp"
#include "ik/lattice.hpp"
#include "ik/saturate.hpp"
#include "ik/text_io.hpp"
#include "suite.hpp"

namespace ik::cli {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

namespace {

// Parse errors name their source.
template <class F>
auto parsing(const std::string& source, F&& f) {
  try {
    return f();
  } catch (const SyntaxError& e) {
    throw UsageError(source + ":" + e.what());
  } catch (const SortError& e) {
    throw UsageError(source + ": " + e.what());
  } catch (const LatticeError& e) {
    throw UsageError(source + ": " + e.what());
  }
}

TheoryFile load_theory(const std::string& path) {
  if (path.empty()) return {};
  return parsing(path, [&] { return parse_theory_file(slurp(path)); });
}

Sequent sequent_arg(const std::string& text, const Signature& sig) {
  return parsing("<sequent>", [&] { return parse_sequent(text, sig); });
}

void write_out(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

struct Options {
  std::uint64_t seed = 0;
  std::size_t trials = 1000;
  std::size_t fragment_depth = 8;
  std::size_t max_worlds = 1024;
  std::size_t max_elems = 256;
  std::string theory;
  std::string output;
  std::string world;
  std::string only;
};

SaturateLimits limits(const Options& o) {
  SaturateLimits lim;
  lim.max_depth = o.fragment_depth;
  lim.max_worlds = o.max_worlds;
  lim.max_lattice = o.max_elems;
  return limits_from_env(lim);
}

int cmd_check(const std::string& path, const Options& o, Report& r) {
  auto d = parsing(path, [&] { return parse_derivation_file(slurp(path)); });
  auto t = load_theory(o.theory);
  auto v = check_derivation(*d.root, t.axioms, &d.sig);
  r.field("command", "check");
  r.field("nodes", d.nodes);
  r.field("result", v.ok ? "accept" : "reject");
  if (!v.ok) {
    std::string where;
    for (auto i : v.path) where += (where.empty() ? "" : ".") + std::to_string(i);
    r.field("path", where.empty() ? "root" : where);
    r.line("reason: " + v.reason);
  }
  return v.ok ? kYes : kNo;
}

int cmd_force(const std::string& path, const std::string& text, const Options& o, Report& r) {
  auto m = parsing(path, [&] { return parse_model_file(slurp(path)); }).model;
  auto phi = parsing("<formula>", [&] { return parse_formula(text, m.sig); });
  if (!free_vars(phi).empty()) throw UsageError("formula must be closed");
  r.field("command", "force");
  std::vector<std::size_t> worlds;
  if (!o.world.empty()) {
    auto w = m.world_index(o.world);
    if (!w) throw UsageError("unknown world '" + o.world + "'");
    worlds.push_back(*w);
  } else {
    for (std::size_t w = 0; w < m.worlds.size(); ++w) worlds.push_back(w);
  }
  bool all = true;
  for (auto w : worlds) {
    bool f = force(m, w, {}, phi);
    all = all && f;
    r.line(m.worlds[w].name + ": " + (f ? "forced" : "not forced"));
  }
  r.field("result", all ? "forced" : "not forced");
  return all ? kYes : kNo;
}

int cmd_holds(const std::string& path, const std::string& text, const Options& o, Report& r) {
  auto m = parsing(path, [&] { return parse_model_file(slurp(path)); }).model;
  auto s = sequent_arg(text, m.sig);
  r.field("command", "holds");
  auto v = validate_model(m);
  if (!v.ok) throw UsageError(path + ": invalid model: " + v.reason);
  bool ok = true;
  if (!o.theory.empty()) {
    auto t = load_theory(o.theory);
    bool model = is_model_of(m, t.axioms);
    r.field("theory", model ? "satisfied" : "violated");
    ok = model;
  }
  auto ref = refute_sequent(m, s);
  r.field("result", ref ? "false" : "true");
  if (ref) r.line("refuted at " + describe(m, *ref));
  return ok && !ref ? kYes : kNo;
}

int cmd_entails(const std::string& path, const std::string& text, const Options& o, Report& r) {
  auto t = load_theory(path);
  auto s = sequent_arg(text, t.sig);
  parsing(path, [&] { check_coherent_theory(t); return 0; });
  bool e = entails(t, s, limits(o));
  r.field("command", "entails");
  r.field("result", e ? "entailed" : "not entailed");
  return e ? kYes : kNo;
}

int cmd_countermodel(const std::string& path, const std::string& text, const Options& o,
                     Report& r) {
  auto t = load_theory(path);
  auto s = sequent_arg(text, t.sig);
  parsing(path, [&] { check_coherent_theory(t); return 0; });
  auto cm = countermodel(t, s, limits(o));
  r.field("command", "countermodel");
  if (cm.entailed) {
    r.field("result", "none");
    return kNo;
  }
  HerbrandBase base(t.sig);
  auto k = kripke_from_herbrand(base, {*cm.model}, t.sig);
  Refutation ref;
  for (const auto& v : s.context) {
    const auto& dom = k.worlds[0].domain.at(v.sort);
    ref.env[v] = static_cast<Elem>(std::find(dom.begin(), dom.end(), cm.grounding.at(v)) -
                                   dom.begin());
  }
  r.field("result", "found");
  r.field("lattice", cm.lattice_size);
  r.field("restricted", cm.restricted ? "yes" : "no");
  r.field("model", print_model(base, *cm.model));
  auto cert = write_model(k, &ref, &s.context);
  if (o.output.empty()) r.text(cert);
  else write_out(o.output, cert);
  return kYes;
}

int cmd_canonical(const std::string& path, const Options& o, Report& r) {
  auto t = load_theory(path);
  parsing(path, [&] { check_coherent_theory(t); return 0; });
  auto k = canonical_kripke(t, limits(o));
  r.field("command", "canonical");
  r.field("worlds", k.worlds.size());
  auto text = write_model(k);
  if (o.output.empty()) r.text(text);
  else write_out(o.output, text);
  return k.worlds.empty() ? kNo : kYes;
}

int cmd_provable(const std::string& path, const std::string& text, const Options& o, Report& r) {
  auto t = load_theory(path);
  auto s = sequent_arg(text, t.sig);
  auto p = provable_ik(t, s, limits(o));
  r.field("command", "provable");
  r.field("result", p.provable ? "provable" : "unprovable");
  r.field("fragment", p.fragment);
  r.field("worlds", p.worlds);
  r.field("eliminated", p.eliminated);
  if (p.refutation) r.field("refuted-at", p.model.worlds[p.refutation->world].name);
  if (o.output.empty()) r.text(p.certificate());
  else write_out(o.output, p.certificate());
  return p.provable ? kYes : kNo;
}

int cmd_props(const Options& o, Report& r) {
  r.field("command", "props");
  r.field("seed", std::to_string(o.seed));
  r.field("trials", o.trials);
  double scale = static_cast<double>(o.trials) / 1000.0;
  bool all = true;
  std::size_t ran = 0;
  for (const auto& p : suite::properties()) {
    if (!o.only.empty() && p.name != o.only) continue;
    ++ran;
    auto out = p.run(o.seed, scale);
    all = all && out.pass;
    r.line(p.name + ": " + (out.pass ? "pass" : "FAIL") + " (" + std::to_string(out.checked) +
           " checked, " + std::to_string(out.failures) + " failed) " + out.detail);
  }
  if (ran == 0) throw UsageError("unknown property '" + o.only + "'");
  r.field("result", all ? "pass" : "fail");
  return all ? kYes : kNo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Workbench for infinitary intuitionistic logic at desk scale"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--seed", o.seed, "Seed for all randomness");
  app.add_option("--trials", o.trials, "Trials per property; 1000 gives the acceptance sizes")
      ->check(CLI::PositiveNumber);
  app.add_option("--fragment-depth", o.fragment_depth, "Deepest fragment formula")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-worlds", o.max_worlds, "Herbrand models / canonical worlds")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-elems", o.max_elems, "Lindenbaum lattice elements")
      ->check(CLI::PositiveNumber);
  app.add_option("--theory", o.theory, "Theory file");

  std::string file, text;
  auto* check = app.add_subcommand("check", "Check a derivation file");
  check->add_option("derivation", file)->required();

  auto* forcing = app.add_subcommand("force", "Forcing of a closed formula in a Kripke model");
  forcing->add_option("model", file)->required();
  forcing->add_option("formula", text)->required();
  forcing->add_option("--world", o.world, "Only this world");

  auto* holds = app.add_subcommand("holds", "Validity of a sequent in a Kripke model");
  holds->add_option("model", file)->required();
  holds->add_option("sequent", text)->required();

  LatticeArgs la;
  std::string filter, ideal;
  auto* lattice = app.add_subcommand("lattice", "Finite lattice operations");
  lattice->add_option("command", la.command)
      ->required()
      ->check(CLI::IsMember(
          {"distributive", "tree-dist", "primes", "construct", "extend", "spectrum", "dual", "rs"}));
  lattice->add_option("file", la.file)->required();
  lattice->add_option("elements", la.elements, "a b for construct and rs");
  lattice->add_option("--filter", la.filter, "Filter generators for extend")->delimiter(',');
  lattice->add_option("--ideal", la.ideal, "Ideal generators for extend")->delimiter(',');
  lattice->add_option("--gamma", la.gamma, "Branching for tree-dist")->check(CLI::Range(1, 8));
  lattice->add_option("--depth", la.depth, "Height for tree-dist")->check(CLI::Range(1, 6));

  auto* ent = app.add_subcommand("entails", "Entailment in a coherent theory");
  ent->add_option("theory", file)->required();
  ent->add_option("sequent", text)->required();

  auto* cm = app.add_subcommand("countermodel", "Term model refuting a coherent sequent");
  cm->add_option("theory", file)->required();
  cm->add_option("sequent", text)->required();
  cm->add_option("-o,--output", o.output, "Write the model file here");

  auto* canon = app.add_subcommand("canonical", "Canonical Kripke model of a coherent theory");
  canon->add_option("theory", file)->required();
  canon->add_option("-o,--output", o.output, "Write the model file here");

  auto* prov = app.add_subcommand("provable", "Intuitionistic provability via the canonical model");
  prov->add_option("theory", file)->required();
  prov->add_option("sequent", text)->required();
  prov->add_option("-o,--output", o.output, "Write the certificate here");

  auto* props = app.add_subcommand("props", "Run the property suite");
  props->add_option("--only", o.only, "Run one property");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  Report r;
  int status = kUsage;
  try {
    if (*check) status = cmd_check(file, o, r);
    else if (*forcing) status = cmd_force(file, text, o, r);
    else if (*holds) status = cmd_holds(file, text, o, r);
    else if (*lattice) {
      for (auto& n : la.filter) n = trim(n);
      for (auto& n : la.ideal) n = trim(n);
      status = parsing(la.file, [&] { return run_lattice(la, r); });
    } else if (*ent) status = cmd_entails(file, text, o, r);
    else if (*cm) status = cmd_countermodel(file, text, o, r);
    else if (*canon) status = cmd_canonical(file, o, r);
    else if (*prov) status = cmd_provable(file, text, o, r);
    else if (*props) status = cmd_props(o, r);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceError& e) {
    std::cerr << "error: resource limit: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const SyntaxError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const SortError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const LatticeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  std::cout << r.str();
  return status;
}

}  // namespace ik::cli

int main(int argc, char** argv) { return ik::cli::main(argc, argv); }
