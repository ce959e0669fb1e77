#include "cli.hpp"
#include "ik/lattice.hpp"

namespace ik::cli {

namespace {

LElem element(const FinLattice& L, const std::string& name) {
  auto i = L.index(name);
  if (!i) throw UsageError("unknown element '" + name + "'");
  return *i;
}

std::vector<LElem> elements(const FinLattice& L, const std::vector<std::string>& names) {
  std::vector<LElem> out;
  for (const auto& n : names) out.push_back(element(L, n));
  return out;
}

std::string path(const std::vector<LElem>& values, const FinLattice& L) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? " >= " : "") + L.name(values[i]);
  return s;
}

std::string address(const std::vector<std::size_t>& a) {
  std::string s = "<";
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
  return s + ">";
}

int run_on(const LatticeArgs& args, const LatticeFile& file, Report& report);

}  // namespace

int run_lattice(const LatticeArgs& args, Report& report) {
  auto file = parse_lattice_file(slurp(args.file));
  try {
    return run_on(args, file, report);
  } catch (const LatticeError& e) {
    // Raised by the filter constructions on non-distributive input.
    report.field("result", "none");
    report.line("reason: " + std::string(e.what()));
    return kNo;
  }
}

namespace {

int run_on(const LatticeArgs& args, const LatticeFile& file, Report& report) {
  const auto& L = file.lattice;
  const auto& S = file.designated;
  report.field("command", "lattice " + args.command);
  report.field("elements", L.size());

  if (args.command == "distributive") {
    auto w = distributivity_witness(L);
    report.field("result", w ? "no" : "yes");
    if (w)
      report.line("witness: " + L.name(w->a) + " meet (" + L.name(w->b) + " join " +
                  L.name(w->c) + ") differs from the join of the meets");
    return w ? kNo : kYes;
  }

  if (args.command == "tree-dist") {
    auto r = is_tree_distributive(L, args.gamma, args.depth);
    report.field("gamma", args.gamma);
    report.field("depth", args.depth);
    report.field("result", r.holds ? "yes" : "no");
    if (r.witness) {
      const auto& w = *r.witness;
      for (std::size_t i = 0; i < w.addresses.size(); ++i)
        report.line("label " + address(w.addresses[i]) + " = " + L.name(w.labels[i]));
      std::string bar;
      for (const auto& a : w.bar) bar += " " + address(a);
      report.line("bar" + bar);
      report.line("bar join = " + L.name(w.bar_join));
    }
    return r.holds ? kYes : kNo;
  }

  if (args.command == "primes") {
    auto fs = prime_filters(L, S);
    report.field("filters", fs.size());
    for (const auto& f : fs) report.line(print_set(L, f.members));
    return fs.empty() ? kNo : kYes;
  }

  if (args.command == "construct" || args.command == "rs") {
    if (args.elements.size() != 2) throw UsageError("expected two elements a b");
    LElem a = element(L, args.elements[0]), b = element(L, args.elements[1]);
    if (L.leq(a, b)) throw UsageError(args.elements[0] + " <= " + args.elements[1]);
    if (args.command == "construct") {
      auto r = construct_filter(L, S, a, b);
      report.field("result", "found");
      report.field("steps", r.trace.steps);
      report.field("stable", L.name(r.trace.stable));
      report.line("branch: " + path(r.trace.values, L));
      report.line("filter: " + print_set(L, r.filter.members));
      return kYes;
    }
    auto r = rs_filter(L, S, a, b);
    report.field("result", r.filter ? "found" : "none");
    report.field("candidates", r.candidates);
    if (r.filter) report.line("filter: " + print_set(L, r.filter->members));
    else report.text(r.certificate + "\n");
    return r.filter ? kYes : kNo;
  }

  if (args.command == "extend") {
    // The filter and ideal generated by the given elements.
    auto f = extend_filter(L, S, L.up(L.meet(elements(L, args.filter))),
                           L.down(L.join(elements(L, args.ideal))));
    report.field("result", "found");
    report.line("filter: " + print_set(L, f.members));
    return kYes;
  }

  if (args.command == "spectrum") {
    auto sp = spectrum(L, S);
    report.field("points", sp.points.size());
    report.field("separation", sp.separation_ok ? "yes" : "no");
    const auto& P = sp.order;
    for (std::size_t i = 0; i < sp.points.size(); ++i)
      report.line(P.names[i] + " = " + print_set(L, sp.points[i].members));
    for (std::size_t i = 0; i < P.size(); ++i)
      for (std::size_t j = 0; j < P.size(); ++j)
        if (i != j && P.leq[i][j]) report.line("leq " + P.names[i] + " " + P.names[j]);
    if (!sp.separation_ok) report.line("witness: " + sp.separation_witness);
    return sp.separation_ok ? kYes : kNo;
  }

  if (args.command == "dual") {
    auto r = duality_roundtrip(L, S);
    report.field("result", r.ok ? "isomorphic" : "failed");
    if (r.ok) {
      auto U = upsets_lattice(spectrum(L, S).order);
      for (LElem a = 0; a < L.size(); ++a)
        report.line(L.name(a) + " -> " + U.name(r.element_map[a]));
    } else {
      report.line("witness: " + r.witness);
    }
    return r.ok ? kYes : kNo;
  }

  throw UsageError("unknown lattice command '" + args.command + "'");
}

}  // namespace

}  // namespace ik::cli
