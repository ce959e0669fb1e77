#include <benchmark/benchmark.h>

#include "ik/calculus.hpp"
#include "ik/instances.hpp"
#include "ik/kripke.hpp"
#include "ik/lattice.hpp"
#include "ik/saturate.hpp"

namespace {

using namespace ik;

void BM_Force(benchmark::State& state) {
  Rng rng(1);
  auto sig = sample_signature();
  ModelGenOptions shape;
  shape.max_worlds = static_cast<std::size_t>(state.range(0));
  auto m = random_model(rng, sig, shape);
  std::vector<Formula> fs;
  for (int i = 0; i < 64; ++i) fs.push_back(random_formula(rng, sig, {}));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(force(m, 0, {}, fs[i++ % fs.size()]));
}
BENCHMARK(BM_Force)->Arg(2)->Arg(4)->Arg(8);

void BM_CheckDistributiveLaw(benchmark::State& state) {
  auto sig = sample_signature();
  Rng rng(2);
  auto phi = random_formula(rng, sig, {});
  std::vector<Formula> psis;
  for (int k = 0; k < state.range(0); ++k) psis.push_back(random_formula(rng, sig, {}));
  auto d = derive_distributive_law(phi, psis, &sig);
  for (auto _ : state) benchmark::DoNotOptimize(check_derivation(*d, {}, &sig));
}
BENCHMARK(BM_CheckDistributiveLaw)->DenseRange(1, 4);

void BM_Soundness(benchmark::State& state) {
  Rng rng(3);
  auto sig = sample_signature();
  sig.conn_bound = 16;
  ModelGenOptions shape;
  shape.max_worlds = 3;
  shape.max_elems = 2;
  auto rules = all_rules();
  std::size_t i = 0;
  for (auto _ : state) {
    auto inst = random_instance(rng, sig, rules[i++ % rules.size()]);
    auto m = random_model(rng, sig, shape);
    benchmark::DoNotOptimize(check_soundness(inst.premises, inst.conclusion, m));
  }
}
BENCHMARK(BM_Soundness);

FinLattice boolean(std::size_t atoms) {
  Poset p;
  for (std::size_t i = 0; i < atoms; ++i) p.names.push_back("a" + std::to_string(i));
  p.leq.assign(atoms, std::vector<bool>(atoms, false));
  for (std::size_t i = 0; i < atoms; ++i) p.leq[i][i] = true;
  return upsets_lattice(p);
}

void BM_PrimeFilters(benchmark::State& state) {
  auto L = boolean(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(prime_filters(L));
}
BENCHMARK(BM_PrimeFilters)->DenseRange(2, 5);

void BM_ConstructFilter(benchmark::State& state) {
  auto L = boolean(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(construct_filter(L, {}, L.top(), L.bottom()));
}
BENCHMARK(BM_ConstructFilter)->DenseRange(2, 5);

void BM_TreeDistributive(benchmark::State& state) {
  auto cat = lattice_catalog(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    for (const auto& L : cat) benchmark::DoNotOptimize(is_tree_distributive(L, 2, 2));
}
BENCHMARK(BM_TreeDistributive)->DenseRange(5, 7);

void BM_Duality(benchmark::State& state) {
  auto cat = distributive_catalog(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    for (const auto& L : cat) benchmark::DoNotOptimize(duality_roundtrip(L));
}
BENCHMARK(BM_Duality)->DenseRange(6, 10, 2);

void BM_Countermodel(benchmark::State& state) {
  Rng rng(4);
  std::vector<std::pair<TheoryFile, Sequent>> cases;
  for (int i = 0; i < 32; ++i) {
    auto t = random_coherent_theory(rng);
    auto s = random_coherent_sequent(rng, t.sig);
    cases.emplace_back(std::move(t), std::move(s));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [t, s] = cases[i++ % cases.size()];
    benchmark::DoNotOptimize(countermodel(t, s));
  }
}
BENCHMARK(BM_Countermodel);

void BM_ProvableExcludedMiddle(benchmark::State& state) {
  auto t = parse_theory_file("sort S\nrel P : S\nconst c : S\n");
  auto s = parse_sequent("true |- [] or(P(c), imp(P(c), false))", t.sig);
  for (auto _ : state) benchmark::DoNotOptimize(provable_ik(t, s));
}
BENCHMARK(BM_ProvableExcludedMiddle);

}  // namespace

BENCHMARK_MAIN();
