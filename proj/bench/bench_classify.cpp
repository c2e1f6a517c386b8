#include <benchmark/benchmark.h>

#include <random>

#include "dlkb/io.hpp"
#include "dlkb/reasoner.hpp"
#include "dlkb/text_format.hpp"

using namespace dlkb;

namespace {

// Random primitive hierarchy with a sprinkling of existential definitions,
// roughly the shape of hand-written domain ontologies.
KnowledgeBase synthetic(int classes, unsigned seed) {
  std::mt19937 rng(seed);
  KnowledgeBase kb;
  const RoleExpr roles[] = {{"r", false}, {"s", false}};
  auto name = [](int i) { return "C" + std::to_string(i); };
  kb.declare_class(name(0));
  for (int i = 1; i < classes; ++i) {
    const int parent = static_cast<int>(rng() % i);
    kb.add(SubClassOf{Concept::atomic(name(i)), Concept::atomic(name(parent))});
    if (i > 4 && rng() % 5 == 0) {
      const int a = static_cast<int>(rng() % i), b = static_cast<int>(rng() % i);
      kb.add(EquivalentClasses{Concept::atomic(name(i) + "D"),
                               Concept::conjunction({Concept::atomic(name(a)),
                                                     Concept::exists(roles[rng() % 2], Concept::atomic(name(b)))})});
    }
  }
  return kb;
}

KnowledgeBase traffic() { return parse_text(read_file(std::string(DLKB_SOURCE_DIR) + "/data/traffic.kb")); }

void classify_parallel(benchmark::State& state, const KnowledgeBase& kb) {
  for (auto _ : state) {
    Reasoner r(kb);
    benchmark::DoNotOptimize(r.classify().nodes().size());
    state.counters["tests"] = static_cast<double>(r.tests_run());
  }
}

void classify_serial(benchmark::State& state, const KnowledgeBase& kb) {
  for (auto _ : state) {
    Reasoner r(kb);
    benchmark::DoNotOptimize(r.classify_reference().nodes().size());
    state.counters["tests"] = static_cast<double>(r.tests_run());
  }
}

void BM_TrafficParallel(benchmark::State& state) { classify_parallel(state, traffic()); }
void BM_TrafficReference(benchmark::State& state) { classify_serial(state, traffic()); }
void BM_SyntheticParallel(benchmark::State& state) {
  classify_parallel(state, synthetic(static_cast<int>(state.range(0)), 3));
}
void BM_SyntheticReference(benchmark::State& state) {
  classify_serial(state, synthetic(static_cast<int>(state.range(0)), 3));
}

}  // namespace

BENCHMARK(BM_TrafficParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrafficReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SyntheticParallel)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SyntheticReference)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
