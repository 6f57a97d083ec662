#include <benchmark/benchmark.h>

#include "linf/fiber.hpp"
#include "linf/mc.hpp"
#include "linf/morphisms.hpp"

using namespace linf;

namespace {

const std::vector<std::string>& names() {
  static const std::vector<std::string> n{"lie(sl2)", "linfty(m3_example)", "dga(end11)"};
  return n;
}

void Verify(benchmark::State& state) {
  const Structure s = preset(names()[state.range(0)]).structure;
  state.SetLabel(names()[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(verify(s).ok);
}
BENCHMARK(Verify)->DenseRange(0, 2);

// canonical element of the universal algebra at the given order
void McDefectAndTwist(benchmark::State& state) {
  const Structure s = preset("linfty(m3_example)").structure;
  const auto U = universal_algebra(s, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc_defect(s, U.canonical, U.algebra));
    benchmark::DoNotOptimize(twist(s, U.canonical, U.algebra));
  }
}
BENCHMARK(McDefectAndTwist)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void Homology(benchmark::State& state) {
  const Structure s = preset("lie(sl2)").structure;
  const auto spec = make_complex(Variant::CE, s, std::nullopt, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(homology(spec));
}
BENCHMARK(Homology)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void VerifyMorphism(benchmark::State& state) {
  const Structure s = preset("lie(b)").structure;
  const auto f = build_f(s, Variant::CE_trunc);
  const int order = static_cast<int>(state.range(0));
  const auto pair = universal_pair(s, order);
  for (auto _ : state) benchmark::DoNotOptimize(verify_morphism(f, {pair}, order).ok);
}
BENCHMARK(VerifyMorphism)->DenseRange(3, 4)->Unit(benchmark::kMillisecond);

void CertifyFiber(benchmark::State& state) {
  const Structure s = preset("lie(b)").structure;
  for (auto _ : state) benchmark::DoNotOptimize(certify_fiber_sequence(s, static_cast<int>(state.range(0))).ok());
}
BENCHMARK(CertifyFiber)->DenseRange(3, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
