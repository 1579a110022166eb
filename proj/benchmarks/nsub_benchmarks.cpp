#include "nsub/adapt.hpp"
#include "nsub/expr.hpp"
#include "nsub/oscillatory.hpp"
#include "nsub/resolve.hpp"
#include "nsub/roots.hpp"
#include "nsub/sublevel.hpp"

#include <benchmark/benchmark.h>

namespace {

nsub::PuiseuxPoly P(const char* s) { return nsub::parse_expression(s).poly; }

const char* const kPhases[] = {"x^2+y^2", "x^2*y^2+x^5", "(y-x^2-x^3)^2-x^9", "y^2-2*x^2*y+x^4-x^7"};

void BM_NewtonPolygon(benchmark::State& st) {
  nsub::PuiseuxPoly p = P("(y-x^2-x^3)^4 + x^3*y^5 - x^17 + 3*x^5*y^3");
  for (auto _ : st) benchmark::DoNotOptimize(nsub::newton_polygon_of(p));
}
BENCHMARK(BM_NewtonPolygon);

void BM_IsolateRoots(benchmark::State& st) {
  std::vector<nsub::Rational> rs;
  for (long k = 0; k < st.range(0); ++k) rs.push_back(nsub::make_rational(2 * k - 7, 3));
  nsub::UPoly q = nsub::UPoly::from_roots(rs) * nsub::UPoly({nsub::Rational(-2), nsub::Rational(0), nsub::Rational(1)});
  for (auto _ : st) benchmark::DoNotOptimize(nsub::isolate_real_roots(q, nsub::RootDomain::All));
}
BENCHMARK(BM_IsolateRoots)->Arg(4)->Arg(8)->Arg(16);

void BM_SuperadaptedReduction(benchmark::State& st) {
  nsub::PuiseuxPoly p = P("(y-x^2-x^3)^2-x^9");
  for (auto _ : st) benchmark::DoNotOptimize(nsub::to_superadapted(p));
}
BENCHMARK(BM_SuperadaptedReduction);

void BM_ResolveSector(benchmark::State& st) {
  nsub::PuiseuxPoly p = P(kPhases[st.range(0)]);
  nsub::ResolveParams params;
  params.verify_samples = 64;
  for (auto _ : st) benchmark::DoNotOptimize(nsub::resolve(p, params));
  st.SetLabel(kPhases[st.range(0)]);
}
BENCHMARK(BM_ResolveSector)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_SublevelMC(benchmark::State& st) {
  nsub::PuiseuxPoly p = P("x^2*y^2+x^5");
  nsub::MeasureBudget b;
  b.n = st.range(0);
  b.threads = 1;
  for (auto _ : st) benchmark::DoNotOptimize(nsub::sublevel_measure(p, nsub::Region::disk(1), 1e-4, b, 1));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_SublevelMC)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_SublevelGrid(benchmark::State& st) {
  nsub::PuiseuxPoly p = P("(y-x^2)^2");
  nsub::MeasureBudget b;
  b.method = nsub::MeasureMethod::GRID;
  for (auto _ : st) benchmark::DoNotOptimize(nsub::sublevel_measure(p, nsub::Region::disk(1), 1e-6, b, 1));
}
BENCHMARK(BM_SublevelGrid)->Unit(benchmark::kMillisecond);

void BM_Oscillatory(benchmark::State& st) {
  nsub::PuiseuxPoly p = P("x^2+y^2");
  nsub::QuadratureOptions q;
  q.threads = 1;
  for (auto _ : st)
    benchmark::DoNotOptimize(nsub::oscillatory_integral(p, nsub::Cutoff{1.0, 3}, static_cast<double>(st.range(0)), q));
}
BENCHMARK(BM_Oscillatory)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
