#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "heteroswitch/cusp.hpp"
#include "heteroswitch/fields.hpp"
#include "heteroswitch/itinerary.hpp"
#include "heteroswitch/map_algebra.hpp"
#include "heteroswitch/switching.hpp"

using namespace heteroswitch;

namespace {

HeteroclinicNetwork fixture(const std::string& stem) {
  return load_network_file(std::filesystem::path(HETEROSWITCH_BENCH_FIXTURES) / (stem + ".json"));
}

std::vector<PowerRegion> cyclic_family(std::size_t n, std::mt19937_64& g) {
  std::uniform_real_distribution<double> a(0.5, 2.0), alpha(1.05, 3.0);
  std::vector<PowerRegion> rs;
  for (std::size_t k = 0; k < n; ++k) rs.push_back({(k + 1) % n, k, a(g), alpha(g), Orientation::thin});
  return rs;
}

void BM_CyclicFamily(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 g(1);
  const auto rs = cyclic_family(n, g);
  for (auto _ : state) benchmark::DoNotOptimize(intersects_near_origin(rs, n));
}
BENCHMARK(BM_CyclicFamily)->DenseRange(3, 6);

void BM_RandomRegions(benchmark::State& state) {
  const std::size_t n = 6;
  std::mt19937_64 g(2);
  std::uniform_int_distribution<std::size_t> axis(0, n - 1);
  std::uniform_real_distribution<double> alpha(0.3, 3.0);
  std::vector<PowerRegion> rs;
  for (int k = 0; k < state.range(0); ++k) {
    PowerRegion r{axis(g), 0, 1.0, alpha(g), k % 2 ? Orientation::thin : Orientation::thick};
    do r.j = axis(g);
    while (r.j == r.i);
    rs.push_back(r);
  }
  for (auto _ : state) benchmark::DoNotOptimize(intersects_near_origin(rs, n));
}
BENCHMARK(BM_RandomRegions)->Arg(4)->Arg(8)->Arg(12);

void BM_Followable(benchmark::State& state) {
  const auto net = fixture("r6_simplex");
  const std::vector<std::string> path{"xi1", "xi2", "xi5", "xi6", "xi3", "xi1", "xi4"};
  for (auto _ : state) benchmark::DoNotOptimize(followable(net, path));
}
BENCHMARK(BM_Followable);

void BM_Enumerate(benchmark::State& state) {
  const auto net = fixture("rsp");
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_followable(net, "RR", static_cast<int>(state.range(0)), 100000, 1));
}
BENCHMARK(BM_Enumerate)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_NetworkReport(benchmark::State& state) {
  const auto net = fixture("bowtie");
  for (auto _ : state) benchmark::DoNotOptimize(network_report(net));
}
BENCHMARK(BM_NetworkReport)->Unit(benchmark::kMillisecond);

void BM_Trajectory(benchmark::State& state) {
  const auto net = fixture("rsp");
  const auto f = build_field("rsp_replicator", net);
  SimConfig c;
  std::uint64_t member = 0;
  for (auto _ : state) {
    const auto x0 = seed_near_connection(f, net, "RR", "PR", c, member++);
    ItineraryRecorder rec(f, net, c);
    benchmark::DoNotOptimize(integrate(f, x0, c, [&](double t, const Eigen::VectorXd& x) { return rec.feed(t, x); }, false));
  }
}
BENCHMARK(BM_Trajectory)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
