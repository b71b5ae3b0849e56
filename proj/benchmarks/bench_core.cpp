#include <benchmark/benchmark.h>

#include <random>

#include "semnav/belief.hpp"
#include "semnav/catalog.hpp"
#include "semnav/nav.hpp"
#include "semnav/observation.hpp"
#include "semnav/predictor.hpp"
#include "semnav/training.hpp"
#include "semnav/world.hpp"

using namespace semnav;

namespace {

Volume random_onehot(int channels, int size, std::mt19937_64& rng) {
  Volume v(channels, size, size, 0.0);
  std::uniform_int_distribution<int> pick(0, channels - 1);
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) v(pick(rng), r, c) = 1.0;
  return v;
}

void bm_predict(benchmark::State& state) {
  const ArchConfig arch;
  const TwoStagePredictor p(arch, 1);
  std::mt19937_64 rng(1);
  const Volume occ = random_onehot(3, arch.crop_size, rng), sem = random_onehot(9, arch.crop_size, rng);
  for (auto _ : state) benchmark::DoNotOptimize(p.predict(occ, sem));
}
BENCHMARK(bm_predict)->Unit(benchmark::kMicrosecond);

void bm_loss_and_gradient(benchmark::State& state) {
  const ArchConfig arch;
  const TwoStagePredictor p(arch, 1);
  std::mt19937_64 rng(2);
  Example ex{random_onehot(3, arch.crop_size, rng), random_onehot(9, arch.crop_size, rng),
             Grid<int>(arch.crop_size, arch.crop_size, 2), Grid<int>(arch.crop_size, arch.crop_size, 1)};
  std::vector<double> go(p.parameters().theta_o.size()), gs(p.parameters().theta_s.size());
  for (auto _ : state) benchmark::DoNotOptimize(p.loss(ex, 1.0, go, gs));
}
BENCHMARK(bm_loss_and_gradient)->Unit(benchmark::kMicrosecond);

void bm_sense(benchmark::State& state) {
  const GridWorld w = generate_world(3, WorldConfig{96, 96});
  const auto free = w.free_cells();
  std::mt19937_64 rng(3);
  const ObservationConfig obs;
  std::size_t i = 0;
  for (auto _ : state) {
    const Pose pose{free[i++ % free.size()], static_cast<Heading>(i % 4)};
    benchmark::DoNotOptimize(sense(w, pose, obs, rng));
  }
}
BENCHMARK(bm_sense)->Unit(benchmark::kMicrosecond);

void bm_plan_path(benchmark::State& state) {
  const GridWorld w = generate_world(4, WorldConfig{96, 96});
  const CostMap costs = make_cost_map(w);
  const auto free = w.free_cells();
  std::size_t i = 0;
  for (auto _ : state) {
    const Cell a = free[(i * 7919) % free.size()], b = free[(i * 104729 + 17) % free.size()];
    ++i;
    if (a == b) continue;
    benchmark::DoNotOptimize(plan_path(costs, a, b));
  }
}
BENCHMARK(bm_plan_path)->Unit(benchmark::kMicrosecond);

void bm_register_semantics(benchmark::State& state) {
  const int k = ClassCatalog::standard().semantic_count();
  GlobalBeliefMap map = init_global(96, 96, ClassCatalog::standard());
  std::mt19937_64 rng(5);
  Volume crop(k, 33, 33, 0.0);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int r = 0; r < 33; ++r)
    for (int c = 0; c < 33; ++c) {
      double sum = 0.0;
      for (int q = 0; q < k; ++q) sum += crop(q, r, c) = u(rng);
      for (int q = 0; q < k; ++q) crop(q, r, c) /= sum;
    }
  std::size_t i = 0;
  for (auto _ : state) {
    map.register_semantics(crop, {{20 + int(i % 50), 20 + int((i / 50) % 50)}, static_cast<Heading>(i % 4)});
    ++i;
  }
}
BENCHMARK(bm_register_semantics)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
