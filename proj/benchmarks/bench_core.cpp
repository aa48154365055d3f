#include <benchmark/benchmark.h>

#include "pattn/constraints.hpp"
#include "pattn/measures.hpp"
#include "pattn/net.hpp"
#include "pattn/rng.hpp"
#include "pattn/training.hpp"

namespace {

using namespace pattn;

void bm_softmax(benchmark::State& state) {
  Rng rng(1);
  Vec w(static_cast<std::size_t>(state.range(0)));
  for (double& v : w) v = rng.normal();
  for (auto _ : state) {
    Vec s = softmax(w);
    benchmark::DoNotOptimize(s.data());
  }
}
BENCHMARK(bm_softmax)->Arg(64)->Arg(512);

DenseNet make_net(std::size_t in, std::vector<std::size_t> widths, Rng& rng) {
  return DenseNet::random(in, widths, 1.0, rng);
}

void bm_forward(benchmark::State& state) {
  Rng rng(2);
  DenseNet net = make_net(64, {64, 64, 64}, rng);
  Vec x(64);
  for (double& v : x) v = rng.normal();
  for (auto _ : state) {
    Vec y = forward(net, x);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(bm_forward);

void bm_backward(benchmark::State& state) {
  Rng rng(3);
  DenseNet net = make_net(64, {64, 64, 64}, rng);
  Vec x(64), up(64);
  for (double& v : x) v = rng.normal();
  for (double& v : up) v = rng.normal();
  ForwardTape tape;
  forward(net, x, &tape);
  GradientBundle grads = GradientBundle::zeros_like(net);
  for (auto _ : state) {
    grads.set_zero();
    Vec dx = backward(net, tape, up, grads);
    benchmark::DoNotOptimize(dx.data());
  }
}
BENCHMARK(bm_backward);

void bm_w1_to_pointmass(benchmark::State& state) {
  Rng rng(4);
  const std::size_t atoms = static_cast<std::size_t>(state.range(0));
  DiscreteMeasure mu;
  Vec w(atoms);
  for (std::size_t i = 0; i < atoms; ++i) {
    mu.atoms.push_back({rng.normal(), rng.normal(), rng.normal()});
    w[i] = rng.uniform() + 0.1;
  }
  double s = 0.0;
  for (double v : w) s += v;
  for (double v : w) mu.weights.push_back(v / s);
  const Vec y{0.1, -0.2, 0.3};
  for (auto _ : state) {
    double d = w1_to_pointmass(mu, y);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(bm_w1_to_pointmass)->Arg(64)->Arg(512);

void bm_frechet_mean(benchmark::State& state) {
  Rng rng(5);
  const GeodesicOps ops = sphere_geodesic_ops();
  DiscreteMeasure mu;
  const Vec base{0.0, 0.0, 1.0};
  for (std::size_t i = 0; i < 8; ++i) {
    Vec t{0.3 * rng.normal(), 0.3 * rng.normal(), 0.0};
    mu.atoms.push_back(sphere_exp(base, t));
    mu.weights.push_back(0.125);
  }
  for (auto _ : state) {
    Vec m = frechet_mean(mu, ops);
    benchmark::DoNotOptimize(m.data());
  }
}
BENCHMARK(bm_frechet_mean);

void bm_curve_distance(benchmark::State& state) {
  auto set = ConstraintSet::curve(CurveSpec{CurveSpec::Family::rose, {}});
  Rng rng(6);
  std::vector<Vec> queries;
  for (int i = 0; i < 64; ++i) queries.push_back({3.0 * rng.normal(), 3.0 * rng.normal()});
  std::size_t i = 0;
  for (auto _ : state) {
    double d = set->distance(queries[i++ & 63]);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(bm_curve_distance);

void bm_attention_train_epoch(benchmark::State& state) {
  Rng rng(7);
  auto set = ConstraintSet::box2();
  std::vector<Vec> X, Y;
  for (int i = 0; i < 256; ++i) {
    X.push_back({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
    Y.push_back(box_project(Vec{1.5 * X.back()[0], 1.5 * X.back()[1]}));
  }
  TrainConfig cfg;
  cfg.pool_size = 256;
  cfg.slots = 32;
  cfg.epochs = 1;
  cfg.hidden_mode = HiddenWeightMode::frozen_random;
  for (auto _ : state) {
    ProbabilisticTransformer m = train_probabilistic_transformer(X, Y, set, cfg);
    benchmark::DoNotOptimize(m.particles.data.data());
  }
}
BENCHMARK(bm_attention_train_epoch);

}  // namespace

BENCHMARK_MAIN();
