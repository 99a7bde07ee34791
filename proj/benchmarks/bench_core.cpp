#include <benchmark/benchmark.h>

#include <random>

#include "rac/config.hpp"
#include "rac/simulate.hpp"

namespace {

using namespace rac;

NetworkSpec bench_network(int blocks) {
  ControllerSpec c;
  c.kind = ControllerKind::ResNet;
  c.neurons = 2;
  c.layers = 2;
  c.blocks = blocks;
  return build_network_spec(c, 2);
}

void ResnetForward(benchmark::State& state) {
  const NetworkSpec spec = bench_network(static_cast<int>(state.range(0)));
  const ParamVector pv = random_params(spec, 0.1, 1.0, 1);
  Vector x = Vector::LinSpaced(8, -1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(resnet_forward(spec, pv, x));
  }
}
BENCHMARK(ResnetForward)->Arg(1)->Arg(4)->Arg(8);

void ResnetJacobian(benchmark::State& state) {
  const NetworkSpec spec = bench_network(static_cast<int>(state.range(0)));
  const ParamVector pv = random_params(spec, 0.1, 1.0, 1);
  Vector x = Vector::LinSpaced(8, -1.0, 1.0);
  LayerCache cache;
  resnet_forward(spec, pv, x, &cache);
  for (auto _ : state) {
    benchmark::DoNotOptimize(resnet_jacobian(spec, pv, x, cache));
  }
}
BENCHMARK(ResnetJacobian)->Arg(1)->Arg(4)->Arg(8);

void SmoothProjection(benchmark::State& state) {
  const SearchSpace space = SearchSpace::ball(1.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector theta(226), tau(226);
  for (int i = 0; i < 226; ++i) {
    theta[i] = dist(rng);
    tau[i] = dist(rng);
  }
  theta *= 0.97 / theta.norm();
  for (auto _ : state) {
    benchmark::DoNotOptimize(smooth_projection(space, theta, tau));
  }
}
BENCHMARK(SmoothProjection);

void ClosedLoopStep(benchmark::State& state) {
  ScenarioSpec sc;
  ControllerSpec c;
  c.tag = "resnet";
  c.kind = ControllerKind::ResNet;
  c.neurons = 2;
  c.layers = 2;
  c.blocks = static_cast<int>(state.range(0));
  ClosedLoop loop(build_plant(sc), build_reference(sc),
                  Controller(build_controller_setup(c, sc, 0), 2, 2));
  Vector offset(2);
  offset << 1.0, 0.5;
  Vector s = loop.initial_state(offset);
  const DerivativeFn f = [&loop](double t, const Vector& x) { return loop.derivative(t, x); };
  double t = 0.0;
  for (auto _ : state) {
    s = rk4_step(f, s, t, 0.02);
    t += 0.02;
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(ClosedLoopStep)->Arg(1)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
