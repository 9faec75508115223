#include <benchmark/benchmark.h>

#include "gentropy/bounds.hpp"
#include "gentropy/divergence.hpp"
#include "gentropy/entropy.hpp"
#include "gentropy/legendre.hpp"
#include "gentropy/rng.hpp"

namespace {

using namespace gentropy;

DiscreteDist make_dist(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<std::string> labels(n);
  std::vector<double> w(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = numeric_label(static_cast<double>(i));
    w[i] = 0.05 + rng.next_double();
    total += w[i];
  }
  for (double& x : w) x /= total;
  return DiscreteDist(std::move(labels), std::move(w));
}

LossSpec make_table(std::size_t nz, std::size_t na, std::uint64_t seed) {
  CounterRng rng(seed);
  Eigen::MatrixXd v(nz, na);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.next_double();
  std::vector<std::string> zl(nz), al(na);
  for (std::size_t z = 0; z < nz; ++z) {
    zl[z] = numeric_label(static_cast<double>(z));
  }
  for (std::size_t a = 0; a < na; ++a) al[a] = "a" + std::to_string(a);
  return LossSpec::table(LossTable(zl, al, v));
}

void bm_table_entropy(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DiscreteDist p = make_dist(n, 1);
  const LossSpec spec = make_table(n, 8, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(generalized_entropy(p, spec).value);
  }
}
BENCHMARK(bm_table_entropy)->Arg(8)->Arg(32);

void bm_kl(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DiscreteDist p = make_dist(n, 3);
  const DiscreteDist q = make_dist(n, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kl(p, q));
  }
}
BENCHMARK(bm_kl)->Arg(8)->Arg(64);

void bm_transport_lp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DiscreteDist p = make_dist(n, 5);
  const DiscreteDist q = make_dist(n, 6);
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = static_cast<double>(i);
  const Eigen::MatrixXd metric = line_metric(values);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wasserstein1_discrete(p, q, metric).cost);
  }
}
BENCHMARK(bm_transport_lp)->Arg(16)->Arg(64);

void bm_legendre_inverse(benchmark::State& state) {
  const CgfEnvelope env = CgfEnvelope::chi_square(1.0);
  double x = 0.0;
  for (auto _ : state) {
    x += 0.01;
    if (x > 5.0) x = 0.01;
    benchmark::DoNotOptimize(generalized_inverse(env, x));
  }
}
BENCHMARK(bm_legendre_inverse);

void bm_bound_suite(benchmark::State& state) {
  const DiscreteDist p = make_dist(8, 7);
  const DiscreteDist q = make_dist(8, 8);
  const LossSpec spec = make_table(8, 6, 9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tv_bound(p, q, spec).upper.value);
    benchmark::DoNotOptimize(kl_subgaussian_bound(p, q, spec).upper.value);
    benchmark::DoNotOptimize(chi2_bound(p, q, spec).upper.value);
    benchmark::DoNotOptimize(semidistance_bound(p, q, spec).value);
  }
}
BENCHMARK(bm_bound_suite);

}  // namespace

BENCHMARK_MAIN();
