#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "coulomb/error.hpp"
#include "coulomb/exactlaws.hpp"
#include "coulomb/sampler.hpp"
#include "coulomb/stats.hpp"

using namespace cgas;

TEST_CASE("sampler config validation") {
  SamplerConfig sc;
  CHECK_NOTHROW(sc.validate());
  sc.step = 0.0;
  CHECK_THROWS_AS(sc.validate(), InvalidParameter);
  sc = SamplerConfig{};
  sc.target_acceptance = 1.0;
  CHECK_THROWS_AS(sc.validate(), InvalidParameter);
  sc = SamplerConfig{};
  sc.thin = 0;
  CHECK_THROWS_AS(sc.validate(), InvalidParameter);
}

TEST_CASE("acceptance probability") {
  // beta = 0: every proposal is accepted
  for (double delta : {-3.0, 0.0, 2.5, 1e6}) CHECK(acceptance_probability(0.0, delta) == 1.0);
  CHECK(acceptance_probability(2.0, -1.0) == 1.0);
  CHECK(acceptance_probability(2.0, 1.0) == doctest::Approx(std::exp(-2.0)));
  CHECK(acceptance_probability(1.0, 0.0, std::log(0.5)) == doctest::Approx(0.5));
}

TEST_CASE("two-state detailed balance") {
  const auto p = GasParameters::beta_ginibre(2, 2.0);
  const PointCloud a(2, std::vector<double>{0.2, 0.1, -0.4, 0.3});
  const PointCloud b(2, std::vector<double>{0.2, 0.1, 0.9, -0.2});
  const double ea = energy_total(a, p);
  const double eb = energy_total(b, p);
  // symmetric proposal: forward / backward transition ratio is the acceptance ratio
  const double ratio = acceptance_probability(p.beta, eb - ea) / acceptance_probability(p.beta, ea - eb);
  const double boltzmann = std::exp(-p.beta * (eb - ea));
  CHECK(std::abs(ratio / boltzmann - 1.0) <= 1e-12);
}

TEST_CASE("empirical detailed balance on a discretized gas") {
  // 2 particles on 3 sites of the plane, proposal = move one particle to another site
  const std::vector<std::array<double, 2>> sites{{{0.0, 0.0}}, {{0.8, 0.0}}, {{0.0, 1.3}}};
  const auto p = GasParameters::beta_ginibre(2, 1.0);
  auto state_of = [&](const PointCloud& pc) {
    int s[2];
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < 3; ++k) {
        if (pc.point(i)[0] == sites[k][0] && pc.point(i)[1] == sites[k][1]) s[i] = k;
      }
    }
    return 3 * s[0] + s[1];
  };
  ChainState st{Configuration::create(PointCloud(2, std::vector<double>{0.0, 0.0, 0.8, 0.0}), p), 0, 0, 0.1, 0, 0.0};
  Rng rng(12);
  std::map<std::pair<int, int>, double> flow;
  std::map<int, double> occupancy;
  const int steps = 400000;
  for (int t = 0; t < steps; ++t) {
    const int from = state_of(st.cfg.points);
    const std::size_t i = uniform01(rng) < 0.5 ? 0 : 1;
    const int target = static_cast<int>(3.0 * uniform01(rng));
    const std::vector<double> x_new{sites[target][0], sites[target][1]};
    accept_move(st, i, x_new, p, rng);
    const int to = state_of(st.cfg.points);
    occupancy[to] += 1.0;
    if (from != to) flow[{from, to}] += 1.0;
  }
  int pairs = 0;
  for (const auto& [key, count] : flow) {
    const auto rev = flow.find({key.second, key.first});
    REQUIRE(rev != flow.end());
    // counts are approximately Poisson: the difference has sd sqrt(sum)
    CHECK(std::abs(count - rev->second) <= 3.0 * std::sqrt(count + rev->second) + 1.0);
    ++pairs;
  }
  CHECK(pairs > 0);
  // occupancy ratio against the Boltzmann weights of two states
  auto energy_of = [&](int s) {
    const int a = s / 3;
    const int b = s % 3;
    return energy_total(PointCloud(2, std::vector<double>{sites[a][0], sites[a][1], sites[b][0], sites[b][1]}), p);
  };
  const int s1 = 3 * 0 + 1;
  const int s2 = 3 * 1 + 2;
  const double expected = std::exp(-p.beta * (energy_of(s2) - energy_of(s1)));
  const double observed = occupancy[s2] / occupancy[s1];
  CHECK(observed == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("collisions are rejected and leave the state unchanged") {
  const auto p = GasParameters::beta_ginibre(3, 2.0);
  ChainState st{Configuration::create(PointCloud(2, std::vector<double>{0.0, 0.0, 0.5, 0.0, 0.0, 0.5}), p), 0, 0,
                0.1, 0, 0.0};
  const auto before = st.cfg;
  Rng rng(1);
  const std::vector<double> onto{0.5, 0.0};
  CHECK_FALSE(accept_move(st, 0, onto, p, rng));
  CHECK(st.cfg.points == before.points);
  CHECK(st.cfg.cached_energy == before.cached_energy);
  CHECK(st.step_count == 1);
  CHECK(st.accept_count == 0);
}

TEST_CASE("tamed drift") {
  const auto p1 = GasParameters::beta_ginibre(1, 2.0);
  const auto d0 = tamed_drift(PointCloud(2, std::vector<double>{0.0, 0.0}), p1, 0.1);
  CHECK(d0[0] == 0.0);
  CHECK(d0[1] == 0.0);

  const auto p2 = GasParameters::beta_ginibre(2, 2.0);
  const PointCloud close(2, std::vector<double>{0.0, 0.0, 1e-6, 0.0});
  for (double step : {1e-3, 0.1, 1.0}) {
    const auto d = tamed_drift(close, p2, step);
    double norm = 0.0;
    for (double v : d) norm += v * v;
    CHECK(step * std::sqrt(norm) <= static_cast<double>(p2.n));
  }
}

TEST_CASE("run_chain determinism, first sample and parallel equivalence") {
  const auto p = GasParameters::beta_ginibre(6, 2.0);
  SamplerConfig sc;
  sc.burn_in = 500;
  sc.thin = 5;
  sc.seed = 42;
  const auto a = run_chain(p, sc, 50);
  const auto b = run_chain(p, sc, 50);
  REQUIRE(a.samples.size() == 50);
  for (std::size_t k = 0; k < 50; ++k) {
    CHECK(a.samples[k].points == b.samples[k].points);
    CHECK(a.samples[k].cached_energy == b.samples[k].cached_energy);
  }

  SamplerConfig zero = sc;
  zero.burn_in = 0;
  zero.thin = 1;
  Rng init(zero.seed);
  const auto start = initial_points(p, init);
  CHECK(run_chain(p, zero, 3).samples.front().points == start);

  const auto serial = run_parallel_chains(p, sc, 4, 20, Execution::Serial);
  const auto parallel = run_parallel_chains(p, sc, 4, 20, Execution::Parallel);
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t k = 0; k < 20; ++k) CHECK(serial[c].samples[k].points == parallel[c].samples[k].points);
  }
  const auto one = run_parallel_chains(p, sc, 1, 20);
  const auto direct = run_chain(p, sc, 20);
  for (std::size_t k = 0; k < 20; ++k) CHECK(one[0].samples[k].points == direct.samples[k].points);
  CHECK_FALSE(serial[0].samples.back().points == serial[1].samples.back().points);
  CHECK_THROWS_AS(run_parallel_chains(p, sc, 0, 20), InvalidParameter);
}

TEST_CASE("adaptation reaches the acceptance band") {
  const auto p = GasParameters::beta_ginibre(8, 2.0);
  SamplerConfig sc;
  sc.burn_in = 20000;
  sc.seed = 3;
  const auto out = run_chain(p, sc, 2000);
  CHECK(out.acceptance_rate >= 0.2);
  CHECK(out.acceptance_rate <= 0.6);
  CHECK(out.acceptance_rate <= 1.0);
}

TEST_CASE("energy cache stays consistent over long runs") {
  const auto p = GasParameters::beta_ginibre(8, 2.0);
  SamplerConfig sc;
  sc.burn_in = 30000;
  sc.thin = 10;
  sc.seed = 9;
  const auto out = run_chain(p, sc, 3000);
  CHECK(out.max_cache_drift <= kEnergyCacheTolerance);
  for (const auto& c : out.samples) {
    const double fresh = energy_total(c.points, p);
    CHECK(std::abs(c.cached_energy - fresh) <= 1e-9 * std::max(1.0, std::abs(fresh)));
  }
}

TEST_CASE("Metropolis stationarity against the exact laws") {
  const std::size_t n = 8;
  const double beta = 2.0;
  const auto p = GasParameters::beta_ginibre(n, beta);
  SamplerConfig sc;
  sc.burn_in = 20000;
  sc.thin = 40;
  sc.seed = 5;
  const auto out = run_chain(p, sc, 4000);
  const auto [sum_law, radial_law] = beta_ginibre_laws(n, beta);
  std::vector<double> sq;
  std::vector<double> sx;
  for (const auto& c : out.samples) {
    sq.push_back(sum_of_squares(c.points));
    sx.push_back(coordinate_sum(c.points)[0]);
  }
  CHECK(ks_test(sq, radial_law).p_value.value() > 0.01);
  CHECK(ks_test(sx, sum_law).p_value.value() > 0.01);
}

TEST_CASE("MALA stationarity against the exact radial law") {
  const std::size_t n = 8;
  const auto p = GasParameters::beta_ginibre(n, 2.0);
  SamplerConfig sc;
  sc.scheme = Scheme::MALA;
  sc.step = 0.01;
  sc.burn_in = 5000;
  sc.thin = 10;
  sc.seed = 17;
  const auto out = run_chain(p, sc, 3000);
  CHECK(out.acceptance_rate > 0.1);
  std::vector<double> sq;
  for (const auto& c : out.samples) sq.push_back(sum_of_squares(c.points));
  CHECK(ks_test(sq, beta_ginibre_laws(n, 2.0).second).p_value.value() > 0.01);
}

TEST_CASE("MALA proposal mean is the current point when the drift vanishes") {
  const auto p = GasParameters::beta_ginibre(1, 2.0);
  const PointCloud origin(2, std::vector<double>{0.0, 0.0});
  SamplerConfig sc;
  sc.scheme = Scheme::MALA;
  Rng rng(8);
  double mx = 0.0;
  double my = 0.0;
  const int trials = 20000;
  const double h = 1e-4;
  for (int t = 0; t < trials; ++t) {
    ChainState st{Configuration::create(origin, p), 0, 0, h, 0, 0.0};
    mala_step(st, p, sc, rng);
    mx += st.cfg.points.point(0)[0];
    my += st.cfg.points.point(0)[1];
  }
  // accepted moves are symmetric about the origin; tolerance ~ 5 sd of the mean
  const double sd = std::sqrt(2.0 * h / p.beta / trials);
  CHECK(std::abs(mx / trials) <= 5.0 * sd);
  CHECK(std::abs(my / trials) <= 5.0 * sd);
}

TEST_CASE("relabeling the start does not change the law of symmetric statistics") {
  const auto p = GasParameters::beta_ginibre(6, 2.0);
  Rng rng(31);
  const auto start = initial_points(p, rng);
  PointCloud relabeled(2, 6);
  for (std::size_t i = 0; i < 6; ++i) {
    relabeled.point(i)[0] = start.point(5 - i)[0];
    relabeled.point(i)[1] = start.point(5 - i)[1];
  }
  SamplerConfig sc;
  sc.burn_in = 5000;
  sc.thin = 40;
  sc.seed = 77;
  const auto a = run_chain_from(start, p, sc, 2000);
  // symmetric statistic at time zero is identical
  CHECK(sum_of_squares(start) == doctest::Approx(sum_of_squares(relabeled)).epsilon(1e-15));
  sc.seed = 78;
  const auto b = run_chain_from(relabeled, p, sc, 2000);
  CHECK(ks_two_sample(a.sum_sq_trace, b.sum_sq_trace).p_value.value() > 0.01);
}

TEST_CASE("real-line gas keeps particles on the axis") {
  const auto p = GasParameters::hermite(6, 2.0);
  SamplerConfig sc;
  sc.burn_in = 2000;
  sc.seed = 4;
  const auto out = run_chain(p, sc, 100);
  for (const auto& c : out.samples) {
    for (std::size_t i = 0; i < c.points.size(); ++i) CHECK(c.points.point(i)[1] == 0.0);
  }
}
