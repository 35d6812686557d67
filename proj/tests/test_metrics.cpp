#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wsnloc/metrics.hpp"

using namespace wsnloc;

namespace {

// Naive loop-over-all-pairs oracles, kept independent of the implementation.
double ger_oracle(const std::vector<Vec2>& est, const std::vector<Vec2>& truth,
                  const std::vector<int>& ids) {
  double sum = 0.0;
  for (std::size_t a = 0; a < ids.size(); ++a)
    for (std::size_t b = a + 1; b < ids.size(); ++b) {
      const double dt = distance(truth[ids[a]], truth[ids[b]]);
      const double de = distance(est[ids[a]], est[ids[b]]);
      sum += ((de - dt) / dt) * ((de - dt) / dt);
    }
  const double pairs = ids.size() * (ids.size() - 1) / 2.0;
  return std::sqrt(sum) / pairs;
}

double gde_oracle(const std::vector<Vec2>& est, const std::vector<Vec2>& truth,
                  const std::vector<int>& ids, double R) {
  double sum = 0.0;
  for (std::size_t a = 0; a < ids.size(); ++a)
    for (std::size_t b = a + 1; b < ids.size(); ++b) {
      const double dt = distance(truth[ids[a]], truth[ids[b]]);
      const double de = distance(est[ids[a]], est[ids[b]]);
      sum += (de - dt) * (de - dt);
    }
  const double pairs = ids.size() * (ids.size() - 1) / 2.0;
  return std::sqrt(sum / pairs) / R;
}

}  // namespace

TEST_CASE("rmse hand-computed cases") {
  const std::vector<Vec2> truth{{0, 0}, {1, 1}};
  const std::vector<int> both{0, 1};

  CHECK(rmse(truth, truth, both) == 0.0);

  std::vector<Vec2> est = truth;
  est[0] = {0.3, 0.4};  // 3-4-5 triangle, error 0.5
  CHECK(rmse(est, truth, std::vector<int>{0}) == doctest::Approx(0.5));

  // Two sensors off by 1 and 0 -> sqrt(1/2).
  est = truth;
  est[0] = {1.0, 0.0};
  CHECK(rmse(est, truth, both) == doctest::Approx(std::sqrt(0.5)));

  CHECK_THROWS_AS(rmse(est, truth, {}), std::invalid_argument);
}

TEST_CASE("ger hand-computed cases") {
  const std::vector<Vec2> truth{{0, 0}, {1, 0}};
  const std::vector<int> ids{0, 1};
  CHECK(ger(truth, truth, ids) == 0.0);

  // d = 1, d_est = 1.1 -> single pair, (1/1)*sqrt(0.01) = 0.1.
  const std::vector<Vec2> est{{0, 0}, {1.1, 0}};
  CHECK(ger(est, truth, ids) == doctest::Approx(0.1));

  const std::vector<Vec2> coincident{{0, 0}, {0, 0}};
  CHECK_THROWS_AS(ger(est, coincident, ids), std::invalid_argument);
  CHECK_THROWS_AS(ger(est, truth, std::vector<int>{0}), std::invalid_argument);
}

TEST_CASE("gde hand-computed cases") {
  const std::vector<Vec2> truth{{0, 0}, {1, 0}};
  const std::vector<int> ids{0, 1};
  CHECK(gde(truth, truth, ids, 3.0) == 0.0);

  // |d_est - d| = 0.3, R = 3 -> (1/3)*sqrt(0.09/1) = 0.1.
  const std::vector<Vec2> est{{0, 0}, {1.3, 0}};
  CHECK(gde(est, truth, ids, 3.0) == doctest::Approx(0.1));

  // Doubling every distance error doubles GDE.
  const std::vector<Vec2> est2{{0, 0}, {1.6, 0}};
  CHECK(gde(est2, truth, ids, 3.0) == doctest::Approx(0.2));

  CHECK_THROWS_AS(gde(est, truth, ids, 0.0), std::invalid_argument);
}

TEST_CASE("three-node ger matches a term-by-term oracle") {
  const std::vector<Vec2> truth{{0, 0}, {3, 0}, {0, 4}};
  const std::vector<Vec2> est{{0.1, 0}, {3, 0.2}, {-0.1, 4.1}};
  const std::vector<int> ids{0, 1, 2};
  CHECK(ger(est, truth, ids) == doctest::Approx(ger_oracle(est, truth, ids)).epsilon(1e-12));
  CHECK(gde(est, truth, ids, 3.0) ==
        doctest::Approx(gde_oracle(est, truth, ids, 3.0)).epsilon(1e-12));
}

TEST_CASE("metrics agree with oracles on random 20-node instances") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::normal_distribution<double> jitter(0.0, 0.4);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<Vec2> truth(20), est(20);
    std::vector<int> ids(20);
    for (int i = 0; i < 20; ++i) {
      truth[i] = {u(rng), u(rng)};
      est[i] = truth[i] + Vec2{jitter(rng), jitter(rng)};
      ids[i] = i;
    }
    CHECK(ger(est, truth, ids) ==
          doctest::Approx(ger_oracle(est, truth, ids)).epsilon(1e-12));
    CHECK(gde(est, truth, ids, 3.0) ==
          doctest::Approx(gde_oracle(est, truth, ids, 3.0)).epsilon(1e-12));

    double sq = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Vec2 d = est[i] - truth[i];
      sq += d.x * d.x + d.y * d.y;
    }
    CHECK(rmse(est, truth, ids) == doctest::Approx(std::sqrt(sq / 20)).epsilon(1e-12));
  }
}

TEST_CASE("ger and gde are invariant under rigid transforms of the estimates") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<Vec2> truth(8), est(8);
  std::vector<int> ids(8);
  for (int i = 0; i < 8; ++i) {
    truth[i] = {u(rng), u(rng)};
    est[i] = {u(rng), u(rng)};
    ids[i] = i;
  }
  const double theta = 0.7;
  const Vec2 shift{3.0, -2.0};
  std::vector<Vec2> moved(8), reflected(8);
  for (int i = 0; i < 8; ++i) {
    moved[i] = {est[i].x * std::cos(theta) - est[i].y * std::sin(theta) + shift.x,
                est[i].x * std::sin(theta) + est[i].y * std::cos(theta) + shift.y};
    reflected[i] = {-est[i].x, est[i].y};
  }
  CHECK(ger(moved, truth, ids) == doctest::Approx(ger(est, truth, ids)).epsilon(1e-9));
  CHECK(gde(moved, truth, ids, 3.0) ==
        doctest::Approx(gde(est, truth, ids, 3.0)).epsilon(1e-9));
  CHECK(ger(reflected, truth, ids) == doctest::Approx(ger(est, truth, ids)).epsilon(1e-9));
  CHECK(gde(reflected, truth, ids, 3.0) ==
        doctest::Approx(gde(est, truth, ids, 3.0)).epsilon(1e-9));
}

TEST_CASE("zero metrics only at matching configurations") {
  std::vector<Vec2> truth{{0, 0}, {2, 0}, {0, 2}};
  const std::vector<int> ids{0, 1, 2};
  std::vector<Vec2> est = truth;
  CHECK(rmse(est, truth, ids) == 0.0);
  CHECK(ger(est, truth, ids) == 0.0);
  CHECK(gde(est, truth, ids, 3.0) == 0.0);

  est[1] = {2.5, 0};
  CHECK(rmse(est, truth, ids) > 0.0);
  CHECK(ger(est, truth, ids) > 0.0);
  CHECK(gde(est, truth, ids, 3.0) > 0.0);
}

TEST_CASE("compute_metrics bundles the three metrics") {
  const std::vector<Vec2> truth{{0, 0}, {1, 0}, {0, 1}};
  std::vector<Vec2> est = truth;
  est[0] = {0.3, 0.4};
  const std::vector<int> ids{0, 1, 2};
  const MetricsReport report = compute_metrics(est, truth, ids, ids, 3.0);
  CHECK(report.rmse == doctest::Approx(rmse(est, truth, ids)));
  CHECK(report.ger == doctest::Approx(ger(est, truth, ids)));
  CHECK(report.gde == doctest::Approx(gde(est, truth, ids, 3.0)));
  CHECK(report.n_trials == 1);
}

TEST_CASE("ecdf construction and evaluation") {
  SUBCASE("singleton") {
    const EcdfTable t = make_ecdf({5.0});
    REQUIRE(t.values.size() == 1);
    CHECK(t.values[0] == 5.0);
    CHECK(t.probs[0] == 1.0);
  }
  SUBCASE("quartiles by counting") {
    const EcdfTable t = make_ecdf({1, 2, 3, 4});
    CHECK(ecdf_at(t, 2.5) == doctest::Approx(0.5));
    CHECK(ecdf_at(t, 0.5) == 0.0);
    CHECK(ecdf_at(t, 4.0) == 1.0);
    CHECK(t.probs.back() == 1.0);
  }
  SUBCASE("permutation invariant") {
    const EcdfTable a = make_ecdf({3, 1, 2});
    const EcdfTable b = make_ecdf({1, 2, 3});
    CHECK(a.values == b.values);
    CHECK(a.probs == b.probs);
  }
  SUBCASE("probabilities non-decreasing, last is 1") {
    const EcdfTable t = make_ecdf({0.3, 0.1, 0.9, 0.9, 0.2});
    for (std::size_t k = 1; k < t.probs.size(); ++k) CHECK(t.probs[k] >= t.probs[k - 1]);
    CHECK(t.probs.back() == 1.0);
  }
  SUBCASE("empty input rejected") { CHECK_THROWS_AS(make_ecdf({}), std::invalid_argument); }
}
