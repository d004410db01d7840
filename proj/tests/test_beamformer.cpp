#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "secbeam/beamformer.hpp"
#include "secbeam/hermitian.hpp"
#include "secbeam/power_kernels.hpp"

using namespace secbeam;

namespace {

ChannelSet desk_set(int n = 128, int k = 30, double g = 0.5) {
  ScenarioConfig cfg;
  cfg.n_antennas = n;
  cfg.n_users = k;
  cfg.g = g;
  return make_channel_set(cfg, 1);
}

}  // namespace

TEST_CASE("robust powers reproduce the worked desk example") {
  // N=128, |h|^2=128, sigma2=1, gamma=10 dB, g=0.5:
  //   p = 10/32, mu = 10/320, 30-user total 9.375
  ChannelSet set = desk_set();
  TargetSinrs t = uniform_targets(30, 10.0, 0.0);
  BeamformingSolution sol = solve_robust(set, t);
  for (int i = 0; i < 30; ++i) {
    CHECK(sol.powers[i] == doctest::Approx(0.3125).epsilon(1e-12));
    REQUIRE(sol.user_multipliers[i].has_value());
    CHECK(*sol.user_multipliers[i] == doctest::Approx(0.03125).epsilon(1e-12));
    REQUIRE(sol.eve_multipliers[i].has_value());
    CHECK(*sol.eve_multipliers[i] ==
          doctest::Approx(1.0 / 32.0).epsilon(1e-12));
  }
  CHECK(sol.an_power == 0.0);
  CHECK(sol.total_power() == doctest::Approx(9.375).epsilon(1e-12));
  // unit beams along the estimates
  for (int i = 0; i < 30; ++i) {
    CHECK(sol.directions.col(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
    const double overlap = std::abs(sol.directions.col(i).dot(set.estimates.col(i)));
    CHECK(overlap == doctest::Approx(set.estimates.col(i).norm()).epsilon(1e-12));
  }
}

TEST_CASE("zero error radius reduces the robust design to the non-robust one") {
  ChannelSet set = desk_set(64, 4, 0.0);
  TargetSinrs t = uniform_targets(4, 10.0, 0.0);
  BeamformingSolution robust = solve_robust(set, t);
  BeamformingSolution plain = solve_non_robust(set, t);
  for (int i = 0; i < 4; ++i) {
    CHECK(robust.powers[i] == doctest::Approx(plain.powers[i]).epsilon(1e-14));
    CHECK(!robust.user_multipliers[i].has_value());
    CHECK(!robust.eve_multipliers[i].has_value());
  }
}

TEST_CASE("non-robust powers ignore the error radius") {
  TargetSinrs t = uniform_targets(30, 10.0, 0.0);
  BeamformingSolution a = solve_non_robust(desk_set(128, 30, 0.5), t);
  BeamformingSolution b = solve_non_robust(desk_set(128, 30, 0.2), t);
  for (int i = 0; i < 30; ++i) {
    CHECK(a.powers[i] == doctest::Approx(0.078125).epsilon(1e-12));
    CHECK(a.powers[i] == b.powers[i]);  // bitwise: radii do not enter
  }
  CHECK(a.total_power() == doctest::Approx(2.34375).epsilon(1e-12));
}

TEST_CASE("an-split baseline diverts power without changing the budget") {
  ChannelSet set = desk_set();
  TargetSinrs t = uniform_targets(30, 10.0, 0.0);
  BeamformingSolution robust = solve_robust(set, t);
  BeamformingSolution an = solve_an_split(set, t, 0.3);
  CHECK(an.an_power == doctest::Approx(2.8125).epsilon(1e-12));
  for (int i = 0; i < 30; ++i) {
    CHECK(an.powers[i] == doctest::Approx(0.21875).epsilon(1e-12));
  }
  CHECK(an.total_power() ==
        doctest::Approx(robust.total_power()).epsilon(1e-12));
  CHECK(an.an_direction.norm() == doctest::Approx(1.0).epsilon(1e-12));
  // zero fraction gives back the robust powers
  BeamformingSolution same = solve_an_split(set, t, 0.0);
  for (int i = 0; i < 30; ++i) CHECK(same.powers[i] == robust.powers[i]);
  CHECK_THROWS_AS(solve_an_split(set, t, 1.0), std::invalid_argument);
}

TEST_CASE("robust power grows with the error radius, non-robust stays flat") {
  TargetSinrs t = uniform_targets(8, 10.0, 0.0);
  double last = 0.0;
  double flat = -1.0;
  for (double g : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7}) {
    ChannelSet set = desk_set(64, 8, g);
    const double robust = solve_robust(set, t).total_power();
    const double plain = solve_non_robust(set, t).total_power();
    CHECK(robust > last);
    last = robust;
    if (flat < 0) flat = plain;
    CHECK(plain == flat);
  }
}

TEST_CASE("robust per-user power falls with the array size") {
  TargetSinrs t = uniform_targets(4, 10.0, 0.0);
  double last = 1e300;
  for (int n : {32, 64, 128}) {
    BeamformingSolution sol = solve_robust(desk_set(n, 4, 0.5), t);
    CHECK(sol.powers[0] < last);
    last = sol.powers[0];
  }
}

TEST_CASE("covariance views are rank-one with the right traces") {
  ChannelSet set = desk_set(32, 3, 0.4);
  TargetSinrs t = uniform_targets(3, 10.0, 0.0);
  BeamformingSolution sol = solve_an_split(set, t, 0.25);
  CovarianceViews v = covariance_views(sol);
  double trace_sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    auto d = evd(HermitianXcd(v.signal[i]));
    CHECK(d.eigenvalues[0] == doctest::Approx(sol.powers[i]).epsilon(1e-12));
    for (int j = 1; j < 32; ++j) {
      CHECK(std::abs(d.eigenvalues[j]) < 1e-12 * sol.powers[i]);
    }
    trace_sum += v.signal[i].trace().real();
  }
  trace_sum += v.an.trace().real();
  CHECK(trace_sum == doctest::Approx(sol.total_power()).epsilon(1e-12));
  auto an_evd = evd(HermitianXcd(v.an));
  CHECK(an_evd.eigenvalues[0] == doctest::Approx(sol.an_power).epsilon(1e-12));
  // zero AN power gives the zero matrix
  CovarianceViews none = covariance_views(solve_robust(set, t));
  CHECK(none.an.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("binding and stationarity identities hold for the closed form") {
  // margin of the user power constraint is zero at (p, mu), and the dual
  // scale makes the power stationarity residual vanish
  for (double g : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double norm = std::sqrt(96.0);
    const double eps = g * norm;
    const double gamma = 10.0;
    const double sigma2 = 1.7;
    const double p = robust_info_power(gamma, sigma2, norm, eps);
    const double mu = robust_user_multiplier(p, gamma, norm, eps);
    const double xi = robust_user_dual(gamma, norm, eps);
    const double margin =
        user_power_margin(mu, p, norm * norm, sigma2, gamma, eps * eps);
    CHECK(std::abs(margin) < 1e-9 * std::max(1.0, sigma2));
    const double den = mu * gamma + p;
    const double stat_p = 1.0 - xi * mu * mu * gamma * norm * norm / (den * den);
    CHECK(std::abs(stat_p) < 1e-9);
    const double stat_mu = eps * eps - p * p * norm * norm / (den * den);
    CHECK(std::abs(stat_mu) < 1e-9 * eps * eps);
  }
}

TEST_CASE("target validation rejects caps above the floor") {
  CHECK_THROWS_AS(uniform_targets(2, 3.0, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(uniform_targets(2, 3.0, 5.0), std::invalid_argument);
  TargetSinrs ok = uniform_targets(2, 10.0, 0.0);
  CHECK(ok.gamma[0] == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(ok.gamma_e[0] == doctest::Approx(1.0).epsilon(1e-15));
}
