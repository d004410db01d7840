#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <string>

#include "secbeam/beamformer.hpp"
#include "secbeam/channel.hpp"
#include "secbeam/serialize.hpp"

using namespace secbeam;

namespace {

ScenarioConfig full_config() {
  ScenarioConfig c;
  c.n_antennas = 48;
  c.n_users = 5;
  c.gamma_db = 7.5;
  c.gamma_e_db = -2.0;
  c.g = 0.35;
  c.sigma2 = 1.25;
  c.sigma2_e = 0.8;
  c.mode = ChannelMode::kPhysical;
  c.n_trials = 321;
  c.base_seed = 12345678901234567890ULL;
  c.methods = {Method::kAnSplit, Method::kRobust};
  c.an_fraction = 0.15;
  c.sampler = BallSampler::kUniformSphere;
  c.eve_sinr_mean_of_db = true;
  c.synthetic_norm2 = 17.0;
  c.spacing_over_lambda = 0.4;
  c.n_quadrature = 77;
  AngularSpread s;
  s.center = 0.3;
  s.width = 0.1;
  s.spectrum = AngularSpread::Spectrum::kTruncatedGaussian;
  s.gaussian_std = 0.05;
  c.user_spreads = std::vector<AngularSpread>(5, s);
  c.user_spreads[2].center = -0.4;
  AngularSpread e;
  e.center = 1.1;
  e.width = 0.2;
  c.eve_spread = e;
  return c;
}

}  // namespace

TEST_CASE("scenario config survives a json round trip") {
  ScenarioConfig c = full_config();
  ScenarioConfig back = scenario_config_from_json(to_json(c));
  CHECK(back.n_antennas == 48);
  CHECK(back.n_users == 5);
  CHECK(back.gamma_db == 7.5);
  CHECK(back.gamma_e_db == -2.0);
  CHECK(back.g == 0.35);
  CHECK(back.sigma2 == 1.25);
  CHECK(back.sigma2_e == 0.8);
  CHECK(back.mode == ChannelMode::kPhysical);
  CHECK(back.n_trials == 321);
  CHECK(back.base_seed == 12345678901234567890ULL);
  REQUIRE(back.methods.size() == 2);
  CHECK(back.methods[0] == Method::kAnSplit);
  CHECK(back.methods[1] == Method::kRobust);
  CHECK(back.an_fraction == 0.15);
  CHECK(back.sampler == BallSampler::kUniformSphere);
  CHECK(back.eve_sinr_mean_of_db == true);
  CHECK(back.synthetic_norm2 == 17.0);
  CHECK(back.spacing_over_lambda == 0.4);
  CHECK(back.n_quadrature == 77);
  REQUIRE(back.user_spreads.size() == 5);
  CHECK(back.user_spreads[0].spectrum ==
        AngularSpread::Spectrum::kTruncatedGaussian);
  CHECK(back.user_spreads[0].gaussian_std == 0.05);
  CHECK(back.user_spreads[2].center == -0.4);
  REQUIRE(back.eve_spread.has_value());
  CHECK(back.eve_spread->center == 1.1);
  CHECK(back.eve_spread->width == 0.2);
  CHECK(back.eve_spread->spectrum == AngularSpread::Spectrum::kUniform);
}

TEST_CASE("partial config document fills in defaults") {
  ScenarioConfig c = scenario_config_from_json(
      R"({"n_antennas": 128, "n_users": 30, "g": 0.5})");
  CHECK(c.n_antennas == 128);
  CHECK(c.n_users == 30);
  CHECK(c.g == 0.5);
  CHECK(c.gamma_db == 10.0);
  CHECK(c.n_trials == 10000);
  CHECK(c.mode == ChannelMode::kSynthetic);
  CHECK(c.methods.size() == 3);
}

TEST_CASE("config parser names bad fields") {
  CHECK_THROWS_WITH_AS(scenario_config_from_json(R"({"n_antenas": 4})"),
                       doctest::Contains("n_antenas"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(scenario_config_from_json(R"({"g": "half"})"),
                       doctest::Contains("'g'"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(scenario_config_from_json(R"({"mode": "psychic"})"),
                       doctest::Contains("psychic"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(scenario_config_from_json(R"({"base_seed": -3})"),
                       doctest::Contains("base_seed"), std::invalid_argument);
  CHECK_THROWS_AS(scenario_config_from_json("not json"),
                  std::invalid_argument);
  CHECK_THROWS_AS(scenario_config_from_json("[1, 2]"), std::invalid_argument);
}

TEST_CASE("sweep spec round trip and hand-written form") {
  SweepSpec spec;
  spec.parameter = SweepParameter::kN;
  spec.values = {32.0, 64.0, 128.0};
  spec.fixed = full_config();
  SweepSpec back = sweep_spec_from_json(to_json(spec));
  CHECK(back.parameter == SweepParameter::kN);
  REQUIRE(back.values.size() == 3);
  CHECK(back.values[1] == 64.0);
  CHECK(back.fixed.n_users == 5);
  CHECK(back.fixed.base_seed == 12345678901234567890ULL);

  SweepSpec hand = sweep_spec_from_json(
      R"({"swept_parameter": "g", "values": [0.1, 0.3], "fixed": {"n_users": 4}})");
  CHECK(hand.parameter == SweepParameter::kG);
  CHECK(hand.values == std::vector<double>{0.1, 0.3});
  CHECK(hand.fixed.n_users == 4);
  CHECK(hand.fixed.n_antennas == 64);

  CHECK_THROWS_WITH_AS(
      sweep_spec_from_json(R"({"swept_parameter": "m", "values": [1]})"),
      doctest::Contains("swept_parameter"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(sweep_spec_from_json(R"({"swept_parameter": "g"})"),
                       doctest::Contains("values"), std::invalid_argument);
}

TEST_CASE("channel set round trip is exact") {
  ScenarioConfig cfg;
  cfg.n_antennas = 16;
  cfg.n_users = 3;
  cfg.g = 0.4;
  ChannelSet cs = make_channel_set(cfg, 9);
  cs.true_channels = cs.estimates;
  cs.true_channels(0, 0) += Complex(0.25, -0.5);
  cs.eve_true = cs.eve_estimate * Complex(0.0, 1.0);

  ChannelSet back = channel_set_from_json(to_json(cs));
  CHECK(back.estimates == cs.estimates);
  CHECK(back.eve_estimate == cs.eve_estimate);
  CHECK(back.error_radii == cs.error_radii);
  CHECK(back.eve_error_radius == cs.eve_error_radius);
  CHECK(back.noise_vars == cs.noise_vars);
  CHECK(back.eve_noise_var == cs.eve_noise_var);
  CHECK(back.dft_indices == cs.dft_indices);
  CHECK(back.eve_dft_indices == cs.eve_dft_indices);
  CHECK(back.true_channels == cs.true_channels);
  CHECK(back.eve_true == cs.eve_true);
  CHECK_NOTHROW(validate(back));

  // unknown draws are omitted and come back empty
  ChannelSet fresh = make_channel_set(cfg, 9);
  ChannelSet fresh_back = channel_set_from_json(to_json(fresh));
  CHECK(fresh_back.true_channels.size() == 0);
  CHECK(fresh_back.eve_true.size() == 0);
}

TEST_CASE("solution round trip keeps multiplier gaps") {
  ScenarioConfig cfg;
  cfg.n_antennas = 16;
  cfg.n_users = 3;
  cfg.g = 0.4;
  ChannelSet cs = make_channel_set(cfg, 4);
  TargetSinrs t = uniform_targets(3, 10.0, 0.0);
  BeamformingSolution sol = solve_an_split(cs, t, 0.3);
  BeamformingSolution back = solution_from_json(to_json(sol));
  CHECK(back.method == sol.method);
  CHECK(back.directions == sol.directions);
  CHECK(back.powers == sol.powers);
  CHECK(back.an_direction == sol.an_direction);
  CHECK(back.an_power == sol.an_power);
  CHECK(back.user_multipliers == sol.user_multipliers);
  CHECK(back.eve_multipliers == sol.eve_multipliers);

  BeamformingSolution plain = solve_non_robust(cs, t);
  BeamformingSolution plain_back = solution_from_json(to_json(plain));
  REQUIRE(plain_back.user_multipliers.size() == 3);
  CHECK(!plain_back.user_multipliers[0].has_value());
  CHECK(plain_back.total_power() == plain.total_power());
}

TEST_CASE("feasibility report emits every verdict") {
  FeasibilityReport report;
  report.users.push_back({10.0, 10.0, true});
  report.eves.push_back({0.5, 1.0, true});
  report.rank.signal_ranks = {1};
  report.rank.an_rank = 0;
  report.rank.total_rank = 1;
  report.rank.worst_alignment = 1.0;
  report.rank.rank_one = true;
  report.rank.aligned = true;
  report.users_ok = true;
  report.eves_ok = true;
  report.structure_ok = false;

  nlohmann::json j = nlohmann::json::parse(to_json(report));
  CHECK(j["users"][0]["worst_sinr"] == 10.0);
  CHECK(j["eves"][0]["cap"] == 1.0);
  CHECK(j["rank"]["signal_ranks"][0] == 1);
  CHECK(j["rank"]["rank_one"] == true);
  CHECK(j["users_ok"] == true);
  CHECK(j["structure_ok"] == false);
  CHECK(j["ok"] == false);
}

TEST_CASE("sweep csv matches the fixed schema byte for byte") {
  SweepResult r;
  r.parameter = SweepParameter::kG;
  r.provenance.config_hash = 0xabcULL;
  r.provenance.seed = 1;
  r.provenance.code_version = code_version();
  SweepRow row1;
  row1.value = 0.5;
  MethodAggregate a;
  a.method = Method::kRobust;
  a.mean_total_power = 9.375;
  a.se_total_power = 0.0;
  a.mean_secret_sum_rate = 24.0;
  a.se_secret_sum_rate = 0.25;
  a.mean_eve_sinr_db = -9.5;
  a.se_eve_sinr_db = 0.125;
  a.frac_worstcase_feasible = 1.0;
  a.n_trials = 2000;
  a.seed = 12345678901234567890ULL;
  row1.methods.push_back(a);
  r.rows.push_back(row1);
  SweepRow row2;
  row2.value = 0.1;  // writer does not reorder rows
  a.method = Method::kNonRobust;
  a.mean_total_power = 2.34375;
  row2.methods.push_back(a);
  r.rows.push_back(row2);

  const std::string expected =
      "sweep_value,method,mean_total_power,se_total_power,"
      "mean_secret_sum_rate,se_secret_sum_rate,mean_eve_sinr_db,"
      "se_eve_sinr_db,frac_worstcase_feasible,n_trials,seed\n"
      "0.5,robust,9.375,0,24,0.25,-9.5,0.125,1,2000,12345678901234567890\n"
      "0.10000000000000001,non_robust,2.34375,0,24,0.25,-9.5,0.125,1,2000,"
      "12345678901234567890\n";
  CHECK(sweep_csv(r) == expected);

  nlohmann::json j = nlohmann::json::parse(to_json(r));
  CHECK(j["provenance"]["config_hash"] == "0000000000000abc");
  CHECK(j["provenance"]["seed"] == 1);
  CHECK(j["rows"][0]["methods"][0]["mean_total_power"] == 9.375);
}

TEST_CASE("trial csv prints one row per trial") {
  TrialMetrics t;
  t.total_power = 2.5;
  t.secret_sum_rate = 3.0;
  t.secret_sum_rate_raw = -0.5;
  t.mean_eve_sinr = 0.25;
  t.eve_sinr_db_avg = -6.0;
  const std::string expected =
      "trial,total_power,secret_sum_rate,secret_sum_rate_raw,mean_eve_sinr,"
      "eve_sinr_db_avg\n"
      "0,2.5,3,-0.5,0.25,-6\n"
      "1,2.5,3,-0.5,0.25,-6\n";
  CHECK(trial_csv({t, t}) == expected);
}

TEST_CASE("config hash tracks content not formatting") {
  ScenarioConfig c = full_config();
  CHECK(config_hash(c) == config_hash(c));
  CHECK(config_hash(c) == config_hash(scenario_config_from_json(to_json(c))));
  ScenarioConfig d = c;
  d.base_seed += 1;
  CHECK(config_hash(c) != config_hash(d));
  SweepSpec spec;
  spec.fixed = c;
  spec.values = {0.1};
  std::uint64_t h = sweep_hash(spec);
  spec.values.push_back(0.2);
  CHECK(sweep_hash(spec) != h);
}

TEST_CASE("name maps reject strangers") {
  CHECK(method_name(Method::kAnSplit) == "an_split");
  CHECK(method_from_name("non_robust") == Method::kNonRobust);
  CHECK_THROWS_AS(method_from_name("sturdy"), std::invalid_argument);
  CHECK(sweep_parameter_name(SweepParameter::kK) == "k");
  CHECK(sweep_parameter_from_name("n") == SweepParameter::kN);
  CHECK_THROWS_AS(sweep_parameter_from_name("q"), std::invalid_argument);
}
