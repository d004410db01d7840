#include "secbeam/serialize.hpp"

#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace secbeam {
namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& name, const std::string& what) {
  throw std::invalid_argument("field '" + name + "': " + what);
}

double as_real(const json& j, const std::string& name) {
  if (!j.is_number()) bad_field(name, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& name) {
  if (!j.is_number_integer()) bad_field(name, "expected an integer");
  return j.get<int>();
}

std::uint64_t as_u64(const json& j, const std::string& name) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<long long>() >= 0)
    return j.get<std::uint64_t>();
  bad_field(name, "expected a nonnegative integer");
}

bool as_bool(const json& j, const std::string& name) {
  if (!j.is_boolean()) bad_field(name, "expected a boolean");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& name) {
  if (!j.is_string()) bad_field(name, "expected a string");
  return j.get<std::string>();
}

const json& as_array(const json& j, const std::string& name) {
  if (!j.is_array()) bad_field(name, "expected an array");
  return j;
}

json parse_document(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw std::invalid_argument(std::string(what) + ": malformed JSON");
  if (!j.is_object())
    throw std::invalid_argument(std::string(what) + ": expected an object");
  return j;
}

std::string dump(const json& j, int indent) {
  return indent < 0 ? j.dump() : j.dump(indent);
}

// ---- complex containers ----------------------------------------------------

json cx_entry(const Complex& z) {
  return json::array({z.real(), z.imag()});
}

Complex parse_cx(const json& j, const std::string& name) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    bad_field(name, "expected an [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

json cxvec_json(const CxVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(cx_entry(v[i]));
  return a;
}

CxVector parse_cxvec(const json& j, const std::string& name) {
  as_array(j, name);
  CxVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = parse_cx(j[i], name);
  return v;
}

json cxmat_json(const CxMatrix& m) {
  json cols = json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) cols.push_back(cxvec_json(m.col(c)));
  return cols;
}

CxMatrix parse_cxmat(const json& j, const std::string& name) {
  as_array(j, name);
  if (j.empty()) return CxMatrix(0, 0);
  CxVector first = parse_cxvec(j[0], name);
  CxMatrix m(first.size(), static_cast<Eigen::Index>(j.size()));
  m.col(0) = first;
  for (std::size_t c = 1; c < j.size(); ++c) {
    CxVector col = parse_cxvec(j[c], name);
    if (col.size() != m.rows()) bad_field(name, "ragged columns");
    m.col(static_cast<Eigen::Index>(c)) = col;
  }
  return m;
}

json realvec_json(const RealVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

RealVector parse_realvec(const json& j, const std::string& name) {
  as_array(j, name);
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = as_real(j[i], name);
  return v;
}

// ---- enums -----------------------------------------------------------------

std::string mode_name(ChannelMode m) {
  return m == ChannelMode::kSynthetic ? "synthetic" : "physical";
}

ChannelMode mode_from_name(const std::string& s) {
  if (s == "synthetic") return ChannelMode::kSynthetic;
  if (s == "physical") return ChannelMode::kPhysical;
  bad_field("mode", "unknown value '" + s + "'");
}

std::string sampler_name(BallSampler s) {
  return s == BallSampler::kUniformBall ? "ball" : "sphere";
}

BallSampler sampler_from_name(const std::string& s) {
  if (s == "ball") return BallSampler::kUniformBall;
  if (s == "sphere") return BallSampler::kUniformSphere;
  bad_field("sampler", "unknown value '" + s + "'");
}

std::string spectrum_name(AngularSpread::Spectrum s) {
  return s == AngularSpread::Spectrum::kUniform ? "uniform"
                                                : "truncated_gaussian";
}

AngularSpread::Spectrum spectrum_from_name(const std::string& s) {
  if (s == "uniform") return AngularSpread::Spectrum::kUniform;
  if (s == "truncated_gaussian") return AngularSpread::Spectrum::kTruncatedGaussian;
  bad_field("spectrum", "unknown value '" + s + "'");
}

json spread_json(const AngularSpread& s) {
  return json{{"center", s.center},
              {"width", s.width},
              {"spectrum", spectrum_name(s.spectrum)},
              {"gaussian_std", s.gaussian_std}};
}

AngularSpread parse_spread(const json& j, const std::string& name) {
  if (!j.is_object()) bad_field(name, "expected an object");
  AngularSpread s;
  for (const auto& [key, value] : j.items()) {
    if (key == "center") s.center = as_real(value, name + ".center");
    else if (key == "width") s.width = as_real(value, name + ".width");
    else if (key == "spectrum") s.spectrum = spectrum_from_name(as_string(value, name + ".spectrum"));
    else if (key == "gaussian_std") s.gaussian_std = as_real(value, name + ".gaussian_std");
    else bad_field(name + "." + key, "unknown field");
  }
  return s;
}

std::vector<int> parse_int_list(const json& j, const std::string& name) {
  as_array(j, name);
  std::vector<int> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(as_int(e, name));
  return out;
}

// ---- printf-based CSV floats ----------------------------------------------

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json config_json(const ScenarioConfig& c);

json aggregate_json(const MethodAggregate& a) {
  return json{{"method", method_name(a.method)},
              {"mean_total_power", a.mean_total_power},
              {"se_total_power", a.se_total_power},
              {"mean_secret_sum_rate", a.mean_secret_sum_rate},
              {"se_secret_sum_rate", a.se_secret_sum_rate},
              {"mean_eve_sinr_db", a.mean_eve_sinr_db},
              {"se_eve_sinr_db", a.se_eve_sinr_db},
              {"frac_worstcase_feasible", a.frac_worstcase_feasible},
              {"n_trials", a.n_trials},
              {"seed", a.seed}};
}

}  // namespace

// ---- names -----------------------------------------------------------------

std::string method_name(Method method) {
  switch (method) {
    case Method::kRobust: return "robust";
    case Method::kNonRobust: return "non_robust";
    case Method::kAnSplit: return "an_split";
  }
  throw std::invalid_argument("method: unknown enumerator");
}

Method method_from_name(const std::string& name) {
  if (name == "robust") return Method::kRobust;
  if (name == "non_robust") return Method::kNonRobust;
  if (name == "an_split") return Method::kAnSplit;
  bad_field("method", "unknown value '" + name + "'");
}

std::string sweep_parameter_name(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::kG: return "g";
    case SweepParameter::kN: return "n";
    case SweepParameter::kK: return "k";
  }
  throw std::invalid_argument("swept_parameter: unknown enumerator");
}

SweepParameter sweep_parameter_from_name(const std::string& name) {
  if (name == "g") return SweepParameter::kG;
  if (name == "n") return SweepParameter::kN;
  if (name == "k") return SweepParameter::kK;
  bad_field("swept_parameter", "unknown value '" + name + "'");
}

// ---- scenario config -------------------------------------------------------

namespace {
json config_json(const ScenarioConfig& c) {
  json j{{"n_antennas", c.n_antennas},
         {"n_users", c.n_users},
         {"gamma_db", c.gamma_db},
         {"gamma_e_db", c.gamma_e_db},
         {"g", c.g},
         {"sigma2", c.sigma2},
         {"sigma2_e", c.sigma2_e},
         {"mode", mode_name(c.mode)},
         {"n_trials", c.n_trials},
         {"base_seed", c.base_seed},
         {"an_fraction", c.an_fraction},
         {"sampler", sampler_name(c.sampler)},
         {"eve_sinr_mean_of_db", c.eve_sinr_mean_of_db},
         {"synthetic_norm2", c.synthetic_norm2},
         {"spacing_over_lambda", c.spacing_over_lambda},
         {"n_quadrature", c.n_quadrature}};
  json methods = json::array();
  for (Method m : c.methods) methods.push_back(method_name(m));
  j["methods"] = methods;
  if (!c.user_spreads.empty()) {
    json spreads = json::array();
    for (const AngularSpread& s : c.user_spreads) spreads.push_back(spread_json(s));
    j["user_spreads"] = spreads;
  }
  if (c.eve_spread) j["eve_spread"] = spread_json(*c.eve_spread);
  return j;
}
}  // namespace

std::string to_json(const ScenarioConfig& c, int indent) {
  return dump(config_json(c), indent);
}

ScenarioConfig scenario_config_from_json(const std::string& text) {
  json j = parse_document(text, "scenario config");
  ScenarioConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "n_antennas") c.n_antennas = as_int(value, key);
    else if (key == "n_users") c.n_users = as_int(value, key);
    else if (key == "gamma_db") c.gamma_db = as_real(value, key);
    else if (key == "gamma_e_db") c.gamma_e_db = as_real(value, key);
    else if (key == "g") c.g = as_real(value, key);
    else if (key == "sigma2") c.sigma2 = as_real(value, key);
    else if (key == "sigma2_e") c.sigma2_e = as_real(value, key);
    else if (key == "mode") c.mode = mode_from_name(as_string(value, key));
    else if (key == "n_trials") c.n_trials = as_int(value, key);
    else if (key == "base_seed") c.base_seed = as_u64(value, key);
    else if (key == "an_fraction") c.an_fraction = as_real(value, key);
    else if (key == "sampler") c.sampler = sampler_from_name(as_string(value, key));
    else if (key == "eve_sinr_mean_of_db") c.eve_sinr_mean_of_db = as_bool(value, key);
    else if (key == "synthetic_norm2") c.synthetic_norm2 = as_real(value, key);
    else if (key == "spacing_over_lambda") c.spacing_over_lambda = as_real(value, key);
    else if (key == "n_quadrature") c.n_quadrature = as_int(value, key);
    else if (key == "methods") {
      as_array(value, key);
      c.methods.clear();
      for (const auto& e : value) c.methods.push_back(method_from_name(as_string(e, key)));
    } else if (key == "user_spreads") {
      as_array(value, key);
      c.user_spreads.clear();
      for (const auto& e : value) c.user_spreads.push_back(parse_spread(e, key));
    } else if (key == "eve_spread") {
      c.eve_spread = parse_spread(value, key);
    } else {
      bad_field(key, "unknown field in scenario config");
    }
  }
  return c;
}

// ---- sweep spec ------------------------------------------------------------

std::string to_json(const SweepSpec& spec, int indent) {
  json values = json::array();
  for (double v : spec.values) values.push_back(v);
  json j{{"swept_parameter", sweep_parameter_name(spec.parameter)},
         {"values", values}};
  j["fixed"] = config_json(spec.fixed);
  return dump(j, indent);
}

SweepSpec sweep_spec_from_json(const std::string& text) {
  json j = parse_document(text, "sweep spec");
  SweepSpec spec;
  bool have_values = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "swept_parameter") {
      spec.parameter = sweep_parameter_from_name(as_string(value, key));
    } else if (key == "values") {
      as_array(value, key);
      spec.values.clear();
      for (const auto& e : value) spec.values.push_back(as_real(e, key));
      have_values = true;
    } else if (key == "fixed") {
      spec.fixed = scenario_config_from_json(value.dump());
    } else {
      bad_field(key, "unknown field in sweep spec");
    }
  }
  if (!have_values) bad_field("values", "missing");
  return spec;
}

// ---- channel set -----------------------------------------------------------

std::string to_json(const ChannelSet& cs, int indent) {
  json j{{"estimates", cxmat_json(cs.estimates)},
         {"eve_estimate", cxvec_json(cs.eve_estimate)},
         {"error_radii", realvec_json(cs.error_radii)},
         {"eve_error_radius", cs.eve_error_radius},
         {"noise_vars", realvec_json(cs.noise_vars)},
         {"eve_noise_var", cs.eve_noise_var}};
  json dft = json::array();
  for (const auto& per_user : cs.dft_indices) {
    json inner = json::array();
    for (int i : per_user) inner.push_back(i);
    dft.push_back(inner);
  }
  j["dft_indices"] = dft;
  json eve_dft = json::array();
  for (int i : cs.eve_dft_indices) eve_dft.push_back(i);
  j["eve_dft_indices"] = eve_dft;
  if (cs.true_channels.cols() > 0) j["true_channels"] = cxmat_json(cs.true_channels);
  if (cs.eve_true.size() > 0) j["eve_true"] = cxvec_json(cs.eve_true);
  return dump(j, indent);
}

ChannelSet channel_set_from_json(const std::string& text) {
  json j = parse_document(text, "channel set");
  ChannelSet cs;
  for (const auto& [key, value] : j.items()) {
    if (key == "estimates") cs.estimates = parse_cxmat(value, key);
    else if (key == "eve_estimate") cs.eve_estimate = parse_cxvec(value, key);
    else if (key == "error_radii") cs.error_radii = parse_realvec(value, key);
    else if (key == "eve_error_radius") cs.eve_error_radius = as_real(value, key);
    else if (key == "noise_vars") cs.noise_vars = parse_realvec(value, key);
    else if (key == "eve_noise_var") cs.eve_noise_var = as_real(value, key);
    else if (key == "eve_dft_indices") cs.eve_dft_indices = parse_int_list(value, key);
    else if (key == "true_channels") cs.true_channels = parse_cxmat(value, key);
    else if (key == "eve_true") cs.eve_true = parse_cxvec(value, key);
    else if (key == "dft_indices") {
      as_array(value, key);
      cs.dft_indices.clear();
      for (const auto& e : value) cs.dft_indices.push_back(parse_int_list(e, key));
    } else {
      bad_field(key, "unknown field in channel set");
    }
  }
  return cs;
}

// ---- beamforming solution --------------------------------------------------

std::string to_json(const BeamformingSolution& sol, int indent) {
  json j{{"method", method_name(sol.method)},
         {"directions", cxmat_json(sol.directions)},
         {"powers", realvec_json(sol.powers)},
         {"an_power", sol.an_power}};
  if (sol.an_direction.size() > 0) j["an_direction"] = cxvec_json(sol.an_direction);
  json user_mu = json::array();
  for (const auto& m : sol.user_multipliers) user_mu.push_back(m ? json(*m) : json());
  j["user_multipliers"] = user_mu;
  json eve_mu = json::array();
  for (const auto& m : sol.eve_multipliers) eve_mu.push_back(m ? json(*m) : json());
  j["eve_multipliers"] = eve_mu;
  return dump(j, indent);
}

BeamformingSolution solution_from_json(const std::string& text) {
  json j = parse_document(text, "solution");
  BeamformingSolution sol;
  auto parse_multipliers = [](const json& value, const std::string& name) {
    as_array(value, name);
    std::vector<std::optional<double>> out;
    out.reserve(value.size());
    for (const auto& e : value) {
      if (e.is_null()) out.emplace_back(std::nullopt);
      else out.emplace_back(as_real(e, name));
    }
    return out;
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "method") sol.method = method_from_name(as_string(value, key));
    else if (key == "directions") sol.directions = parse_cxmat(value, key);
    else if (key == "powers") sol.powers = parse_realvec(value, key);
    else if (key == "an_direction") sol.an_direction = parse_cxvec(value, key);
    else if (key == "an_power") sol.an_power = as_real(value, key);
    else if (key == "user_multipliers") sol.user_multipliers = parse_multipliers(value, key);
    else if (key == "eve_multipliers") sol.eve_multipliers = parse_multipliers(value, key);
    else bad_field(key, "unknown field in solution");
  }
  return sol;
}

// ---- reports ---------------------------------------------------------------

std::string to_json(const FeasibilityReport& report, int indent) {
  json users = json::array();
  for (const auto& u : report.users)
    users.push_back(json{{"worst_sinr", u.worst_sinr}, {"target", u.target}, {"ok", u.ok}});
  json eves = json::array();
  for (const auto& e : report.eves)
    eves.push_back(json{{"worst_sinr", e.worst_sinr}, {"cap", e.cap}, {"ok", e.ok}});
  json ranks = json::array();
  for (int r : report.rank.signal_ranks) ranks.push_back(r);
  json j{{"users", users},
         {"eves", eves},
         {"rank", json{{"signal_ranks", ranks},
                       {"an_rank", report.rank.an_rank},
                       {"total_rank", report.rank.total_rank},
                       {"worst_alignment", report.rank.worst_alignment},
                       {"rank_one", report.rank.rank_one},
                       {"aligned", report.rank.aligned}}},
         {"users_ok", report.users_ok},
         {"eves_ok", report.eves_ok},
         {"structure_ok", report.structure_ok},
         {"ok", report.ok()}};
  return dump(j, indent);
}

std::string to_json(const SweepResult& result, int indent) {
  json rows = json::array();
  for (const SweepRow& row : result.rows) {
    json methods = json::array();
    for (const MethodAggregate& a : row.methods) methods.push_back(aggregate_json(a));
    rows.push_back(json{{"value", row.value}, {"methods", methods}});
  }
  char hash_hex[17];
  std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                static_cast<unsigned long long>(result.provenance.config_hash));
  json j{{"swept_parameter", sweep_parameter_name(result.parameter)},
         {"rows", rows},
         {"provenance", json{{"config_hash", hash_hex},
                             {"seed", result.provenance.seed},
                             {"code_version", result.provenance.code_version}}}};
  return dump(j, indent);
}

// ---- CSV -------------------------------------------------------------------

std::string sweep_csv(const SweepResult& result) {
  std::string out =
      "sweep_value,method,mean_total_power,se_total_power,"
      "mean_secret_sum_rate,se_secret_sum_rate,mean_eve_sinr_db,"
      "se_eve_sinr_db,frac_worstcase_feasible,n_trials,seed\n";
  for (const SweepRow& row : result.rows) {
    for (const MethodAggregate& a : row.methods) {
      out += fmt(row.value);
      out += ',';
      out += method_name(a.method);
      out += ',';
      out += fmt(a.mean_total_power);
      out += ',';
      out += fmt(a.se_total_power);
      out += ',';
      out += fmt(a.mean_secret_sum_rate);
      out += ',';
      out += fmt(a.se_secret_sum_rate);
      out += ',';
      out += fmt(a.mean_eve_sinr_db);
      out += ',';
      out += fmt(a.se_eve_sinr_db);
      out += ',';
      out += fmt(a.frac_worstcase_feasible);
      out += ',';
      out += std::to_string(a.n_trials);
      out += ',';
      out += std::to_string(a.seed);
      out += '\n';
    }
  }
  return out;
}

std::string trial_csv(const std::vector<TrialMetrics>& trials) {
  std::string out =
      "trial,total_power,secret_sum_rate,secret_sum_rate_raw,mean_eve_sinr,"
      "eve_sinr_db_avg\n";
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const TrialMetrics& t = trials[i];
    out += std::to_string(i);
    out += ',';
    out += fmt(t.total_power);
    out += ',';
    out += fmt(t.secret_sum_rate);
    out += ',';
    out += fmt(t.secret_sum_rate_raw);
    out += ',';
    out += fmt(t.mean_eve_sinr);
    out += ',';
    out += fmt(t.eve_sinr_db_avg);
    out += '\n';
  }
  return out;
}

// ---- provenance ------------------------------------------------------------

namespace {
std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}
}  // namespace

std::uint64_t config_hash(const ScenarioConfig& config) {
  return fnv1a(to_json(config, -1));
}

std::uint64_t sweep_hash(const SweepSpec& spec) {
  return fnv1a(to_json(spec, -1));
}

std::string code_version() { return "secbeam 0.1.0"; }

}  // namespace secbeam
