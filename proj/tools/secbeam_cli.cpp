#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "secbeam/harness.hpp"
#include "secbeam/serialize.hpp"

using namespace secbeam;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("short write to '" + path + "'");
}

std::string prepare_out_dir(const std::string& dir) {
  std::filesystem::create_directories(dir);
  return dir;
}

ChannelMode mode_from_flag(const std::string& s) {
  return s == "physical" ? ChannelMode::kPhysical : ChannelMode::kSynthetic;
}

struct SolveArgs {
  std::string config_path;
  std::string channels_out;
  std::string method = "robust";
  int n = 0;
  int k = 0;
  double gamma_db = 0.0;
  double gamma_e_db = 0.0;
  double g = 0.0;
  double sigma2 = 0.0;
  double sigma2_e = 0.0;
  std::uint64_t seed = 0;
  std::string mode;
  double an_fraction = 0.0;
  CLI::Option* n_opt = nullptr;
  CLI::Option* k_opt = nullptr;
  CLI::Option* gamma_opt = nullptr;
  CLI::Option* gamma_e_opt = nullptr;
  CLI::Option* g_opt = nullptr;
  CLI::Option* sigma2_opt = nullptr;
  CLI::Option* sigma2_e_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* mode_opt = nullptr;
  CLI::Option* an_opt = nullptr;
};

ScenarioConfig solve_config(const SolveArgs& a) {
  ScenarioConfig cfg;
  if (!a.config_path.empty())
    cfg = scenario_config_from_json(read_file(a.config_path));
  if (a.n_opt->count()) cfg.n_antennas = a.n;
  if (a.k_opt->count()) cfg.n_users = a.k;
  if (a.gamma_opt->count()) cfg.gamma_db = a.gamma_db;
  if (a.gamma_e_opt->count()) cfg.gamma_e_db = a.gamma_e_db;
  if (a.g_opt->count()) cfg.g = a.g;
  if (a.sigma2_opt->count()) cfg.sigma2 = a.sigma2;
  if (a.sigma2_e_opt->count()) cfg.sigma2_e = a.sigma2_e;
  if (a.seed_opt->count()) cfg.base_seed = a.seed;
  if (a.mode_opt->count()) cfg.mode = mode_from_flag(a.mode);
  if (a.an_opt->count()) cfg.an_fraction = a.an_fraction;
  return cfg;
}

int run_solve(const SolveArgs& a) {
  ScenarioConfig cfg = solve_config(a);
  validate(cfg);
  const ChannelSet channels = make_channel_set(cfg, cfg.base_seed);
  if (!a.channels_out.empty())
    write_file(a.channels_out, to_json(channels) + "\n");
  const TargetSinrs targets =
      uniform_targets(cfg.n_users, cfg.gamma_db, cfg.gamma_e_db);
  const Method method = method_from_name(a.method);
  BeamformingSolution sol;
  switch (method) {
    case Method::kRobust: sol = solve_robust(channels, targets); break;
    case Method::kNonRobust: sol = solve_non_robust(channels, targets); break;
    case Method::kAnSplit:
      sol = solve_an_split(channels, targets, cfg.an_fraction);
      break;
  }
  std::cout << to_json(sol) << "\n";
  return 0;
}

struct VerifyArgs {
  std::string channels_path;
  std::string solution_path;
  double gamma_db = 10.0;
  double gamma_e_db = 0.0;
};

int run_verify(const VerifyArgs& a) {
  ChannelSet channels = channel_set_from_json(read_file(a.channels_path));
  validate(channels);
  const BeamformingSolution sol =
      solution_from_json(read_file(a.solution_path));
  const TargetSinrs targets =
      uniform_targets(channels.n_users(), a.gamma_db, a.gamma_e_db);
  const FeasibilityReport report = verify_solution(channels, sol, targets);
  std::cout << to_json(report) << "\n";
  return 0;
}

struct SweepArgs {
  std::string spec_path;
  std::string out_dir = ".";
};

int run_sweep_cmd(const SweepArgs& a) {
  const SweepSpec spec = sweep_spec_from_json(read_file(a.spec_path));
  const SweepResult result = run_sweep(spec);
  const std::string dir = prepare_out_dir(a.out_dir);
  const std::string csv_path = dir + "/sweep.csv";
  const std::string json_path = dir + "/sweep.json";
  write_file(csv_path, sweep_csv(result));
  write_file(json_path, to_json(result) + "\n");
  std::cout << "wrote " << csv_path << "\n" << "wrote " << json_path << "\n";
  return 0;
}

struct ReproArgs {
  std::string name;
  std::string scale = "desk";
  int trials = 0;
  std::string out_dir = ".";
};

int run_repro_cmd(const ReproArgs& a) {
  const ReproOutcome out = run_repro(a.name, a.scale == "full", a.trials);
  const std::string dir = prepare_out_dir(a.out_dir);
  const std::string csv_path = dir + "/" + a.name + ".csv";
  const std::string json_path = dir + "/" + a.name + ".json";
  write_file(csv_path, sweep_csv(out.result));
  write_file(json_path, to_json(out.result) + "\n");
  std::cout << out.preset.name << ": " << out.preset.description << "\n";
  for (const std::string& line : out.checks)
    std::cout << "check passed: " << line << "\n";
  std::cout << "wrote " << csv_path << "\n" << "wrote " << json_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Closed-form robust secure beamforming: synthesis, verification and "
      "Monte Carlo sweeps"};
  app.name("secbeam");
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand(
      "solve", "solve one scenario and print the solution as JSON");
  solve->add_option("--config", solve_args.config_path,
                    "scenario config JSON file (flags override its values)");
  solve->add_option("--channels-out", solve_args.channels_out,
                    "also write the generated channel set as JSON");
  solve_args.n_opt = solve->add_option("--n", solve_args.n, "antenna count");
  solve_args.k_opt = solve->add_option("--k", solve_args.k, "user count");
  solve_args.gamma_opt =
      solve->add_option("--gamma-db", solve_args.gamma_db, "user SINR floor, dB");
  solve_args.gamma_e_opt = solve->add_option(
      "--gamma-e-db", solve_args.gamma_e_db, "eavesdropper SINR cap, dB");
  solve_args.g_opt = solve->add_option(
      "--g", solve_args.g, "error radius as a fraction of the estimate norm");
  solve_args.sigma2_opt =
      solve->add_option("--sigma2", solve_args.sigma2, "user noise variance");
  solve_args.sigma2_e_opt = solve->add_option(
      "--sigma2-e", solve_args.sigma2_e, "eavesdropper noise variance");
  solve_args.seed_opt =
      solve->add_option("--seed", solve_args.seed, "base random seed");
  solve_args.mode_opt =
      solve->add_option("--mode", solve_args.mode, "channel model")
          ->check(CLI::IsMember({"synthetic", "physical"}));
  solve_args.an_opt = solve->add_option(
      "--an-fraction", solve_args.an_fraction,
      "artificial-noise share for the an_split method");
  solve->add_option("--method", solve_args.method, "design to solve")
      ->check(CLI::IsMember({"robust", "non_robust", "an_split"}));

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand(
      "verify",
      "check a solution against a channel set and print the report as JSON");
  verify->add_option("--channels", verify_args.channels_path,
                     "channel set JSON file")
      ->required();
  verify->add_option("--solution", verify_args.solution_path,
                     "solution JSON file")
      ->required();
  verify->add_option("--gamma-db", verify_args.gamma_db,
                     "user SINR floor, dB");
  verify->add_option("--gamma-e-db", verify_args.gamma_e_db,
                     "eavesdropper SINR cap, dB");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "run a sweep spec and write CSV plus aggregate JSON");
  sweep->add_option("--spec", sweep_args.spec_path, "sweep spec JSON file")
      ->required();
  sweep->add_option("--out-dir", sweep_args.out_dir, "output directory");

  ReproArgs repro_args;
  CLI::App* repro = app.add_subcommand(
      "repro", "run a bundled experiment preset with its trend self-checks");
  repro->add_option("preset", repro_args.name, "preset name (fig2..fig8)")
      ->required();
  repro->add_option("--scale", repro_args.scale, "desk or full problem size")
      ->check(CLI::IsMember({"desk", "full"}));
  repro->add_option("--trials", repro_args.trials,
                    "override the preset trial count");
  repro->add_option("--out-dir", repro_args.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 1;
  }

  try {
    if (app.got_subcommand(solve)) return run_solve(solve_args);
    if (app.got_subcommand(verify)) return run_verify(verify_args);
    if (app.got_subcommand(sweep)) return run_sweep_cmd(sweep_args);
    if (app.got_subcommand(repro)) return run_repro_cmd(repro_args);
    std::cerr << app.help() << std::flush;
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
