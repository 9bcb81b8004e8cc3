// Command-line driver: run, verify, mms and sweep.
//
// Exit codes: 0 success, 2 an interface iteration did not converge, 1 any error.
#include "evodd/config.hpp"
#include "evodd/error.hpp"
#include "evodd/harness.hpp"
#include "evodd/parallel.hpp"
#include "evodd/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kNotConverged = 2;

void print_report(const evodd::ExperimentResult& result) {
  const auto& r = result.report;
  std::cout << "method " << evodd::to_string(r.method) << ": " << evodd::to_string(r.status) << " after "
            << r.iterations << " sweeps";
  if (!r.rows.empty()) std::cout << ", err_Z=" << r.rows.back().err_z;
  std::cout << ", max nodal diff=" << r.max_nodal_diff << "\n";
  for (const auto& f : result.files) std::cout << "  wrote " << f.string() << "\n";
}

int cmd_run(const std::string& path) {
  const auto config = evodd::load_config(path);
  const auto result = evodd::run_experiment(config);
  print_report(result);
  return result.report.status == evodd::Status::converged ? kOk : kNotConverged;
}

int cmd_verify(std::uint64_t seed) {
  evodd::VerifyOptions options;
  options.seed = seed;
  options.on_result = [](const evodd::CriterionResult& r) {
    std::printf("%s %2d %-30s %7.2fs  %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
  };
  int failed = 0;
  for (const auto& r : evodd::run_verification_suite(options)) failed += r.passed ? 0 : 1;
  return failed == 0 ? kOk : kError;
}

int cmd_mms(const std::string& path) {
  const auto config = evodd::load_config(path);
  const auto table = evodd::mms_convergence_study(config, config.mms.levels);
  const auto dir = evodd::resolve_output_dir(config);
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "mms.csv");
  out << std::setprecision(17) << "study,h,dt,error,order\n";
  std::cout << std::setprecision(6);
  auto emit = [&](const char* study, const std::vector<evodd::MmsRow>& rows) {
    for (const auto& row : rows) {
      out << study << ',' << row.h << ',' << row.dt << ',' << row.error << ',' << row.order << '\n';
      std::cout << study << "  h=" << row.h << "  dt=" << row.dt << "  error=" << row.error << "  order=" << row.order
                << "\n";
    }
  };
  emit("spatial", table.spatial);
  emit("temporal", table.temporal);
  std::cout << "  wrote " << (dir / "mms.csv").string() << "\n";
  return kOk;
}

void set_param(evodd::ExperimentConfig& config, const std::string& param, double value) {
  if (param == "s0") {
    config.method.s0 = value;
  } else if (param == "s1") {
    config.method.s1 = value;
  } else if (param == "s2") {
    config.method.s2 = value;
  } else if (param == "s3") {
    config.method.s3 = value;
  } else if (param == "beta") {
    config.coefficients.beta = value;
  } else {
    throw evodd::Error(evodd::ErrorKind::configuration, "cli",
                       "unknown sweep parameter '" + param + "' (expected s0, s1, s2, s3 or beta)");
  }
}

int cmd_sweep(const std::string& path, const std::string& param, const std::vector<double>& values) {
  const auto base = evodd::load_config(path);
  const auto root = evodd::resolve_output_dir(base);
  std::filesystem::create_directories(root);
  std::ofstream table(root / "sweep.csv");
  table << std::setprecision(17) << param << ",status,iterations,final_err_Z\n";
  bool all_converged = true;
  for (double v : values) {
    auto config = base;
    set_param(config, param, v);
    config.method.validate();
    std::ostringstream sub;
    sub << param << '_' << v;
    const auto result = evodd::run_experiment(config, root / sub.str());
    std::cout << param << "=" << v << "  ";
    print_report(result);
    const auto& r = result.report;
    table << v << ',' << evodd::to_string(r.status) << ',' << r.iterations << ','
          << (r.rows.empty() ? 0.0 : r.rows.back().err_z) << '\n';
    all_converged = all_converged && r.status == evodd::Status::converged;
  }
  std::cout << "  wrote " << (root / "sweep.csv").string() << "\n";
  return all_converged ? kOk : kNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-overlapping domain decomposition for parabolic problems on evolving domains"};
  app.require_subcommand(1);

  std::string config_path;
  std::string param;
  std::vector<double> values;
  std::uint64_t seed = 20240601;

  auto* run = app.add_subcommand("run", "Run the configured interface iteration");
  run->add_option("config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  verify->add_option("--seed", seed, "Seed for the randomized checks");
  auto* mms = app.add_subcommand("mms", "Manufactured-solution convergence study");
  mms->add_option("config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
  auto* sweep = app.add_subcommand("sweep", "Repeat a run over values of one parameter");
  sweep->add_option("config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
  sweep->add_option("--param", param, "s0, s1, s2, s3 or beta")->required();
  sweep->add_option("--values", values, "Parameter values")->required()->expected(1, -1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  try {
    evodd::configure_workers_from_env();
    if (*run) return cmd_run(config_path);
    if (*verify) return cmd_verify(seed);
    if (*mms) return cmd_mms(config_path);
    if (*sweep) return cmd_sweep(config_path, param, values);
  } catch (const std::exception& e) {
    std::cerr << "evodd: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
