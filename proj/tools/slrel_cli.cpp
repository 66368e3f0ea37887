#include <CLI11.hpp>

#include <iostream>

#include "slrel/slrel.hpp"

namespace {

enum ExitCode : int { kOk = 0, kConfigError = 2, kDataError = 3, kInternalError = 4 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subjective-logic reliability estimation for roadside perception data"};
  app.require_subcommand(1);

  slrel::SimulateArgs sim;
  std::uint64_t seed = 0;
  auto* simulate = app.add_subcommand("simulate", "Simulate a scenario into <out>/stream.ndjson");
  simulate->add_option("--config", sim.config, "Scenario config (JSON)")->required();
  simulate->add_option("--out", sim.out, "Output directory")->required();
  simulate->add_option("--set", sim.overrides, "Config override key=value (repeatable)");
  auto* seed_opt = simulate->add_option("--seed", seed, "Override the scenario seed");

  slrel::CommissionArgs com;
  auto* commission = app.add_subcommand("commission", "Build lane references into <out>/references.json");
  commission->add_option("--stream", com.streams, "Fault-free stream file (repeatable)")->required();
  commission->add_option("--out", com.out, "Output directory")->required();

  slrel::EstimateArgs est;
  std::string label;
  auto* estimate = app.add_subcommand("estimate", "Estimate RSU reliability into <out>/metrics.ndjson and verdict.json");
  estimate->add_option("--stream", est.stream, "Stream file")->required();
  estimate->add_option("--reference", est.reference, "References file")->required();
  estimate->add_option("--out", est.out, "Output directory")->required();
  estimate->add_option("--set", est.overrides, "Estimator override key=value (repeatable)");
  auto* label_opt =
      estimate->add_option("--label", label, "Ground-truth label")->check(CLI::IsMember({"correct", "faulty"}));

  slrel::EvaluateArgs eval;
  auto* evaluate = app.add_subcommand("evaluate", "Class separation into <out>/report.json and beta.csv");
  evaluate->add_option("--input", eval.inputs, "verdict.json file (repeatable)")->required();
  evaluate->add_option("--out", eval.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (simulate->parsed()) {
      if (seed_opt->count() > 0) sim.seed = seed;
      std::cout << slrel::cmd_simulate(sim).string() << '\n';
    } else if (commission->parsed()) {
      std::cout << slrel::cmd_commission(com).string() << '\n';
    } else if (estimate->parsed()) {
      if (label_opt->count() > 0) est.label = slrel::parse_label(label);
      const auto v = slrel::cmd_estimate(est);
      std::cout << v.scenario_id << ' ' << slrel::to_string(v.label) << " projected=" << v.verdict.projected
                << '\n';
    } else if (evaluate->parsed()) {
      const auto r = slrel::cmd_evaluate(eval);
      std::cout << "margin=" << r.margin << (r.separated() ? " separated" : " not separated") << '\n';
    }
    return kOk;
  } catch (const slrel::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const slrel::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const slrel::Error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}
