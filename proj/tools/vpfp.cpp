#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vpfp/errors.hpp"
#include "vpfp/experiment.hpp"
#include "vpfp/parallel.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::string names_line() {
  std::string out;
  for (const auto& n : vpfp::experiment_names()) out += (out.empty() ? "" : ", ") + n;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vlasov-Poisson-Fokker-Planck experiments"};
  std::string name, config, out_dir = ".";
  std::vector<std::string> sets;
  int threads = 0;
  app.add_option("experiment", name, "one of: " + names_line())->required();
  app.add_option("--config", config, "key=value settings file");
  app.add_option("--set", sets, "override a setting, key=value (repeatable)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads (default: VPFP_THREADS or 1)")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (!vpfp::is_experiment(name)) {
      std::cerr << "vpfp: unknown experiment '" << name << "' (expected one of: " << names_line() << ")\n";
      return kExitUsage;
    }
    if (threads > 0) vpfp::set_thread_count(threads);
    vpfp::ExperimentSpec spec;
    spec.name = name;
    spec.out_dir = out_dir;
    if (!config.empty()) spec.settings = vpfp::read_config_file(config);
    for (const auto& s : sets) spec.settings.push_back(vpfp::parse_setting(s));

    const vpfp::ExperimentResult result = vpfp::run_experiment(spec);
    for (const auto& c : result.checks)
      std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " [" << c.detail << "]\n";
    std::cout << "wrote";
    for (const auto& f : result.files) std::cout << ' ' << f;
    std::cout << " to " << out_dir << '\n';
    return result.passed() ? kExitPass : kExitAssertion;
  } catch (const vpfp::ConfigError& e) {
    std::cerr << "vpfp: configuration error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const vpfp::ArgumentError& e) {
    std::cerr << "vpfp: invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const vpfp::CapabilityError& e) {
    std::cerr << "vpfp: " << e.what() << '\n';
    return kExitUsage;
  } catch (const vpfp::NumericalError& e) {
    std::cerr << "vpfp: numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const vpfp::Error& e) {
    std::cerr << "vpfp: " << e.what() << '\n';
    return kExitNumerical;
  }
}
