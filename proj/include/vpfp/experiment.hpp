#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace vpfp {

/// key=value settings; later entries override earlier ones.
using Settings = std::vector<std::pair<std::string, std::string>>;

/// Reads a flat key=value file ('#' starts a comment, blank lines ignored).
/// Throws ConfigError on a malformed line or a missing file.
Settings read_config_file(const std::string& path);

/// Parses "key=value". Throws ConfigError without '='.
std::pair<std::string, std::string> parse_setting(const std::string& text);

/// Typed view of the settings of one experiment. A parameter p of
/// experiment e is looked up as "e.p" first and then as plain "p"; keys of
/// other namespaces are ignored. finish() rejects keys in the experiment's
/// namespace (or unqualified) that were never read.
class Params {
 public:
  Params(std::string ns, const Settings& settings);

  double real(const std::string& key, double fallback);
  int integer(const std::string& key, int fallback);
  bool flag(const std::string& key, bool fallback);
  std::string text(const std::string& key, const std::string& fallback);
  std::vector<double> reals(const std::string& key, const std::vector<double>& fallback);

  void finish() const;
  const std::map<std::string, std::string>& resolved() const { return resolved_; }

 private:
  const std::string* find(const std::string& key);

  std::string ns_;
  std::map<std::string, std::string> qualified_, plain_;
  std::set<std::string> used_;
  std::map<std::string, std::string> resolved_;
};

struct ExperimentSpec {
  std::string name;
  Settings settings;
  std::string out_dir = ".";
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentResult {
  std::string name;
  std::vector<Check> checks;
  nlohmann::json summary;
  std::vector<std::string> files;

  bool passed() const;
};

const std::vector<std::string>& experiment_names();
bool is_experiment(const std::string& name);

/// Runs a named experiment, writes its artifacts into out_dir and returns
/// the embedded checks. Module errors are rethrown with the experiment name
/// prefixed, keeping their category (configuration, argument, numerical).
ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace vpfp
