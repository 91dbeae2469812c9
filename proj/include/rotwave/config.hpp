// Plain-text key=value run configuration with an include directive, plus CSV
// output helpers. Unknown keys are rejected; the resolved configuration is
// echoed into the output directory for reproducibility.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "rotwave/solver.hpp"

namespace rotwave {

// Parses `key = value` lines ('#' comments, blank lines ignored). A line
// `include PATH` splices another file (relative to the including file).
// Later assignments win.
std::map<std::string, std::string> parse_config_file(const std::string& path);

struct RunConfig {
  SimConfig sim;
  std::string out_dir;
  std::string suite = "all";
  std::vector<double> eps_list{0.05, 0.1, 0.2};
  std::vector<uint64_t> seeds{1, 2, 3, 4, 5};
  double threshold_factor = 10.0;
  std::vector<double> decay_times;
  int decay_band_k = 0;
  int decay_band_p = -1;
  int decay_band_q = 0;
  int quad_n_rho = 768;
  int quad_n_lam = 1024;

  // Applies `key=value` entries; throws on unknown keys or bad values.
  void apply(const std::map<std::string, std::string>& kv);
  // Fully resolved key=value text (echoed for reproducibility).
  std::string echo() const;
};

// CSV with comma separator, '.' decimal point, LF line endings.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();
  void header(const std::vector<std::string>& cols);
  void row(const std::vector<std::string>& cells);
  static std::string num(double v);

 private:
  struct Impl;
  Impl* impl_;
};

// ---- CLI entry points (exit code 0 = pass, 1 = failure, 2 = usage) ---------

int cmd_verify(const RunConfig& cfg);
int cmd_decay(const RunConfig& cfg);
int cmd_simulate(const RunConfig& cfg);
int cmd_lifespan(const RunConfig& cfg);
int cmd_norms(const RunConfig& cfg, const std::string& snapshot_path);

}  // namespace rotwave
