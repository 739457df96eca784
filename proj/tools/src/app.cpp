// Copyright 2026 The Perpetual Network Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "perpetual_cli/app.hpp"

#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "perpetual/fock_optics.hpp"
#include "perpetual/loss_detection.hpp"
#include "perpetual/montecarlo.hpp"
#include "perpetual/report.hpp"
#include "perpetual_cli/config.hpp"

namespace perpetual::cli {

namespace {

struct FlagSpec {
  const char* key;
  const char* names;
  const char* help;
};

const std::map<std::string, FlagSpec>& flag_specs() {
  static const std::map<std::string, FlagSpec> specs = {
      {"n_lines", {"n_lines", "--n,--n-lines", "number of optical lines N (even)"}},
      {"bias", {"bias", "--bias", "bias B = p_s / p_L"}},
      {"t_max", {"t_max", "--t-max", "steps per trial (default 300 N)"}},
      {"trials", {"trials", "--trials", "Monte-Carlo trials"}},
      {"seed", {"seed", "--seed", "64-bit base seed"}},
      {"p_m", {"p_m", "--p-m", "detection measurement-error probability"}},
      {"record_cadence", {"record_cadence", "--record-cadence", "steps between recorded samples"}},
      {"out", {"out", "--out", "output file (default: standard output)"}},
      {"format", {"format", "--format", "csv or json"}},
      {"source_phasing", {"source_phasing", "--source-phasing", "staggered or in-phase"}},
      {"p_s", {"p_s", "--p-s", "override the source probability 1/(3N)"}},
      {"p_l", {"p_l", "--p-l", "override the loss probability p_s/B"}},
      {"workers", {"workers", "--workers", "worker threads (0: automatic)"}},
      {"biases", {"biases", "--biases", "comma-separated bias grid"}},
      {"n_values", {"n_values", "--n-values", "comma-separated N values"}},
      {"alpha_sq", {"alpha_sq", "--alpha-sq", "comma-separated |alpha|^2 values"}},
  };
  return specs;
}

const std::vector<std::string> kSimulationKeys = {
    "n_lines", "bias", "t_max", "trials", "seed", "p_m", "record_cadence", "out", "format",
    "source_phasing", "p_s", "p_l", "workers"};

struct Command {
  CLI::App* app = nullptr;
  std::string config_path;
  std::map<std::string, std::string> flag_values;
};

// Options bind to the Command's members, so it must not move after this.
std::unique_ptr<Command> add_command(CLI::App& root, const std::string& name,
                                     const std::string& help, const std::vector<std::string>& keys) {
  auto c = std::make_unique<Command>();
  c->app = root.add_subcommand(name, help);
  c->app->add_option("--config", c->config_path, "key = value configuration file");
  for (const auto& key : keys) {
    const FlagSpec& spec = flag_specs().at(key);
    c->app->add_option(spec.names, c->flag_values[key], spec.help);
  }
  return c;
}

Settings gather(const Command& c) {
  Settings s = c.config_path.empty() ? Settings{} : load_config(c.config_path);
  for (const auto& [key, value] : c.flag_values) {
    const FlagSpec& spec = flag_specs().at(key);
    const std::string names = spec.names;
    const std::string long_name = names.substr(names.rfind(',') + 1);
    if (c.app->get_option(long_name)->count() > 0) s.set(key, value, long_name);
  }
  return s;
}

class Output {
 public:
  Output(const Config& config, std::ostream& fallback) : fallback_(fallback) {
    if (config.out) path_ = *config.out;
  }

  /// Writes to --out, or to `suffix`-tagged sibling files for secondary tables.
  void write(const Table& table, OutputFormat format, const Metadata& metadata,
             const std::string& suffix = "") {
    if (path_.empty()) {
      write_table(fallback_, table, format, metadata);
      return;
    }
    std::string path = path_;
    if (!suffix.empty()) {
      const auto dot = path.rfind('.');
      const auto slash = path.rfind('/');
      const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
      path = has_ext ? path.substr(0, dot) + suffix + path.substr(dot) : path + suffix;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file " + path);
    write_table(file, table, format, metadata);
    if (!file) throw std::runtime_error("failed writing " + path);
  }

 private:
  std::ostream& fallback_;
  std::string path_;
};

Metadata with_command(Metadata m, const std::string& command) {
  m.insert(m.begin(), {"command", command});
  return m;
}

void replace_entry(Metadata& m, const std::string& key, const std::string& value) {
  for (auto& [k, v] : m) {
    if (k == key) v = value;
  }
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (double x : xs) s += (s.empty() ? "" : ";") + format_number(x);
  return s;
}

std::string join(const std::vector<int>& xs) {
  std::string s;
  for (int x : xs) s += (s.empty() ? "" : ";") + std::to_string(x);
  return s;
}

int cmd_run(const Config& c, std::ostream& out) {
  const auto trials = run_trials(c.params, c.run);
  Output(c, out).write(timeseries_table(trials), c.format.value_or(OutputFormat::kCsv),
                       with_command(run_metadata(c.params, c.run), "run"));
  return kExitOk;
}

int cmd_sweep(Config c, std::ostream& out) {
  if (c.biases.empty()) c.biases = bias_grid();
  const auto sweep = sweep_bias(c.params, c.biases, c.run);
  Metadata m = with_command(run_metadata(c.params, c.run), "sweep-bias");
  replace_entry(m, "bias", join(c.biases));
  if (!c.params.p_l_override) replace_entry(m, "p_l", "p_s/B");
  Output(c, out).write(bias_sweep_table(sweep), c.format.value_or(OutputFormat::kCsv), m);
  return kExitOk;
}

int cmd_saturation(Config c, bool trials_given, std::ostream& out) {
  if (!trials_given) c.run.trials = kDefaultSaturationTrials;
  const auto curve = saturation_fraction(c.params, c.run);
  Output(c, out).write(saturation_table(curve), c.format.value_or(OutputFormat::kCsv),
                       with_command(run_metadata(c.params, c.run), "saturation"));
  return kExitOk;
}

int cmd_bootup(Config c, std::ostream& out, std::ostream& err) {
  if (c.n_values.empty()) c.n_values = {8, 24, 40, 56, 72, 88};
  std::vector<BootupPoint> points;
  std::vector<std::pair<double, double>> fit_points;
  for (int n : c.n_values) {
    SimParams p = c.params;
    p.n_lines = n;
    if (!c.t_max_given) p.t_max = 300 * static_cast<int64_t>(n);
    points.push_back(bootup_time(p, c.run));
    if (points.back().steps) {
      fit_points.emplace_back(n, static_cast<double>(*points.back().steps));
    } else {
      err << "N=" << n << ": no boot-up within t_max=" << p.t_max << '\n';
    }
  }
  Metadata m = with_command(run_metadata(c.params, c.run), "bootup");
  replace_entry(m, "n_lines", join(c.n_values));
  if (!c.params.p_s_override) replace_entry(m, "p_s", "1/(3N)");
  if (!c.params.p_l_override) replace_entry(m, "p_l", "p_s/B");
  if (!c.t_max_given) replace_entry(m, "t_max", "300N");
  const OutputFormat format = c.format.value_or(OutputFormat::kCsv);
  Output output(c, out);
  output.write(bootup_table(points), format, m);
  if (fit_points.size() >= 3) {
    output.write(fit_table(fit_bootup_scaling(fit_points)), format, m, "_fit");
  } else {
    err << "boot-up fit skipped: fewer than 3 configurations booted\n";
  }
  return kExitOk;
}

int cmd_distill(Config c, std::ostream& out) {
  if (c.alpha_sq.empty()) c.alpha_sq = {1e-4, 1e-3, 2e-3, 1e-2, 1e-1};
  Table t{"distill",
          {"alpha_sq", "p_plus", "p_minus", "fidelity", "infidelity", "fidelity_exact",
           "series_p_minus", "series_fidelity"},
          {}};
  for (double a : c.alpha_sq) {
    const auto closed = fock::distill_probability(a);
    const auto series = fock::measure_atom_pm(fock::dispersive_evolve(
        fock::AtomFieldState::prepare(fock::coherent_fock(a)), fock::DispersivePhase::parity()));
    const double f = fock::distill_fidelity(a);
    t.rows.push_back({a, closed.p_plus, closed.p_minus, f, 1.0 - f,
                      fock::distill_fidelity_exact(a), series.p_minus, series.fidelity_minus});
  }
  Output(c, out).write(t, c.format.value_or(OutputFormat::kCsv),
                       {{"command", "distill"},
                        {"n_max", std::to_string(fock::kDefaultMaxPhotons)},
                        {"tail_tol", format_number(fock::kDefaultTailTolerance)}});
  return kExitOk;
}

void print_detection_table(std::ostream& out) {
  const auto rows = enumerate_table();
  for (const OutcomePair& pattern : outcome_patterns()) {
    out << to_string(pattern) << "  (" << to_string(classify(pattern)) << ")\n";
    for (const TableRow& r : rows) {
      if (r.outcomes == pattern) out << "    " << describe(r.incident, r.flags) << '\n';
    }
  }
}

int cmd_table(const Config& c, std::ostream& out) {
  if (!c.format) {
    std::ostringstream text;
    print_detection_table(text);
    if (c.out) {
      std::ofstream file(*c.out, std::ios::binary);
      if (!file) throw std::runtime_error("cannot open output file " + *c.out);
      file << text.str();
    } else {
      out << text.str();
    }
    return kExitOk;
  }
  Table t{"detection_table", {"m1", "m2", "decision", "incident", "m1_error", "m2_error",
                              "loss_after_m1", "scenario"}, {}};
  for (const TableRow& r : enumerate_table()) {
    t.rows.push_back({to_string(r.outcomes.m1), to_string(r.outcomes.m2),
                      to_string(classify(r.outcomes)), to_string(r.incident),
                      int64_t{r.flags.m1_error}, int64_t{r.flags.m2_error},
                      int64_t{r.flags.loss_after_m1}, describe(r.incident, r.flags)});
  }
  Output(c, out).write(t, *c.format, {{"command", "table"}});
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Perpetual photon-recycling network simulator"};
  app.require_subcommand(1);

  std::vector<std::string> sweep_keys = kSimulationKeys;
  sweep_keys.push_back("biases");
  std::vector<std::string> bootup_keys = kSimulationKeys;
  bootup_keys.push_back("n_values");

  auto run = add_command(app, "run", "photon-count time series", kSimulationKeys);
  auto sweep = add_command(app, "sweep-bias", "final-time photon count versus B", sweep_keys);
  auto sat = add_command(app, "saturation", "fraction of saturated trials versus t",
                            kSimulationKeys);
  auto boot = add_command(app, "bootup", "boot-up time versus N and its linear fit",
                             bootup_keys);
  auto distill = add_command(app, "distill", "distillation probability and fidelity",
                                {"alpha_sq", "out", "format"});
  auto table = add_command(app, "table", "detection-outcome scenario table", {"out", "format"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (run->app->parsed()) {
      return cmd_run(resolve(gather(*run), {Requirement::kNLines, Requirement::kBias}), out);
    }
    if (sweep->app->parsed()) {
      return cmd_sweep(resolve(gather(*sweep), {Requirement::kNLines}), out);
    }
    if (sat->app->parsed()) {
      const Settings s = gather(*sat);
      return cmd_saturation(resolve(s, {Requirement::kNLines, Requirement::kBias}),
                            s.has("trials"), out);
    }
    if (boot->app->parsed()) return cmd_bootup(resolve(gather(*boot), {Requirement::kBias}), out, err);
    if (distill->app->parsed()) return cmd_distill(resolve(gather(*distill), {}), out);
    if (table->app->parsed()) return cmd_table(resolve(gather(*table), {}), out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
  return kExitConfigError;
}

}  // namespace perpetual::cli
