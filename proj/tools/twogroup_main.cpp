#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"

#include "twogroup/twogroup.hpp"

namespace {

using twogroup::format_g17;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// One value per line; blank lines and '#' comment lines are skipped.
std::vector<double> read_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view cell = trim(line);
    if (cell.empty() || cell.front() == '#') continue;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
      twogroup::fail(twogroup::errc::non_numeric_cell,
                     path + ":" + std::to_string(line_no) + ": cannot parse '" +
                         std::string(cell) + "' as a number");
    }
    values.push_back(value);
  }
  return values;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("failed while writing '" + path + "'");
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    write_file(out_path, content);
  }
}

std::string interval_fields(const twogroup::ConfidenceInterval& ci) {
  if (ci.empty()) return ",,1";
  return format_g17(ci.lo()) + "," + format_g17(ci.hi()) + ",0";
}

// ---------------------------------------------------------------------------
// infer

struct InferOptions {
  std::string group0_path;
  std::string group1_path;
  double alpha = 0.05;
  std::string out_path;
};

int run_infer(const InferOptions& opt) {
  twogroup::TwoGroupSample sample;
  sample.y0 = read_column(opt.group0_path);
  sample.y1 = read_column(opt.group1_path);

  twogroup::InferenceConfig config;
  config.alpha = opt.alpha;
  const twogroup::InferenceResult proposed = twogroup::infer(sample, config);
  const twogroup::WelchResult welch = twogroup::welch_infer(sample, opt.alpha);

  std::ostringstream out;
  out << "delta_hat,rmse,ci_lo,ci_hi,empty,significant,"
         "welch_delta,welch_lo,welch_hi,welch_significant,"
         "mu_hat,rho_hat,v0_hat,v1_hat\n";
  out << format_g17(proposed.delta_hat) << ',' << format_g17(proposed.rmse) << ','
      << interval_fields(proposed.interval) << ',' << (proposed.significant ? '1' : '0') << ','
      << format_g17(welch.delta_hat) << ',' << format_g17(welch.interval.lo()) << ','
      << format_g17(welch.interval.hi()) << ',' << (welch.significant ? '1' : '0') << ','
      << format_g17(proposed.params.mu) << ',' << format_g17(proposed.params.rho) << ','
      << format_g17(proposed.params.v0) << ',' << format_g17(proposed.params.v1) << '\n';
  emit(opt.out_path, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
  std::string preset;
  twogroup::SimScenario scenario;  // defaults match the fig1 base setup
  double bias_units = 0.0;         // in units of sqrt(v0/n0)
  std::string sweep = "none";
  std::vector<double> grid;
  std::size_t bins = 61;
  int threads = 0;
  std::string out_path;
  std::string gnuplot_path;
};

std::vector<double> default_bias_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(0.1 * static_cast<double>(i));
  return grid;
}

void apply_preset(SimulateOptions& opt) {
  // Every preset starts from the default scenario (n0=40, n1=20, mu=1,
  // v0=0.09, v1=0.0225, alpha=0.05).
  if (opt.preset == "fig1") {
    opt.sweep = "bias";
    opt.grid = default_bias_grid();
  } else if (opt.preset == "fig2a") {
    opt.sweep = "none";
    opt.bias_units = -1.0;
    opt.scenario.delta_true = 0.0;
  } else if (opt.preset == "fig2b") {
    opt.sweep = "none";
    opt.bias_units = -1.0;
    opt.scenario.delta_true = std::sqrt(opt.scenario.v0);
  } else if (opt.preset == "fig3a" || opt.preset == "fig3b") {
    opt.sweep = "n0";
    opt.grid = {20.0, 40.0, 80.0, 160.0};
  } else {
    throw UsageError("unknown preset '" + opt.preset +
                     "', expected fig1, fig2a, fig2b, fig3a or fig3b");
  }
}

std::string scenario_comment(const twogroup::SimScenario& s) {
  std::ostringstream out;
  out << "# n0=" << s.n0 << " n1=" << s.n1 << " mu=" << format_g17(s.mu) << " v0="
      << format_g17(s.v0) << " v1=" << format_g17(s.v1) << " delta_true="
      << format_g17(s.delta_true) << " bias=" << format_g17(s.bias) << " alpha="
      << format_g17(s.alpha) << " replications=" << s.replications << " seed=" << s.seed
      << '\n';
  return out.str();
}

std::string sweep_table(const std::vector<twogroup::ErrorRateRow>& rows) {
  std::ostringstream out;
  out << "sweep_value,fp_rate_proposed,fp_rate_welch,"
         "fn_rate_proposed,fn_rate_welch,empty_rate_proposed\n";
  for (const auto& row : rows) {
    out << format_g17(row.sweep_value) << ',' << format_g17(row.fp_rate_proposed) << ','
        << format_g17(row.fp_rate_welch) << ',';
    if (row.fn_rate_proposed) out << format_g17(*row.fn_rate_proposed);
    out << ',';
    if (row.fn_rate_welch) out << format_g17(*row.fn_rate_welch);
    out << ',' << format_g17(row.empty_rate_proposed) << '\n';
  }
  return out.str();
}

std::string histogram_table(const twogroup::ReplicationOutcome& out_come, std::size_t bins) {
  double lo = out_come.delta_proposed.front();
  double hi = lo;
  for (const auto* deltas : {&out_come.delta_proposed, &out_come.delta_welch}) {
    for (double v : *deltas) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const twogroup::Histogram proposed =
      twogroup::make_histogram(out_come.delta_proposed, bins, lo, hi);
  const twogroup::Histogram welch = twogroup::make_histogram(out_come.delta_welch, bins, lo, hi);

  std::ostringstream out;
  out << "# significant_proposed=" << out_come.significant_proposed << " significant_welch="
      << out_come.significant_welch << " empty_proposed=" << out_come.empty_proposed
      << " zero_proposed=" << out_come.zero_proposed << '\n';
  out << "bin_lo,bin_hi,count_proposed,count_welch\n";
  const double width = proposed.bin_width();
  for (std::size_t b = 0; b < bins; ++b) {
    const double bin_lo = lo + width * static_cast<double>(b);
    const double bin_hi = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
    out << format_g17(bin_lo) << ',' << format_g17(bin_hi) << ',' << proposed.counts[b] << ','
        << welch.counts[b] << '\n';
  }
  return out.str();
}

std::string simulate_gnuplot(const std::string& csv, const std::string& mode) {
  std::ostringstream out;
  out << "# companion plot for " << csv << "\n";
  out << "set datafile separator ','\n";
  out << "set key outside\n";
  if (mode == "bias") {
    out << "set xlabel 'bias (units of sqrt(v0/n0))'\n";
    out << "set ylabel 'false positive rate'\n";
    out << "plot '" << csv << "' skip 1 using 1:2 with linespoints title 'shrinkage', \\\n"
        << "     '" << csv << "' skip 1 using 1:3 with linespoints title 'welch'\n";
  } else if (mode == "n0") {
    out << "set xlabel 'n0 (n1 = n0/2)'\n";
    out << "set ylabel 'error rate'\n";
    out << "set logscale x 2\n";
    out << "plot '" << csv << "' skip 1 using 1:2 with linespoints title 'fp shrinkage', \\\n"
        << "     '" << csv << "' skip 1 using 1:3 with linespoints title 'fp welch', \\\n"
        << "     '" << csv << "' skip 1 using 1:4 with linespoints title 'fn shrinkage', \\\n"
        << "     '" << csv << "' skip 1 using 1:5 with linespoints title 'fn welch'\n";
  } else {
    out << "set style fill solid 0.4\n";
    out << "set xlabel 'effect estimate'\n";
    out << "set ylabel 'count'\n";
    out << "plot '" << csv << "' skip 1 using (($1+$2)/2):3 with boxes title 'shrinkage', \\\n"
        << "     '" << csv << "' skip 1 using (($1+$2)/2):4 with boxes title 'welch'\n";
  }
  return out.str();
}

int run_simulate(SimulateOptions& opt) {
  if (!opt.preset.empty()) apply_preset(opt);
  if (opt.sweep != "none" && opt.sweep != "bias" && opt.sweep != "n0") {
    throw UsageError("--sweep must be none, bias or n0");
  }
  if (opt.sweep != "none" && opt.bias_units != 0.0) {
    throw UsageError("--bias applies to single runs only; sweeps set the bias per row");
  }
  if (!opt.gnuplot_path.empty() && opt.out_path.empty()) {
    throw UsageError("--gnuplot-script needs --out so the script can name the data file");
  }

  std::string table;
  std::string mode = opt.sweep;
  if (opt.sweep == "bias") {
    if (opt.grid.empty()) throw UsageError("--sweep bias needs a --grid of bias values");
    const auto rows = twogroup::sweep_bias(opt.scenario, opt.grid, {}, opt.threads);
    table = scenario_comment(opt.scenario) + sweep_table(rows);
  } else if (opt.sweep == "n0") {
    if (opt.grid.empty()) throw UsageError("--sweep n0 needs a --grid of group sizes");
    std::vector<std::size_t> n0_grid;
    n0_grid.reserve(opt.grid.size());
    for (double g : opt.grid) {
      if (!(g > 0.0) || g != std::floor(g)) {
        throw UsageError("--grid values for an n0 sweep must be positive integers");
      }
      n0_grid.push_back(static_cast<std::size_t>(g));
    }
    const auto rows = twogroup::sweep_n0(opt.scenario, n0_grid, {}, opt.threads);
    table = scenario_comment(opt.scenario) + sweep_table(rows);
  } else {
    opt.scenario.bias = opt.bias_units * twogroup::bias_unit(opt.scenario);
    const auto outcome = twogroup::run_replications(opt.scenario, {}, opt.threads);
    table = scenario_comment(opt.scenario) + histogram_table(outcome, opt.bins);
    mode = "histogram";
  }

  emit(opt.out_path, table);
  if (!opt.gnuplot_path.empty()) {
    write_file(opt.gnuplot_path, simulate_gnuplot(opt.out_path, mode));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// batch

struct BatchOptions {
  std::string input_path;
  double alpha = 0.05;
  int threads = 0;
  std::string out_path;
  std::string gnuplot_path;
};

std::string batch_gnuplot(const std::string& csv) {
  std::ostringstream out;
  out << "# companion plot for " << csv << "\n";
  out << "set datafile separator ','\n";
  out << "set key outside\n";
  out << "set xlabel 'marker index'\n";
  out << "set ylabel 'effect'\n";
  out << "plot '" << csv << "' skip 1 using 0:2:4:5 with yerrorbars pt 7 ps 0.3 "
         "title 'shrinkage interval', \\\n"
      << "     '" << csv << "' skip 1 using 0:8 with points pt 1 ps 0.3 title 'welch estimate'\n";
  return out.str();
}

int run_batch(const BatchOptions& opt) {
  if (!opt.gnuplot_path.empty() && opt.out_path.empty()) {
    throw UsageError("--gnuplot-script needs --out so the script can name the data file");
  }
  std::ifstream in(opt.input_path);
  if (!in) throw std::runtime_error("cannot open '" + opt.input_path + "' for reading");
  const twogroup::MarkerDataset dataset = twogroup::parse_matrix(in);
  const twogroup::BatchResult result = twogroup::analyze_all(dataset, opt.alpha, {}, opt.threads);

  std::ostringstream table;
  twogroup::write_results_csv(table, result);
  emit(opt.out_path, table.str());

  for (const auto& marker : result.markers) {
    if (!marker.ok()) {
      std::cerr << "marker '" << marker.id << "' failed: " << marker.status << '\n';
    }
  }
  std::ostringstream summary;
  summary << "significant_proposed=" << result.summary.significant_proposed
          << " significant_welch=" << result.summary.significant_welch << " empty_proposed="
          << result.summary.empty_proposed << " failed=" << result.summary.failed << '\n';
  if (opt.out_path.empty()) {
    std::cerr << summary.str();
  } else {
    std::cout << summary.str();
  }
  if (!opt.gnuplot_path.empty()) {
    write_file(opt.gnuplot_path, batch_gnuplot(opt.out_path));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bias-resilient effect inference for two-group data"};
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 success, 1 usage error, 2 data or runtime error.\n"
      "All tables are CSV with 17-significant-digit numbers, so identical\n"
      "inputs, seed and thread settings reproduce byte-identical files.");

  InferOptions infer_opt;
  CLI::App* infer_cmd =
      app.add_subcommand("infer", "Analyze one sample from two single-column files");
  infer_cmd->add_option("--group0", infer_opt.group0_path, "reference group, one value per line")
      ->required();
  infer_cmd->add_option("--group1", infer_opt.group1_path, "test group, one value per line")
      ->required();
  infer_cmd->add_option("--alpha", infer_opt.alpha, "miscoverage level")->capture_default_str();
  infer_cmd->add_option("--out", infer_opt.out_path, "output CSV path (default stdout)");

  SimulateOptions sim_opt;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte Carlo error-rate experiments");
  CLI::Option* preset_opt =
      sim_cmd->add_option("--preset", sim_opt.preset,
                          "canned experiment: fig1 (bias sweep), fig2a/fig2b (estimate "
                          "histograms without/with a true effect), fig3a/fig3b (sample-size "
                          "sweep)");
  CLI::Option* n0_opt =
      sim_cmd->add_option("--n0", sim_opt.scenario.n0, "reference group size")
          ->capture_default_str();
  CLI::Option* n1_opt =
      sim_cmd->add_option("--n1", sim_opt.scenario.n1, "test group size")->capture_default_str();
  CLI::Option* mu_opt =
      sim_cmd->add_option("--mu", sim_opt.scenario.mu, "overall mean")->capture_default_str();
  CLI::Option* v0_opt =
      sim_cmd->add_option("--v0", sim_opt.scenario.v0, "reference noise variance")
          ->capture_default_str();
  CLI::Option* v1_opt = sim_cmd->add_option("--v1", sim_opt.scenario.v1, "test noise variance")
                            ->capture_default_str();
  CLI::Option* delta_opt =
      sim_cmd->add_option("--delta", sim_opt.scenario.delta_true, "true effect")
          ->capture_default_str();
  CLI::Option* bias_opt =
      sim_cmd->add_option("--bias", sim_opt.bias_units,
                          "sampling bias in units of sqrt(v0/n0), single runs only")
          ->capture_default_str();
  CLI::Option* sweep_opt =
      sim_cmd->add_option("--sweep", sim_opt.sweep, "none, bias or n0")->capture_default_str();
  CLI::Option* grid_opt =
      sim_cmd->add_option("--grid", sim_opt.grid,
                          "comma-separated sweep grid: bias units or n0 values")
          ->delimiter(',');
  sim_cmd->add_option("--alpha", sim_opt.scenario.alpha, "miscoverage level")
      ->capture_default_str();
  sim_cmd->add_option("--replications", sim_opt.scenario.replications,
                      "Monte Carlo replications per row")
      ->capture_default_str();
  sim_cmd->add_option("--seed", sim_opt.scenario.seed, "base seed; replication r uses substream r")
      ->capture_default_str();
  sim_cmd->add_option("--threads", sim_opt.threads, "worker threads, 0 = all hardware threads")
      ->capture_default_str();
  sim_cmd->add_option("--bins", sim_opt.bins, "histogram bins for single runs")
      ->capture_default_str();
  sim_cmd->add_option("--out", sim_opt.out_path, "output CSV path (default stdout)");
  sim_cmd->add_option("--gnuplot-script", sim_opt.gnuplot_path,
                      "also write a gnuplot script for the table (needs --out)");

  BatchOptions batch_opt;
  CLI::App* batch_cmd =
      app.add_subcommand("batch", "Analyze every marker of a two-group matrix CSV");
  batch_cmd->add_option("--input", batch_opt.input_path, "marker matrix CSV")->required();
  batch_cmd->add_option("--alpha", batch_opt.alpha, "miscoverage level")->capture_default_str();
  batch_cmd->add_option("--threads", batch_opt.threads, "worker threads, 0 = all hardware threads")
      ->capture_default_str();
  batch_cmd->add_option("--out", batch_opt.out_path,
                        "per-marker results path (default stdout); the summary goes to the "
                        "other stream");
  batch_cmd->add_option("--gnuplot-script", batch_opt.gnuplot_path,
                        "also write a gnuplot script for the results (needs --out)");

  try {
    app.parse(argc, argv);

    if (sim_cmd->parsed() && !sim_opt.preset.empty()) {
      for (const CLI::Option* o :
           {n0_opt, n1_opt, mu_opt, v0_opt, v1_opt, delta_opt, bias_opt, sweep_opt, grid_opt}) {
        if (o->count() > 0) {
          throw UsageError("--preset fixes the scenario; drop " + o->get_name() +
                           " or run without a preset");
        }
      }
      (void)preset_opt;
    }

    if (infer_cmd->parsed()) return run_infer(infer_opt);
    if (sim_cmd->parsed()) return run_simulate(sim_opt);
    if (batch_cmd->parsed()) return run_batch(batch_opt);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
