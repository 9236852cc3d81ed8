#pragma once

// Command-line front end. Kept in a header so the test suite can drive
// run_cli() in-process with string streams.
//
// Exit codes: 0 success, 1 numerical or I/O failure, 2 usage error.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "monoscore/monoscore.hpp"

namespace monoscore::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline double parse_double(const std::string& text) {
  std::istringstream is(text);
  is.imbue(std::locale::classic());
  double v = 0.0;
  is >> v;
  if (is.fail() || !is.eof()) throw UsageError("not a number: '" + text + "'");
  return v;
}

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

}  // namespace detail

/// Alpha grid syntax: pieces joined by '+', each one of
///   default | lin:LO:HI:STEP | geom:LO:HI:COUNT | a,b,c
inline std::vector<double> parse_alpha_grid(const std::string& text) {
  std::vector<double> grid;
  for (const auto& piece : detail::split(text, '+')) {
    if (piece == "default") {
      const auto d = default_alpha_grid();
      grid.insert(grid.end(), d.begin(), d.end());
    } else if (piece.rfind("lin:", 0) == 0 || piece.rfind("geom:", 0) == 0) {
      const auto parts = detail::split(piece, ':');
      if (parts.size() != 4) throw UsageError("alpha grid piece needs 3 parameters: '" + piece + "'");
      const double lo = detail::parse_double(parts[1]);
      const double hi = detail::parse_double(parts[2]);
      const double third = detail::parse_double(parts[3]);
      if (!(lo > 0.0) || !(hi >= lo)) throw UsageError("alpha grid range must satisfy 0 < lo <= hi: '" + piece + "'");
      if (parts[0] == "lin") {
        if (!(third > 0.0)) throw UsageError("alpha grid step must be positive");
        const auto count = static_cast<long>(std::floor((hi - lo) / third + 1e-9));
        if (count > 1000000) throw UsageError("alpha grid too large");
        for (long k = 0; k <= count; ++k) grid.push_back(lo + third * static_cast<double>(k));
      } else {
        const auto count = static_cast<long>(third);
        if (count < 1 || static_cast<double>(count) != third || count > 1000000) {
          throw UsageError("geom count must be a positive integer");
        }
        if (count == 1) {
          grid.push_back(lo);
        } else {
          const double ratio = std::pow(hi / lo, 1.0 / static_cast<double>(count - 1));
          for (long k = 0; k < count; ++k) grid.push_back(lo * std::pow(ratio, static_cast<double>(k)));
        }
      }
    } else {
      for (const auto& item : detail::split(piece, ',')) grid.push_back(detail::parse_double(item));
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.empty()) throw UsageError("empty alpha grid");
  if (!(grid.front() > 0.0)) throw UsageError("alpha grid entries must be positive");
  return grid;
}

struct RunOptions {
  std::string state_class = "haar";
  int qubits = 3;
  std::string measure;
  std::string direction;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  std::string alpha_grid = "default";
  std::string out;
  std::string format = "json";
  unsigned workers = default_worker_count();
  int nodal = 0;
  std::string dump_states;
  bool verbose = false;
};

inline EnsembleSpec make_spec(const RunOptions& o) {
  EnsembleSpec spec;
  try {
    spec.state_class = parse_state_class(o.state_class);
    spec.measure = parse_measure(o.measure);
    if (!o.direction.empty()) {
      if (spec.measure.direction() == Direction::none) {
        throw UsageError("--direction applies to discord and work-deficit only");
      }
      if (o.direction != "left" && o.direction != "right") throw UsageError("--direction must be left or right");
      spec.measure = MeasureKind::make(spec.measure.family(),
                                       o.direction == "left" ? Direction::left : Direction::right);
    }
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  spec.n_qubits = o.qubits;
  spec.n_samples = o.samples;
  spec.base_seed = o.seed;
  spec.alpha_grid = parse_alpha_grid(o.alpha_grid);
  spec.workers = o.workers;
  spec.nodal = o.nodal;
  if (spec.n_samples < 2) throw UsageError("--samples must be at least 2");
  try {
    spec.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  return spec;
}

inline void add_run_options(CLI::App& cmd, RunOptions& o) {
  cmd.add_option("--class", o.state_class, "State class: haar or w")->capture_default_str();
  cmd.add_option("--qubits", o.qubits, "Number of qubits (w class: 3)")->capture_default_str();
  cmd.add_option("--measure", o.measure,
                 "concurrence, eof, negativity, log-negativity, discord[-left|-right], work-deficit[-left|-right]")
      ->required();
  cmd.add_option("--direction", o.direction, "Measured party for discord / work deficit: left or right");
  cmd.add_option("--samples", o.samples, "Number of sampled states")->capture_default_str();
  cmd.add_option("--seed", o.seed, "Base seed")->capture_default_str();
  cmd.add_option("--alpha-grid", o.alpha_grid, "default | lin:LO:HI:STEP | geom:LO:HI:COUNT | a,b,c (join with +)")
      ->capture_default_str();
  cmd.add_option("--out", o.out, "Output file (default stdout)");
  cmd.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  cmd.add_option("--workers", o.workers, "Worker threads (env MONOSCORE_WORKERS)")->capture_default_str();
  cmd.add_option("--nodal", o.nodal, "Nodal qubit, 0-based")->capture_default_str();
  cmd.add_option("--dump-states", o.dump_states, "Write sampled states as JSON lines to this file");
  cmd.add_flag("-v,--verbose", o.verbose, "Progress on stderr");
}

/// Runs `body` with the requested output stream.
template <typename Body>
void with_output(const std::string& path, std::ostream& fallback, Body&& body) {
  if (path.empty()) {
    body(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  body(file);
  file.flush();
  if (!file) throw std::runtime_error("write failed: " + path);
}

inline void dump_states(const EnsembleSpec& spec, const std::string& path) {
  with_output(path, std::cout, [&](std::ostream& os) {
    for (std::size_t k = 0; k < spec.n_samples; ++k) {
      const RandomSeed seed{spec.base_seed, k};
      os << state_to_json(sample_state(spec.state_class, spec.n_qubits, seed), seed).dump() << "\n";
    }
  });
}

inline std::vector<MonogamyRecord> run_logged(const EnsembleSpec& spec, bool verbose, std::ostream& err) {
  if (verbose) {
    err << "sampling " << spec.n_samples << " " << to_string(spec.state_class) << " states, N=" << spec.n_qubits
        << ", measure " << spec.measure.name() << ", " << spec.workers << " worker(s)\n";
  }
  auto records = run_ensemble(spec);
  if (verbose) err << "done\n";
  return records;
}

inline void cmd_sweep(const RunOptions& o, std::ostream& out, std::ostream& err) {
  const auto spec = make_spec(o);
  if (!o.dump_states.empty()) dump_states(spec, o.dump_states);
  const auto records = run_logged(spec, o.verbose, err);
  const auto summary = summarize(spec, records, {});
  with_output(o.out, out, [&](std::ostream& os) {
    if (o.format == "csv") {
      write_sweep_csv(os, summary);
    } else {
      os << summary_to_json(summary).dump(2) << "\n";
    }
  });
}

struct StatsOptions {
  double alpha = 1.0;
  std::vector<double> histogram;
  std::string scores;
};

inline void cmd_stats(const RunOptions& o, const StatsOptions& s, std::ostream& out, std::ostream& err) {
  const auto spec = make_spec(o);
  if (!(s.alpha > 0.0) || !std::isfinite(s.alpha)) throw UsageError("--alpha must be positive");
  SummaryOptions options;
  options.moment_alphas = {s.alpha};
  options.histogram_alpha = s.alpha;
  if (!s.histogram.empty()) {
    const double bins = s.histogram[0];
    if (bins < 1 || bins != std::floor(bins) || bins > 1e6) throw UsageError("--histogram BINS must be a positive integer");
    if (!(s.histogram[1] < s.histogram[2])) throw UsageError("--histogram needs LO < HI");
    options.histogram_request = HistogramRequest{static_cast<int>(bins), s.histogram[1], s.histogram[2]};
  }
  if (!o.dump_states.empty()) dump_states(spec, o.dump_states);
  const auto records = run_logged(spec, o.verbose, err);
  const auto summary = summarize(spec, records, options);
  with_output(o.out, out, [&](std::ostream& os) {
    if (o.format == "csv") {
      write_stats_csv(os, summary);
    } else {
      auto j = summary_to_json(summary);
      j.erase("f_curve");
      os << j.dump(2) << "\n";
    }
  });
  if (!s.scores.empty()) {
    with_output(s.scores, out, [&](std::ostream& os) { write_scores_csv(os, spec, s.alpha, records); });
  }
}

// ---------------------------------------------------------------------------
// table: reruns the ensembles behind the published tables and prints each
// cell next to its reference value.

struct ReferenceCell {
  std::string measure;  ///< parse_measure name
  std::string state_class;
  int n_qubits = 3;
  double alpha = 1.0;  ///< power for moment cells
  std::string quantity;
  std::optional<double> reference;  ///< empty when the published cell is not a number
  std::string reference_text;
};

inline std::vector<ReferenceCell> reference_table(int id) {
  std::vector<ReferenceCell> cells;
  auto num = [](double v) { return std::optional<double>(v); };
  switch (id) {
    case 1: {
      struct Row {
        const char* m;
        double gp, gc, wp, wc;
        bool over_ten;
      };
      const Row rows[] = {{"negativity", 0.1467, 1.6735, 0.0991, 1.9885, false},
                          {"log-negativity", 0.1497, 1.8540, 0.0991, 2.0, false},
                          {"concurrence", 0.1470, 2.0, 2.0, 2.0, false},
                          {"eof", 0.0866, 1.3520, 1.0410, 1.4280, false},
                          {"discord-left", 0.1163, 3.4317, 0.8382, 9.3492, false},
                          {"discord-right", 0.0968, 1.3520, 0.9797, 1.3608, false},
                          {"work-deficit-left", 0.1183, 0.0, 0.9630, 0.0, true},
                          {"work-deficit-right", 0.0989, 0.0, 0.9799, 0.0, true}};
      for (const auto& r : rows) {
        cells.push_back({r.m, "haar", 3, 1.0, "alpha_p", num(r.gp), ""});
        cells.push_back({r.m, "haar", 3, 1.0, "alpha_c", r.over_ten ? std::nullopt : num(r.gc), r.over_ten ? ">10" : ""});
        cells.push_back({r.m, "w", 3, 1.0, "alpha_p", num(r.wp), ""});
        cells.push_back({r.m, "w", 3, 1.0, "alpha_c", r.over_ten ? std::nullopt : num(r.wc), r.over_ten ? ">10" : ""});
      }
      break;
    }
    case 2: {
      const std::tuple<const char*, double, double> rows[] = {
          {"negativity", 0.7245, 0.9441}, {"log-negativity", 0.8765, 1.0957}, {"concurrence", 0.9498, 2.0},
          {"eof", 0.6182, 1.2751},        {"discord-left", 0.6669, 1.4870},   {"discord-right", 0.6472, 1.2333}};
      for (const auto& [m, g, w] : rows) {
        cells.push_back({m, "haar", 3, 1.0, "m_q", num(g), ""});
        cells.push_back({m, "w", 3, 1.0, "m_q", num(w), ""});
      }
      break;
    }
    case 3:
    case 4: {
      struct Row {
        const char* m;
        double g[3];
        double w[3];
        bool w_defined;
      };
      const Row first[] = {{"negativity", {0.18542, 0.022174, 0.62577}, {0.025438, 0.0069282, 0.38597}, true},
                           {"log-negativity", {0.094092, 0.026725, 0.59757}, {-0.023887, 0.01132, 0.15495}, true},
                           {"concurrence", {0.068952, 0.037962, 0.48944}, {-0.19631, 0.0089384, -0.076814}, true},
                           {"eof", {0.25496, 0.036393, 0.50209}, {-0.062687, 0.0022365, -0.66105}, true},
                           {"discord-right", {0.25496, 0.036393, 0.50209}, {-0.062687, 0.0022365, -0.66105}, true},
                           {"work-deficit-right", {0.079392, 0.051408, 0.64816}, {-0.085636, 0.0033781, -0.9464}, true}};
      const Row second[] = {{"negativity", {0.413269, 0.027109, 0.19832}, {0.14462, 0.015031, 0.90635}, true},
                            {"log-negativity", {0.37581, 0.023849, 0.40478}, {0.13071, 0.010451, 0.76232}, true},
                            {"concurrence", {0.33335, 0.034293, 0.50371}, {0.0, 0.0, 0.0}, false},
                            {"eof", {0.3985, 0.040395, 0.32512}, {0.060853, 0.0036504, 1.1312}, true},
                            {"discord-right", {0.42308, 0.040715, 0.23827}, {0.074828, 0.0043115, 0.84245}, true},
                            {"work-deficit-right", {0.31472, 0.043941, 0.46134}, {0.058729, 0.003126, 0.70358}, true}};
      const double alpha = id == 3 ? 1.0 : 2.0;
      const char* names[] = {"mean", "variance", "skewness"};
      for (const auto& r : (id == 3 ? first : second)) {
        for (int q = 0; q < 3; ++q) cells.push_back({r.m, "haar", 3, alpha, names[q], num(r.g[q]), ""});
        for (int q = 0; q < 3; ++q) {
          const bool defined = r.w_defined || q == 0;
          cells.push_back({r.m, "w", 3, alpha, names[q], defined ? num(r.w[q]) : std::nullopt, defined ? "" : "-"});
        }
      }
      break;
    }
    case 5: {
      struct Row {
        const char* m;
        double v[6];  // mean 3, mean 6, var 3, var 6, skew 3, skew 6
      };
      const Row rows[] = {{"concurrence", {0.33335, 0.95732, 0.034293, 0.0013211, 0.50371, -1.4482}},
                          {"negativity", {0.41329, 0.95373, 0.027109, 0.0013209, 0.19832, -1.4483}},
                          {"eof", {0.3985, 0.93432, 0.040395, 0.00259, 0.32512, -1.3846}},
                          {"log-negativity", {0.37581, 0.96605, 0.023849, 0.00073, 0.040478, -1.5107}},
                          {"discord-right", {0.42308, 0.92927, 0.040715, 0.0025693, 0.23827, -1.3762}}};
      const char* names[] = {"mean", "variance", "skewness"};
      for (const auto& r : rows) {
        for (int q = 0; q < 3; ++q) {
          cells.push_back({r.m, "haar", 3, 2.0, names[q], num(r.v[2 * q]), ""});
          cells.push_back({r.m, "haar", 6, 2.0, names[q], num(r.v[2 * q + 1]), ""});
        }
      }
      break;
    }
    case 6: {
      struct Row {
        const char* m;
        double v[4];
      };
      const Row rows[] = {{"concurrence", {0.33335, 0.72941, 0.90175, 0.95732}},
                          {"negativity", {0.41329, 0.75322, 0.90303, 0.95373}},
                          {"eof", {0.3985, 0.73239, 0.87166, 0.93432}},
                          {"log-negativity", {0.37581, 0.75106, 0.92158, 0.96605}},
                          {"discord-right", {0.42308, 0.70413, 0.85582, 0.92927}}};
      for (const auto& r : rows) {
        for (int n = 3; n <= 6; ++n) cells.push_back({r.m, "haar", n, 2.0, "mean", num(r.v[n - 3]), ""});
      }
      break;
    }
    default:
      throw UsageError("unknown table id " + std::to_string(id) + " (expected 1..6)");
  }
  return cells;
}

struct TableOptions {
  int table = 0;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  unsigned workers = default_worker_count();
  std::string out;
  std::string format = "csv";
  bool verbose = false;
};

struct TableRow {
  ReferenceCell cell;
  std::optional<double> value;
  std::string value_text;
};

inline std::vector<TableRow> compute_table(const TableOptions& o, std::ostream& err) {
  const auto cells = reference_table(o.table);
  if (o.samples < 2) throw UsageError("--samples must be at least 2");
  using Key = std::tuple<std::string, std::string, int>;
  std::map<Key, std::vector<MonogamyRecord>> cache;
  std::map<Key, EnsembleSummary> sweeps;
  std::vector<TableRow> rows;
  for (const auto& c : cells) {
    const Key key{c.measure, c.state_class, c.n_qubits};
    EnsembleSpec spec;
    spec.state_class = parse_state_class(c.state_class);
    spec.n_qubits = c.n_qubits;
    spec.measure = parse_measure(c.measure);
    spec.n_samples = o.samples;
    spec.base_seed = o.seed;
    spec.workers = o.workers;
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache.emplace(key, run_logged(spec, o.verbose, err)).first;
    }
    TableRow row{c, std::nullopt, ""};
    if (c.quantity == "alpha_p" || c.quantity == "alpha_c" || c.quantity == "m_q") {
      auto s = sweeps.find(key);
      if (s == sweeps.end()) s = sweeps.emplace(key, summarize(spec, it->second, {})).first;
      const auto& sum = s->second;
      if (c.quantity == "alpha_p") {
        row.value = sum.alpha_p;
      } else if (c.quantity == "alpha_c") {
        if (sum.alpha_c.exceeds_max) {
          row.value_text = "exceeds " + format_number(kAlphaMax);
        } else {
          row.value = sum.alpha_c.value;
        }
      } else if (sum.m_q) {
        row.value = *sum.m_q;
      } else {
        row.value_text = "undefined";
      }
    } else {
      const auto m = distribution_stats(it->second, c.alpha);
      if (c.quantity == "mean") {
        row.value = m.mean;
      } else if (c.quantity == "variance") {
        row.value = m.variance;
      } else if (m.skewness) {
        row.value = *m.skewness;
      } else {
        row.value_text = "undefined";
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void cmd_table(const TableOptions& o, std::ostream& out, std::ostream& err) {
  if (o.table < 1 || o.table > 6) throw UsageError("unknown table id " + std::to_string(o.table) + " (expected 1..6)");
  const auto rows = compute_table(o, err);
  with_output(o.out, out, [&](std::ostream& os) {
    if (o.format == "json") {
      nlohmann::json cells = nlohmann::json::array();
      for (const auto& r : rows) {
        nlohmann::json j = {{"measure", r.cell.measure}, {"class", r.cell.state_class},
                            {"n_qubits", r.cell.n_qubits}, {"alpha", r.cell.alpha},
                            {"quantity", r.cell.quantity}};
        j["value"] = r.value ? nlohmann::json(*r.value) : nlohmann::json(r.value_text);
        j["reference"] = r.cell.reference ? nlohmann::json(*r.cell.reference) : nlohmann::json(r.cell.reference_text);
        j["abs_dev"] = r.value && r.cell.reference ? nlohmann::json(std::abs(*r.value - *r.cell.reference))
                                                   : nlohmann::json(nullptr);
        cells.push_back(std::move(j));
      }
      const nlohmann::json doc = {{"table", o.table},
                                  {"n_samples", o.samples},
                                  {"base_seed", o.seed},
                                  {"code_version", std::string(kVersion)},
                                  {"cells", std::move(cells)}};
      os << doc.dump(2) << "\n";
      return;
    }
    os << "# monoscore " << kVersion << "\n";
    os << "# table=" << o.table << " samples=" << o.samples << " seed=" << o.seed << "\n";
    os << "measure,class,n_qubits,alpha,quantity,value,reference,abs_dev\n";
    for (const auto& r : rows) {
      os << r.cell.measure << "," << r.cell.state_class << "," << r.cell.n_qubits << "," << format_number(r.cell.alpha)
         << "," << r.cell.quantity << "," << (r.value ? format_number(*r.value) : r.value_text) << ","
         << (r.cell.reference ? format_number(*r.cell.reference) : r.cell.reference_text) << ","
         << (r.value && r.cell.reference ? format_number(std::abs(*r.value - *r.cell.reference)) : std::string("")) << "\n";
    }
  });
}

/// Entry point shared by the executable and the tests. `args` excludes argv[0].
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monogamy scores of random multiqubit pure states", "monoscore"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  RunOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "Fraction of nonmonogamous states against the power alpha");
  add_run_options(*sweep, sweep_opts);

  RunOptions stats_opts;
  StatsOptions stats_extra;
  auto* stats = app.add_subcommand("stats", "Mean, variance, skewness (and histogram) of the monogamy score");
  add_run_options(*stats, stats_opts);
  stats->add_option("--alpha", stats_extra.alpha, "Power applied to the measure")->capture_default_str();
  stats->add_option("--histogram", stats_extra.histogram, "BINS LO HI")->expected(3);
  stats->add_option("--scores", stats_extra.scores, "Write one score per row to this CSV file");

  TableOptions table_opts;
  auto* table = app.add_subcommand("table", "Recompute a published table with reference values");
  table->add_option("--table", table_opts.table, "Table id 1..6")->required();
  table->add_option("--samples", table_opts.samples, "Samples per ensemble")->capture_default_str();
  table->add_option("--seed", table_opts.seed, "Base seed")->capture_default_str();
  table->add_option("--workers", table_opts.workers, "Worker threads")->capture_default_str();
  table->add_option("--out", table_opts.out, "Output file (default stdout)");
  table->add_option("--format", table_opts.format, "csv or json")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  table->add_flag("-v,--verbose", table_opts.verbose, "Progress on stderr");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sweep) {
      cmd_sweep(sweep_opts, out, err);
    } else if (*stats) {
      cmd_stats(stats_opts, stats_extra, out, err);
    } else {
      cmd_table(table_opts, out, err);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace monoscore::cli
