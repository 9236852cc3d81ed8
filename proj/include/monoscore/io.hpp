#pragma once

// JSON and CSV exports. CSV files start with '#' comment lines echoing the run
// configuration; numbers use '.' decimals and 6 significant digits.

#include <cstdint>
#include <iomanip>
#include <locale>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "monoscore/montecarlo.hpp"
#include "monoscore/states.hpp"
#include "monoscore/version.hpp"

namespace monoscore {

/// Six significant digits, '.' decimal point regardless of the global locale.
inline std::string format_number(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(6) << v;
  return os.str();
}

inline nlohmann::json spec_to_json(const EnsembleSpec& spec) {
  return {{"state_class", to_string(spec.state_class)},
          {"n_qubits", spec.n_qubits},
          {"n_samples", spec.n_samples},
          {"measure", spec.measure.name()},
          {"base_seed", spec.base_seed},
          {"nodal", spec.nodal},
          {"alpha_grid_points", spec.alpha_grid.size()},
          {"alpha_grid_min", spec.alpha_grid.front()},
          {"alpha_grid_max", spec.alpha_grid.back()},
          {"code_version", std::string(kVersion)}};
}

inline nlohmann::json moments_to_json(const Moments& m) {
  nlohmann::json j = {{"mean", m.mean}, {"variance", m.variance}};
  j["skewness"] = m.skewness ? nlohmann::json(*m.skewness) : nlohmann::json(nullptr);
  return j;
}

/// Worker count is deliberately left out: it never changes the numbers.
inline nlohmann::json summary_to_json(const EnsembleSummary& s) {
  nlohmann::json j;
  j["spec"] = spec_to_json(s.spec);
  j["tol"] = s.tol;
  nlohmann::json curve = nlohmann::json::array();
  for (const auto& p : s.f_curve) curve.push_back({p.alpha, p.fraction});
  j["f_curve"] = std::move(curve);
  j["alpha_p"] = s.alpha_p;
  if (s.alpha_c.exceeds_max) {
    j["alpha_c"] = "exceeds " + format_number(kAlphaMax);
  } else {
    j["alpha_c"] = s.alpha_c.value;
  }
  j["m_q"] = s.m_q ? nlohmann::json(*s.m_q) : nlohmann::json(nullptr);
  nlohmann::json moments = nlohmann::json::array();
  for (const auto& m : s.moments) {
    auto entry = moments_to_json(m.moments);
    entry["alpha"] = m.alpha;
    moments.push_back(std::move(entry));
  }
  j["moments"] = std::move(moments);
  if (!s.histogram.empty()) {
    nlohmann::json bins = nlohmann::json::array();
    for (const auto& b : s.histogram) bins.push_back({b.left, b.right, b.relative_frequency});
    j["histogram"] = {{"alpha", s.histogram_alpha}, {"bins", std::move(bins)}};
  }
  return j;
}

inline void write_csv_header(std::ostream& os, const EnsembleSpec& spec) {
  os << "# monoscore " << kVersion << "\n"
     << "# class=" << to_string(spec.state_class) << " qubits=" << spec.n_qubits << " measure=" << spec.measure.name()
     << " samples=" << spec.n_samples << " seed=" << spec.base_seed << " nodal=" << spec.nodal << "\n";
}

/// alpha,f rows preceded by the critical powers as comments.
inline void write_sweep_csv(std::ostream& os, const EnsembleSummary& s) {
  write_csv_header(os, s.spec);
  os << "# alpha_p=" << format_number(s.alpha_p) << "\n";
  os << "# alpha_c=" << (s.alpha_c.exceeds_max ? "exceeds " + format_number(kAlphaMax) : format_number(s.alpha_c.value))
     << "\n";
  os << "# m_q=" << (s.m_q ? format_number(*s.m_q) : std::string("undefined")) << "\n";
  os << "alpha,f\n";
  for (const auto& p : s.f_curve) os << format_number(p.alpha) << "," << format_number(p.fraction) << "\n";
}

inline void write_histogram_csv(std::ostream& os, const std::vector<HistogramBin>& bins) {
  os << "bin_left,bin_right,rel_freq\n";
  for (const auto& b : bins) {
    os << format_number(b.left) << "," << format_number(b.right) << "," << format_number(b.relative_frequency) << "\n";
  }
}

/// Moments as comment-free rows, then the histogram if one was requested.
inline void write_stats_csv(std::ostream& os, const EnsembleSummary& s) {
  write_csv_header(os, s.spec);
  os << "alpha,mean,variance,skewness\n";
  for (const auto& m : s.moments) {
    os << format_number(m.alpha) << "," << format_number(m.moments.mean) << "," << format_number(m.moments.variance)
       << "," << (m.moments.skewness ? format_number(*m.moments.skewness) : std::string("undefined")) << "\n";
  }
  if (!s.histogram.empty()) {
    os << "# histogram alpha=" << format_number(s.histogram_alpha) << "\n";
    write_histogram_csv(os, s.histogram);
  }
}

/// One score per row.
inline void write_scores_csv(std::ostream& os, const EnsembleSpec& spec, double alpha,
                             const std::vector<MonogamyRecord>& records) {
  os << "# monoscore " << kVersion << "\n";
  os << "# class=" << to_string(spec.state_class) << " N=" << spec.n_qubits << " measure=" << spec.measure.name()
     << " alpha=" << format_number(alpha) << " seed=" << spec.base_seed << "\n";
  os << "score\n";
  for (const auto& r : records) os << format_number(score(r, alpha)) << "\n";
}

/// {"n_qubits", "base_seed", "stream_index", "amplitudes": [[re, im], ...]}
inline nlohmann::json state_to_json(const PureState& state, const RandomSeed& seed) {
  nlohmann::json amps = nlohmann::json::array();
  for (const auto& a : state.amplitudes()) amps.push_back({a.real(), a.imag()});
  return {{"n_qubits", state.n_qubits()},
          {"base_seed", seed.base_seed},
          {"stream_index", seed.stream_index},
          {"amplitudes", std::move(amps)}};
}

inline PureState state_from_json(const nlohmann::json& j) {
  const int n = j.at("n_qubits").get<int>();
  std::vector<complex> amps;
  for (const auto& pair : j.at("amplitudes")) amps.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
  return PureState(n, std::move(amps));
}

}  // namespace monoscore
