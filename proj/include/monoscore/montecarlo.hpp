#pragma once

// Ensembles of random states: records, the nonmonogamous fraction f(alpha),
// the two critical powers (alpha_p: f pinned to 1; alpha_c: f zero beyond),
// the area M_Q under f, and distribution statistics of the scores.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "monoscore/error.hpp"
#include "monoscore/measures.hpp"
#include "monoscore/monogamy.hpp"
#include "monoscore/states.hpp"

namespace monoscore {

enum class StateClass { haar, w_class };

inline std::string to_string(StateClass c) { return c == StateClass::haar ? "haar" : "w"; }

inline StateClass parse_state_class(std::string_view text) {
  if (text == "haar") return StateClass::haar;
  if (text == "w" || text == "w-class") return StateClass::w_class;
  throw InvalidArgument("unknown state class: " + std::string(text));
}

/// Geometric 1e-3..0.05 (16 points), then 0.05..4 in steps of 0.01, then
/// 4.25..20 in steps of 0.25.
inline std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  constexpr int kGeometric = 16;
  const double ratio = std::pow(0.05 / 1e-3, 1.0 / kGeometric);
  for (int k = 0; k < kGeometric; ++k) grid.push_back(1e-3 * std::pow(ratio, k));
  for (int k = 5; k <= 400; ++k) grid.push_back(k / 100.0);
  for (int k = 17; k <= 80; ++k) grid.push_back(k / 4.0);
  return grid;
}

/// Inserts the midpoint of every interval (halves the spacing).
inline std::vector<double> refine_grid(const std::vector<double>& grid) {
  std::vector<double> out;
  out.reserve(2 * grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0) out.push_back(0.5 * (grid[i - 1] + grid[i]));
    out.push_back(grid[i]);
  }
  return out;
}

/// Worker count from MONOSCORE_WORKERS, else the hardware concurrency.
inline unsigned default_worker_count() {
  if (const char* env = std::getenv("MONOSCORE_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 1024) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

struct EnsembleSpec {
  StateClass state_class = StateClass::haar;
  int n_qubits = 3;
  std::size_t n_samples = 0;
  MeasureKind measure = MeasureKind::make(Family::concurrence);
  std::uint64_t base_seed = 0;
  std::vector<double> alpha_grid = default_alpha_grid();
  unsigned workers = 1;
  int nodal = 0;

  void validate() const {
    if (state_class == StateClass::w_class && n_qubits != 3) {
      throw InvalidArgument("EnsembleSpec: the w class is defined for 3 qubits only");
    }
    if (n_qubits < 3 || n_qubits > kMaxSampledQubits) {
      throw InvalidArgument("EnsembleSpec: n_qubits must be in [3, 10]");
    }
    if (workers == 0) throw InvalidArgument("EnsembleSpec: workers must be positive");
    if (nodal < 0 || nodal >= n_qubits) throw InvalidArgument("EnsembleSpec: nodal qubit out of range");
    if (alpha_grid.empty()) throw InvalidArgument("EnsembleSpec: empty alpha grid");
    for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
      if (!(alpha_grid[i] > 0.0) || !std::isfinite(alpha_grid[i])) {
        throw InvalidArgument("EnsembleSpec: alpha grid entries must be positive and finite");
      }
      if (i > 0 && !(alpha_grid[i] > alpha_grid[i - 1])) {
        throw InvalidArgument("EnsembleSpec: alpha grid must be strictly increasing");
      }
    }
  }
};

/// Raised when some samples could not be evaluated; `completed` counts the
/// leading records that were produced before the first failure.
class EnsembleFailure : public NumericalError {
 public:
  EnsembleFailure(const std::string& what, std::size_t completed)
      : NumericalError(what), completed_(completed) {}
  [[nodiscard]] std::size_t completed() const noexcept { return completed_; }

 private:
  std::size_t completed_;
};

inline PureState sample_state(StateClass state_class, int n_qubits, const RandomSeed& seed) {
  return state_class == StateClass::w_class ? sample_w_class(seed) : sample_haar_pure(n_qubits, seed);
}

/// Evaluates record k from stream (base_seed, k) for k < n_samples. Workers
/// own contiguous index blocks and write into disjoint slots, so the output
/// does not depend on the worker count or scheduling.
inline std::vector<MonogamyRecord> run_ensemble(const EnsembleSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_samples;
  std::vector<MonogamyRecord> records(n);
  if (n == 0) return records;

  const std::size_t workers = std::min<std::size_t>(spec.workers, n);
  std::vector<std::size_t> first_failure(workers, std::numeric_limits<std::size_t>::max());
  std::vector<std::string> messages(workers);

  auto work = [&](std::size_t w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    for (std::size_t k = begin; k < end; ++k) {
      try {
        const PureState state = sample_state(spec.state_class, spec.n_qubits, {spec.base_seed, k});
        records[k] = measure_state(state, spec.measure, spec.nodal);
      } catch (const std::exception& e) {
        first_failure[w] = k;
        messages[w] = e.what();
        return;
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  const auto failed = std::min_element(first_failure.begin(), first_failure.end());
  if (*failed != std::numeric_limits<std::size_t>::max()) {
    const auto w = static_cast<std::size_t>(failed - first_failure.begin());
    std::ostringstream msg;
    msg << "run_ensemble: sample " << *failed << " failed: " << messages[w];
    throw EnsembleFailure(msg.str(), *failed);
  }
  return records;
}

/// Fraction of records whose score at alpha is below -kZeroScore.
inline double fraction_nonmonogamous(const std::vector<MonogamyRecord>& records, double alpha) {
  if (records.empty()) throw InvalidArgument("fraction_nonmonogamous: no records");
  std::size_t count = 0;
  for (const auto& r : records) count += is_nonmonogamous(r, alpha) ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(records.size());
}

struct CurvePoint {
  double alpha = 0.0;
  double fraction = 0.0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

inline std::vector<CurvePoint> f_curve(const std::vector<MonogamyRecord>& records, const std::vector<double>& grid) {
  if (records.empty()) throw InvalidArgument("f_curve: no records");
  // log q per entry (or -inf for q == 0) so that each alpha costs exp calls only.
  std::vector<double> logs;
  std::vector<std::size_t> offsets;
  offsets.reserve(records.size() + 1);
  for (const auto& r : records) {
    offsets.push_back(logs.size());
    logs.push_back(r.q_rest > 0.0 ? std::log(r.q_rest) : -std::numeric_limits<double>::infinity());
    for (double q : r.q_pair) logs.push_back(q > 0.0 ? std::log(q) : -std::numeric_limits<double>::infinity());
  }
  offsets.push_back(logs.size());

  std::vector<CurvePoint> curve;
  curve.reserve(grid.size());
  for (double alpha : grid) {
    if (!(alpha > 0.0)) throw InvalidArgument("f_curve: alpha must be positive");
    std::size_t count = 0;
    for (std::size_t k = 0; k + 1 < offsets.size(); ++k) {
      double s = std::exp(alpha * logs[offsets[k]]);
      for (std::size_t j = offsets[k] + 1; j < offsets[k + 1]; ++j) s -= std::exp(alpha * logs[j]);
      count += s < -kZeroScore ? 1 : 0;
    }
    curve.push_back({alpha, static_cast<double>(count) / static_cast<double>(records.size())});
  }
  return curve;
}

namespace detail {

inline bool all_nonmonogamous(const std::vector<MonogamyRecord>& records, double alpha) {
  return std::all_of(records.begin(), records.end(), [&](const auto& r) { return is_nonmonogamous(r, alpha); });
}

inline bool any_nonmonogamous(const std::vector<MonogamyRecord>& records, double alpha) {
  return std::any_of(records.begin(), records.end(), [&](const auto& r) { return is_nonmonogamous(r, alpha); });
}

}  // namespace detail

/// Largest alpha with f = 1: bisection between the last grid point with
/// f = 1 and the first with f < 1. Zero when f < 1 already at grid[0].
inline double estimate_alpha_p(const std::vector<MonogamyRecord>& records, double tol,
                               const std::vector<double>& grid = default_alpha_grid()) {
  if (records.empty()) throw InvalidArgument("estimate_alpha_p: no records");
  if (!(tol > 0.0)) throw InvalidArgument("estimate_alpha_p: tol must be positive");
  std::optional<std::size_t> first_below;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!detail::all_nonmonogamous(records, grid[i])) {
      first_below = i;
      break;
    }
  }
  if (!first_below) return grid.back();
  if (*first_below == 0) return 0.0;
  double lo = grid[*first_below - 1];
  double hi = grid[*first_below];
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (detail::all_nonmonogamous(records, mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// alpha_c, or a flag that some record is still nonmonogamous at kAlphaMax.
struct CriticalPower {
  double value = 0.0;
  bool exceeds_max = false;

  [[nodiscard]] bool finite() const noexcept { return !exceeds_max; }
  friend bool operator==(const CriticalPower&, const CriticalPower&) = default;
};

/// Maximum over records of alpha_crossing.
inline CriticalPower estimate_alpha_c(const std::vector<MonogamyRecord>& records, double tol) {
  if (records.empty()) throw InvalidArgument("estimate_alpha_c: no records");
  double best = 0.0;
  for (const auto& r : records) {
    const auto crossing = alpha_crossing(r, tol);
    if (!crossing) continue;
    if (std::isinf(*crossing)) return {kAlphaMax, true};
    best = std::max(best, *crossing);
  }
  return {best, false};
}

/// alpha_c from the f curve: bisection between the last grid point with
/// f > 0 and the next one.
inline CriticalPower estimate_alpha_c_from_curve(const std::vector<MonogamyRecord>& records, double tol,
                                                 const std::vector<double>& grid = default_alpha_grid()) {
  if (records.empty()) throw InvalidArgument("estimate_alpha_c_from_curve: no records");
  std::optional<std::size_t> last_positive;
  for (std::size_t i = grid.size(); i-- > 0;) {
    if (detail::any_nonmonogamous(records, grid[i])) {
      last_positive = i;
      break;
    }
  }
  if (!last_positive) return {0.0, false};
  if (*last_positive + 1 == grid.size()) {
    if (grid.back() >= kAlphaMax) return {kAlphaMax, true};
    // Extend the search to kAlphaMax beyond a short grid.
    if (detail::any_nonmonogamous(records, kAlphaMax)) return {kAlphaMax, true};
  }
  double lo = grid[*last_positive];
  double hi = *last_positive + 1 < grid.size() ? grid[*last_positive + 1] : kAlphaMax;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (detail::any_nonmonogamous(records, mid) ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi), false};
}

/// M_Q: trapezoidal area under f on [0, alpha_c] with f(0) := 1. Samples of f
/// exist only at grid points below alpha_c, so the last partial interval
/// carries the last sampled value.
inline double integrate_m(const std::vector<CurvePoint>& curve, const CriticalPower& alpha_c) {
  if (alpha_c.exceeds_max || !std::isfinite(alpha_c.value)) {
    throw InvalidArgument("integrate_m: alpha_c is not finite");
  }
  if (alpha_c.value <= 0.0) return 0.0;
  if (curve.empty() || curve.back().alpha < alpha_c.value) {
    throw InvalidArgument("integrate_m: curve does not cover [0, alpha_c]");
  }
  // Zero samples trailing up to alpha_c sit on the jump of f and are skipped;
  // the last positive sample is held flat to alpha_c.
  std::size_t end = 0;
  double prev = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve[i].alpha <= prev) throw InvalidArgument("integrate_m: curve alphas must increase");
    prev = curve[i].alpha;
    if (curve[i].alpha >= alpha_c.value) break;
    if (curve[i].fraction > 0.0) end = i + 1;
  }
  double area = 0.0;
  double prev_alpha = 0.0;
  double prev_f = 1.0;
  for (std::size_t i = 0; i < end; ++i) {
    area += 0.5 * (prev_f + curve[i].fraction) * (curve[i].alpha - prev_alpha);
    prev_alpha = curve[i].alpha;
    prev_f = curve[i].fraction;
  }
  area += prev_f * (alpha_c.value - prev_alpha);
  return area;
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  std::optional<double> skewness;  ///< Empty when the standard deviation is below 1e-12.

  friend bool operator==(const Moments&, const Moments&) = default;
};

/// Population mean, variance and skewness of a sample.
inline Moments moments_of(const std::vector<double>& values) {
  if (values.size() < 2) throw InvalidArgument("distribution_stats: need at least two values");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double m2 = 0.0;
  double m3 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  Moments out{mean, m2, std::nullopt};
  const double sd = std::sqrt(m2);
  if (sd >= 1e-12) out.skewness = m3 / (sd * sd * sd);
  return out;
}

inline std::vector<double> scores(const std::vector<MonogamyRecord>& records, double alpha) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(score(r, alpha));
  return out;
}

inline Moments distribution_stats(const std::vector<MonogamyRecord>& records, double alpha) {
  if (records.empty()) throw InvalidArgument("distribution_stats: no records");
  return moments_of(scores(records, alpha));
}

struct HistogramBin {
  double left = 0.0;
  double right = 0.0;
  double relative_frequency = 0.0;

  friend bool operator==(const HistogramBin&, const HistogramBin&) = default;
};

/// Equal-width bins over [lo, hi); out-of-range values land in the edge bins.
inline std::vector<HistogramBin> histogram_of(const std::vector<double>& values, int bins, double lo, double hi) {
  if (bins < 1) throw InvalidArgument("histogram: bins must be positive");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw InvalidArgument("histogram: invalid range");
  if (values.empty()) throw InvalidArgument("histogram: no values");
  const double width = (hi - lo) / bins;
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins));
  for (double v : values) {
    if (std::isnan(v)) throw InvalidArgument("histogram: NaN value");
    const double pos = std::floor((v - lo) / width);
    const auto idx = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(bins - 1)));
    ++counts[idx];
  }
  std::vector<HistogramBin> out;
  out.reserve(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double left = lo + width * static_cast<double>(i);
    const double right = i + 1 == counts.size() ? hi : lo + width * static_cast<double>(i + 1);
    out.push_back({left, right, static_cast<double>(counts[i]) / static_cast<double>(values.size())});
  }
  return out;
}

inline std::vector<HistogramBin> histogram(const std::vector<MonogamyRecord>& records, double alpha, int bins,
                                           double lo, double hi) {
  return histogram_of(scores(records, alpha), bins, lo, hi);
}

struct HistogramRequest {
  int bins = 50;
  double lo = -1.0;
  double hi = 1.0;
};

struct SummaryOptions {
  double tol = 1e-5;
  std::vector<double> moment_alphas;  ///< Powers at which moments are reported.
  std::optional<HistogramRequest> histogram_request;
  double histogram_alpha = 1.0;
};

struct AlphaMoments {
  double alpha = 0.0;
  Moments moments;
};

/// Everything reported for one (class, N, measure) ensemble.
struct EnsembleSummary {
  EnsembleSpec spec;
  std::vector<CurvePoint> f_curve;
  double alpha_p = 0.0;
  CriticalPower alpha_c;
  std::optional<double> m_q;  ///< Empty when alpha_c exceeds the search range.
  std::vector<AlphaMoments> moments;
  std::vector<HistogramBin> histogram;
  double histogram_alpha = 1.0;
  double tol = 1e-5;
};

inline EnsembleSummary summarize(const EnsembleSpec& spec, const std::vector<MonogamyRecord>& records,
                                 const SummaryOptions& options = {}) {
  if (records.empty()) throw InvalidArgument("summarize: no records");
  EnsembleSummary s;
  s.spec = spec;
  s.tol = options.tol;
  s.f_curve = f_curve(records, spec.alpha_grid);
  s.alpha_p = estimate_alpha_p(records, options.tol, spec.alpha_grid);
  s.alpha_c = estimate_alpha_c(records, options.tol);
  if (s.alpha_c.finite() && spec.alpha_grid.back() >= s.alpha_c.value) s.m_q = integrate_m(s.f_curve, s.alpha_c);
  if (records.size() >= 2) {
    for (double a : options.moment_alphas) s.moments.push_back({a, distribution_stats(records, a)});
  }
  if (options.histogram_request) {
    const auto& h = *options.histogram_request;
    s.histogram_alpha = options.histogram_alpha;
    s.histogram = histogram(records, options.histogram_alpha, h.bins, h.lo, h.hi);
  }
  return s;
}

}  // namespace monoscore
