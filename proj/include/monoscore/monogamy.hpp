#pragma once

// Monogamy scores delta_{Q^alpha} = Q_{n:rest}^alpha - sum_i Q_{n:i}^alpha for
// a nodal qubit n, and the per-state power at which the score turns
// non-negative for good.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "monoscore/error.hpp"
#include "monoscore/measures.hpp"
#include "monoscore/states.hpp"

namespace monoscore {

/// A score counts as negative (nonmonogamous) only below -kZeroScore.
inline constexpr double kZeroScore = 1e-10;

/// Largest monogamy power searched for sign changes.
inline constexpr double kAlphaMax = 20.0;

struct MonogamyRecord {
  double q_rest = 0.0;
  std::vector<double> q_pair;  ///< Q between the nodal qubit and each other qubit, in register order.
  MeasureKind measure;
  int nodal = 0;

  friend bool operator==(const MonogamyRecord&, const MonogamyRecord&) = default;
};

namespace detail {

inline double clamp_unit(double v) {
  if (!(v >= -1e-8 && v <= 1.0 + 1e-8)) {
    throw NumericalError("monogamy record entry outside [0, 1]");
  }
  return std::clamp(v, 0.0, 1.0);
}

// 0^alpha := 0 for alpha > 0.
inline double power(double q, double alpha) { return q > 0.0 ? std::pow(q, alpha) : 0.0; }

}  // namespace detail

/// Evaluates Q across (nodal : rest) and between nodal and every other qubit.
/// For directional measures the measured party of each pair is the non-nodal
/// qubit under `right` and the nodal qubit under `left`.
inline MonogamyRecord measure_state(const PureState& state, const MeasureKind& measure, int nodal = 0) {
  const int n = state.n_qubits();
  if (n < 3) throw InvalidArgument("measure_state: needs at least three qubits");
  if (nodal < 0 || nodal >= n) throw InvalidArgument("measure_state: nodal qubit out of range");

  MonogamyRecord record;
  record.measure = measure;
  record.nodal = nodal;
  record.q_rest = detail::clamp_unit(pure_bipartite_value(state, measure, nodal));
  record.q_pair.reserve(static_cast<std::size_t>(n - 1));
  for (int other = 0; other < n; ++other) {
    if (other == nodal) continue;
    const int keep[2] = {nodal, other};
    const DensityMatrix pair = partial_trace(state, keep);
    record.q_pair.push_back(detail::clamp_unit(two_qubit_value(pair, measure)));
  }
  return record;
}

/// q_rest^alpha - sum q_pair^alpha.
inline double score(const MonogamyRecord& record, double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgument("score: alpha must be positive");
  double s = detail::power(record.q_rest, alpha);
  for (double q : record.q_pair) s -= detail::power(q, alpha);
  return s;
}

inline bool is_nonmonogamous(const MonogamyRecord& record, double alpha) {
  return score(record, alpha) < -kZeroScore;
}

/// Geometric grid used to bracket sign changes of the score.
inline std::vector<double> crossing_grid() {
  constexpr int kPoints = 64;
  constexpr double kLo = 1e-3;
  std::vector<double> grid(kPoints);
  const double ratio = std::log(kAlphaMax / kLo) / (kPoints - 1);
  for (int i = 0; i < kPoints; ++i) grid[static_cast<std::size_t>(i)] = kLo * std::exp(ratio * i);
  grid.back() = kAlphaMax;
  return grid;
}

/// Largest alpha in (0, 20] at which the score leaves the nonmonogamous
/// region. Empty when the score is non-negative on the whole grid; +infinity
/// when the record is still nonmonogamous at alpha = 20.
inline std::optional<double> alpha_crossing(const MonogamyRecord& record, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("alpha_crossing: tol must be positive");
  const auto grid = crossing_grid();
  std::optional<std::size_t> last_negative;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (is_nonmonogamous(record, grid[i])) last_negative = i;
  }
  if (!last_negative) return std::nullopt;
  if (*last_negative + 1 == grid.size()) return std::numeric_limits<double>::infinity();

  double lo = grid[*last_negative];      // nonmonogamous
  double hi = grid[*last_negative + 1];  // monogamous
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (is_nonmonogamous(record, mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace monoscore
