#pragma once

// Bipartite quantum-correlation measures: concurrence, entanglement of
// formation, negativity, logarithmic negativity, quantum discord and quantum
// work deficit. Every measure equals 1 on a two-qubit maximally entangled
// state (entropies in bits, negativity scaled by 2).

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "monoscore/error.hpp"
#include "monoscore/linalg.hpp"
#include "monoscore/states.hpp"

namespace monoscore {

enum class Family { concurrence, eof, negativity, log_negativity, discord, work_deficit };

/// Which party of a two-qubit pair is measured. `right` (the default for
/// discord and work deficit) measures the second party.
enum class Direction { none, left, right };

class MeasureKind {
 public:
  constexpr MeasureKind() = default;

  /// Direction defaults to `right` for the measurement-based families and
  /// must be `none` for the others.
  static MeasureKind make(Family family, std::optional<Direction> direction = std::nullopt) {
    const bool needs = family == Family::discord || family == Family::work_deficit;
    Direction d = direction.value_or(needs ? Direction::right : Direction::none);
    if (needs && d == Direction::none) {
      throw InvalidArgument("MeasureKind: discord and work deficit need a measurement direction");
    }
    if (!needs && d != Direction::none) {
      throw InvalidArgument("MeasureKind: direction only applies to discord and work deficit");
    }
    return MeasureKind(family, d);
  }

  [[nodiscard]] constexpr Family family() const noexcept { return family_; }
  [[nodiscard]] constexpr Direction direction() const noexcept { return direction_; }

  /// True for measures whose pure-state value is S(rho_1).
  [[nodiscard]] constexpr bool entropic_on_pure() const noexcept {
    return family_ == Family::eof || family_ == Family::discord || family_ == Family::work_deficit;
  }

  /// Canonical name, e.g. "concurrence", "log-negativity", "discord-right".
  [[nodiscard]] std::string name() const {
    switch (family_) {
      case Family::concurrence: return "concurrence";
      case Family::eof: return "eof";
      case Family::negativity: return "negativity";
      case Family::log_negativity: return "log-negativity";
      case Family::discord: return direction_ == Direction::left ? "discord-left" : "discord-right";
      case Family::work_deficit:
        return direction_ == Direction::left ? "work-deficit-left" : "work-deficit-right";
    }
    return "unknown";
  }

  friend constexpr bool operator==(const MeasureKind&, const MeasureKind&) = default;

 private:
  constexpr MeasureKind(Family f, Direction d) : family_(f), direction_(d) {}

  Family family_ = Family::concurrence;
  Direction direction_ = Direction::none;
};

/// Parses "concurrence", "eof", "negativity", "log-negativity", "discord",
/// "discord-left", "discord-right", "work-deficit", "work-deficit-left",
/// "work-deficit-right".
inline MeasureKind parse_measure(std::string_view text) {
  if (text == "concurrence") return MeasureKind::make(Family::concurrence);
  if (text == "eof") return MeasureKind::make(Family::eof);
  if (text == "negativity") return MeasureKind::make(Family::negativity);
  if (text == "log-negativity") return MeasureKind::make(Family::log_negativity);
  if (text == "discord" || text == "discord-right") return MeasureKind::make(Family::discord, Direction::right);
  if (text == "discord-left") return MeasureKind::make(Family::discord, Direction::left);
  if (text == "work-deficit" || text == "work-deficit-right") {
    return MeasureKind::make(Family::work_deficit, Direction::right);
  }
  if (text == "work-deficit-left") return MeasureKind::make(Family::work_deficit, Direction::left);
  throw InvalidArgument("unknown measure: " + std::string(text));
}

inline std::vector<MeasureKind> all_measures() {
  return {MeasureKind::make(Family::concurrence),
          MeasureKind::make(Family::eof),
          MeasureKind::make(Family::negativity),
          MeasureKind::make(Family::log_negativity),
          MeasureKind::make(Family::discord, Direction::left),
          MeasureKind::make(Family::discord, Direction::right),
          MeasureKind::make(Family::work_deficit, Direction::left),
          MeasureKind::make(Family::work_deficit, Direction::right)};
}

/// Projective qubit measurement along the Bloch direction
/// (sin t cos p, sin t sin p, cos t).
struct MeasurementSetting {
  double theta = 0.0;
  double phi = 0.0;

  [[nodiscard]] std::array<double, 3> bloch() const {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
  }

  /// {|n+><n+|, |n-><n-|} = (1 +- n.sigma) / 2.
  [[nodiscard]] std::array<ComplexMatrix, 2> projectors() const {
    const auto [x, y, z] = bloch();
    const complex off(x, -y);
    return {ComplexMatrix{{0.5 * (1.0 + z), 0.5 * off}, {0.5 * std::conj(off), 0.5 * (1.0 - z)}},
            ComplexMatrix{{0.5 * (1.0 - z), -0.5 * off}, {-0.5 * std::conj(off), 0.5 * (1.0 + z)}}};
  }
};

enum class MeasuredParty { first, second };
enum class MeasurementObjective { conditional_entropy, post_measurement_entropy };

struct MeasurementResult {
  MeasurementSetting setting;
  double value = 0.0;
};

namespace detail {

inline void require_two_qubit(const DensityMatrix& rho, const char* who) {
  if (rho.n_qubits() != 2) throw InvalidArgument(std::string(who) + ": expected a two-qubit density matrix");
}

/// Eigenvalues (larger first) of the 2x2 Hermitian [[a, b], [conj b, d]].
inline std::array<double, 2> eig2(double a, double d, complex b) {
  const double mean = 0.5 * (a + d);
  const double half = 0.5 * (a - d);
  const double r = std::sqrt(half * half + std::norm(b));
  return {mean + r, mean - r};
}

inline double entropy_term(double mu) { return mu > tolerance::kEntropyFloor ? -mu * std::log2(mu) : 0.0; }

inline double entropy_2x2(const ComplexMatrix& m) {
  const auto ev = eig2(m(0, 0).real(), m(1, 1).real(), m(0, 1));
  return entropy_term(std::max(ev[0], 0.0)) + entropy_term(std::max(ev[1], 0.0));
}

// Precomputed data for measuring one qubit of a two-qubit state: the reduced
// state of the unmeasured party and the Pauli-weighted partial traces
// T_k = tr_measured[(sigma_k on measured) rho]. The unnormalized branch for
// outcome +- along n is (rho_u +- sum_k n_k T_k) / 2.
class BranchModel {
 public:
  BranchModel(const ComplexMatrix& rho, MeasuredParty party) {
    const complex i(0.0, 1.0);
    const std::array<ComplexMatrix, 3> paulis = {ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}},
                                                 ComplexMatrix{{0.0, -i}, {i, 0.0}},
                                                 ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}}};
    // Index (u, m) of the unmeasured/measured pair inside the 4x4 matrix.
    auto at = [&](int u, int m, int u2, int m2) -> complex {
      return party == MeasuredParty::second ? rho(2 * u + m, 2 * u2 + m2) : rho(2 * m + u, 2 * m2 + u2);
    };
    for (int u = 0; u < 2; ++u) {
      for (int u2 = 0; u2 < 2; ++u2) {
        unmeasured_[u][u2] = at(u, 0, u2, 0) + at(u, 1, u2, 1);
        for (int k = 0; k < 3; ++k) {
          complex s = 0.0;
          for (int m = 0; m < 2; ++m) {
            for (int m2 = 0; m2 < 2; ++m2) s += paulis[k](m2, m) * at(u, m, u2, m2);
          }
          weighted_[k][u][u2] = s;
        }
      }
    }
  }

  // Eigenvalues of the two unnormalized branches, clamped at 0.
  [[nodiscard]] std::array<double, 4> branch_spectrum(const std::array<double, 3>& n) const {
    complex x[2][2];
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        x[r][c] = n[0] * weighted_[0][r][c] + n[1] * weighted_[1][r][c] + n[2] * weighted_[2][r][c];
      }
    }
    const auto plus = eig2(0.5 * (unmeasured_[0][0] + x[0][0]).real(), 0.5 * (unmeasured_[1][1] + x[1][1]).real(),
                           0.5 * (unmeasured_[0][1] + x[0][1]));
    const auto minus = eig2(0.5 * (unmeasured_[0][0] - x[0][0]).real(), 0.5 * (unmeasured_[1][1] - x[1][1]).real(),
                            0.5 * (unmeasured_[0][1] - x[0][1]));
    return {std::max(plus[0], 0.0), std::max(plus[1], 0.0), std::max(minus[0], 0.0), std::max(minus[1], 0.0)};
  }

  // S(sum_i Pi_i rho Pi_i): the dephased state is block diagonal in the
  // measurement basis, so its spectrum is the union of the branch spectra.
  [[nodiscard]] double post_measurement_entropy(const std::array<double, 3>& n) const {
    const auto mu = branch_spectrum(n);
    return entropy_term(mu[0]) + entropy_term(mu[1]) + entropy_term(mu[2]) + entropy_term(mu[3]);
  }

  // sum_i p_i S(rho_{u|i}) = S(dephased) - H(p).
  [[nodiscard]] double conditional_entropy(const std::array<double, 3>& n) const {
    const auto mu = branch_spectrum(n);
    const double p_plus = mu[0] + mu[1];
    const double p_minus = mu[2] + mu[3];
    return entropy_term(mu[0]) + entropy_term(mu[1]) + entropy_term(mu[2]) + entropy_term(mu[3]) -
           entropy_term(p_plus) - entropy_term(p_minus);
  }

  [[nodiscard]] double evaluate(MeasurementObjective objective, double theta, double phi) const {
    const std::array<double, 3> n = {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                                     std::cos(theta)};
    return objective == MeasurementObjective::conditional_entropy ? conditional_entropy(n)
                                                                   : post_measurement_entropy(n);
  }

 private:
  complex unmeasured_[2][2]{};
  complex weighted_[3][2][2]{};
};

// Nelder-Mead on (theta, phi), run until the simplex diameter drops below
// `step`. The objective is periodic and defined for any real angles.
template <class Objective>
MeasurementResult nelder_mead_2d(const Objective& f, double theta0, double phi0, double span_theta,
                                 double span_phi, double step) {
  struct Vertex {
    double t, p, v;
  };
  std::array<Vertex, 3> s = {Vertex{theta0, phi0, f(theta0, phi0)},
                             Vertex{theta0 + span_theta, phi0, f(theta0 + span_theta, phi0)},
                             Vertex{theta0, phi0 + span_phi, f(theta0, phi0 + span_phi)}};
  auto diameter = [&] {
    double d = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) d = std::max(d, std::hypot(s[i].t - s[j].t, s[i].p - s[j].p));
    }
    return d;
  };
  constexpr int kMaxIterations = 2000;
  for (int it = 0; it < kMaxIterations && diameter() > step; ++it) {
    std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.v < b.v; });
    const double ct = 0.5 * (s[0].t + s[1].t);
    const double cp = 0.5 * (s[0].p + s[1].p);
    auto along = [&](double k) {
      const double t = ct + k * (s[2].t - ct);
      const double p = cp + k * (s[2].p - cp);
      return Vertex{t, p, f(t, p)};
    };
    const Vertex reflected = along(-1.0);
    if (reflected.v < s[0].v) {
      const Vertex expanded = along(-2.0);
      s[2] = expanded.v < reflected.v ? expanded : reflected;
    } else if (reflected.v < s[1].v) {
      s[2] = reflected;
    } else {
      const Vertex contracted = reflected.v < s[2].v ? along(-0.5) : along(0.5);
      if (contracted.v < std::min(reflected.v, s[2].v)) {
        s[2] = contracted;
      } else {
        for (int i = 1; i < 3; ++i) {
          s[i].t = 0.5 * (s[0].t + s[i].t);
          s[i].p = 0.5 * (s[0].p + s[i].p);
          s[i].v = f(s[i].t, s[i].p);
        }
      }
    }
  }
  const auto best = *std::min_element(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.v < b.v; });
  return {{best.t, best.p}, best.v};
}

// Maps arbitrary angles to theta in [0, pi], phi in [0, 2 pi) describing the
// same Bloch direction.
inline MeasurementSetting canonical_setting(double theta, double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  theta = std::fmod(theta, two_pi);
  if (theta < 0.0) theta += two_pi;
  if (theta > std::numbers::pi) {
    theta = two_pi - theta;
    phi += std::numbers::pi;
  }
  phi = std::fmod(phi, two_pi);
  if (phi < 0.0) phi += two_pi;
  return {theta, phi};
}

}  // namespace detail

/// Coarse grid size and refinement step of the measurement optimizer.
inline constexpr int kCoarseThetaCells = 64;
inline constexpr int kCoarsePhiCells = 128;
inline constexpr int kRefinedStarts = 4;
inline constexpr double kRefineStep = 1e-6;
inline constexpr double kTieMargin = 1e-14;

/// Minimizes the chosen entropy over rank-1 projective measurements on one
/// qubit: a 64 x 128 (theta, phi) cell-centre scan, then Nelder-Mead from the
/// four best cells (plus the Pauli axes), keeping the overall best.
inline MeasurementResult optimal_qubit_measurement(const DensityMatrix& rho, MeasuredParty party,
                                                   MeasurementObjective objective) {
  detail::require_two_qubit(rho, "optimal_qubit_measurement");
  const detail::BranchModel model(rho.matrix(), party);
  auto f = [&](double t, double p) { return model.evaluate(objective, t, p); };

  const double d_theta = std::numbers::pi / kCoarseThetaCells;
  const double d_phi = 2.0 * std::numbers::pi / kCoarsePhiCells;

  struct Candidate {
    double value, theta, phi;
  };
  std::vector<Candidate> pool;
  pool.reserve(kCoarseThetaCells * kCoarsePhiCells + 3);
  // Pauli axes first so that ties resolve to them.
  pool.push_back({f(0.0, 0.0), 0.0, 0.0});
  pool.push_back({f(0.5 * std::numbers::pi, 0.0), 0.5 * std::numbers::pi, 0.0});
  pool.push_back({f(0.5 * std::numbers::pi, 0.5 * std::numbers::pi), 0.5 * std::numbers::pi,
                  0.5 * std::numbers::pi});
  for (int i = 0; i < kCoarseThetaCells; ++i) {
    const double t = (i + 0.5) * d_theta;
    for (int j = 0; j < kCoarsePhiCells; ++j) {
      const double p = (j + 0.5) * d_phi;
      pool.push_back({f(t, p), t, p});
    }
  }
  for (const auto& c : pool) {
    if (!std::isfinite(c.value)) throw NumericalError("optimal_qubit_measurement: non-finite objective");
  }
  const auto starts = std::min<std::size_t>(kRefinedStarts + 3, pool.size());
  std::stable_sort(pool.begin(), pool.end(), [](const Candidate& a, const Candidate& b) { return a.value < b.value; });

  MeasurementResult best{{0.0, 0.0}, f(0.0, 0.0)};
  // The top coarse cells, and any Pauli axis that ranked among them.
  for (std::size_t k = 0; k < starts; ++k) {
    const auto r = detail::nelder_mead_2d(f, pool[k].theta, pool[k].phi, 0.5 * d_theta, 0.5 * d_phi, kRefineStep);
    if (!std::isfinite(r.value)) throw NumericalError("optimal_qubit_measurement: non-finite objective");
    if (pool[k].value < best.value - kTieMargin) best = {{pool[k].theta, pool[k].phi}, pool[k].value};
    if (r.value < best.value - kTieMargin) best = r;
  }
  best.setting = detail::canonical_setting(best.setting.theta, best.setting.phi);
  return best;
}

/// Lowest absolute eigenvalue treated as a genuine (non round-off) entry of
/// sqrt(rho) rho~ sqrt(rho), whose entries are O(1) at most.
inline constexpr double kWoottersSpectrumFloor = 1e-14;

/// (sigma_y x sigma_y) rho* (sigma_y x sigma_y).
inline ComplexMatrix spin_flip(const ComplexMatrix& rho) {
  static constexpr double sign[4] = {-1.0, 1.0, 1.0, -1.0};
  ComplexMatrix out(4);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) out(r, c) = sign[r] * sign[c] * std::conj(rho(3 - r, 3 - c));
  }
  return out;
}

/// Descending eigenvalues of R = sqrt(sqrt(rho) rho~ sqrt(rho)).
inline std::array<double, 4> wootters_lambdas(const DensityMatrix& rho) {
  detail::require_two_qubit(rho, "concurrence_2q");
  const ComplexMatrix root = psd_sqrt(rho.matrix());
  ComplexMatrix h = root * spin_flip(rho.matrix()) * root;
  // Re-symmetrize round-off before the Hermitian solver.
  h = (h + h.adjoint()) * complex(0.5);
  const auto mu = hermitian_eigenvalues(h);
  std::array<double, 4> lambda{};
  for (std::size_t k = 0; k < 4; ++k) {
    const double m = clamp_psd_eigenvalue(mu[k]);
    lambda[k] = m > kWoottersSpectrumFloor ? std::sqrt(m) : 0.0;
  }
  return lambda;
}

/// Wootters concurrence max{0, l1 - l2 - l3 - l4}.
inline double concurrence_2q(const DensityMatrix& rho) {
  const auto l = wootters_lambdas(rho);
  return std::clamp(l[0] - l[1] - l[2] - l[3], 0.0, 1.0);
}

/// F(C) = h((1 + sqrt(1 - C^2)) / 2).
inline double eof_from_concurrence(double c) {
  c = std::clamp(c, 0.0, 1.0);
  return binary_entropy(0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))));
}

inline double eof_2q(const DensityMatrix& rho) { return eof_from_concurrence(concurrence_2q(rho)); }

/// ||rho^{T_B}|| - 1, where B = `transposed` (labels of rho).
inline double negativity(const DensityMatrix& rho, std::span<const int> transposed) {
  const double value = trace_norm_hermitian(partial_transpose(rho, transposed)) - 1.0;
  return std::max(value, 0.0);
}

/// Negativity across (first label : remaining labels).
inline double negativity(const DensityMatrix& rho) {
  if (rho.n_qubits() < 2) throw InvalidArgument("negativity: needs at least two qubits");
  const std::vector<int> rest(rho.labels().begin() + 1, rho.labels().end());
  return negativity(rho, rest);
}

inline double log_negativity_from_negativity(double n) { return std::log2(n + 1.0); }

inline double log_negativity(const DensityMatrix& rho, std::span<const int> transposed) {
  return log_negativity_from_negativity(negativity(rho, transposed));
}

inline double log_negativity(const DensityMatrix& rho) {
  return log_negativity_from_negativity(negativity(rho));
}

namespace detail {

inline MeasuredParty measured_party(Direction direction) {
  if (direction == Direction::none) throw InvalidArgument("measurement direction required");
  return direction == Direction::left ? MeasuredParty::first : MeasuredParty::second;
}

// Values within `slack` below zero are round-off of a non-negative quantity.
inline double clamp_nonnegative(double value, const char* who) {
  if (!std::isfinite(value)) throw NumericalError(std::string(who) + ": non-finite result");
  if (value >= 0.0) return value;
  if (value >= -1e-6) return 0.0;
  throw NumericalError(std::string(who) + ": result significantly negative");
}

}  // namespace detail

/// Quantum discord. `right`: D = S(rho_B) - S(rho_AB) + min sum p_i S(rho_{A|i})
/// with the projective measurement on B; `left` mirrors the parties.
inline double discord_2q(const DensityMatrix& rho, Direction direction) {
  detail::require_two_qubit(rho, "discord_2q");
  const MeasuredParty party = detail::measured_party(direction);
  const int measured_label = party == MeasuredParty::second ? rho.labels()[1] : rho.labels()[0];
  const double s_measured = von_neumann_entropy(partial_trace(rho, {measured_label}).matrix());
  const double s_joint = von_neumann_entropy(rho.matrix());
  const auto best = optimal_qubit_measurement(rho, party, MeasurementObjective::conditional_entropy);
  return detail::clamp_nonnegative(s_measured - s_joint + best.value, "discord_2q");
}

/// One-way quantum work deficit: min S(sum_i Pi_i rho Pi_i) - S(rho) with the
/// projective measurement on the party chosen by `direction`.
inline double work_deficit_2q(const DensityMatrix& rho, Direction direction) {
  detail::require_two_qubit(rho, "work_deficit_2q");
  const MeasuredParty party = detail::measured_party(direction);
  const double s_joint = von_neumann_entropy(rho.matrix());
  const auto best = optimal_qubit_measurement(rho, party, MeasurementObjective::post_measurement_entropy);
  return detail::clamp_nonnegative(best.value - s_joint, "work_deficit_2q");
}

/// Any of the six measures on a two-qubit density matrix (first label = A).
inline double two_qubit_value(const DensityMatrix& rho, const MeasureKind& measure) {
  detail::require_two_qubit(rho, "two_qubit_value");
  switch (measure.family()) {
    case Family::concurrence: return concurrence_2q(rho);
    case Family::eof: return eof_2q(rho);
    case Family::negativity: return negativity(rho);
    case Family::log_negativity: return log_negativity(rho);
    case Family::discord: return discord_2q(rho, measure.direction());
    case Family::work_deficit: return work_deficit_2q(rho, measure.direction());
  }
  throw InvalidArgument("two_qubit_value: unknown measure");
}

/// ||(|psi><psi|)^{T_rest}|| for the cut (nodal qubit : rest). The operator
/// sum_{a,a'} |a><a'| (x) |conj c_{a'}><conj c_a| (with psi = sum_a |a>|c_a>)
/// lives on |a> (x) span{conj c_0, conj c_1}, so its full spectrum is that of
/// a 4x4 (or 2x2) Hermitian block.
inline double pure_partial_transpose_trace_norm(const PureState& state, int nodal) {
  const int n = state.n_qubits();
  if (nodal < 0 || nodal >= n) throw InvalidArgument("pure_partial_transpose_trace_norm: nodal out of range");
  const std::size_t bit = detail::bit_of(nodal, n);
  const std::size_t rest_dim = state.dim() / 2;
  std::array<std::vector<complex>, 2> c;
  c[0].reserve(rest_dim);
  c[1].reserve(rest_dim);
  for (std::size_t i = 0; i < state.dim(); ++i) c[(i & bit) ? 1 : 0].push_back(std::conj(state[i]));

  auto dot = [](const std::vector<complex>& x, const std::vector<complex>& y) {  // <x|y>
    complex s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
  };
  // Orthonormal basis of span{c_0, c_1} by Gram-Schmidt.
  std::vector<std::vector<complex>> basis;
  for (const auto& v : c) {
    std::vector<complex> w = v;
    for (const auto& e : basis) {
      const complex proj = dot(e, w);
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= proj * e[i];
    }
    const double norm = std::sqrt(std::real(dot(w, w)));
    if (norm > 1e-12) {
      for (auto& z : w) z /= norm;
      basis.push_back(std::move(w));
    }
  }
  const std::size_t k = basis.size();
  if (k == 0) throw InvalidArgument("pure_partial_transpose_trace_norm: zero state");
  // overlap[e][a] = <e_e | c_a>
  std::vector<std::array<complex, 2>> overlap(k);
  for (std::size_t e = 0; e < k; ++e) overlap[e] = {dot(basis[e], c[0]), dot(basis[e], c[1])};

  ComplexMatrix block(2 * k);
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t e = 0; e < k; ++e) {
      for (std::size_t a2 = 0; a2 < 2; ++a2) {
        for (std::size_t e2 = 0; e2 < k; ++e2) {
          // <a, e| M |a2, e2> = <e|c_{a2}> <c_a|e2>
          block(a * k + e, a2 * k + e2) = overlap[e][a2] * std::conj(overlap[e2][a]);
        }
      }
    }
  }
  return trace_norm_hermitian(block);
}

/// Q across (nodal qubit : rest) for a pure state. Entropic measures give
/// S(rho_nodal); concurrence sqrt(2(1 - tr rho^2)); negativity the trace norm
/// of the partial transpose minus 1.
inline double pure_bipartite_value(const PureState& state, const MeasureKind& measure, int nodal = 0) {
  const int n = state.n_qubits();
  if (n < 2) throw InvalidArgument("pure_bipartite_value: needs at least two qubits");
  if (nodal < 0 || nodal >= n) throw InvalidArgument("pure_bipartite_value: nodal qubit out of range");
  const int keep[1] = {nodal};
  const ComplexMatrix rho = partial_trace(state, keep).matrix();

  switch (measure.family()) {
    case Family::eof:
    case Family::discord:
    case Family::work_deficit:
      return std::clamp(detail::entropy_2x2(rho), 0.0, 1.0);
    case Family::concurrence: {
      const double purity = std::norm(rho(0, 0)) + std::norm(rho(1, 1)) + 2.0 * std::norm(rho(0, 1));
      return std::clamp(std::sqrt(std::max(0.0, 2.0 * (1.0 - purity))), 0.0, 1.0);
    }
    case Family::negativity:
      return std::clamp(pure_partial_transpose_trace_norm(state, nodal) - 1.0, 0.0, 1.0);
    case Family::log_negativity:
      return std::clamp(
          log_negativity_from_negativity(std::max(pure_partial_transpose_trace_norm(state, nodal) - 1.0, 0.0)),
          0.0, 1.0);
  }
  throw InvalidArgument("pure_bipartite_value: unknown measure");
}

}  // namespace monoscore
