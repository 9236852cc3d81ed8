#pragma once

// Pure states on qubit registers, random sampling, and the reductions used by
// every correlation measure (partial trace, partial transpose).
//
// Qubit q of an n-qubit register is bit (n - 1 - q) of the computational-basis
// index, i.e. qubit 0 is the most significant bit: |i_0 i_1 ... i_{n-1}>.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "monoscore/error.hpp"
#include "monoscore/linalg.hpp"

namespace monoscore {

inline constexpr int kMinSampledQubits = 2;
inline constexpr int kMaxSampledQubits = 10;

/// Unit-norm amplitude vector over n qubits.
class PureState {
 public:
  PureState() = default;

  PureState(int n_qubits, std::vector<complex> amplitudes)
      : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    validate_shape();
    const double norm = std::sqrt(squared_norm());
    if (std::abs(norm - 1.0) > 1e-10) {
      std::ostringstream msg;
      msg << "PureState: amplitudes are not normalized (norm = " << norm << ")";
      throw InvalidArgument(msg.str());
    }
  }

  /// Builds a state from an arbitrary non-zero vector by normalizing it.
  static PureState normalized(int n_qubits, std::vector<complex> amplitudes) {
    PureState s;
    s.n_qubits_ = n_qubits;
    s.amplitudes_ = std::move(amplitudes);
    s.validate_shape();
    const double norm = std::sqrt(s.squared_norm());
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw InvalidArgument("PureState: cannot normalize a zero or non-finite vector");
    }
    for (auto& a : s.amplitudes_) a /= norm;
    return s;
  }

  [[nodiscard]] int n_qubits() const noexcept { return n_qubits_; }
  [[nodiscard]] std::size_t dim() const noexcept { return amplitudes_.size(); }
  [[nodiscard]] std::span<const complex> amplitudes() const noexcept { return amplitudes_; }
  [[nodiscard]] const complex& operator[](std::size_t i) const { return amplitudes_[i]; }

  [[nodiscard]] double squared_norm() const {
    double s = 0.0;
    for (const auto& a : amplitudes_) s += std::norm(a);
    return s;
  }

  friend bool operator==(const PureState&, const PureState&) = default;

 private:
  void validate_shape() const {
    if (n_qubits_ < 1 || n_qubits_ > 20) throw InvalidArgument("PureState: qubit count out of range");
    if (amplitudes_.size() != (std::size_t{1} << n_qubits_)) {
      throw InvalidArgument("PureState: amplitude count must be 2^n");
    }
  }

  int n_qubits_ = 0;
  std::vector<complex> amplitudes_;
};

/// Density matrix over an ordered list of register qubits. The first label is
/// the most significant bit of the matrix index.
class DensityMatrix {
 public:
  DensityMatrix() = default;

  DensityMatrix(std::vector<int> labels, ComplexMatrix matrix)
      : labels_(std::move(labels)), matrix_(std::move(matrix)) {
    if (labels_.empty()) throw InvalidArgument("DensityMatrix: no qubit labels");
    if (matrix_.dim() != (std::size_t{1} << labels_.size())) {
      throw InvalidArgument("DensityMatrix: dimension must be 2^(#labels)");
    }
    std::vector<int> sorted = labels_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw InvalidArgument("DensityMatrix: duplicate qubit label");
    }
    const double defect = matrix_.hermiticity_defect();
    if (defect > tolerance::kHermitian) {
      std::ostringstream msg;
      msg << "DensityMatrix: not Hermitian (defect " << defect << ")";
      throw InvalidArgument(msg.str());
    }
    const double tr = matrix_.trace().real();
    if (std::abs(tr - 1.0) > 1e-10) {
      std::ostringstream msg;
      msg << "DensityMatrix: trace " << tr << " differs from 1";
      throw InvalidArgument(msg.str());
    }
  }

  /// Density matrix with labels 0..k-1.
  explicit DensityMatrix(ComplexMatrix matrix)
      : DensityMatrix(default_labels(matrix.dim()), std::move(matrix)) {}

  [[nodiscard]] const std::vector<int>& labels() const noexcept { return labels_; }
  [[nodiscard]] const ComplexMatrix& matrix() const noexcept { return matrix_; }
  [[nodiscard]] std::size_t n_qubits() const noexcept { return labels_.size(); }
  [[nodiscard]] std::size_t dim() const noexcept { return matrix_.dim(); }

 private:
  static std::vector<int> default_labels(std::size_t dim) {
    std::vector<int> labels;
    std::size_t d = 1;
    while (d < dim) {
      labels.push_back(static_cast<int>(labels.size()));
      d <<= 1;
    }
    return labels;
  }

  std::vector<int> labels_;
  ComplexMatrix matrix_;
};

/// Identifies one independent random stream: state k of a run with base seed
/// s is drawn from RandomSeed{s, k}.
struct RandomSeed {
  std::uint64_t base_seed = 0;
  std::uint64_t stream_index = 0;
};

/// Version tag mixed into every stream seed; bump when the sampling recipe
/// changes so that old and new outputs can never be confused.
inline constexpr std::uint32_t kStreamVersion = 1;

/// Engine for one stream: mt19937_64 keyed through std::seed_seq, so any
/// (base_seed, stream_index) is reproducible without touching other streams.
inline std::mt19937_64 make_engine(const RandomSeed& seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed.base_seed),
                    static_cast<std::uint32_t>(seed.base_seed >> 32),
                    static_cast<std::uint32_t>(seed.stream_index),
                    static_cast<std::uint32_t>(seed.stream_index >> 32), kStreamVersion};
  return std::mt19937_64(seq);
}

/// Haar-random pure state: i.i.d. standard-normal real and imaginary parts,
/// then normalization.
inline PureState sample_haar_pure(int n_qubits, const RandomSeed& seed) {
  if (n_qubits < kMinSampledQubits || n_qubits > kMaxSampledQubits) {
    std::ostringstream msg;
    msg << "sample_haar_pure: n_qubits = " << n_qubits << " outside [" << kMinSampledQubits << ", "
        << kMaxSampledQubits << "]";
    throw InvalidArgument(msg.str());
  }
  auto engine = make_engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<complex> amps(std::size_t{1} << n_qubits);
  for (auto& a : amps) {
    const double re = normal(engine);
    const double im = normal(engine);
    a = complex(re, im);
  }
  return PureState::normalized(n_qubits, std::move(amps));
}

/// Random W-class state sqrt(a)|001> + sqrt(b)|010> + sqrt(c)|100> + sqrt(d)|000>
/// with (a, b, c, d) = |z_k|^2 / sum |z_j|^2 for four i.i.d. complex standard
/// normals z_k (uniform on the probability simplex). Amplitude phases are
/// dropped; they are removable by local unitaries.
inline PureState sample_w_class(const RandomSeed& seed) {
  auto engine = make_engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double weights[4];
  double total = 0.0;
  do {
    total = 0.0;
    for (double& w : weights) {
      const double re = normal(engine);
      const double im = normal(engine);
      w = re * re + im * im;
      total += w;
    }
  } while (!(total > 0.0));
  const auto [a, b, c, d] = weights;
  std::vector<complex> amps(8);
  amps[0b000] = std::sqrt(d / total);
  amps[0b001] = std::sqrt(a / total);
  amps[0b010] = std::sqrt(b / total);
  amps[0b100] = std::sqrt(c / total);
  return PureState::normalized(3, std::move(amps));
}

enum class NamedState { ghz, w, bell, product_zero };

inline NamedState parse_named_state(std::string_view name) {
  if (name == "ghz") return NamedState::ghz;
  if (name == "w") return NamedState::w;
  if (name == "bell") return NamedState::bell;
  if (name == "product-zero") return NamedState::product_zero;
  throw InvalidArgument("unknown named state: " + std::string(name));
}

inline PureState named_state(NamedState kind, int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxSampledQubits) {
    throw InvalidArgument("named_state: qubit count out of range");
  }
  const std::size_t dim = std::size_t{1} << n_qubits;
  std::vector<complex> amps(dim);
  switch (kind) {
    case NamedState::ghz:
      if (n_qubits < 2) throw InvalidArgument("named_state: ghz needs at least 2 qubits");
      amps.front() = amps.back() = 1.0 / std::sqrt(2.0);
      break;
    case NamedState::w:
      if (n_qubits < 2) throw InvalidArgument("named_state: w needs at least 2 qubits");
      for (int q = 0; q < n_qubits; ++q) amps[std::size_t{1} << q] = 1.0 / std::sqrt(double(n_qubits));
      break;
    case NamedState::bell:
      if (n_qubits != 2) throw InvalidArgument("named_state: bell requires exactly 2 qubits");
      amps[0b00] = amps[0b11] = 1.0 / std::sqrt(2.0);
      break;
    case NamedState::product_zero:
      amps[0] = 1.0;
      break;
  }
  return PureState(n_qubits, std::move(amps));
}

namespace detail {

inline std::size_t bit_of(int qubit, int n_qubits) {
  return std::size_t{1} << (n_qubits - 1 - qubit);
}

// Scatters the bits of `local` (an index over `positions.size()` bits, first
// position = most significant) into the register-index bit masks `positions`.
inline std::size_t scatter_bits(std::size_t local, std::span<const std::size_t> positions) {
  std::size_t out = 0;
  const std::size_t m = positions.size();
  for (std::size_t j = 0; j < m; ++j) {
    if ((local >> (m - 1 - j)) & 1U) out |= positions[j];
  }
  return out;
}

inline std::vector<std::size_t> scatter_table(std::span<const std::size_t> positions) {
  std::vector<std::size_t> table(std::size_t{1} << positions.size());
  for (std::size_t i = 0; i < table.size(); ++i) table[i] = scatter_bits(i, positions);
  return table;
}

// Checks that `keep` is a non-empty duplicate-free subset of `universe` and
// returns the positions of its elements within `universe`.
inline std::vector<std::size_t> locate_subset(std::span<const int> keep, std::span<const int> universe,
                                              const char* who) {
  if (keep.empty()) throw InvalidArgument(std::string(who) + ": empty qubit set");
  std::vector<std::size_t> where;
  for (int q : keep) {
    const auto it = std::find(universe.begin(), universe.end(), q);
    if (it == universe.end()) {
      std::ostringstream msg;
      msg << who << ": qubit " << q << " is not part of the register";
      throw InvalidArgument(msg.str());
    }
    const auto pos = static_cast<std::size_t>(it - universe.begin());
    if (std::find(where.begin(), where.end(), pos) != where.end()) {
      std::ostringstream msg;
      msg << who << ": qubit " << q << " listed twice";
      throw InvalidArgument(msg.str());
    }
    where.push_back(pos);
  }
  return where;
}

inline std::vector<int> iota_labels(int n) {
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i;
  return labels;
}

}  // namespace detail

/// Reduced density matrix of `state` on the qubits `keep`, in the given order
/// (the first listed qubit becomes the most significant bit).
inline DensityMatrix partial_trace(const PureState& state, std::span<const int> keep) {
  const int n = state.n_qubits();
  const std::vector<int> all = detail::iota_labels(n);
  const auto positions = detail::locate_subset(keep, all, "partial_trace");

  std::vector<std::size_t> kept_bits;
  for (std::size_t p : positions) kept_bits.push_back(detail::bit_of(static_cast<int>(p), n));
  std::vector<std::size_t> traced_bits;
  for (int q = 0; q < n; ++q) {
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced_bits.push_back(detail::bit_of(q, n));
  }
  const auto kept = detail::scatter_table(kept_bits);
  const auto traced = detail::scatter_table(traced_bits);

  const std::size_t dk = kept.size();
  ComplexMatrix rho(dk);
  const auto psi = state.amplitudes();
  for (std::size_t r = 0; r < dk; ++r) {
    for (std::size_t c = r; c < dk; ++c) {
      complex s = 0.0;
      for (std::size_t t : traced) s += psi[kept[r] | t] * std::conj(psi[kept[c] | t]);
      rho(r, c) = s;
      rho(c, r) = std::conj(s);
    }
    rho(r, r) = rho(r, r).real();
  }
  return DensityMatrix(std::vector<int>(keep.begin(), keep.end()), std::move(rho));
}

inline DensityMatrix partial_trace(const PureState& state, std::initializer_list<int> keep) {
  return partial_trace(state, std::span<const int>(keep.begin(), keep.size()));
}

/// Reduced density matrix of `dm` on the labels `keep`, in the given order.
inline DensityMatrix partial_trace(const DensityMatrix& dm, std::span<const int> keep) {
  const int m = static_cast<int>(dm.n_qubits());
  const auto positions = detail::locate_subset(keep, dm.labels(), "partial_trace");

  std::vector<std::size_t> kept_bits;
  for (std::size_t p : positions) kept_bits.push_back(detail::bit_of(static_cast<int>(p), m));
  std::vector<std::size_t> traced_bits;
  for (int p = 0; p < m; ++p) {
    if (std::find(positions.begin(), positions.end(), static_cast<std::size_t>(p)) == positions.end()) {
      traced_bits.push_back(detail::bit_of(p, m));
    }
  }
  const auto kept = detail::scatter_table(kept_bits);
  const auto traced = detail::scatter_table(traced_bits);

  const ComplexMatrix& full = dm.matrix();
  ComplexMatrix rho(kept.size());
  for (std::size_t r = 0; r < kept.size(); ++r) {
    for (std::size_t c = 0; c < kept.size(); ++c) {
      complex s = 0.0;
      for (std::size_t t : traced) s += full(kept[r] | t, kept[c] | t);
      rho(r, c) = s;
    }
  }
  return DensityMatrix(std::vector<int>(keep.begin(), keep.end()), std::move(rho));
}

inline DensityMatrix partial_trace(const DensityMatrix& dm, std::initializer_list<int> keep) {
  return partial_trace(dm, std::span<const int>(keep.begin(), keep.size()));
}

/// |psi><psi| as a density matrix over all qubits of the register.
inline DensityMatrix to_density_matrix(const PureState& state) {
  return DensityMatrix(detail::iota_labels(state.n_qubits()), ComplexMatrix::projector(state.amplitudes()));
}

/// Transposes the tensor factors listed in `subsystem` (labels of `dm`).
inline ComplexMatrix partial_transpose(const DensityMatrix& dm, std::span<const int> subsystem) {
  const int m = static_cast<int>(dm.n_qubits());
  const auto positions = detail::locate_subset(subsystem, dm.labels(), "partial_transpose");
  if (positions.size() >= dm.n_qubits()) {
    throw InvalidArgument("partial_transpose: subsystem must be a proper subset of the labels");
  }
  std::size_t mask = 0;
  for (std::size_t p : positions) mask |= detail::bit_of(static_cast<int>(p), m);

  const ComplexMatrix& rho = dm.matrix();
  const std::size_t d = rho.dim();
  ComplexMatrix out(d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      // Swap the masked bits between row and column index.
      const std::size_t r2 = (r & ~mask) | (c & mask);
      const std::size_t c2 = (c & ~mask) | (r & mask);
      out(r2, c2) = rho(r, c);
    }
  }
  return out;
}

inline ComplexMatrix partial_transpose(const DensityMatrix& dm, std::initializer_list<int> subsystem) {
  return partial_transpose(dm, std::span<const int>(subsystem.begin(), subsystem.size()));
}

/// Applies a 2x2 unitary to qubit `site`.
inline PureState apply_local_unitary(const PureState& state, int site, const ComplexMatrix& u) {
  const int n = state.n_qubits();
  if (site < 0 || site >= n) throw InvalidArgument("apply_local_unitary: site out of range");
  if (u.dim() != 2) throw InvalidArgument("apply_local_unitary: expected a 2x2 matrix");
  const double defect = unitarity_defect(u);
  if (defect > 1e-10) {
    std::ostringstream msg;
    msg << "apply_local_unitary: matrix is not unitary (defect " << defect << ")";
    throw InvalidArgument(msg.str());
  }
  const std::size_t bit = detail::bit_of(site, n);
  std::vector<complex> out(state.amplitudes().begin(), state.amplitudes().end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i & bit) continue;
    const complex a0 = state[i];
    const complex a1 = state[i | bit];
    out[i] = u(0, 0) * a0 + u(0, 1) * a1;
    out[i | bit] = u(1, 0) * a0 + u(1, 1) * a1;
  }
  return PureState::normalized(n, std::move(out));
}

/// Haar-random 2x2 unitary: a uniform unit first column, completed with a
/// uniformly random phase.
template <class Engine>
ComplexMatrix random_qubit_unitary(Engine& engine) {
  std::normal_distribution<double> normal(0.0, 1.0);
  complex a(normal(engine), normal(engine));
  complex b(normal(engine), normal(engine));
  const double norm = std::sqrt(std::norm(a) + std::norm(b));
  a /= norm;
  b /= norm;
  const double angle = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(engine);
  const complex phase = std::polar(1.0, angle);
  // Columns (a, b) and phase * (-b*, a*) are orthonormal.
  return ComplexMatrix{{a, -phase * std::conj(b)}, {b, phase * std::conj(a)}};
}

}  // namespace monoscore
