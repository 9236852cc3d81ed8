#pragma once

// Dense complex linear algebra for the small matrices (dim <= 64) that show up
// in qubit-register calculations: Hermitian eigensystems via cyclic Jacobi,
// PSD square roots, trace norms and entropies (all logarithms base 2).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "monoscore/error.hpp"

namespace monoscore {

using complex = std::complex<double>;

namespace tolerance {
/// Accepted deviation from exact Hermiticity on input to the eigensolver.
inline constexpr double kHermitian = 1e-10;
/// Eigenvalues of PSD-intended matrices in [-kClampNegative, 0) become 0.
inline constexpr double kClampNegative = 1e-10;
/// Below -kRejectNegative a PSD-intended matrix is treated as a logic error.
inline constexpr double kRejectNegative = 1e-8;
/// Eigenvalues below this contribute 0 to entropies (0 log 0 := 0).
inline constexpr double kEntropyFloor = 1e-14;
/// Accepted deviation of a density matrix trace from 1.
inline constexpr double kTrace = 1e-8;
}  // namespace tolerance

/// Square complex matrix stored row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  explicit ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {}

  ComplexMatrix(std::size_t dim, std::vector<complex> entries)
      : dim_(dim), entries_(std::move(entries)) {
    if (entries_.size() != dim_ * dim_) {
      throw InvalidArgument("ComplexMatrix: entries length must equal dim^2");
    }
  }

  ComplexMatrix(std::initializer_list<std::initializer_list<complex>> rows)
      : dim_(rows.size()) {
    entries_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
      if (row.size() != dim_) {
        throw InvalidArgument("ComplexMatrix: ragged initializer");
      }
      entries_.insert(entries_.end(), row.begin(), row.end());
    }
  }

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  /// |v><v|
  static ComplexMatrix projector(std::span<const complex> v) {
    ComplexMatrix m(v.size());
    for (std::size_t r = 0; r < v.size(); ++r) {
      for (std::size_t c = 0; c < v.size(); ++c) m(r, c) = v[r] * std::conj(v[c]);
    }
    return m;
  }

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

  complex& operator()(std::size_t r, std::size_t c) { return entries_[r * dim_ + c]; }
  const complex& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * dim_ + c];
  }

  [[nodiscard]] std::span<const complex> entries() const noexcept { return entries_; }
  [[nodiscard]] std::span<complex> entries() noexcept { return entries_; }

  [[nodiscard]] ComplexMatrix adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
      for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
    }
    return out;
  }

  [[nodiscard]] ComplexMatrix conjugate() const {
    ComplexMatrix out(*this);
    for (auto& z : out.entries_) z = std::conj(z);
    return out;
  }

  [[nodiscard]] ComplexMatrix transpose() const {
    ComplexMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
      for (std::size_t c = 0; c < dim_; ++c) out(c, r) = (*this)(r, c);
    }
    return out;
  }

  [[nodiscard]] complex trace() const {
    complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  /// max |M - M^dagger| over entries.
  [[nodiscard]] double hermiticity_defect() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
      for (std::size_t c = r; c < dim_; ++c) {
        worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
      }
    }
    return worst;
  }

  [[nodiscard]] double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : entries_) s += std::norm(z);
    return std::sqrt(s);
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_dim(o);
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_dim(o);
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
    return *this;
  }
  ComplexMatrix& operator*=(complex s) {
    for (auto& z : entries_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, complex s) { return a *= s; }
  friend ComplexMatrix operator*(complex s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.require_same_dim(b);
    const std::size_t n = a.dim_;
    ComplexMatrix out(n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t k = 0; k < n; ++k) {
        const complex ark = a(r, k);
        if (ark == complex{}) continue;
        for (std::size_t c = 0; c < n; ++c) out(r, c) += ark * b(k, c);
      }
    }
    return out;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  void require_same_dim(const ComplexMatrix& o) const {
    if (o.dim_ != dim_) throw InvalidArgument("ComplexMatrix: dimension mismatch");
  }

  std::size_t dim_ = 0;
  std::vector<complex> entries_;
};

/// Kronecker product a (x) b.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  ComplexMatrix out(na * nb);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < na; ++j) {
      const complex aij = a(i, j);
      for (std::size_t k = 0; k < nb; ++k) {
        for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
      }
    }
  }
  return out;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("max_abs_diff: dimension mismatch");
  double worst = 0.0;
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) worst = std::max(worst, std::abs(ea[i] - eb[i]));
  return worst;
}

/// max |U U^dagger - 1|.
inline double unitarity_defect(const ComplexMatrix& u) {
  return max_abs_diff(u * u.adjoint(), ComplexMatrix::identity(u.dim()));
}

/// Eigenvalues in non-increasing order; eigenvectors are the matching columns.
struct EigenSystem {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;
};

namespace detail {

inline void require_hermitian(const ComplexMatrix& m, const char* who) {
  const double defect = m.hermiticity_defect();
  if (!(defect <= tolerance::kHermitian)) {
    std::ostringstream msg;
    msg << who << ": input is not Hermitian (max|M - M^dagger| = " << defect << ")";
    throw InvalidArgument(msg.str());
  }
}

// Cyclic Jacobi on a Hermitian matrix. Each rotation first removes the phase
// of a_pq, then applies the real symmetric 2x2 rotation that zeroes it.
// On return `a` is diagonal (to round-off) and, if requested, `v` holds the
// accumulated unitary with A_in = V diag V^dagger.
inline void jacobi_diagonalize(ComplexMatrix& a, ComplexMatrix* v) {
  const std::size_t n = a.dim();
  if (v != nullptr) *v = ComplexMatrix::identity(n);
  if (n < 2) return;

  // Force an exactly Hermitian working copy.
  for (std::size_t r = 0; r < n; ++r) {
    a(r, r) = a(r, r).real();
    for (std::size_t c = r + 1; c < n; ++c) {
      const complex avg = 0.5 * (a(r, c) + std::conj(a(c, r)));
      a(r, c) = avg;
      a(c, r) = std::conj(avg);
    }
  }

  const double scale = std::max(a.frobenius_norm(), 1e-300);
  // Off-diagonal Frobenius target: well inside the 1e-12 contract.
  const double target = 1e-14 * scale;
  const double skip = 1e-18 * scale;
  constexpr int kMaxSweeps = 100;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = r + 1; c < n; ++c) s += std::norm(a(r, c));
    }
    return std::sqrt(2.0 * s);
  };

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_norm() <= target) return;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= skip) continue;
        const complex phase = apq / mag;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Rotation J restricted to (p,q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]].
        const complex jpp = c;
        const complex jpq = s;
        const complex jqp = -s * std::conj(phase);
        const complex jqq = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {  // A <- A J
          const complex akp = a(k, p);
          const complex akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {  // A <- J^dagger A
          const complex apk = a(p, k);
          const complex aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();

        if (v != nullptr) {
          ComplexMatrix& vm = *v;
          for (std::size_t k = 0; k < n; ++k) {
            const complex vkp = vm(k, p);
            const complex vkq = vm(k, q);
            vm(k, p) = vkp * jpp + vkq * jqp;
            vm(k, q) = vkp * jpq + vkq * jqq;
          }
        }
      }
    }
  }
  if (off_norm() > 1e-12 * scale) {
    throw NumericalError("jacobi_diagonalize: no convergence");
  }
}

inline std::vector<double> sorted_diagonal(const ComplexMatrix& a) {
  std::vector<double> d(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) d[i] = a(i, i).real();
  std::sort(d.begin(), d.end(), std::greater<>());
  return d;
}

}  // namespace detail

/// Full spectrum and orthonormal eigenvectors of a Hermitian matrix.
inline EigenSystem hermitian_eigensystem(const ComplexMatrix& m) {
  detail::require_hermitian(m, "hermitian_eigensystem");
  ComplexMatrix a = m;
  ComplexMatrix v;
  detail::jacobi_diagonalize(a, &v);

  const std::size_t n = m.dim();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() > a(j, j).real();
  });

  EigenSystem out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
  }
  return out;
}

/// Spectrum only (non-increasing); skips eigenvector accumulation.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  detail::require_hermitian(m, "hermitian_eigenvalues");
  ComplexMatrix a = m;
  detail::jacobi_diagonalize(a, nullptr);
  return detail::sorted_diagonal(a);
}

/// Clamp round-off negatives of a PSD-intended spectrum entry.
inline double clamp_psd_eigenvalue(double lambda) {
  if (lambda >= 0.0) return lambda;
  if (lambda >= -tolerance::kClampNegative) return 0.0;
  if (lambda < -tolerance::kRejectNegative) {
    std::ostringstream msg;
    msg << "matrix is not positive semidefinite (eigenvalue " << lambda << ")";
    throw NumericalError(msg.str());
  }
  // Between the clamp and reject thresholds: still round-off, tolerated.
  return 0.0;
}

/// Principal square root of a Hermitian PSD matrix.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const EigenSystem es = hermitian_eigensystem(m);
  const std::size_t n = m.dim();
  std::vector<double> roots(n);
  for (std::size_t k = 0; k < n; ++k) roots[k] = std::sqrt(clamp_psd_eigenvalue(es.eigenvalues[k]));

  ComplexMatrix out(n);
  const ComplexMatrix& v = es.eigenvectors;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r; c < n; ++c) {
      complex s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += v(r, k) * roots[k] * std::conj(v(c, k));
      out(r, c) = s;
      out(c, r) = std::conj(s);
    }
    out(r, r) = out(r, r).real();
  }
  return out;
}

/// -sum p log2 p over a probability-like spectrum (entries below the floor
/// contribute nothing).
inline double shannon_entropy_bits(std::span<const double> probabilities) {
  double s = 0.0;
  for (double p : probabilities) {
    if (p > tolerance::kEntropyFloor) s -= p * std::log2(p);
  }
  return s;
}

/// S(rho) = -tr(rho log2 rho).
inline double von_neumann_entropy(const ComplexMatrix& rho) {
  const double tr = rho.trace().real();
  if (!(std::abs(tr - 1.0) <= tolerance::kTrace)) {
    std::ostringstream msg;
    msg << "von_neumann_entropy: trace deviates from 1 (trace = " << tr << ")";
    throw InvalidArgument(msg.str());
  }
  std::vector<double> spectrum = hermitian_eigenvalues(rho);
  for (double& p : spectrum) p = clamp_psd_eigenvalue(p);
  const double max_bits = std::log2(static_cast<double>(rho.dim()));
  return std::clamp(shannon_entropy_bits(spectrum), 0.0, max_bits);
}

/// h(x) = -x log2 x - (1-x) log2 (1-x).
inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream msg;
    msg << "binary_entropy: argument " << x << " outside [0, 1]";
    throw InvalidArgument(msg.str());
  }
  const double p[2] = {x, 1.0 - x};
  return shannon_entropy_bits(p);
}

/// ||M||_1 = sum |lambda_k| for Hermitian M.
inline double trace_norm_hermitian(const ComplexMatrix& m) {
  double s = 0.0;
  for (double lambda : hermitian_eigenvalues(m)) s += std::abs(lambda);
  return s;
}

}  // namespace monoscore
