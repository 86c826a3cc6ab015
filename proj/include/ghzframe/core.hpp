#pragma once

// Dense state-vector engine for up to 12 qubits.
//
// Ordering convention: qubit 1 is the most significant bit of the amplitude
// index, so |b1 b2 ... bn> lives at index b1*2^(n-1) + ... + bn. Qubit
// positions are 1-based everywhere in the public API.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ghzframe/rng.hpp"

namespace ghzframe {

using Complex = std::complex<double>;

/// Algebraic identities in double precision.
inline constexpr double kExactTol = 1e-12;
/// Identities checked after accumulated 12-qubit operations, and the
/// probability mass treated as "never happens".
inline constexpr double kAccumulatedTol = 1e-9;

inline constexpr std::size_t kMaxQubits = 12;

/// Raised when a state violates a protocol's precondition, e.g. a measured
/// block carries weight outside the subspace the observable is defined on.
class MalformedState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StateVector {
 public:
  /// Takes ownership of `amplitudes`. Throws std::invalid_argument unless the
  /// length is a power of two (1..2^12) and the norm is 1 within 1e-9.
  static StateVector from_amplitudes(std::vector<Complex> amplitudes) {
    StateVector s(std::move(amplitudes));
    const double n = s.norm();
    if (std::abs(n - 1.0) > kAccumulatedTol) {
      throw std::invalid_argument("StateVector: amplitudes not normalized (norm " +
                                  std::to_string(n) + ")");
    }
    return s;
  }

  /// Rescales `amplitudes` to unit norm. Throws on a zero vector.
  static StateVector normalized(std::vector<Complex> amplitudes) {
    StateVector s(std::move(amplitudes));
    const double n = s.norm();
    if (n < kExactTol) throw std::invalid_argument("StateVector: zero vector");
    for (auto& a : s.amplitudes_) a /= n;
    return s;
  }

  static StateVector basis(std::size_t n_qubits, std::size_t index) {
    if (n_qubits == 0 || n_qubits > kMaxQubits) {
      throw std::invalid_argument("StateVector: qubit count out of range");
    }
    std::vector<Complex> amps(std::size_t{1} << n_qubits);
    if (index >= amps.size()) throw std::out_of_range("StateVector: basis index out of range");
    amps[index] = 1.0;
    return StateVector(std::move(amps));
  }

  /// Single-qubit ket a|0> + b|1>.
  static StateVector qubit(Complex a, Complex b) { return from_amplitudes({a, b}); }

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  std::size_t dimension() const noexcept { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_[i]; }

  double norm() const {
    double sum = 0.0;
    for (const auto& a : amplitudes_) sum += std::norm(a);
    return std::sqrt(sum);
  }

  /// Moves the amplitudes out; used by operations that build a successor
  /// state from this one.
  std::vector<Complex> release() && { return std::move(amplitudes_); }

 private:
  explicit StateVector(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
    const std::size_t dim = amplitudes_.size();
    if (dim < 2 || (dim & (dim - 1)) != 0 || dim > (std::size_t{1} << kMaxQubits)) {
      throw std::invalid_argument("StateVector: length must be 2^n with 1 <= n <= 12");
    }
    n_qubits_ = static_cast<std::size_t>(std::countr_zero(dim));
  }

  std::size_t n_qubits_ = 0;
  std::vector<Complex> amplitudes_;
};

/// <a|b>. Throws std::invalid_argument on a dimension mismatch.
inline Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.dimension() != b.dimension()) {
    throw std::invalid_argument("inner_product: dimension mismatch");
  }
  Complex sum = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) sum += std::conj(a[i]) * b[i];
  return sum;
}

/// |<a|b>|^2, clamped to [0, 1].
inline double fidelity(const StateVector& a, const StateVector& b) {
  return std::clamp(std::norm(inner_product(a, b)), 0.0, 1.0);
}

/// Kronecker product with `a`'s qubits most significant.
inline StateVector tensor(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() + b.n_qubits() > kMaxQubits) {
    throw std::invalid_argument("tensor: more than 12 qubits");
  }
  std::vector<Complex> out(a.dimension() * b.dimension());
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    for (std::size_t j = 0; j < b.dimension(); ++j) out[i * b.dimension() + j] = a[i] * b[j];
  }
  return StateVector::from_amplitudes(std::move(out));
}

template <typename... Rest>
StateVector tensor(const StateVector& a, const StateVector& b, const Rest&... rest) {
  if constexpr (sizeof...(rest) == 0) {
    return tensor(a, b);
  } else {
    return tensor(tensor(a, b), rest...);
  }
}

/// Sum of c_k |s_k>. The result must already be normalized (within 1e-9);
/// this is how identities written as explicit expansions are built.
inline StateVector linear_combination(std::span<const std::pair<Complex, StateVector>> terms) {
  if (terms.empty()) throw std::invalid_argument("linear_combination: no terms");
  std::vector<Complex> out(terms.front().second.dimension());
  for (const auto& [coeff, state] : terms) {
    if (state.dimension() != out.size()) {
      throw std::invalid_argument("linear_combination: dimension mismatch");
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += coeff * state[i];
  }
  return StateVector::from_amplitudes(std::move(out));
}

inline StateVector linear_combination(std::initializer_list<std::pair<Complex, StateVector>> terms) {
  return linear_combination(std::span<const std::pair<Complex, StateVector>>(terms.begin(), terms.size()));
}

class Qubit1Unitary {
 public:
  /// Row-major entries {u00, u01, u10, u11}. Throws std::invalid_argument
  /// unless U U^dagger = I within 1e-12.
  static Qubit1Unitary from_entries(const std::array<Complex, 4>& m) {
    Qubit1Unitary u(m);
    if (u.unitarity_error() > kExactTol) {
      throw std::invalid_argument("Qubit1Unitary: matrix is not unitary");
    }
    return u;
  }

  static Qubit1Unitary identity() { return Qubit1Unitary({1.0, 0.0, 0.0, 1.0}); }
  static Qubit1Unitary pauli_x() { return Qubit1Unitary({0.0, 1.0, 1.0, 0.0}); }

  /// |k0><z0| + |k1><z1|: maps the computational basis onto {k0, k1}.
  static Qubit1Unitary from_columns(const StateVector& k0, const StateVector& k1) {
    return from_entries({k0[0], k1[0], k0[1], k1[1]});
  }

  Complex operator()(std::size_t row, std::size_t col) const { return m_[row * 2 + col]; }
  const std::array<Complex, 4>& entries() const noexcept { return m_; }

  Qubit1Unitary adjoint() const {
    return Qubit1Unitary({std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3])});
  }

  friend Qubit1Unitary operator*(const Qubit1Unitary& a, const Qubit1Unitary& b) {
    return Qubit1Unitary({a.m_[0] * b.m_[0] + a.m_[1] * b.m_[2], a.m_[0] * b.m_[1] + a.m_[1] * b.m_[3],
                          a.m_[2] * b.m_[0] + a.m_[3] * b.m_[2], a.m_[2] * b.m_[1] + a.m_[3] * b.m_[3]});
  }

  /// U applied to a single-qubit ket.
  StateVector apply(const StateVector& ket) const {
    if (ket.n_qubits() != 1) throw std::invalid_argument("Qubit1Unitary::apply: expects one qubit");
    return StateVector::from_amplitudes(
        {m_[0] * ket[0] + m_[1] * ket[1], m_[2] * ket[0] + m_[3] * ket[1]});
  }

  /// max |(U U^dagger - I)_ij|
  double unitarity_error() const {
    const auto p = *this * adjoint();
    return std::max({std::abs(p(0, 0) - 1.0), std::abs(p(0, 1)), std::abs(p(1, 0)),
                     std::abs(p(1, 1) - 1.0)});
  }

 private:
  explicit Qubit1Unitary(const std::array<Complex, 4>& m) : m_(m) {}
  std::array<Complex, 4> m_;
};

namespace detail {

inline void check_qubit(const StateVector& state, std::size_t qubit) {
  if (qubit < 1 || qubit > state.n_qubits()) {
    throw std::out_of_range("qubit index " + std::to_string(qubit) + " outside 1.." +
                            std::to_string(state.n_qubits()));
  }
}

inline std::size_t bit_of(std::size_t n_qubits, std::size_t qubit) {
  return std::size_t{1} << (n_qubits - qubit);
}

/// Calls fn(i) for every index i with `bit` clear; i | bit is its partner.
template <class Fn>
inline void for_each_pair(std::size_t dim, std::size_t bit, Fn&& fn) {
  for (std::size_t hi = 0; hi < dim; hi += 2 * bit)
    for (std::size_t i = hi; i < hi + bit; ++i) fn(i);
}

/// Index offsets of the 2^k configurations of `qubits` (first listed qubit is
/// the most significant bit of the local index), plus the mask they cover.
inline std::pair<std::vector<std::size_t>, std::size_t> block_offsets(
    const StateVector& state, std::span<const std::size_t> qubits) {
  std::size_t mask = 0;
  for (auto q : qubits) {
    check_qubit(state, q);
    const auto b = bit_of(state.n_qubits(), q);
    if (mask & b) throw std::invalid_argument("repeated qubit index");
    mask |= b;
  }
  const std::size_t k = qubits.size();
  std::vector<std::size_t> offsets(std::size_t{1} << k);
  for (std::size_t local = 0; local < offsets.size(); ++local) {
    std::size_t off = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (local & (std::size_t{1} << (k - 1 - j))) off |= bit_of(state.n_qubits(), qubits[j]);
    }
    offsets[local] = off;
  }
  return {std::move(offsets), mask};
}

}  // namespace detail

/// Applies `u` to `qubit` (1-based), identity elsewhere.
inline StateVector apply_local(StateVector state, const Qubit1Unitary& u, std::size_t qubit) {
  detail::check_qubit(state, qubit);
  const std::size_t bit = detail::bit_of(state.n_qubits(), qubit);
  auto amps = std::move(state).release();
  const Complex u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
  detail::for_each_pair(amps.size(), bit, [&](std::size_t i) {
    const Complex a0 = amps[i];
    const Complex a1 = amps[i | bit];
    amps[i] = u00 * a0 + u01 * a1;
    amps[i | bit] = u10 * a0 + u11 * a1;
  });
  return StateVector::from_amplitudes(std::move(amps));
}

/// Applies the same `u` to every listed qubit (a rigid rotation of the lab
/// holding them).
inline StateVector apply_collective(StateVector state, const Qubit1Unitary& u,
                                    std::span<const std::size_t> qubits) {
  for (auto q : qubits) state = apply_local(std::move(state), u, q);
  return state;
}

/// Applies I + c |v><v| on `qubits`, where v is a unit vector on those qubits.
/// Any unitary that acts as a phase on one direction and as identity on its
/// complement has this form (c = e^{i theta} - 1).
inline StateVector apply_rank_one_update(StateVector state, const StateVector& direction, Complex c,
                                         std::span<const std::size_t> qubits) {
  if (direction.n_qubits() != qubits.size()) {
    throw std::invalid_argument("apply_rank_one_update: direction size mismatch");
  }
  const auto [offsets, mask] = detail::block_offsets(state, qubits);
  auto amps = std::move(state).release();
  for (std::size_t base = 0; base < amps.size(); ++base) {
    if (base & mask) continue;
    Complex overlap = 0.0;
    for (std::size_t l = 0; l < offsets.size(); ++l) overlap += std::conj(direction[l]) * amps[base | offsets[l]];
    overlap *= c;
    for (std::size_t l = 0; l < offsets.size(); ++l) amps[base | offsets[l]] += overlap * direction[l];
  }
  return StateVector::from_amplitudes(std::move(amps));
}

/// One outcome of a projective measurement: the projector onto the span of
/// `span`, an orthonormal family of vectors on the acting qubits.
struct Projector {
  std::string label;
  std::vector<StateVector> span;
};

/// Orthogonal projectors on an ordered subset of qubits. The projectors need
/// not sum to the identity; weight outside all of them is the residual.
class ProjectiveObservable {
 public:
  /// Throws std::invalid_argument unless every spanning vector lives on
  /// `acting_qubits.size()` qubits and all spanning vectors (across all
  /// projectors) are orthonormal within 1e-12. Orthonormal spans make each
  /// projector Hermitian and idempotent and distinct projectors orthogonal.
  static ProjectiveObservable create(std::vector<std::size_t> acting_qubits,
                                     std::vector<Projector> projectors) {
    if (acting_qubits.empty() || projectors.empty()) {
      throw std::invalid_argument("ProjectiveObservable: empty observable");
    }
    std::vector<const StateVector*> all;
    for (const auto& p : projectors) {
      if (p.span.empty()) throw std::invalid_argument("ProjectiveObservable: empty projector");
      for (const auto& v : p.span) {
        if (v.n_qubits() != acting_qubits.size()) {
          throw std::invalid_argument("ProjectiveObservable: spanning vector size mismatch");
        }
        all.push_back(&v);
      }
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (std::size_t j = i; j < all.size(); ++j) {
        const double expected = i == j ? 1.0 : 0.0;
        if (std::abs(inner_product(*all[i], *all[j]) - expected) > kExactTol) {
          throw std::invalid_argument("ProjectiveObservable: spanning vectors not orthonormal");
        }
      }
    }
    return ProjectiveObservable(std::move(acting_qubits), std::move(projectors));
  }

  /// Two-outcome measurement of one qubit in the orthonormal basis {k0, k1},
  /// labelled "0" and "1".
  static ProjectiveObservable single_qubit(std::size_t qubit, const StateVector& k0,
                                           const StateVector& k1) {
    return create({qubit}, {Projector{"0", {k0}}, Projector{"1", {k1}}});
  }

  const std::vector<std::size_t>& acting_qubits() const noexcept { return qubits_; }
  const std::vector<Projector>& projectors() const noexcept { return projectors_; }

 private:
  ProjectiveObservable(std::vector<std::size_t> q, std::vector<Projector> p)
      : qubits_(std::move(q)), projectors_(std::move(p)) {}

  std::vector<std::size_t> qubits_;
  std::vector<Projector> projectors_;
};

/// Born probabilities ||P_k state||^2, one per projector, in declaration order.
inline std::vector<double> outcome_probabilities(const StateVector& state,
                                                 const ProjectiveObservable& obs) {
  const auto [offsets, mask] = detail::block_offsets(state, obs.acting_qubits());
  std::vector<double> probs(obs.projectors().size(), 0.0);
  for (std::size_t base = 0; base < state.dimension(); ++base) {
    if (base & mask) continue;
    for (std::size_t k = 0; k < probs.size(); ++k) {
      for (const auto& v : obs.projectors()[k].span) {
        Complex c = 0.0;
        for (std::size_t l = 0; l < offsets.size(); ++l) c += std::conj(v[l]) * state[base | offsets[l]];
        probs[k] += std::norm(c);
      }
    }
  }
  return probs;
}

struct MeasurementResult {
  std::size_t index;  // position of the observed projector
  std::string label;
  StateVector post;
};

/// Samples an outcome with Born probability and returns the renormalized
/// post-measurement state. Throws MalformedState when the projectors miss
/// more than 1e-9 of the state's weight.
inline MeasurementResult measure(const StateVector& state, const ProjectiveObservable& obs,
                                 RngStream& rng) {
  const auto probs = outcome_probabilities(state, obs);
  double total = 0.0;
  for (double p : probs) total += p;
  if (std::abs(total - 1.0) > kAccumulatedTol) {
    throw MalformedState("measure: projectors capture probability " + std::to_string(total) +
                         ", expected 1");
  }
  const double draw = rng.uniform() * total;
  std::size_t chosen = probs.size() - 1;
  double cumulative = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    cumulative += probs[k];
    if (draw < cumulative && probs[k] > 0.0) {
      chosen = k;
      break;
    }
  }
  while (probs[chosen] <= 0.0 && chosen > 0) --chosen;

  const auto [offsets, mask] = detail::block_offsets(state, obs.acting_qubits());
  const auto& span = obs.projectors()[chosen].span;
  const double scale = 1.0 / std::sqrt(probs[chosen]);
  std::vector<Complex> out(state.dimension());
  for (std::size_t base = 0; base < state.dimension(); ++base) {
    if (base & mask) continue;
    for (const auto& v : span) {
      Complex c = 0.0;
      for (std::size_t l = 0; l < offsets.size(); ++l) c += std::conj(v[l]) * state[base | offsets[l]];
      c *= scale;
      for (std::size_t l = 0; l < offsets.size(); ++l) out[base | offsets[l]] += c * v[l];
    }
  }
  return {chosen, obs.projectors()[chosen].label, StateVector::normalized(std::move(out))};
}

/// Measurement of one qubit in the orthonormal basis {k0, k1}; returns the
/// outcome bit and the post-measurement state. Same distribution and the
/// same RNG consumption as measure() with ProjectiveObservable::single_qubit,
/// without building the observable.
inline std::pair<int, StateVector> measure_qubit(StateVector state, std::size_t qubit, const StateVector& k0,
                                                 const StateVector& k1, RngStream& rng) {
  detail::check_qubit(state, qubit);
  if (k0.n_qubits() != 1 || k1.n_qubits() != 1 || std::abs(inner_product(k0, k1)) > kExactTol) {
    throw std::invalid_argument("measure_qubit: basis must be two orthonormal single-qubit kets");
  }
  const std::size_t bit = detail::bit_of(state.n_qubits(), qubit);
  const Complex c00 = std::conj(k0[0]), c01 = std::conj(k0[1]);
  const Complex c10 = std::conj(k1[0]), c11 = std::conj(k1[1]);
  auto amps = std::move(state).release();
  double p0 = 0.0, p1 = 0.0;
  detail::for_each_pair(amps.size(), bit, [&](std::size_t i) {
    p0 += std::norm(c00 * amps[i] + c01 * amps[i | bit]);
    p1 += std::norm(c10 * amps[i] + c11 * amps[i | bit]);
  });
  const double total = p0 + p1;
  if (std::abs(total - 1.0) > kAccumulatedTol) {
    throw MalformedState("measure_qubit: state not normalized");
  }
  const int outcome = (rng.uniform() * total < p0 && p0 > 0.0) || p1 <= 0.0 ? 0 : 1;
  const Complex ca = outcome == 0 ? c00 : c10, cb = outcome == 0 ? c01 : c11;
  const StateVector& k = outcome == 0 ? k0 : k1;
  const double scale = 1.0 / std::sqrt(outcome == 0 ? p0 : p1);
  const Complex k0a = k[0], k1a = k[1];
  detail::for_each_pair(amps.size(), bit, [&](std::size_t i) {
    const Complex c = (ca * amps[i] + cb * amps[i | bit]) * scale;
    amps[i] = c * k0a;
    amps[i | bit] = c * k1a;
  });
  return {outcome, StateVector::from_amplitudes(std::move(amps))};
}

/// Haar-distributed 2x2 unitary: Gram-Schmidt QR of a complex Gaussian
/// matrix. Gram-Schmidt leaves R with a positive real diagonal, which is the
/// phase correction that makes Q exactly Haar.
inline Qubit1Unitary haar_random_unitary(RngStream& rng) {
  std::array<Complex, 4> g;
  for (auto& x : g) {
    const double re = rng.normal();
    const double im = rng.normal();
    x = Complex(re, im);
  }
  // columns of g: (g[0], g[2]) and (g[1], g[3])
  Complex c0a = g[0], c0b = g[2];
  const double n0 = std::sqrt(std::norm(c0a) + std::norm(c0b));
  c0a /= n0;
  c0b /= n0;
  const Complex proj = std::conj(c0a) * g[1] + std::conj(c0b) * g[3];
  Complex c1a = g[1] - proj * c0a, c1b = g[3] - proj * c0b;
  const double n1 = std::sqrt(std::norm(c1a) + std::norm(c1b));
  c1a /= n1;
  c1b /= n1;
  // A second projection pass keeps the columns orthogonal to ~1e-16.
  const Complex fix = std::conj(c0a) * c1a + std::conj(c0b) * c1b;
  c1a -= fix * c0a;
  c1b -= fix * c0b;
  const double n1b = std::sqrt(std::norm(c1a) + std::norm(c1b));
  return Qubit1Unitary::from_entries({c0a, c1a / n1b, c0b, c1b / n1b});
}

}  // namespace ghzframe
