#pragma once

// Named kets, single-qubit bases and the constants of the sequential
// discrimination protocol, together with self-checks of every expansion the
// protocols rely on.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ghzframe/core.hpp"
#include "ghzframe/rng.hpp"

namespace ghzframe {

// ---------------------------------------------------------------------------
// Constants

struct ProtocolConstants {
  double alpha, beta, p, q, r, s, t, u;

  static const ProtocolConstants& standard() {
    static const ProtocolConstants c = [] {
      ProtocolConstants k{};
      const double sqrt2 = std::sqrt(2.0), sqrt3 = std::sqrt(3.0), sqrt6 = std::sqrt(6.0);
      k.alpha = std::sqrt(3.0 + sqrt6) / (2.0 * sqrt6);
      k.beta = std::sqrt(3.0 - sqrt6) / (2.0 * sqrt6);
      k.p = std::sqrt(2.0 - sqrt2) / 2.0;
      k.q = std::sqrt(2.0 + sqrt2) / 2.0;
      k.r = (3.0 + sqrt3) * k.q / (12.0 * k.alpha);
      k.s = (3.0 - sqrt3) * k.q / (12.0 * k.beta);
      k.t = (3.0 - sqrt3) * k.p / (12.0 * k.alpha);
      k.u = (3.0 + sqrt3) * k.p / (12.0 * k.beta);
      return k;
    }();
    return c;
  }
};

// ---------------------------------------------------------------------------
// Single-qubit bases

enum class BasisName : std::uint8_t { z, x, y, a, b, c, d, e, f };

inline constexpr std::array<BasisName, 9> kAllBases = {BasisName::z, BasisName::x, BasisName::y,
                                                       BasisName::a, BasisName::b, BasisName::c,
                                                       BasisName::d, BasisName::e, BasisName::f};

constexpr char basis_letter(BasisName b) { return "zxyabcdef"[static_cast<int>(b)]; }

struct BasisPair {
  BasisName name;
  StateVector ket0;
  StateVector ket1;

  const StateVector& ket(int bit) const { return bit == 0 ? ket0 : ket1; }
};

namespace detail {

inline std::array<BasisPair, 9> build_bases() {
  const auto& k = ProtocolConstants::standard();
  const double h = 1.0 / std::sqrt(2.0);
  const Complex i{0.0, 1.0};
  auto q = [](Complex a, Complex b) { return StateVector::qubit(a, b); };
  return {{
      {BasisName::z, q(1.0, 0.0), q(0.0, 1.0)},
      {BasisName::x, q(h, h), q(h, -h)},
      {BasisName::y, q(h, h * i), q(h, -h * i)},
      {BasisName::a, q(k.p, k.q), q(k.q, -k.p)},
      {BasisName::b, q(-k.p, k.q), q(k.q, k.p)},
      {BasisName::c, q(-k.r, k.s), q(-k.s, -k.r)},
      {BasisName::d, q(k.t, k.u), q(k.u, -k.t)},
      {BasisName::e, q(k.r, k.s), q(k.s, -k.r)},
      {BasisName::f, q(-k.t, k.u), q(k.u, k.t)},
  }};
}

}  // namespace detail

inline const BasisPair& basis_pair(BasisName name) {
  static const auto table = detail::build_bases();
  return table[static_cast<std::size_t>(name)];
}

/// Shorthand for basis_pair(b).ket(bit).
inline const StateVector& ket(BasisName b, int bit) { return basis_pair(b).ket(bit); }

// ---------------------------------------------------------------------------
// Named states

enum class StateName : std::uint8_t { ghz, ghz_perp, phi0, phi1, psi0, psi1, eta0, eta1, psi12 };

inline constexpr std::array<StateName, 9> kAllStateNames = {
    StateName::ghz,  StateName::ghz_perp, StateName::phi0, StateName::phi1, StateName::psi0,
    StateName::psi1, StateName::eta0,     StateName::eta1, StateName::psi12};

constexpr std::string_view to_string(StateName n) {
  constexpr std::array<std::string_view, 9> names = {"GHZ",  "GHZperp", "phi0", "phi1", "psi0",
                                                     "psi1", "eta0",    "eta1", "Psi12"};
  return names[static_cast<std::size_t>(n)];
}

inline StateName parse_state_name(std::string_view text) {
  for (auto n : kAllStateNames) {
    if (to_string(n) == text) return n;
  }
  throw std::invalid_argument("unknown state name: " + std::string(text));
}

struct NamedState {
  StateName name;
  StateVector state;
};

namespace detail {

inline StateVector z_expansion(std::size_t n_qubits,
                               std::initializer_list<std::pair<Complex, const char*>> terms) {
  std::vector<Complex> amps(std::size_t{1} << n_qubits);
  for (const auto& [coeff, bits] : terms) {
    amps[std::stoul(bits, nullptr, 2)] += coeff;
  }
  return StateVector::from_amplitudes(std::move(amps));
}

inline StateVector sum_of(Complex ca, const StateVector& a, Complex cb, const StateVector& b) {
  return linear_combination({{ca, a}, {cb, b}});
}

inline std::array<NamedState, 9> build_named_states() {
  const double h = 1.0 / std::sqrt(2.0);
  const double g = 1.0 / (2.0 * std::sqrt(3.0));
  const Complex i{0.0, 1.0};

  const auto& y0 = ket(BasisName::y, 0);
  const auto& y1 = ket(BasisName::y, 1);
  auto ghz = sum_of(h, tensor(y0, y0, y0), h, tensor(y1, y1, y1));
  auto ghz_perp = z_expansion(3, {{0.5 * i, "001"}, {0.5 * i, "010"}, {0.5 * i, "100"}, {-0.5 * i, "111"}});

  auto phi0 = z_expansion(4, {{0.5, "0101"}, {-0.5, "0110"}, {-0.5, "1001"}, {0.5, "1010"}});
  auto phi1 = z_expansion(4, {{2 * g, "0011"},
                              {-g, "0101"},
                              {-g, "0110"},
                              {-g, "1001"},
                              {-g, "1010"},
                              {2 * g, "1100"}});
  auto psi0 = sum_of(h, phi0, h, phi1);
  auto psi1 = sum_of(h, phi0, -h, phi1);
  auto eta0 = sum_of(h, phi0, h * i, phi1);
  auto eta1 = sum_of(h, phi0, -h * i, phi1);

  auto psi12 = sum_of(h, tensor(eta0, eta0, eta0), h, tensor(eta1, eta1, eta1));

  // Second route through the logical-Z expansion; a transcription slip in
  // either construction shows up here.
  auto psi12_check = linear_combination({{0.5, tensor(phi0, phi0, phi0)},
                                         {-0.5, tensor(phi0, phi1, phi1)},
                                         {-0.5, tensor(phi1, phi0, phi1)},
                                         {-0.5, tensor(phi1, phi1, phi0)}});
  if (fidelity(psi12, psi12_check) < 1.0 - kExactTol) {
    throw std::logic_error("Psi12: product and expansion constructions disagree");
  }

  return {{{StateName::ghz, std::move(ghz)},
           {StateName::ghz_perp, std::move(ghz_perp)},
           {StateName::phi0, std::move(phi0)},
           {StateName::phi1, std::move(phi1)},
           {StateName::psi0, std::move(psi0)},
           {StateName::psi1, std::move(psi1)},
           {StateName::eta0, std::move(eta0)},
           {StateName::eta1, std::move(eta1)},
           {StateName::psi12, std::move(psi12)}}};
}

}  // namespace detail

/// The canonical state `name`, built once per process.
inline const NamedState& make_named(StateName name) {
  static const auto table = detail::build_named_states();
  return table[static_cast<std::size_t>(name)];
}

inline const NamedState& make_named(std::string_view name) { return make_named(parse_state_name(name)); }

inline const StateVector& named(StateName name) { return make_named(name).state; }

// ---------------------------------------------------------------------------
// Expansion identities

/// Kets that appear as tensor factors in the three-party expansions.
enum class Factor : std::uint8_t { z0, z1, x0, x1, phi0, phi1, psi0, psi1 };

inline const StateVector& factor_state(Factor f) {
  switch (f) {
    case Factor::z0: return ket(BasisName::z, 0);
    case Factor::z1: return ket(BasisName::z, 1);
    case Factor::x0: return ket(BasisName::x, 0);
    case Factor::x1: return ket(BasisName::x, 1);
    case Factor::phi0: return named(StateName::phi0);
    case Factor::phi1: return named(StateName::phi1);
    case Factor::psi0: return named(StateName::psi0);
    case Factor::psi1: return named(StateName::psi1);
  }
  throw std::logic_error("unreachable");
}

struct ExpansionTerm {
  int sign;
  std::array<Factor, 3> factors;
};

/// lhs = 1/2 * sum(sign * factor1 (x) factor2 (x) factor3)
struct DecompositionIdentity {
  std::string_view name;
  StateName lhs;
  std::array<ExpansionTerm, 4> terms;
};

inline const std::array<DecompositionIdentity, 8>& decomposition_identities() {
  using F = Factor;
  static const std::array<DecompositionIdentity, 8> table = {{
      {"GHZ:ZZZ", StateName::ghz,
       {{{+1, {F::z0, F::z0, F::z0}}, {-1, {F::z0, F::z1, F::z1}}, {-1, {F::z1, F::z0, F::z1}}, {-1, {F::z1, F::z1, F::z0}}}}},
      {"GHZ:ZXX", StateName::ghz,
       {{{+1, {F::z0, F::x0, F::x1}}, {+1, {F::z0, F::x1, F::x0}}, {-1, {F::z1, F::x0, F::x0}}, {+1, {F::z1, F::x1, F::x1}}}}},
      {"GHZ:XZX", StateName::ghz,
       {{{+1, {F::x0, F::z0, F::x1}}, {-1, {F::x0, F::z1, F::x0}}, {+1, {F::x1, F::z0, F::x0}}, {+1, {F::x1, F::z1, F::x1}}}}},
      {"GHZ:XXZ", StateName::ghz,
       {{{-1, {F::x0, F::x0, F::z1}}, {+1, {F::x0, F::x1, F::z0}}, {+1, {F::x1, F::x0, F::z0}}, {+1, {F::x1, F::x1, F::z1}}}}},
      {"Psi12:ZZZ", StateName::psi12,
       {{{+1, {F::phi0, F::phi0, F::phi0}}, {-1, {F::phi0, F::phi1, F::phi1}}, {-1, {F::phi1, F::phi0, F::phi1}}, {-1, {F::phi1, F::phi1, F::phi0}}}}},
      {"Psi12:ZXX", StateName::psi12,
       {{{+1, {F::phi0, F::psi0, F::psi1}}, {+1, {F::phi0, F::psi1, F::psi0}}, {-1, {F::phi1, F::psi0, F::psi0}}, {+1, {F::phi1, F::psi1, F::psi1}}}}},
      {"Psi12:XZX", StateName::psi12,
       {{{+1, {F::psi0, F::phi0, F::psi1}}, {-1, {F::psi0, F::phi1, F::psi0}}, {+1, {F::psi1, F::phi0, F::psi0}}, {+1, {F::psi1, F::phi1, F::psi1}}}}},
      {"Psi12:XXZ", StateName::psi12,
       {{{-1, {F::psi0, F::psi0, F::phi1}}, {+1, {F::psi0, F::psi1, F::phi0}}, {+1, {F::psi1, F::psi0, F::phi0}}, {+1, {F::psi1, F::psi1, F::phi1}}}}},
  }};
  return table;
}

/// Right-hand side of an identity. `flipped_term` negates one term, which is
/// how the verifier's negative control is produced.
inline StateVector expand(const DecompositionIdentity& id, std::optional<std::size_t> flipped_term = {}) {
  std::vector<std::pair<Complex, StateVector>> terms;
  for (std::size_t k = 0; k < id.terms.size(); ++k) {
    const auto& t = id.terms[k];
    const double sign = (flipped_term == k) ? -t.sign : t.sign;
    terms.emplace_back(0.5 * sign, tensor(factor_state(t.factors[0]), factor_state(t.factors[1]),
                                          factor_state(t.factors[2])));
  }
  return linear_combination(std::span<const std::pair<Complex, StateVector>>(terms));
}

/// A product-basis expansion over four qubits: coeff * |b1 k1> (x) ... (x) |b4 k4>.
struct ProductTerm {
  double coeff;
  std::array<BasisName, 4> bases;
  std::array<int, 4> bits;
};

struct LocalExpansion {
  std::string_view name;
  StateName lhs;
  std::vector<ProductTerm> terms;
};

/// The single-qubit-basis expansions that make local discrimination possible:
/// phi0/phi1 in the (z, z, x, x) basis and psi0/psi1 in the adaptive
/// (z, x, {a|b}, {c|d|e|f}) bases.
inline const std::vector<LocalExpansion>& local_expansions() {
  static const std::vector<LocalExpansion> table = [] {
    using B = BasisName;
    const auto& k = ProtocolConstants::standard();
    const double g = 1.0 / (2.0 * std::sqrt(3.0));
    const double al = k.alpha, be = k.beta;
    constexpr std::array<B, 4> zzxx = {B::z, B::z, B::x, B::x};
    auto zx = [](double c, int b1, int b2, int b3, int b4) {
      return ProductTerm{c, zzxx, {b1, b2, b3, b4}};
    };
    auto seq = [](double c, int z, int x, B third, int b3, B fourth, int b4) {
      return ProductTerm{c, {B::z, B::x, third, fourth}, {z, x, b3, b4}};
    };
    std::vector<LocalExpansion> v;
    v.push_back({"phi0:zzxx", StateName::phi0,
                 {zx(-0.5, 0, 1, 0, 1), zx(0.5, 0, 1, 1, 0), zx(0.5, 1, 0, 0, 1), zx(-0.5, 1, 0, 1, 0)}});
    v.push_back({"phi1:zzxx", StateName::phi1,
                 {zx(g, 0, 0, 0, 0), zx(-g, 0, 0, 0, 1), zx(-g, 0, 0, 1, 0), zx(g, 0, 0, 1, 1),
                  zx(-g, 0, 1, 0, 0), zx(g, 0, 1, 1, 1), zx(-g, 1, 0, 0, 0), zx(g, 1, 0, 1, 1),
                  zx(g, 1, 1, 0, 0), zx(g, 1, 1, 0, 1), zx(g, 1, 1, 1, 0), zx(g, 1, 1, 1, 1)}});
    v.push_back({"psi0:adaptive", StateName::psi0,
                 {seq(al, 0, 0, B::a, 0, B::c, 0), seq(be, 0, 0, B::a, 1, B::d, 1),
                  seq(al, 0, 1, B::b, 0, B::e, 0), seq(be, 0, 1, B::b, 1, B::f, 1),
                  seq(be, 1, 0, B::b, 0, B::f, 0), seq(al, 1, 0, B::b, 1, B::e, 1),
                  seq(-be, 1, 1, B::a, 0, B::d, 0), seq(al, 1, 1, B::a, 1, B::c, 1)}});
    v.push_back({"psi1:adaptive", StateName::psi1,
                 {seq(be, 0, 0, B::a, 0, B::c, 1), seq(al, 0, 0, B::a, 1, B::d, 0),
                  seq(be, 0, 1, B::b, 0, B::e, 1), seq(-al, 0, 1, B::b, 1, B::f, 0),
                  seq(al, 1, 0, B::b, 0, B::f, 1), seq(-be, 1, 0, B::b, 1, B::e, 0),
                  seq(al, 1, 1, B::a, 0, B::d, 1), seq(-be, 1, 1, B::a, 1, B::c, 0)}});
    return v;
  }();
  return table;
}

inline StateVector expand(const LocalExpansion& ex) {
  std::vector<std::pair<Complex, StateVector>> terms;
  for (const auto& t : ex.terms) {
    terms.emplace_back(t.coeff, tensor(ket(t.bases[0], t.bits[0]), ket(t.bases[1], t.bits[1]),
                                       ket(t.bases[2], t.bits[2]), ket(t.bases[3], t.bits[3])));
  }
  return linear_combination(std::span<const std::pair<Complex, StateVector>>(terms));
}

// ---------------------------------------------------------------------------
// Verification reports

struct IdentityCheck {
  std::string name;
  double fidelity;
  bool passed;
};

struct DecompositionReport {
  std::vector<IdentityCheck> checks;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
};

/// Checks the eight three-party expansions (four for GHZ, four for Psi12) to
/// fidelity 1 - 1e-10. With `corrupt`, the second term of GHZ:ZZZ has its
/// sign flipped, which must fail (fidelity 1/4).
inline DecompositionReport verify_decompositions(bool corrupt = false) {
  constexpr double tol = 1e-10;
  DecompositionReport report;
  for (const auto& id : decomposition_identities()) {
    const bool flip = corrupt && id.name == "GHZ:ZZZ";
    const auto rhs = expand(id, flip ? std::optional<std::size_t>{1} : std::nullopt);
    const double f = fidelity(named(id.lhs), rhs);
    report.checks.push_back({std::string(id.name), f, f >= 1.0 - tol});
  }
  return report;
}

inline DecompositionReport verify_local_expansions() {
  constexpr double tol = 1e-10;
  DecompositionReport report;
  for (const auto& ex : local_expansions()) {
    const double f = fidelity(named(ex.lhs), expand(ex));
    report.checks.push_back({std::string(ex.name), f, f >= 1.0 - tol});
  }
  return report;
}

/// Normalization and orthogonality of the basis pairs plus the scalar
/// relations among the protocol constants.
inline DecompositionReport verify_constants() {
  const auto& k = ProtocolConstants::standard();
  DecompositionReport report;
  auto add = [&](std::string name, double error, double tol) {
    report.checks.push_back({std::move(name), 1.0 - error, error <= tol});
  };
  add("4(alpha^2+beta^2)=1", std::abs(4.0 * (k.alpha * k.alpha + k.beta * k.beta) - 1.0), 1e-14);
  add("p^2+q^2=1", std::abs(k.p * k.p + k.q * k.q - 1.0), kExactTol);
  add("r^2+s^2=1", std::abs(k.r * k.r + k.s * k.s - 1.0), kExactTol);
  add("t^2+u^2=1", std::abs(k.t * k.t + k.u * k.u - 1.0), kExactTol);
  for (auto b : kAllBases) {
    const auto& pair = basis_pair(b);
    const double err = std::max({std::abs(pair.ket0.norm() - 1.0), std::abs(pair.ket1.norm() - 1.0),
                                 std::abs(inner_product(pair.ket0, pair.ket1))});
    add(std::string("basis ") + basis_letter(b), err, kExactTol);
  }
  return report;
}

struct InvarianceReport {
  std::string name;
  std::size_t trials;
  double min_fidelity;
  double tolerance;
  std::uint64_t seed;

  bool passed() const { return min_fidelity >= 1.0 - tolerance; }
};

inline constexpr std::array<std::size_t, 4> kQubits1to4 = {1, 2, 3, 4};

/// Applies a Haar-random U to all four qubits of `name` in each trial and
/// records the worst fidelity with the untouched state.
inline InvarianceReport verify_u4_invariance(StateName name, std::size_t trials, RngStream& rng) {
  const auto& original = named(name);
  if (original.n_qubits() != 4) throw std::invalid_argument("verify_u4_invariance: needs a 4-qubit state");
  double worst = 1.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto u = haar_random_unitary(rng);
    worst = std::min(worst, fidelity(original, apply_collective(original, u, kQubits1to4)));
  }
  return {std::string(to_string(name)) + " under U^(x)4", trials, worst, 1e-10, rng.seed()};
}

/// The three player blocks of Psi12, 1-based.
inline constexpr std::array<std::array<std::size_t, 4>, 3> kPlayerBlocks = {
    {{1, 2, 3, 4}, {5, 6, 7, 8}, {9, 10, 11, 12}}};

/// Independent Haar U_a, U_b, U_c, each applied fourfold to one player block.
inline InvarianceReport verify_psi12_invariance(std::size_t trials, RngStream& rng) {
  const auto& original = named(StateName::psi12);
  double worst = 1.0;
  for (std::size_t t = 0; t < trials; ++t) {
    StateVector s = original;
    for (const auto& block : kPlayerBlocks) s = apply_collective(std::move(s), haar_random_unitary(rng), block);
    worst = std::min(worst, fidelity(original, s));
  }
  return {"Psi12 under Ra(x)Rb(x)Rc", trials, worst, kAccumulatedTol, rng.seed()};
}

}  // namespace ghzframe
