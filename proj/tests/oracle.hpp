#pragma once

// Reference implementations used only by the tests. Nothing here calls into
// ghzframe's state algebra: kets are written out as amplitude lists and
// operators as explicit Kronecker products, so agreement with the library is
// evidence rather than tautology.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace oracle {

using C = std::complex<double>;
using Vec = std::vector<C>;
using Mat = std::vector<Vec>;  // row-major

inline const C I{0.0, 1.0};
inline const double H = 1.0 / std::sqrt(2.0);

inline Vec ket_from_terms(std::size_t n, const std::vector<std::pair<C, std::string>>& terms) {
  Vec v(std::size_t{1} << n, 0.0);
  for (const auto& [c, bits] : terms) {
    std::size_t idx = 0;
    for (char b : bits) idx = idx * 2 + static_cast<std::size_t>(b - '0');
    v[idx] += c;
  }
  return v;
}

inline Vec kron(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

inline Mat kron(const Mat& a, const Mat& b) {
  const std::size_t n = a.size(), m = b.size();
  Mat out(n * m, Vec(n * m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) out[i * m + k][j * m + l] = a[i][j] * b[k][l];
  return out;
}

inline Mat eye(std::size_t d) {
  Mat m(d, Vec(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) m[i][i] = 1.0;
  return m;
}

/// u on `qubit` (1-based, qubit 1 leftmost) of an n-qubit register.
inline Mat embed(const Mat& u, std::size_t qubit, std::size_t n) {
  Mat out = eye(1);
  for (std::size_t q = 1; q <= n; ++q) out = kron(out, q == qubit ? u : eye(2));
  return out;
}

inline Vec apply(const Mat& m, const Vec& v) {
  Vec out(v.size(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

inline C dot(const Vec& a, const Vec& b) {
  C s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline double fid(const Vec& a, const Vec& b) { return std::norm(dot(a, b)); }

inline Vec add(C ca, const Vec& a, C cb, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = ca * a[i] + cb * b[i];
  return out;
}

inline double max_diff(const Vec& a, const Vec& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Canonical states, written out in the computational basis.

inline Vec ghz() { return ket_from_terms(3, {{0.5, "000"}, {-0.5, "011"}, {-0.5, "101"}, {-0.5, "110"}}); }

inline Vec ghz_perp() {
  return ket_from_terms(3, {{0.5 * I, "001"}, {0.5 * I, "010"}, {0.5 * I, "100"}, {-0.5 * I, "111"}});
}

inline Vec phi0() { return ket_from_terms(4, {{0.5, "0101"}, {-0.5, "0110"}, {-0.5, "1001"}, {0.5, "1010"}}); }

inline Vec phi1() {
  const double g = 1.0 / std::sqrt(12.0);
  return ket_from_terms(4, {{2 * g, "0011"}, {-g, "0101"}, {-g, "0110"}, {-g, "1001"}, {-g, "1010"}, {2 * g, "1100"}});
}

inline Vec psi0() { return add(H, phi0(), H, phi1()); }
inline Vec psi1() { return add(H, phi0(), -H, phi1()); }

/// The 12-qubit state from its logical-Z expansion.
inline Vec psi12() {
  const Vec p0 = phi0(), p1 = phi1();
  Vec out(std::size_t{1} << 12, 0.0);
  const std::array<std::pair<double, std::array<const Vec*, 3>>, 4> terms = {{
      {0.5, {&p0, &p0, &p0}}, {-0.5, {&p0, &p1, &p1}}, {-0.5, {&p1, &p0, &p1}}, {-0.5, {&p1, &p1, &p0}}}};
  for (const auto& [c, f] : terms) {
    const Vec t = kron(kron(*f[0], *f[1]), *f[2]);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * t[i];
  }
  return out;
}

inline Mat mat2(C a, C b, C c, C d) { return {{a, b}, {c, d}}; }

/// Upper-tail probability of a chi-square statistic.
inline double chi2_pvalue(double statistic, double dof) {
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

/// Pearson goodness of fit; cells with zero expectation must have zero count
/// (otherwise the p-value is 0).
inline double goodness_of_fit(const std::vector<double>& observed, const std::vector<double>& probs) {
  double n = 0.0;
  for (double o : observed) n += o;
  double stat = 0.0;
  int cells = 0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    if (probs[k] <= 0.0) {
      if (observed[k] > 0.0) return 0.0;
      continue;
    }
    const double e = n * probs[k];
    stat += (observed[k] - e) * (observed[k] - e) / e;
    ++cells;
  }
  return cells > 1 ? chi2_pvalue(stat, cells - 1) : 1.0;
}

/// Pearson test that two count vectors come from the same distribution.
inline double homogeneity(const std::vector<double>& a, const std::vector<double>& b) {
  double na = 0.0, nb = 0.0;
  for (double x : a) na += x;
  for (double x : b) nb += x;
  double stat = 0.0;
  int cells = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double tot = a[k] + b[k];
    if (tot == 0.0) continue;
    const double ea = tot * na / (na + nb), eb = tot * nb / (na + nb);
    stat += (a[k] - ea) * (a[k] - ea) / ea + (b[k] - eb) * (b[k] - eb) / eb;
    ++cells;
  }
  return cells > 1 ? chi2_pvalue(stat, cells - 1) : 1.0;
}

}  // namespace oracle
