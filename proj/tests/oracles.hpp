#pragma once

// Reference computations used by the tests. None of these share code with the
// library's enumeration or numeric routines.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace oracle {

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// |B(n)| in Z^d with the standard generators: sum_k 2^k C(d,k) C(n,k).
inline std::uint64_t gamma_free_abelian(unsigned d, std::uint64_t n) {
  std::uint64_t s = 0;
  for (unsigned k = 0; k <= d; ++k) s += (std::uint64_t{1} << k) * binomial(d, k) * binomial(n, k);
  return s;
}

/// |B(n)| in the free group of rank k.
inline std::uint64_t gamma_free(unsigned k, std::uint64_t n) {
  if (k == 1) return 2 * n + 1;
  std::uint64_t s = 1, sphere = 2 * k;
  for (std::uint64_t r = 1; r <= n; ++r) {
    s += sphere;
    sphere *= 2 * k - 1;
  }
  return s;
}

/// Number of permutations of n letters with at most r inversions
/// (adjacent transpositions: word length = inversion count).
inline std::uint64_t gamma_symmetric(unsigned n, unsigned r) {
  std::vector<std::uint64_t> m{1};  // Mahonian numbers row by row
  for (unsigned k = 2; k <= n; ++k) {
    std::vector<std::uint64_t> next(m.size() + k - 1, 0);
    for (std::size_t i = 0; i < m.size(); ++i)
      for (unsigned j = 0; j < k; ++j) next[i + j] += m[i];
    m = next;
  }
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < m.size() && i <= r; ++i) s += m[i];
  return s;
}

/// Heisenberg group as upper unitriangular integer matrices.
using Mat3 = std::array<std::array<long long, 3>, 3>;

inline Mat3 mat_mul(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Mat3 heis(long long x, long long y, long long z) { return Mat3{{{1, x, z}, {0, 1, y}, {0, 0, 1}}}; }

/// |B(n)| in the Heisenberg group on a^{+-1}, b^{+-1}, by enumerating every
/// word of length <= n as a matrix product (exponential; n <= 7 or so).
inline std::vector<std::uint64_t> gamma_heisenberg_words(int n) {
  const std::array<Mat3, 4> gens{heis(1, 0, 0), heis(-1, 0, 0), heis(0, 1, 0), heis(0, -1, 0)};
  std::set<Mat3> seen{heis(0, 0, 0)};
  std::vector<Mat3> frontier{heis(0, 0, 0)};
  std::vector<std::uint64_t> out{1};
  for (int r = 1; r <= n; ++r) {
    std::vector<Mat3> next;
    next.reserve(frontier.size() * 4);
    for (const auto& w : frontier)
      for (const auto& g : gens) next.push_back(mat_mul(w, g));  // every word, no pruning
    for (const auto& m : next) seen.insert(m);
    frontier = std::move(next);
    out.push_back(seen.size());
  }
  return out;
}

/// Dihedral group of order 2n acting on polygon vertices 0..n-1.
/// Rotation r: i -> i+1, reflection s: i -> -i. Ball sizes through all words.
inline std::vector<std::uint64_t> gamma_dihedral_words(int n, int radius) {
  using Perm = std::vector<int>;
  Perm r(n), s(n), id(n);
  for (int i = 0; i < n; ++i) {
    r[i] = (i + 1) % n;
    s[i] = (n - i) % n;
    id[i] = i;
  }
  Perm rinv(n);
  for (int i = 0; i < n; ++i) rinv[r[i]] = i;
  std::vector<Perm> gens{r};
  if (n > 2) gens.push_back(rinv);
  gens.push_back(s);
  auto compose = [&](const Perm& a, const Perm& b) {
    Perm c(n);
    for (int i = 0; i < n; ++i) c[i] = a[b[i]];
    return c;
  };
  std::set<Perm> seen{id};
  std::set<Perm> frontier{id};
  std::vector<std::uint64_t> out{1};
  for (int k = 1; k <= radius; ++k) {
    std::set<Perm> next;
    for (const auto& w : frontier)
      for (const auto& g : gens) next.insert(compose(g, w));
    seen.insert(next.begin(), next.end());
    frontier = std::move(next);
    out.push_back(seen.size());
  }
  return out;
}

/// W_{-1}(x) by plain bisection of w e^w = x on [-800, -1], long double.
inline long double lambert_bisect(long double x) {
  long double lo = -800, hi = -1;  // f(w) = w e^w falls from 0 to -1/e on (-inf, -1]
  for (int i = 0; i < 400; ++i) {
    long double mid = (lo + hi) / 2;
    if (mid * std::exp(mid) > x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

struct GridMax {
  double argmax;
  double value;
};

/// Coarse-to-fine grid scan of f over [a, b].
inline GridMax grid_sup(const std::function<double(double)>& f, double a, double b, int points = 2001, int rounds = 6) {
  GridMax best{a, -INFINITY};
  for (int round = 0; round < rounds; ++round) {
    for (int i = 0; i < points; ++i) {
      double x = a + (b - a) * i / (points - 1);
      double v = f(x);
      if (v > best.value) best = {x, v};
    }
    double h = (b - a) / (points - 1);
    a = std::max(a, best.argmax - 2 * h);
    b = best.argmax + 2 * h;
  }
  return best;
}

}  // namespace oracle
