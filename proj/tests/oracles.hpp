#pragma once

// Brute-force reference computations for the tests. Nothing here calls into
// the Hermite/Smith code it is used to check.

#include "tautpic/exact_lattice.hpp"
#include "tautpic/taut_index.hpp"

#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace tautpic::oracle {

// Cofactor expansion along the first row.
inline Integer laplace_determinant(const std::vector<std::vector<Integer>> &m) {
  const std::size_t n = m.size();
  if (n == 0)
    return 1;
  if (n == 1)
    return m[0][0];
  Integer det = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (sgn(m[0][c]) == 0)
      continue;
    std::vector<std::vector<Integer>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Integer> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c)
          row.push_back(m[r][k]);
      minor.push_back(std::move(row));
    }
    const Integer term = m[0][c] * laplace_determinant(minor);
    det += (c % 2 == 0) ? term : Integer(-term);
  }
  return det;
}

inline void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t> &cur,
                    std::vector<std::vector<std::size_t>> &out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// gcd of all k x k minors (0 when all vanish).
inline Integer minor_gcd(const IntMatrix &a, std::size_t k) {
  std::vector<std::vector<std::size_t>> row_sets, col_sets;
  std::vector<std::size_t> cur;
  subsets(a.rows(), k, 0, cur, row_sets);
  subsets(a.cols(), k, 0, cur, col_sets);
  Integer g = 0;
  for (const auto &rs : row_sets)
    for (const auto &cs : col_sets) {
      std::vector<std::vector<Integer>> m;
      for (auto r : rs) {
        std::vector<Integer> row;
        for (auto c : cs)
          row.push_back(a(r, c));
        m.push_back(std::move(row));
      }
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), laplace_determinant(m).get_mpz_t());
    }
  return g;
}

// Rank over Z/p by Gaussian elimination.
inline std::size_t rank_mod_prime(const IntMatrix &a, long p) {
  std::vector<std::vector<long>> m(a.rows(), std::vector<long>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      Integer r;
      mpz_fdiv_r_ui(r.get_mpz_t(), a(i, j).get_mpz_t(), static_cast<unsigned long>(p));
      m[i][j] = r.get_si();
    }
  auto inverse = [p](long x) {
    long result = 1, base = x % p, e = p - 2;
    while (e > 0) {
      if (e & 1)
        result = result * base % p;
      base = base * base % p;
      e >>= 1;
    }
    return result;
  };
  std::size_t rank = 0;
  for (std::size_t c = 0; c < a.cols() && rank < a.rows(); ++c) {
    std::size_t piv = rank;
    while (piv < a.rows() && m[piv][c] == 0)
      ++piv;
    if (piv == a.rows())
      continue;
    std::swap(m[piv], m[rank]);
    const long inv = inverse(m[rank][c]);
    for (auto &x : m[rank])
      x = x * inv % p;
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (i != rank && m[i][c] != 0) {
        const long f = m[i][c];
        for (std::size_t j = 0; j < a.cols(); ++j)
          m[i][j] = ((m[i][j] - f * m[rank][j]) % p + p) % p;
      }
    ++rank;
  }
  return rank;
}

// Number of residue vectors x in (Z/m)^cols with A x = 0 mod m.
inline std::size_t count_kernel_residues(const IntMatrix &a, long m) {
  std::size_t total = 1;
  for (std::size_t j = 0; j < a.cols(); ++j)
    total *= static_cast<std::size_t>(m);
  std::size_t count = 0;
  std::vector<long> x(a.cols());
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (auto &xi : x) {
      xi = static_cast<long>(c % static_cast<std::size_t>(m));
      c /= static_cast<std::size_t>(m);
    }
    bool ok = true;
    for (std::size_t i = 0; i < a.rows() && ok; ++i) {
      Integer s = 0;
      for (std::size_t j = 0; j < a.cols(); ++j)
        s += a(i, j) * x[j];
      ok = mpz_divisible_ui_p(s.get_mpz_t(), static_cast<unsigned long>(m)) != 0;
    }
    count += ok ? 1 : 0;
  }
  return count;
}

// Orbits of {(a, A)} under (a, A) -> (g - a, A^c), found by union of pairs.
inline std::size_t brute_force_orbits(int g, int n) {
  std::set<std::set<std::pair<int, unsigned>>> orbits;
  const unsigned full = (1U << n) - 1;
  for (int a = 0; a <= g; ++a)
    for (unsigned m = 0; m <= full; ++m) {
      if ((a == 0 && m == 0) || (a == g && m == full))
        continue;
      orbits.insert({{a, m}, {g - a, full & ~m}});
    }
  return orbits.size();
}

inline IntMatrix random_matrix(std::mt19937_64 &rng, std::size_t rows, std::size_t cols, long bound,
                               double zero_probability = 0.0) {
  std::uniform_int_distribution<long> entry(-bound, bound);
  std::bernoulli_distribution zero(zero_probability);
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m(i, j) = zero(rng) ? 0 : entry(rng);
  return m;
}

} // namespace tautpic::oracle
