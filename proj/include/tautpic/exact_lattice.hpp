#pragma once

// Exact integer linear algebra over GMP integers: Hermite and Smith normal
// forms with transformation matrices, and the lattice operations built on
// them. Relations are rows; classes are row vectors.

#include "tautpic/errors.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tautpic {

using Integer = mpz_class;
using IntVector = std::vector<Integer>;

class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto &r : rows) {
      if (r.size() != cols_)
        throw DimensionError("ragged initializer for IntMatrix");
      for (long v : r)
        data_.emplace_back(v);
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      m(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(const std::vector<IntVector> &rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols)
        throw DimensionError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                             " entries, expected " + std::to_string(cols));
      std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + i * cols);
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  Integer &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer &operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Integer> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Integer> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  IntVector row_vector(std::size_t i) const { return {data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_}; }

  void append_row(std::span<const Integer> r) {
    if (r.size() != cols_)
      throw DimensionError("appended row has " + std::to_string(r.size()) + " entries, expected " +
                           std::to_string(cols_));
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
  }

  // First `count` rows.
  IntMatrix top_rows(std::size_t count) const {
    IntMatrix m(count, cols_);
    std::copy(data_.begin(), data_.begin() + count * cols_, m.data_.begin());
    return m;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        t(j, i) = (*this)(i, j);
    return t;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b)
      return;
    for (std::size_t j = 0; j < cols_; ++j)
      mpz_swap((*this)(a, j).get_mpz_t(), (*this)(b, j).get_mpz_t());
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b)
      return;
    for (std::size_t i = 0; i < rows_; ++i)
      mpz_swap((*this)(i, a).get_mpz_t(), (*this)(i, b).get_mpz_t());
  }
  // row[target] -= q * row[source], restricted to columns >= from
  void sub_row_multiple(std::size_t target, std::size_t source, const Integer &q, std::size_t from = 0) {
    for (std::size_t j = from; j < cols_; ++j)
      if (sgn((*this)(source, j)) != 0)
        mpz_submul((*this)(target, j).get_mpz_t(), q.get_mpz_t(), (*this)(source, j).get_mpz_t());
  }
  void sub_col_multiple(std::size_t target, std::size_t source, const Integer &q, std::size_t from = 0) {
    for (std::size_t i = from; i < rows_; ++i)
      if (sgn((*this)(i, source)) != 0)
        mpz_submul((*this)(i, target).get_mpz_t(), q.get_mpz_t(), (*this)(i, source).get_mpz_t());
  }
  void add_row(std::size_t target, std::size_t source) {
    for (std::size_t j = 0; j < cols_; ++j)
      (*this)(target, j) += (*this)(source, j);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j)
      mpz_neg((*this)(r, j).get_mpz_t(), (*this)(r, j).get_mpz_t());
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Integer &x) { return sgn(x) == 0; });
  }

  friend bool operator==(const IntMatrix &a, const IntMatrix &b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

inline IntMatrix operator*(const IntMatrix &a, const IntMatrix &b) {
  if (a.cols() != b.rows())
    throw DimensionError("matrix product of " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " and " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Integer &aik = a(i, k);
      if (sgn(aik) == 0)
        continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        mpz_addmul(c(i, j).get_mpz_t(), aik.get_mpz_t(), b(k, j).get_mpz_t());
    }
  return c;
}

// Row vector times matrix.
inline IntVector operator*(std::span<const Integer> x, const IntMatrix &m) {
  if (x.size() != m.rows())
    throw DimensionError("vector of length " + std::to_string(x.size()) + " times matrix with " +
                         std::to_string(m.rows()) + " rows");
  IntVector out(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (sgn(x[i]) == 0)
      continue;
    for (std::size_t j = 0; j < m.cols(); ++j)
      mpz_addmul(out[j].get_mpz_t(), x[i].get_mpz_t(), m(i, j).get_mpz_t());
  }
  return out;
}

// Fraction-free Bareiss elimination.
inline Integer determinant(const IntMatrix &a) {
  if (a.rows() != a.cols())
    throw DimensionError("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0)
    return 1;
  IntMatrix m = a;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(m(k, k)) == 0) {
      std::size_t p = k + 1;
      while (p < n && sgn(m(p, k)) == 0)
        ++p;
      if (p == n)
        return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

namespace detail {

inline int cmp_abs(const Integer &a, const Integer &b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }

inline Integer trunc_quotient(const Integer &a, const Integer &b) {
  Integer q;
  mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Integer floor_quotient(const Integer &a, const Integer &b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Row-style HNF in place. When `transform` is non-null it accumulates the
// row operations. Returns the rank.
inline std::size_t hermite_in_place(IntMatrix &h, IntMatrix *transform) {
  const std::size_t rows = h.rows(), cols = h.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    bool have_pivot = false;
    for (;;) {
      std::optional<std::size_t> best;
      for (std::size_t i = r; i < rows; ++i)
        if (sgn(h(i, c)) != 0 && (!best || cmp_abs(h(i, c), h(*best, c)) < 0))
          best = i;
      if (!best)
        break;
      have_pivot = true;
      h.swap_rows(r, *best);
      if (transform)
        transform->swap_rows(r, *best);
      bool cleared = true;
      for (std::size_t i = r + 1; i < rows; ++i) {
        if (sgn(h(i, c)) == 0)
          continue;
        Integer q = trunc_quotient(h(i, c), h(r, c));
        h.sub_row_multiple(i, r, q, c);
        if (transform)
          transform->sub_row_multiple(i, r, q);
        if (sgn(h(i, c)) != 0)
          cleared = false;
      }
      if (cleared)
        break;
    }
    if (!have_pivot)
      continue;
    if (sgn(h(r, c)) < 0) {
      h.negate_row(r);
      if (transform)
        transform->negate_row(r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      Integer q = floor_quotient(h(i, c), h(r, c));
      if (sgn(q) == 0)
        continue;
      h.sub_row_multiple(i, r, q, c);
      if (transform)
        transform->sub_row_multiple(i, r, q);
    }
    ++r;
  }
  return r;
}

// Smith form in place; u and v (when non-null) accumulate row and column
// operations.
inline void smith_in_place(IntMatrix &d, IntMatrix *u, IntMatrix *v) {
  const std::size_t rows = d.rows(), cols = d.cols();
  const std::size_t diag = std::min(rows, cols);
  for (std::size_t t = 0; t < diag; ++t) {
    for (;;) {
      std::optional<std::pair<std::size_t, std::size_t>> best;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (sgn(d(i, j)) != 0 && (!best || cmp_abs(d(i, j), d(best->first, best->second)) < 0))
            best = std::pair{i, j};
      if (!best)
        return;
      d.swap_rows(t, best->first);
      if (u)
        u->swap_rows(t, best->first);
      d.swap_cols(t, best->second);
      if (v)
        v->swap_cols(t, best->second);

      bool cleared = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (sgn(d(i, t)) == 0)
          continue;
        Integer q = trunc_quotient(d(i, t), d(t, t));
        d.sub_row_multiple(i, t, q, t);
        if (u)
          u->sub_row_multiple(i, t, q);
        if (sgn(d(i, t)) != 0)
          cleared = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (sgn(d(t, j)) == 0)
          continue;
        Integer q = trunc_quotient(d(t, j), d(t, t));
        d.sub_col_multiple(j, t, q, t);
        if (v)
          v->sub_col_multiple(j, t, q);
        if (sgn(d(t, j)) != 0)
          cleared = false;
      }
      if (!cleared)
        continue;

      std::optional<std::size_t> offending;
      for (std::size_t i = t + 1; i < rows && !offending; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (!mpz_divisible_p(d(i, j).get_mpz_t(), d(t, t).get_mpz_t())) {
            offending = i;
            break;
          }
      if (!offending)
        break;
      d.add_row(t, *offending);
      if (u)
        u->add_row(t, *offending);
    }
    if (sgn(d(t, t)) < 0) {
      d.negate_row(t);
      if (u)
        u->negate_row(t);
    }
  }
}

} // namespace detail

struct HermiteDecomposition {
  IntMatrix H;
  IntMatrix U;
  std::size_t rank = 0;
};

// U·A = H with U unimodular; H is the row-style Hermite normal form (zero
// rows last, positive pivots, entries above a pivot in [0, pivot)).
inline HermiteDecomposition hermite_normal_form(const IntMatrix &a) {
  HermiteDecomposition out{a, IntMatrix::identity(a.rows()), 0};
  out.rank = detail::hermite_in_place(out.H, &out.U);
  return out;
}

// Nonzero rows of the HNF: the canonical basis of the row lattice.
inline IntMatrix hermite_basis(const IntMatrix &a) {
  IntMatrix h = a;
  const std::size_t rank = detail::hermite_in_place(h, nullptr);
  return h.top_rows(rank);
}

struct SmithDecomposition {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;

  IntVector diagonal() const {
    IntVector d;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i)
      d.push_back(D(i, i));
    return d;
  }
};

inline SmithDecomposition smith_normal_form(const IntMatrix &a) {
  SmithDecomposition out{IntMatrix::identity(a.rows()), a, IntMatrix::identity(a.cols())};
  detail::smith_in_place(out.D, &out.U, &out.V);
  return out;
}

// Diagonal of the Smith form without the transforms.
inline IntVector smith_diagonal(const IntMatrix &a) {
  // Reducing to Hermite form first keeps the Smith pass on a square-ish
  // matrix of rank rows.
  IntMatrix d = hermite_basis(a);
  detail::smith_in_place(d, nullptr, nullptr);
  IntVector diag;
  for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i)
    diag.push_back(d(i, i));
  return diag;
}

struct AbGroupStructure {
  std::size_t free_rank = 0;
  IntVector invariant_factors;

  bool is_trivial() const { return free_rank == 0 && invariant_factors.empty(); }
  bool is_free() const { return invariant_factors.empty(); }

  // e.g. "Z/10 + Z^3", "0" for the trivial group
  std::string to_string() const {
    std::string s;
    for (const auto &d : invariant_factors) {
      if (!s.empty())
        s += " + ";
      s += "Z/" + d.get_str();
    }
    if (free_rank > 0) {
      if (!s.empty())
        s += " + ";
      s += free_rank == 1 ? std::string("Z") : "Z^" + std::to_string(free_rank);
    }
    return s.empty() ? "0" : s;
  }

  friend bool operator==(const AbGroupStructure &, const AbGroupStructure &) = default;
};

// Structure of Z^ambient_rank / (row lattice of relation_rows).
inline AbGroupStructure quotient_invariants(const IntMatrix &relation_rows, std::size_t ambient_rank) {
  if (relation_rows.cols() != ambient_rank && relation_rows.rows() != 0)
    throw DimensionError("relation rows have " + std::to_string(relation_rows.cols()) +
                         " columns, ambient rank is " + std::to_string(ambient_rank));
  AbGroupStructure s;
  std::size_t nonzero = 0;
  if (relation_rows.rows() != 0)
    for (const auto &d : smith_diagonal(relation_rows)) {
      if (sgn(d) == 0)
        continue;
      ++nonzero;
      if (d > 1)
        s.invariant_factors.push_back(d);
    }
  s.free_rank = ambient_rank - nonzero;
  return s;
}

inline bool is_saturated(const IntMatrix &relation_rows) {
  if (relation_rows.empty())
    return true;
  const auto diag = smith_diagonal(relation_rows);
  return std::all_of(diag.begin(), diag.end(), [](const Integer &d) { return sgn(d) == 0 || d == 1; });
}

// Row basis (in HNF) of { x in Z^cols : A·x ≡ 0 mod m }.
inline IntMatrix kernel_mod_m(const IntMatrix &a, const Integer &m) {
  if (m < 2)
    throw ParameterError("kernel modulus must be at least 2, got " + m.get_str());
  const std::size_t rows = a.rows(), cols = a.cols();
  if (rows == 0)
    return IntMatrix::identity(cols);
  // Left kernel of [A^T ; -m I]: z = (x, y) with A x = m y; x determines y.
  IntMatrix stacked(cols + rows, rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j)
      stacked(j, i) = a(i, j);
    stacked(cols + i, i) = -m;
  }
  auto hnf = hermite_normal_form(stacked);
  IntMatrix projected(cols + rows - hnf.rank, cols);
  for (std::size_t k = hnf.rank; k < cols + rows; ++k)
    for (std::size_t j = 0; j < cols; ++j)
      projected(k - hnf.rank, j) = hnf.U(k, j);
  return hermite_basis(projected);
}

inline bool sublattice_equal(const IntMatrix &a_rows, const IntMatrix &b_rows) {
  if (a_rows.rows() != 0 && b_rows.rows() != 0 && a_rows.cols() != b_rows.cols())
    throw DimensionError("cannot compare lattices in Z^" + std::to_string(a_rows.cols()) + " and Z^" +
                         std::to_string(b_rows.cols()));
  const IntMatrix ha = hermite_basis(a_rows), hb = hermite_basis(b_rows);
  if (ha.rows() == 0 || hb.rows() == 0)
    return ha.rows() == hb.rows();
  return ha == hb;
}

// Canonical representative of x modulo the lattice spanned by the rows of an
// HNF basis: each pivot coordinate is reduced into [0, pivot).
inline IntVector reduce_modulo(const IntMatrix &hnf_rows, IntVector x) {
  if (hnf_rows.rows() != 0 && hnf_rows.cols() != x.size())
    throw DimensionError("vector length does not match the lattice dimension");
  std::size_t c = 0;
  for (std::size_t r = 0; r < hnf_rows.rows(); ++r) {
    while (sgn(hnf_rows(r, c)) == 0)
      ++c;
    Integer q = detail::floor_quotient(x[c], hnf_rows(r, c));
    if (sgn(q) != 0)
      for (std::size_t j = c; j < x.size(); ++j)
        if (sgn(hnf_rows(r, j)) != 0)
          mpz_submul(x[j].get_mpz_t(), q.get_mpz_t(), hnf_rows(r, j).get_mpz_t());
  }
  return x;
}

inline bool is_zero(std::span<const Integer> x) {
  return std::all_of(x.begin(), x.end(), [](const Integer &v) { return sgn(v) == 0; });
}

inline bool in_lattice(const IntMatrix &hnf_rows, IntVector x) {
  return is_zero(reduce_modulo(hnf_rows, std::move(x)));
}

} // namespace tautpic
