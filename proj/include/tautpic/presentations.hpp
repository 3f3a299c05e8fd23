#pragma once

// Presentations of the tautological Picard groups: the stable group
// Lambda_{g,n}, its restriction to smooth curves, and the relative Picard
// group of the universal curve.

#include "tautpic/exact_lattice.hpp"
#include "tautpic/taut_index.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace tautpic {

// Linear coordinates on G = Z^cols / relations.
//
// When G is free and a set of generators maps to a basis of G, the basis is
// those generators: `complement` lists their columns, `pivots` the remaining
// columns, and coordinates are x_complement - x_pivots * elimination. The
// basis is chosen greedily in generator order. Otherwise coordinates come
// from the Smith transform V: free part (x V)_j for j >= rank, torsion part
// (x V)_i mod d_i.
class NormalFormMap {
public:
  NormalFormMap() = default;

  static NormalFormMap build(const IntMatrix &relation_hnf, std::size_t cols, const AbGroupStructure &structure);

  bool generator_basis() const { return generator_basis_; }
  std::size_t free_rank() const { return lifts_.rows(); }
  const std::vector<std::size_t> &basis_columns() const { return complement_; }
  const IntVector &torsion_moduli() const { return torsion_moduli_; }
  // Row j is an element of Z^cols mapping to the j-th free basis element.
  const IntMatrix &lifts() const { return lifts_; }

  IntVector free_coordinates(std::span<const Integer> x) const {
    if (generator_basis_) {
      IntVector out(complement_.size());
      for (std::size_t j = 0; j < complement_.size(); ++j)
        out[j] = x[complement_[j]];
      for (std::size_t i = 0; i < pivots_.size(); ++i) {
        const Integer &xi = x[pivots_[i]];
        if (sgn(xi) == 0)
          continue;
        for (std::size_t j = 0; j < complement_.size(); ++j)
          mpz_submul(out[j].get_mpz_t(), xi.get_mpz_t(), elimination_(i, j).get_mpz_t());
      }
      return out;
    }
    return x * free_map_;
  }

  IntVector torsion_coordinates(std::span<const Integer> x) const {
    if (torsion_moduli_.empty())
      return {};
    IntVector t = x * torsion_map_;
    for (std::size_t i = 0; i < t.size(); ++i)
      mpz_fdiv_r(t[i].get_mpz_t(), t[i].get_mpz_t(), torsion_moduli_[i].get_mpz_t());
    return t;
  }

private:
  bool generator_basis_ = false;
  std::vector<std::size_t> complement_;
  std::vector<std::size_t> pivots_;
  IntMatrix elimination_;
  IntMatrix free_map_;
  IntMatrix torsion_map_;
  IntVector torsion_moduli_;
  IntMatrix lifts_;
};

namespace detail {

inline IntMatrix select_columns(const IntMatrix &m, const std::vector<std::size_t> &cols) {
  IntMatrix out(m.rows(), cols.size());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(i, j) = m(i, cols[j]);
  return out;
}

// Rows of m (rank = m.rows()) span a saturated lattice whose projection is
// all of Z^rows.
inline bool columns_unimodular(const IntMatrix &m, const std::vector<std::size_t> &cols) {
  const IntMatrix basis = hermite_basis(select_columns(m, cols).transpose());
  return basis == IntMatrix::identity(m.rows());
}

} // namespace detail

inline NormalFormMap NormalFormMap::build(const IntMatrix &relation_hnf, std::size_t cols,
                                          const AbGroupStructure &structure) {
  NormalFormMap map;
  const std::size_t k = relation_hnf.rows();
  if (structure.is_free()) {
    std::vector<std::size_t> keep(cols);
    for (std::size_t j = 0; j < cols; ++j)
      keep[j] = j;
    std::vector<std::size_t> taken;
    if (k == 0) {
      taken = keep;
      keep.clear();
    } else {
      for (std::size_t j = 0; j < cols && keep.size() > k; ++j) {
        std::vector<std::size_t> candidate;
        candidate.reserve(keep.size() - 1);
        for (std::size_t c : keep)
          if (c != j)
            candidate.push_back(c);
        if (detail::columns_unimodular(relation_hnf, candidate)) {
          keep = std::move(candidate);
          taken.push_back(j);
        }
      }
    }
    if (keep.size() == k) {
      map.generator_basis_ = true;
      map.complement_ = taken;
      map.pivots_ = keep;
      if (k > 0) {
        const IntMatrix inverse = hermite_normal_form(detail::select_columns(relation_hnf, keep)).U;
        map.elimination_ = inverse * detail::select_columns(relation_hnf, taken);
      }
      map.lifts_ = IntMatrix(taken.size(), cols);
      for (std::size_t j = 0; j < taken.size(); ++j)
        map.lifts_(j, taken[j]) = 1;
      return map;
    }
  }

  const SmithDecomposition snf = smith_normal_form(relation_hnf.rows() == 0 ? IntMatrix(0, cols) : relation_hnf);
  const IntMatrix v_inverse = hermite_normal_form(snf.V).U;
  std::vector<std::size_t> torsion_cols, free_cols;
  for (std::size_t i = 0; i < cols; ++i) {
    if (i < k && snf.D(i, i) > 1) {
      torsion_cols.push_back(i);
      map.torsion_moduli_.push_back(snf.D(i, i));
    } else if (i >= k) {
      free_cols.push_back(i);
    }
  }
  map.free_map_ = detail::select_columns(snf.V, free_cols);
  map.torsion_map_ = detail::select_columns(snf.V, torsion_cols);
  map.lifts_ = IntMatrix(free_cols.size(), cols);
  for (std::size_t j = 0; j < free_cols.size(); ++j)
    for (std::size_t c = 0; c < cols; ++c)
      map.lifts_(j, c) = v_inverse(free_cols[j], c);
  return map;
}

struct Presentation {
  ModuliPair pair;
  Variant variant = Variant::stable;
  std::vector<GenId> symbols;
  std::vector<std::string> generators;
  IntMatrix relations;
  AbGroupStructure structure;
  IntMatrix relation_hnf;
  NormalFormMap coordinates;

  std::size_t generator_count() const { return symbols.size(); }

  std::optional<std::size_t> column_of(const GenId &id) const {
    auto it = index_.find(id);
    if (it == index_.end())
      return std::nullopt;
    return it->second;
  }

  static Presentation assemble(ModuliPair pair, Variant variant, std::vector<GenId> symbols, IntMatrix relations) {
    Presentation p;
    p.pair = pair;
    p.variant = variant;
    p.symbols = std::move(symbols);
    for (std::size_t i = 0; i < p.symbols.size(); ++i) {
      p.generators.push_back(generator_name(p.symbols[i]));
      p.index_.emplace(p.symbols[i], i);
    }
    if (relations.rows() == 0)
      relations = IntMatrix(0, p.symbols.size());
    if (relations.cols() != p.symbols.size())
      throw DimensionError("relation matrix has " + std::to_string(relations.cols()) + " columns for " +
                           std::to_string(p.symbols.size()) + " generators");
    p.relations = std::move(relations);
    p.structure = quotient_invariants(p.relations, p.symbols.size());
    p.relation_hnf = hermite_basis(p.relations);
    if (p.relation_hnf.rows() == 0)
      p.relation_hnf = IntMatrix(0, p.symbols.size());
    p.coordinates = NormalFormMap::build(p.relation_hnf, p.symbols.size(), p.structure);
    return p;
  }

private:
  std::map<GenId, std::size_t> index_;
};

namespace detail {

// Column of the canonical orbit of every admissible (a, mask), indexed by
// a * 2^n + mask; excluded pairs hold -1.
inline std::vector<long> canonical_columns(const ModuliPair &p, const std::vector<GenId> &gens) {
  std::map<GenId, long> where;
  for (std::size_t i = 0; i < gens.size(); ++i)
    where.emplace(gens[i], static_cast<long>(i));
  const std::size_t width = std::size_t{1} << p.n;
  std::vector<long> cols(static_cast<std::size_t>(p.g + 1) * width, -1);
  for (int a = 0; a <= p.g; ++a)
    for (std::size_t m = 0; m < width; ++m) {
      const Mask mask = static_cast<Mask>(m);
      if (!is_excluded(p, a, mask))
        cols[static_cast<std::size_t>(a) * width + m] = where.at(canonicalize(p, a, mask));
    }
  return cols;
}

inline bool contains(Mask mask, int i) { return (mask >> (i - 1)) & 1U; }

class RowCollector {
public:
  explicit RowCollector(std::size_t cols) : cols_(cols) {}

  IntVector blank() const { return IntVector(cols_); }

  void add(IntVector row) {
    if (is_zero(row))
      return;
    if (seen_.insert(row).second)
      rows_.push_back(std::move(row));
  }

  IntMatrix matrix() const { return IntMatrix::from_rows(rows_, cols_); }

private:
  std::size_t cols_;
  std::vector<IntVector> rows_;
  std::set<IntVector> seen_;
};

} // namespace detail

inline std::vector<GenId> stable_generators(const ModuliPair &p) { return enumerate_generators(p); }

inline IntMatrix build_relation_rows(const ModuliPair &pair) {
  const ModuliPair p = validate_pair(pair.g, pair.n, Variant::stable);
  const auto gens = enumerate_generators(p);
  const auto col = detail::canonical_columns(p, gens);
  const std::size_t width = std::size_t{1} << p.n;
  const Mask full = p.full_mask();
  auto column = [&](int a, Mask mask) { return static_cast<std::size_t>(col[a * width + mask]); };
  constexpr std::size_t lambda = 0, delta_irr = 1;

  detail::RowCollector rows(gens.size());
  if (p.g >= 3)
    return rows.matrix();

  if (p.g == 2) {
    IntVector r = rows.blank();
    r[lambda] = 10;
    r[delta_irr] = -1;
    std::set<std::size_t> orbits;
    for (std::size_t m = 0; m < width; ++m)
      orbits.insert(column(1, static_cast<Mask>(m)));
    for (std::size_t c : orbits)
      r[c] -= 2;
    rows.add(std::move(r));
  } else if (p.g == 1) {
    IntVector r = rows.blank();
    r[lambda] = 12;
    r[delta_irr] = -1;
    rows.add(std::move(r));
    for (int point = 1; point <= p.n; ++point) {
      IntVector s = rows.blank();
      s[lambda] = 1;
      for (std::size_t m = 0; m < width; ++m)
        if (detail::contains(static_cast<Mask>(m), point))
          s[column(0, static_cast<Mask>(m))] += 1;
      rows.add(std::move(s));
    }
  } else {
    IntVector l = rows.blank();
    l[lambda] = 1;
    rows.add(std::move(l));
    IntVector d = rows.blank();
    d[delta_irr] = 1;
    rows.add(std::move(d));

    // sum of delta(0;A) over A containing `inside` and missing `outside`
    auto split_sum = [&](Mask inside, Mask outside) {
      IntVector s = rows.blank();
      for (std::size_t m = 0; m < width; ++m) {
        const Mask mask = static_cast<Mask>(m);
        if ((mask & inside) == inside && (mask & outside) == 0 && mask != 0 && mask != full)
          s[column(0, mask)] += 1;
      }
      return s;
    };
    for (int x = 1; x <= p.n; ++x)
      for (int y = x + 1; y <= p.n; ++y)
        for (int z = 1; z <= p.n; ++z)
          if (z != x && z != y)
            rows.add(split_sum(singleton(z), singleton(x) | singleton(y)));
    for (int a = 1; a <= p.n; ++a)
      for (int b = a + 1; b <= p.n; ++b)
        for (int c = b + 1; c <= p.n; ++c)
          for (int e = c + 1; e <= p.n; ++e) {
            const IntVector pairings[3] = {
                split_sum(singleton(a) | singleton(b), singleton(c) | singleton(e)),
                split_sum(singleton(a) | singleton(c), singleton(b) | singleton(e)),
                split_sum(singleton(a) | singleton(e), singleton(b) | singleton(c)),
            };
            for (int i = 0; i < 3; ++i)
              for (int j = i + 1; j < 3; ++j) {
                IntVector diff = pairings[i];
                for (std::size_t t = 0; t < diff.size(); ++t)
                  diff[t] -= pairings[j][t];
                rows.add(std::move(diff));
              }
          }
  }
  return rows.matrix();
}

inline long expected_rank(const ModuliPair &p) {
  const long two_n = 1L << p.n;
  if (p.g >= 3)
    return 1 + (two_n * (p.g + 1) + 1) / 2;
  if (p.g == 2)
    return (two_n * 3 + 1) / 2;
  if (p.g == 1)
    return two_n - p.n;
  return two_n / 2 - static_cast<long>(p.n) * (p.n - 1) / 2 - 1;
}

inline Presentation build_lambda(const ModuliPair &pair) {
  const ModuliPair p = validate_pair(pair.g, pair.n, Variant::stable);
  Presentation pres = Presentation::assemble(p, Variant::stable, enumerate_generators(p), build_relation_rows(p));
  if (!pres.structure.is_free())
    throw IntegrityError("stable presentation for (g,n)=(" + std::to_string(p.g) + "," + std::to_string(p.n) +
                         ") has torsion: " + pres.structure.to_string());
  return pres;
}

// [lambda, delta(0;{1}), delta(g;{1}^c), ..., delta(0;{n}), delta(g;{n}^c)]
inline std::vector<GenId> open_generators(const ModuliPair &p) {
  std::vector<GenId> gens{GenId::lambda()};
  for (int i = 1; i <= p.n; ++i) {
    gens.push_back(GenId::boundary(0, singleton(i)));
    gens.push_back(GenId::boundary(p.g, p.full_mask() & ~singleton(i)));
  }
  return gens;
}

inline IntMatrix open_relation_rows(const ModuliPair &p) {
  const std::size_t cols = 1 + 2 * static_cast<std::size_t>(p.n);
  detail::RowCollector rows(cols);
  if (p.g == 0) {
    for (std::size_t c = 0; c < cols; ++c) {
      IntVector r = rows.blank();
      r[c] = 1;
      rows.add(std::move(r));
    }
    return rows.matrix();
  }
  for (int i = 1; i <= p.n; ++i) {
    IntVector r = rows.blank();
    r[2 * i - 1] = 1;
    r[2 * i] = -1;
    rows.add(std::move(r));
  }
  if (p.g == 2) {
    IntVector r = rows.blank();
    r[0] = 10;
    rows.add(std::move(r));
  } else if (p.g == 1) {
    IntVector r = rows.blank();
    r[0] = 12;
    rows.add(std::move(r));
    for (int i = 1; i <= p.n; ++i) {
      IntVector s = rows.blank();
      s[0] = 1;
      s[2 * i - 1] = 1;
      rows.add(std::move(s));
    }
  }
  return rows.matrix();
}

inline Presentation build_open(const ModuliPair &pair) {
  const ModuliPair p = validate_pair(pair.g, pair.n, Variant::open);
  return Presentation::assemble(p, Variant::open, open_generators(p), open_relation_rows(p));
}

// Projects the relations of the free group on all (a, A) symbols (the
// orbit identifications included as relations) onto the open generators
// and compares with the open relation lattice.
inline bool verify_open_projection(const ModuliPair &pair) {
  const ModuliPair p = validate_pair(pair.g, pair.n, Variant::stable);
  if (p.g == 0)
    throw DomainError("the open projection identity needs g >= 1");
  const std::size_t width = std::size_t{1} << p.n;
  const Mask full = p.full_mask();
  using SparseRow = std::map<std::size_t, Integer>;
  // literal columns: lambda = 0, delta_irr = 1, (a, mask) = 2 + a * 2^n + mask
  auto literal = [&](int a, Mask mask) { return 2 + static_cast<std::size_t>(a) * width + mask; };

  std::vector<SparseRow> literal_rows;
  for (int a = 0; a <= p.g; ++a)
    for (std::size_t m = 0; m < width; ++m) {
      const Mask mask = static_cast<Mask>(m);
      if (is_excluded(p, a, mask))
        continue;
      const int other_a = p.g - a;
      const Mask other = full & ~mask;
      if (std::pair{a, mask} < std::pair{other_a, other})
        literal_rows.push_back({{literal(a, mask), 1}, {literal(other_a, other), -1}});
    }
  if (p.g == 2) {
    SparseRow r{{0, 10}, {1, -1}};
    for (std::size_t m = 0; m < width; ++m) {
      const auto rep = canonicalize(p, 1, static_cast<Mask>(m));
      if (rep.a == 1 && rep.mask == m)
        r[literal(1, static_cast<Mask>(m))] -= 2;
    }
    literal_rows.push_back(std::move(r));
  } else if (p.g == 1) {
    literal_rows.push_back({{0, 12}, {1, -1}});
    for (int point = 1; point <= p.n; ++point) {
      SparseRow r{{0, 1}};
      for (std::size_t m = 0; m < width; ++m)
        if (detail::contains(static_cast<Mask>(m), point))
          r[literal(0, static_cast<Mask>(m))] += 1;
      literal_rows.push_back(std::move(r));
    }
  }

  std::map<std::size_t, std::size_t> rho{{0, 0}};
  for (int i = 1; i <= p.n; ++i) {
    rho.emplace(literal(0, singleton(i)), 2 * i - 1);
    rho.emplace(literal(p.g, full & ~singleton(i)), 2 * i);
  }
  const std::size_t open_cols = 1 + 2 * static_cast<std::size_t>(p.n);
  IntMatrix projected(0, open_cols);
  for (const auto &r : literal_rows) {
    IntVector v(open_cols);
    for (const auto &[c, coeff] : r)
      if (auto it = rho.find(c); it != rho.end())
        v[it->second] += coeff;
    projected.append_row(v);
  }
  return sublattice_equal(projected, open_relation_rows(p));
}

inline std::vector<GenId> rpic_generators(const ModuliPair &p) {
  std::vector<GenId> gens{GenId::omega()};
  for (int i = 1; i <= p.n; ++i)
    gens.push_back(GenId::section(i));
  return gens;
}

inline Presentation build_rpic(const ModuliPair &pair) {
  const ModuliPair p = validate_pair(pair.g, pair.n, Variant::rpic);
  const std::size_t cols = 1 + static_cast<std::size_t>(p.n);
  detail::RowCollector rows(cols);
  if (p.g == 1) {
    IntVector r = rows.blank();
    r[0] = 1;
    rows.add(std::move(r));
  } else if (p.g == 0) {
    for (std::size_t i = 2; i < cols; ++i) {
      IntVector r = rows.blank();
      r[i] = 1;
      r[1] = -1;
      rows.add(std::move(r));
    }
    if (p.n > 0) {
      IntVector w = rows.blank();
      w[0] = 1;
      w[1] = 2;
      rows.add(std::move(w));
    }
  }
  return Presentation::assemble(p, Variant::rpic, rpic_generators(p), rows.matrix());
}

inline Presentation build_presentation(const ModuliPair &pair, Variant variant) {
  switch (variant) {
  case Variant::stable:
    return build_lambda(pair);
  case Variant::open:
    return build_open(pair);
  case Variant::rpic:
    return build_rpic(pair);
  }
  throw ParameterError("unknown variant");
}

// Structure of the open group for g >= 3, g = 2, g = 1, g = 0 respectively:
// Z^{n+1}, Z/10 + Z^n, Z/12, 0.
inline AbGroupStructure expected_open_structure(const ModuliPair &p) {
  if (p.g >= 3)
    return {static_cast<std::size_t>(p.n) + 1, {}};
  if (p.g == 2)
    return {static_cast<std::size_t>(p.n), {Integer(10)}};
  if (p.g == 1)
    return {0, {Integer(12)}};
  return {0, {}};
}

inline AbGroupStructure expected_rpic_structure(const ModuliPair &p) {
  if (p.g >= 2)
    return {static_cast<std::size_t>(p.n) + 1, {}};
  if (p.g == 1)
    return {static_cast<std::size_t>(p.n), {}};
  return {1, {}};
}

} // namespace tautpic
