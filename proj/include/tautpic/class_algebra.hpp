#pragma once

// Divisor-class expressions over a presentation.
//
//   expr := term (("+" | "-") term)*
//   term := ["-"] [int "*"] atom | ["-"] int
//   atom := "lambda" | "delta_irr" | "psi_" int | "delta(" int ";" [int ("," int)*] ")"
//
// The universal-curve variant uses the atoms "omega" and "sigma_" int
// instead. psi_k expands to -delta(0;k). A bare integer term must be 0.

#include "tautpic/exact_lattice.hpp"
#include "tautpic/presentations.hpp"

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace tautpic {

struct PresentationKey {
  ModuliPair pair;
  Variant variant = Variant::stable;
  std::size_t generator_count = 0;

  static PresentationKey of(const Presentation &p) { return {p.pair, p.variant, p.generator_count()}; }
  friend bool operator==(const PresentationKey &, const PresentationKey &) = default;
};

struct DivisorClass {
  PresentationKey key;
  IntVector coeffs;

  static DivisorClass zero(const Presentation &p) { return {PresentationKey::of(p), IntVector(p.generator_count())}; }
  static DivisorClass from_row(const Presentation &p, std::span<const Integer> row) {
    if (row.size() != p.generator_count())
      throw DimensionError("coefficient vector length does not match the generator count");
    return {PresentationKey::of(p), IntVector(row.begin(), row.end())};
  }
  static DivisorClass generator(const Presentation &p, std::size_t column) {
    DivisorClass c = zero(p);
    c.coeffs.at(column) = 1;
    return c;
  }

  DivisorClass &operator+=(const DivisorClass &o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      coeffs[i] += o.coeffs[i];
    return *this;
  }
  DivisorClass &operator-=(const DivisorClass &o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      coeffs[i] -= o.coeffs[i];
    return *this;
  }
  friend DivisorClass operator+(DivisorClass a, const DivisorClass &b) { return a += b; }
  friend DivisorClass operator-(DivisorClass a, const DivisorClass &b) { return a -= b; }
  friend DivisorClass operator*(const Integer &k, DivisorClass a) {
    for (auto &c : a.coeffs)
      c *= k;
    return a;
  }
  friend bool operator==(const DivisorClass &, const DivisorClass &) = default;

private:
  void check_same(const DivisorClass &o) const {
    if (!(key == o.key))
      throw MismatchError("classes belong to different presentations");
  }
};

struct NormalForm {
  IntVector coords;
  IntVector torsion;

  friend bool operator==(const NormalForm &, const NormalForm &) = default;
};

inline void check_belongs(const Presentation &p, const DivisorClass &c) {
  if (!(c.key == PresentationKey::of(p)) || c.coeffs.size() != p.generator_count())
    throw MismatchError("class does not belong to the presentation for (g,n)=(" + std::to_string(p.pair.g) + "," +
                        std::to_string(p.pair.n) + "), variant " + std::string(to_string(p.variant)));
}

namespace detail {

class ClassParser {
public:
  ClassParser(const Presentation &pres, std::string_view text) : pres_(pres), text_(text) {}

  DivisorClass parse() {
    DivisorClass total = DivisorClass::zero(pres_);
    skip_space();
    if (at_end())
      fail_syntax("empty expression");
    term(total, false);
    for (;;) {
      skip_space();
      if (at_end())
        break;
      const char op = text_[pos_];
      if (op != '+' && op != '-')
        fail_syntax(std::string("expected '+' or '-', found '") + op + "'");
      ++pos_;
      term(total, op == '-');
    }
    return total;
  }

private:
  const Presentation &pres_;
  std::string_view text_;
  std::size_t pos_ = 0;

  bool at_end() const { return pos_ >= text_.size(); }
  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }
  [[noreturn]] void fail(ParseError::Kind kind, std::size_t at, const std::string &what) const {
    throw ParseError(kind, at, what);
  }
  [[noreturn]] void fail_syntax(const std::string &what) const { fail(ParseError::Kind::syntax, pos_, what); }

  bool peek_digit() {
    skip_space();
    return !at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }

  Integer integer() {
    skip_space();
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (start == pos_)
      fail_syntax("expected an integer");
    return Integer(std::string(text_.substr(start, pos_ - start)), 10);
  }

  int small_integer(const char *what) {
    skip_space();
    const std::size_t start = pos_;
    const Integer v = integer();
    if (!v.fits_sint_p() || v > 1'000'000)
      fail(ParseError::Kind::syntax, start, std::string(what) + " is too large");
    return static_cast<int>(v.get_si());
  }

  void expect(char c) {
    skip_space();
    if (at_end() || text_[pos_] != c)
      fail_syntax(std::string("expected '") + c + "'");
    ++pos_;
  }

  void term(DivisorClass &total, bool negate) {
    skip_space();
    if (!at_end() && text_[pos_] == '-') {
      negate = !negate;
      ++pos_;
    }
    Integer coeff = 1;
    if (peek_digit()) {
      const std::size_t start = pos_;
      coeff = integer();
      skip_space();
      if (at_end() || text_[pos_] != '*') {
        if (sgn(coeff) != 0)
          fail(ParseError::Kind::syntax, start, "a constant term must be 0");
        return;
      }
      ++pos_;
    }
    if (negate)
      coeff = -coeff;
    atom(total, coeff);
  }

  void atom(DivisorClass &total, const Integer &coeff) {
    skip_space();
    const std::size_t start = pos_;
    while (!at_end() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name.empty())
      fail_syntax("expected a generator");
    const bool universal_curve = pres_.variant == Variant::rpic;

    if (name == "omega" || name == "sigma_") {
      if (!universal_curve)
        fail(ParseError::Kind::unknown_symbol, start, "'" + std::string(name) + "' is not a generator here");
      if (name == "omega")
        return add(total, GenId::omega(), coeff);
      const std::size_t at = pos_;
      const int k = small_integer("marking");
      check_marking(k, at);
      return add(total, GenId::section(k), coeff);
    }
    if (name == "lambda" || name == "delta_irr" || name == "psi_" || name == "delta") {
      if (universal_curve)
        fail(ParseError::Kind::unknown_symbol, start, "'" + std::string(name) + "' is not a generator here");
    } else {
      fail(ParseError::Kind::unknown_symbol, start, "unknown symbol '" + std::string(name) + "'");
    }

    if (name == "lambda")
      return add(total, GenId::lambda(), coeff);
    if (name == "delta_irr")
      return add(total, GenId::delta_irr(), coeff);
    if (name == "psi_") {
      const std::size_t at = pos_;
      const int k = small_integer("marking");
      check_marking(k, at);
      return add_boundary(total, 0, singleton(k), -coeff, start);
    }
    // delta(a; i1, ..., ik)
    expect('(');
    skip_space();
    const std::size_t a_at = pos_;
    const int a = small_integer("genus");
    if (a > pres_.pair.g)
      fail(ParseError::Kind::genus_out_of_range, a_at,
           "boundary genus " + std::to_string(a) + " outside [0," + std::to_string(pres_.pair.g) + "]");
    expect(';');
    Mask mask = 0;
    if (peek_digit()) {
      for (;;) {
        const std::size_t at = pos_;
        const int i = small_integer("marking");
        check_marking(i, at);
        if (mask & singleton(i))
          fail_syntax("marking " + std::to_string(i) + " repeated");
        mask |= singleton(i);
        skip_space();
        if (!at_end() && text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        break;
      }
    }
    expect(')');
    add_boundary(total, a, mask, coeff, start);
  }

  void check_marking(int k, std::size_t at) const {
    if (k < 1 || k > pres_.pair.n)
      fail(ParseError::Kind::marking_out_of_range, at,
           "marking " + std::to_string(k) + " outside [1," + std::to_string(pres_.pair.n) + "]");
  }

  void add(DivisorClass &total, const GenId &id, const Integer &coeff) {
    auto col = pres_.column_of(id);
    if (!col) {
      // Boundary classes restrict to zero on the open part.
      if (pres_.variant == Variant::open && id.kind == GenKind::delta_irr)
        return;
      fail(ParseError::Kind::unknown_symbol, pos_, "'" + generator_name(id) + "' is not a generator here");
    }
    total.coeffs[*col] += coeff;
  }

  void add_boundary(DivisorClass &total, int a, Mask mask, const Integer &coeff, std::size_t at) {
    if (is_excluded(pres_.pair, a, mask))
      fail(ParseError::Kind::excluded_pair, at,
           a == 0 ? std::string("delta(0;) is not a boundary divisor")
                  : "delta(" + std::to_string(a) + ";[n]) is not a boundary divisor");
    if (pres_.variant == Variant::stable)
      return add(total, canonicalize(pres_.pair, a, mask), coeff);
    if (auto col = pres_.column_of(GenId::boundary(a, mask)))
      total.coeffs[*col] += coeff;
  }
};

} // namespace detail

inline DivisorClass parse_class(const Presentation &pres, std::string_view expr) {
  return detail::ClassParser(pres, expr).parse();
}

inline std::string format_class(const Presentation &pres, std::span<const Integer> coeffs) {
  std::string out;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const Integer &c = coeffs[i];
    if (sgn(c) == 0)
      continue;
    const Integer magnitude = abs(c);
    if (out.empty())
      out += sgn(c) < 0 ? "-" : "";
    else
      out += sgn(c) < 0 ? " - " : " + ";
    if (magnitude != 1)
      out += magnitude.get_str() + "*";
    out += pres.generators.at(i);
  }
  return out.empty() ? "0" : out;
}

inline std::string format_class(const Presentation &pres, const DivisorClass &c) {
  check_belongs(pres, c);
  return format_class(pres, c.coeffs);
}

inline NormalForm normal_form(const Presentation &pres, const DivisorClass &c) {
  check_belongs(pres, c);
  return {pres.coordinates.free_coordinates(c.coeffs), pres.coordinates.torsion_coordinates(c.coeffs)};
}

inline bool classes_equal(const Presentation &pres, const DivisorClass &c1, const DivisorClass &c2) {
  check_belongs(pres, c1);
  check_belongs(pres, c2);
  return in_lattice(pres.relation_hnf, (c1 - c2).coeffs);
}

// Canonical representative of the class: reduced modulo the Hermite basis
// of the relations.
inline DivisorClass reduce_class(const Presentation &pres, const DivisorClass &c) {
  check_belongs(pres, c);
  return {c.key, reduce_modulo(pres.relation_hnf, c.coeffs)};
}

inline AbGroupStructure subgroup_quotient(const Presentation &pres, const std::vector<DivisorClass> &gens) {
  IntMatrix stacked = pres.relations;
  for (const auto &g : gens) {
    check_belongs(pres, g);
    stacked.append_row(g.coeffs);
  }
  return quotient_invariants(stacked, pres.generator_count());
}

} // namespace tautpic
