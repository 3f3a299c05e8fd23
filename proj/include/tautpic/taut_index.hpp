#pragma once

// Tautological generator symbols and the canonical choice of representative
// for each boundary orbit (a, A) ~ (g - a, A^c). Subsets of [n] are n-bit
// masks with marking i stored in bit i - 1.

#include "tautpic/errors.hpp"

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tautpic {

enum class Variant { stable, open, rpic };

inline std::string_view to_string(Variant v) {
  switch (v) {
  case Variant::stable:
    return "stable";
  case Variant::open:
    return "open";
  case Variant::rpic:
    return "rpic";
  }
  return "?";
}

inline Variant parse_variant(std::string_view s) {
  if (s == "stable")
    return Variant::stable;
  if (s == "open")
    return Variant::open;
  if (s == "rpic")
    return Variant::rpic;
  throw ParameterError("unknown variant '" + std::string(s) + "' (expected stable, open or rpic)");
}

using Mask = std::uint32_t;

// Generator enumeration is exponential in n; anything past this is out of
// reach anyway and would overflow the mask type.
inline constexpr int max_markings = 24;

struct ModuliPair {
  int g = 0;
  int n = 0;

  Mask full_mask() const { return n == 0 ? 0 : static_cast<Mask>((std::uint64_t{1} << n) - 1); }

  friend auto operator<=>(const ModuliPair &, const ModuliPair &) = default;
};

inline ModuliPair validate_pair(long g, long n, Variant variant) {
  if (g < 0 || n < 0)
    throw DomainError("g and n must be non-negative, got g=" + std::to_string(g) + ", n=" + std::to_string(n));
  if (n > max_markings)
    throw ParameterError("n=" + std::to_string(n) + " exceeds the supported maximum of " +
                         std::to_string(max_markings) + " markings");
  // The universal-curve presentation holds for every g, n >= 0, including
  // 2g-2+n <= 0.
  if (variant != Variant::rpic && 3 * g - 3 + n <= 0) {
    throw DomainError("3g-3+n > 0 is violated for (g,n)=(" + std::to_string(g) + "," + std::to_string(n) +
                      "): 3g-3+n = " + std::to_string(3 * g - 3 + n));
  }
  return {static_cast<int>(g), static_cast<int>(n)};
}

inline bool is_hyperbolic(int g, int n) { return g >= 0 && n >= 0 && 3 * g - 3 + n > 0; }

enum class GenKind { lambda, delta_irr, delta_boundary, omega, section };

// A generator symbol. Boundary symbols coming out of canonicalize() are
// orbit representatives; the open variant also stores the literal
// (g, {i}^c) symbol. `index` is the marking for `section`.
struct GenId {
  GenKind kind = GenKind::lambda;
  int a = 0;
  Mask mask = 0;
  int index = 0;

  static GenId lambda() { return {GenKind::lambda}; }
  static GenId delta_irr() { return {GenKind::delta_irr}; }
  static GenId boundary(int a, Mask mask) { return {GenKind::delta_boundary, a, mask}; }
  static GenId omega() { return {GenKind::omega}; }
  static GenId section(int i) { return {GenKind::section, 0, 0, i}; }

  friend auto operator<=>(const GenId &, const GenId &) = default;
};

inline bool is_excluded(const ModuliPair &p, int a, Mask mask) {
  return (a == 0 && mask == 0) || (a == p.g && mask == p.full_mask());
}

inline GenId canonicalize(const ModuliPair &p, int a, Mask mask) {
  if (a < 0 || a > p.g)
    throw DomainError("boundary genus a=" + std::to_string(a) + " outside [0," + std::to_string(p.g) + "]");
  if ((mask & ~p.full_mask()) != 0)
    throw DomainError("boundary subset is not contained in [" + std::to_string(p.n) + "]");
  if (is_excluded(p, a, mask))
    throw DomainError(a == 0 ? "delta(0;) is excluded" : "delta(g;[n]) is excluded");
  const int other_a = p.g - a;
  const Mask other_mask = p.full_mask() & ~mask;
  if (a < other_a || (a == other_a && mask <= other_mask))
    return GenId::boundary(a, mask);
  return GenId::boundary(other_a, other_mask);
}

inline std::size_t orbit_count(const ModuliPair &p) {
  const std::size_t pairs = static_cast<std::size_t>(p.g + 1) * (std::size_t{1} << p.n) - 2;
  return (pairs + 1) / 2;
}

// [lambda, delta_irr, boundary orbits in (a, mask) order]
inline std::vector<GenId> enumerate_generators(const ModuliPair &p) {
  std::vector<GenId> gens{GenId::lambda(), GenId::delta_irr()};
  gens.reserve(2 + orbit_count(p));
  for (int a = 0; a <= p.g; ++a)
    for (std::uint64_t m = 0; m <= p.full_mask(); ++m) {
      const Mask mask = static_cast<Mask>(m);
      if (is_excluded(p, a, mask))
        continue;
      if (canonicalize(p, a, mask) == GenId::boundary(a, mask))
        gens.push_back(GenId::boundary(a, mask));
    }
  return gens;
}

inline Mask singleton(int i) { return Mask{1} << (i - 1); }

// Name in the expression grammar's atom syntax.
inline std::string generator_name(const GenId &id) {
  switch (id.kind) {
  case GenKind::lambda:
    return "lambda";
  case GenKind::delta_irr:
    return "delta_irr";
  case GenKind::omega:
    return "omega";
  case GenKind::section:
    return "sigma_" + std::to_string(id.index);
  case GenKind::delta_boundary: {
    std::string s = "delta(" + std::to_string(id.a) + ";";
    bool first = true;
    for (int i = 1; i <= 32; ++i)
      if (id.mask & (Mask{1} << (i - 1))) {
        if (!first)
          s += ",";
        s += std::to_string(i);
        first = false;
      }
    return s + ")";
  }
  }
  return "?";
}

} // namespace tautpic
