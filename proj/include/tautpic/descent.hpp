#pragma once

// The divisor class group of the coarse moduli space as a finite-index
// subgroup of Lambda_{g,n}, computed from explicit generator lists and,
// independently, as the kernel of the mod-2 characters recording how curve
// involutions act on the fibres of the tautological bundles.

#include "tautpic/class_algebra.hpp"
#include "tautpic/exact_lattice.hpp"
#include "tautpic/presentations.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tautpic {

// Additive mod-2 encoding of a sign character: 1 means the involution acts
// by -1 on that generator's fibre.
struct Character {
  PresentationKey key;
  std::vector<int> values;

  int operator()(std::span<const Integer> coeffs) const {
    Integer sum = 0;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i] != 0)
        sum += coeffs[i];
    return mpz_odd_p(sum.get_mpz_t()) ? 1 : 0;
  }

  bool vanishes_on_relations(const Presentation &pres) const {
    for (std::size_t r = 0; r < pres.relations.rows(); ++r)
      if ((*this)(pres.relations.row(r)) != 0)
        return false;
    return true;
  }
};

enum class ClMethod { explicit_list, character_kernel, both_agree };

inline std::string_view to_string(ClMethod m) {
  switch (m) {
  case ClMethod::explicit_list:
    return "explicit_list";
  case ClMethod::character_kernel:
    return "character_kernel";
  case ClMethod::both_agree:
    return "both_agree";
  }
  return "?";
}

struct ClResult {
  ModuliPair pair;
  std::vector<std::string> generators;
  // HNF rows in normal-form coordinates.
  IntMatrix subgroup_basis;
  AbGroupStructure quotient;
  ClMethod method = ClMethod::explicit_list;
  std::optional<std::string> warning;
};

namespace detail {

inline void require_stable(const Presentation &pres, const char *what) {
  if (pres.variant != Variant::stable)
    throw MismatchError(std::string(what) + " needs the stable presentation");
}

inline std::size_t boundary_column(const Presentation &pres, int a, Mask mask) {
  return *pres.column_of(canonicalize(pres.pair, a, mask));
}

} // namespace detail

// -1 on lambda and on the elliptic-tail divisor delta(1;), +1 elsewhere.
inline Character elliptic_character(const Presentation &pres) {
  detail::require_stable(pres, "the elliptic-tail character");
  if (pres.pair.g == 0)
    throw DomainError("the elliptic-tail character is not defined for g = 0");
  Character chi{PresentationKey::of(pres), std::vector<int>(pres.generator_count())};
  chi.values[0] = 1;
  chi.values[detail::boundary_column(pres, 1, 0)] = 1;
  return chi;
}

// (-1)^g on lambda, -1 on each psi_i, +1 elsewhere.
inline Character hyperelliptic_character(const Presentation &pres) {
  detail::require_stable(pres, "the hyperelliptic character");
  if (pres.pair.g < 1 || pres.pair.g + pres.pair.n != 3)
    throw DomainError("the hyperelliptic character is only used for g + n = 3, g >= 1");
  Character chi{PresentationKey::of(pres), std::vector<int>(pres.generator_count())};
  chi.values[0] = pres.pair.g % 2;
  for (int i = 1; i <= pres.pair.n; ++i)
    chi.values[detail::boundary_column(pres, 0, singleton(i))] ^= 1;
  return chi;
}

// The character as a row over the free basis of the normal-form coordinates.
inline IntVector character_in_coordinates(const Presentation &pres, const Character &chi) {
  const IntMatrix &lifts = pres.coordinates.lifts();
  IntVector row(lifts.rows());
  for (std::size_t j = 0; j < lifts.rows(); ++j)
    row[j] = chi(lifts.row(j));
  return row;
}

inline AbGroupStructure expected_cl_quotient(const ModuliPair &p) {
  if (p.g == 1 && p.n == 1)
    return {0, {Integer(12)}};
  if ((p.g == 2 && p.n == 1) || (p.g == 1 && p.n == 2) || (p.g == 2 && p.n == 0))
    return {0, {Integer(2), Integer(2)}};
  return {0, {Integer(2)}};
}

namespace detail {

inline std::vector<std::string> cl_generator_expressions(const Presentation &pres) {
  const auto [g, n] = pres.pair;
  if (g == 1 && n == 1)
    return {"delta_irr"};
  if (g == 2 && n == 0)
    return {"2*lambda", "2*delta(1;)", "delta_irr"};
  if (g == 2 && n == 1)
    return {"2*lambda", "2*psi_1", "lambda + delta(1;)", "delta_irr"};
  if (g == 1 && n == 2)
    return {"2*lambda", "delta_irr", "2*psi_1", "2*delta(1;)"};
  // g + n >= 4 or (3,0): every boundary orbit other than the elliptic tail
  std::vector<std::string> exprs{"2*lambda", "lambda + delta(1;)"};
  const GenId tail = canonicalize(pres.pair, 1, 0);
  for (const auto &id : pres.symbols) {
    if (id.kind == GenKind::lambda || id == tail)
      continue;
    exprs.push_back(generator_name(id));
  }
  return exprs;
}

} // namespace detail

inline ClResult cl_subgroup(const Presentation &pres) {
  detail::require_stable(pres, "the class group computation");
  const ModuliPair p = pres.pair;
  ClResult result;
  result.pair = p;
  const std::size_t rank = pres.coordinates.free_rank();

  if (p.g == 0) {
    result.subgroup_basis = IntMatrix::identity(rank);
    result.quotient = {};
    result.method = ClMethod::explicit_list;
    result.warning = "g = 0: the map to the coarse space is an isomorphism; Cl is all of Pic";
    for (std::size_t j = 0; j < pres.generator_count(); ++j)
      result.generators.push_back(pres.generators[j]);
    return result;
  }

  result.generators = detail::cl_generator_expressions(pres);
  std::vector<DivisorClass> gens;
  IntMatrix coords(0, rank);
  for (const auto &e : result.generators) {
    gens.push_back(parse_class(pres, e));
    coords.append_row(normal_form(pres, gens.back()).coords);
  }
  result.subgroup_basis = hermite_basis(coords);
  if (result.subgroup_basis.rows() == 0)
    result.subgroup_basis = IntMatrix(0, rank);
  result.quotient = subgroup_quotient(pres, gens);
  if (!(quotient_invariants(result.subgroup_basis, rank) == result.quotient))
    throw IntegrityError("class group quotient differs between generator and normal-form coordinates");

  const bool first_row = p.g + p.n >= 4 || (p.g == 3 && p.n == 0);
  const bool second_case = p.g + p.n == 3;
  if (first_row || second_case) {
    IntMatrix characters(0, rank);
    characters.append_row(character_in_coordinates(pres, elliptic_character(pres)));
    if (!first_row)
      characters.append_row(character_in_coordinates(pres, hyperelliptic_character(pres)));
    const IntMatrix kernel = kernel_mod_m(characters, 2);
    if (!sublattice_equal(kernel, result.subgroup_basis))
      throw IntegrityError("character kernel differs from the explicit generators for (g,n)=(" +
                           std::to_string(p.g) + "," + std::to_string(p.n) + ")");
    result.method = ClMethod::both_agree;
  }

  if (!(result.quotient == expected_cl_quotient(p)))
    throw IntegrityError("class group quotient for (g,n)=(" + std::to_string(p.g) + "," + std::to_string(p.n) +
                         ") is " + result.quotient.to_string() + ", expected " +
                         expected_cl_quotient(p).to_string());
  return result;
}

struct RigidificationFixture {
  ModuliPair pair;
  std::vector<std::string> generators;
  AbGroupStructure expected_quotient;
};

// Pullback along the removal of the generic involution: onto 2*lambda for
// (1,1), an isomorphism for (2,0).
inline std::vector<RigidificationFixture> rigidification_fixtures() {
  return {
      {{1, 1}, {"2*lambda"}, {0, {Integer(2)}}},
      {{2, 0}, {"lambda", "delta_irr", "delta(1;)"}, {}},
  };
}

} // namespace tautpic
