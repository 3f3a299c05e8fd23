#pragma once

// Serialization, the on-disk presentation cache, the verification sweep and
// the command implementations behind the tautpic tool. Commands return their
// output and exit code instead of writing to the terminal.

#include "tautpic/class_algebra.hpp"
#include "tautpic/descent.hpp"
#include "tautpic/presentations.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace tautpic {

using json = nlohmann::ordered_json;

inline constexpr int format_version = 1;

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int negative = 1;
inline constexpr int usage = 2;
} // namespace exit_code

// Integers up to 2^53 in magnitude are JSON numbers, larger ones decimal
// strings.
inline json integer_to_json(const Integer &x) {
  static const Integer limit = Integer(1) << 53;
  if (abs(x) <= limit)
    return static_cast<std::int64_t>(x.get_si());
  return x.get_str();
}

inline Integer integer_from_json(const json &j) {
  if (j.is_number_integer())
    return Integer(std::to_string(j.get<std::int64_t>()), 10);
  if (j.is_string()) {
    Integer x;
    if (x.set_str(j.get<std::string>(), 10) != 0)
      throw ParameterError("malformed integer string '" + j.get<std::string>() + "'");
    return x;
  }
  throw ParameterError("expected an integer, found " + j.dump());
}

inline json structure_to_json(const AbGroupStructure &s) {
  json factors = json::array();
  for (const auto &d : s.invariant_factors)
    factors.push_back(integer_to_json(d));
  return {{"free_rank", s.free_rank}, {"invariant_factors", factors}};
}

inline AbGroupStructure structure_from_json(const json &j) {
  AbGroupStructure s;
  s.free_rank = j.at("free_rank").get<std::size_t>();
  for (const auto &d : j.at("invariant_factors"))
    s.invariant_factors.push_back(integer_from_json(d));
  return s;
}

inline json matrix_to_json(const IntMatrix &m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (const auto &x : m.row(i))
      r.push_back(integer_to_json(x));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline IntMatrix matrix_from_json(const json &j, std::size_t cols) {
  IntMatrix m(0, cols);
  for (const auto &r : j) {
    IntVector row;
    for (const auto &x : r)
      row.push_back(integer_from_json(x));
    m.append_row(row);
  }
  return m;
}

inline json to_json(const Presentation &p) {
  return {{"format_version", format_version},
          {"g", p.pair.g},
          {"n", p.pair.n},
          {"variant", std::string(to_string(p.variant))},
          {"generators", p.generators},
          {"relations", matrix_to_json(p.relations)},
          {"structure", structure_to_json(p.structure)}};
}

namespace detail {

inline GenId symbol_from_name(const std::string &name, const ModuliPair &pair) {
  if (name == "lambda")
    return GenId::lambda();
  if (name == "delta_irr")
    return GenId::delta_irr();
  if (name == "omega")
    return GenId::omega();
  if (name.rfind("sigma_", 0) == 0)
    return GenId::section(std::stoi(name.substr(6)));
  if (name.rfind("delta(", 0) == 0 && name.back() == ')') {
    const auto semi = name.find(';');
    if (semi == std::string::npos)
      throw ParameterError("malformed generator name '" + name + "'");
    const int a = std::stoi(name.substr(6, semi - 6));
    Mask mask = 0;
    std::stringstream rest(name.substr(semi + 1, name.size() - semi - 2));
    std::string item;
    while (std::getline(rest, item, ','))
      if (!item.empty()) {
        const int i = std::stoi(item);
        if (i < 1 || i > pair.n)
          throw ParameterError("generator '" + name + "' names a marking outside [1,n]");
        mask |= singleton(i);
      }
    return GenId::boundary(a, mask);
  }
  throw ParameterError("unknown generator name '" + name + "'");
}

} // namespace detail

// Rebuilds a presentation from its document; the recorded structure must
// match the one recomputed from the relations.
inline Presentation presentation_from_json(const json &doc) {
  if (doc.at("format_version").get<int>() != format_version)
    throw ParameterError("unsupported format_version " + doc.at("format_version").dump());
  const Variant variant = parse_variant(doc.at("variant").get<std::string>());
  const ModuliPair pair = validate_pair(doc.at("g").get<long>(), doc.at("n").get<long>(), variant);
  std::vector<GenId> symbols;
  for (const auto &name : doc.at("generators"))
    symbols.push_back(detail::symbol_from_name(name.get<std::string>(), pair));
  IntMatrix relations = matrix_from_json(doc.at("relations"), symbols.size());
  Presentation p = Presentation::assemble(pair, variant, std::move(symbols), std::move(relations));
  if (!(p.structure == structure_from_json(doc.at("structure"))))
    throw IntegrityError("document structure " + structure_from_json(doc.at("structure")).to_string() +
                         " does not match the relations (" + p.structure.to_string() + ")");
  return p;
}

inline json to_json(const ClResult &r) {
  json doc{{"format_version", format_version},
           {"g", r.pair.g},
           {"n", r.pair.n},
           {"generators", r.generators},
           {"subgroup_basis", matrix_to_json(r.subgroup_basis)},
           {"quotient", structure_to_json(r.quotient)},
           {"method", std::string(to_string(r.method))}};
  if (r.warning)
    doc["warning"] = *r.warning;
  return doc;
}

// Presentation documents on disk, one file per (format_version, g, n,
// variant). Writes go through a temporary file and a rename, one writer at a
// time within the process.
class PresentationCache {
public:
  explicit PresentationCache(std::optional<std::filesystem::path> dir) : dir_(std::move(dir)) {}

  // --cache-dir, else $TAUTPIC_CACHE, else disabled.
  static PresentationCache from_settings(const std::string &cache_dir_flag) {
    if (!cache_dir_flag.empty())
      return PresentationCache(std::filesystem::path(cache_dir_flag));
    if (const char *env = std::getenv("TAUTPIC_CACHE"); env && *env)
      return PresentationCache(std::filesystem::path(env));
    return PresentationCache(std::nullopt);
  }

  bool enabled() const { return dir_.has_value(); }

  std::filesystem::path path_for(const ModuliPair &p, Variant v) const {
    return *dir_ / ("v" + std::to_string(format_version) + "_g" + std::to_string(p.g) + "_n" + std::to_string(p.n) +
                    "_" + std::string(to_string(v)) + ".json");
  }

  Presentation get(const ModuliPair &pair, Variant variant) {
    const ModuliPair p = validate_pair(pair.g, pair.n, variant);
    if (!dir_)
      return build_presentation(p, variant);
    const auto path = path_for(p, variant);
    {
      std::ifstream in(path);
      if (in) {
        try {
          return presentation_from_json(json::parse(in));
        } catch (const std::exception &) {
          // unreadable entry: rebuild and overwrite below
        }
      }
    }
    Presentation built = build_presentation(p, variant);
    store(path, to_json(built).dump());
    return built;
  }

private:
  std::optional<std::filesystem::path> dir_;
  std::mutex write_mutex_;

  void store(const std::filesystem::path &path, const std::string &text) {
    std::lock_guard lock(write_mutex_);
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    auto tmp = path;
    tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
      std::ofstream out(tmp);
      if (!out)
        return;
      out << text;
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec)
      std::filesystem::remove(tmp, ec);
  }
};

// ---------------------------------------------------------------------------
// Verification sweep

struct VerifyOptions {
  int g_max = 3;
  int n_max = 4;
  int jobs = 1;
  // Test hook: may alter the stable relation rows before the rank check.
  std::function<void(const ModuliPair &, IntMatrix &)> corrupt_relations;
};

struct CheckFailure {
  ModuliPair pair;
  std::string check;
  std::string expected;
  std::string got;
};

struct CheckTally {
  std::string name;
  std::size_t checked = 0;
  std::size_t passed = 0;
};

struct VerifyReport {
  std::size_t pairs_checked = 0;
  std::vector<CheckTally> tallies;
  std::vector<CheckFailure> failures; // sorted by (g, n)

  bool ok() const { return failures.empty(); }
};

inline const std::vector<std::string> &verify_check_names() {
  static const std::vector<std::string> names{"rank_formula", "saturation",    "open_structure", "open_projection",
                                              "franchetta",   "cl_table",      "character_kernel"};
  return names;
}

namespace detail {

struct PairOutcome {
  ModuliPair pair;
  std::vector<std::pair<std::string, std::optional<CheckFailure>>> results;
};

inline PairOutcome verify_pair(const ModuliPair &p, const VerifyOptions &opts) {
  PairOutcome out{p, {}};
  auto record = [&](const std::string &check, bool pass, const std::string &expected, const std::string &got) {
    out.results.emplace_back(check, pass ? std::nullopt : std::optional<CheckFailure>({p, check, expected, got}));
  };
  auto guarded = [&](const std::string &check, auto &&body) {
    try {
      body();
    } catch (const std::exception &e) {
      record(check, false, "no error", e.what());
    }
  };

  guarded("franchetta", [&] {
    const auto s = build_rpic(p).structure;
    record("franchetta", s == expected_rpic_structure(p), expected_rpic_structure(p).to_string(), s.to_string());
  });
  if (!is_hyperbolic(p.g, p.n))
    return out;

  IntMatrix rows;
  guarded("rank_formula", [&] {
    rows = build_relation_rows(p);
    if (opts.corrupt_relations)
      opts.corrupt_relations(p, rows);
    const auto s = quotient_invariants(rows, enumerate_generators(p).size());
    const AbGroupStructure expected{static_cast<std::size_t>(expected_rank(p)), {}};
    record("rank_formula", s == expected, expected.to_string(), s.to_string());
  });
  guarded("saturation", [&] {
    const bool sat = is_saturated(rows);
    record("saturation", sat, "saturated", sat ? "saturated" : "not saturated");
  });
  guarded("open_structure", [&] {
    const auto s = build_open(p).structure;
    record("open_structure", s == expected_open_structure(p), expected_open_structure(p).to_string(), s.to_string());
  });
  if (p.g >= 1) {
    guarded("open_projection", [&] {
      const bool eq = verify_open_projection(p);
      record("open_projection", eq, "equal", eq ? "equal" : "different");
    });
    guarded("cl_table", [&] {
      const auto pres = build_lambda(p);
      const auto cl = cl_subgroup(pres);
      record("cl_table", cl.quotient == expected_cl_quotient(p), expected_cl_quotient(p).to_string(),
             cl.quotient.to_string());
      const bool characters_apply = !(p.g == 1 && p.n == 1) && !(p.g == 2 && p.n == 0);
      if (characters_apply)
        record("character_kernel", cl.method == ClMethod::both_agree, "both_agree",
               std::string(to_string(cl.method)));
    });
  }
  return out;
}

} // namespace detail

inline VerifyReport run_verification(const VerifyOptions &opts) {
  if (opts.g_max < 0 || opts.n_max < 0)
    throw ParameterError("sweep bounds must be non-negative");
  if (opts.jobs < 1)
    throw ParameterError("--jobs must be at least 1");
  if (opts.n_max > max_markings)
    throw ParameterError("--nmax exceeds the supported maximum of " + std::to_string(max_markings));

  std::vector<ModuliPair> pairs;
  for (int g = 0; g <= opts.g_max; ++g)
    for (int n = 0; n <= opts.n_max; ++n)
      pairs.push_back({g, n});

  std::vector<detail::PairOutcome> outcomes(pairs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pairs.size(); i = next++)
      outcomes[i] = detail::verify_pair(pairs[i], opts);
  };
  const int threads = std::min<int>(opts.jobs, static_cast<int>(std::max<std::size_t>(pairs.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto &t : pool)
    t.join();

  VerifyReport report;
  for (const auto &name : verify_check_names())
    report.tallies.push_back({name});
  for (const auto &o : outcomes) {
    if (is_hyperbolic(o.pair.g, o.pair.n))
      ++report.pairs_checked;
    for (const auto &[check, failure] : o.results) {
      auto it = std::find_if(report.tallies.begin(), report.tallies.end(),
                             [&](const CheckTally &t) { return t.name == check; });
      ++it->checked;
      if (failure)
        report.failures.push_back(*failure);
      else
        ++it->passed;
    }
  }
  return report;
}

inline std::string format_report(const VerifyReport &r) {
  std::ostringstream os;
  os << r.pairs_checked << " pairs checked\n";
  for (const auto &t : r.tallies) {
    os << "  " << t.name;
    for (std::size_t pad = t.name.size(); pad < 18; ++pad)
      os << ' ';
    os << (t.passed == t.checked ? "PASS" : "FAIL") << "  " << t.passed << "/" << t.checked << "\n";
  }
  if (!r.failures.empty()) {
    const auto &f = r.failures.front();
    os << "first failure: (g,n)=(" << f.pair.g << "," << f.pair.n << ") check " << f.check << ": expected "
       << f.expected << ", got " << f.got << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Commands

struct CommandResult {
  int exit_code = exit_code::ok;
  std::string out;
  std::string err;
};

namespace detail {

template <class Body> CommandResult run_guarded(Body &&body) {
  try {
    return body();
  } catch (const ParseError &e) {
    return {exit_code::usage, "", std::string("parse error ") + e.what() + "\n"};
  } catch (const IntegrityError &e) {
    return {exit_code::negative, "", std::string("integrity check failed: ") + e.what() + "\n"};
  } catch (const Error &e) {
    return {exit_code::usage, "", std::string("error: ") + e.what() + "\n"};
  } catch (const std::exception &e) {
    return {exit_code::usage, "", std::string("error: ") + e.what() + "\n"};
  }
}

inline std::string plain_presentation(const Presentation &p) {
  std::ostringstream os;
  os << "(g,n)=(" << p.pair.g << "," << p.pair.n << ") variant " << to_string(p.variant) << "\n";
  os << p.generator_count() << " generators, " << p.relations.rows() << " relations\n";
  os << "generators:";
  for (const auto &g : p.generators)
    os << " " << g;
  os << "\nrelations:\n";
  for (std::size_t i = 0; i < p.relations.rows(); ++i)
    os << "  " << format_class(p, p.relations.row(i)) << " = 0\n";
  os << "structure: " << p.structure.to_string() << " (free_rank " << p.structure.free_rank << ")\n";
  return os.str();
}

} // namespace detail

inline CommandResult cmd_present(PresentationCache &cache, int g, int n, Variant variant, bool as_json) {
  return detail::run_guarded([&]() -> CommandResult {
    const Presentation p = cache.get({g, n}, variant);
    return {exit_code::ok, as_json ? to_json(p).dump(2) + "\n" : detail::plain_presentation(p), ""};
  });
}

inline CommandResult cmd_rank(PresentationCache &cache, int g, int n, Variant variant, bool as_json) {
  return detail::run_guarded([&]() -> CommandResult {
    const Presentation p = cache.get({g, n}, variant);
    if (as_json) {
      json doc{{"g", g}, {"n", n}, {"variant", std::string(to_string(variant))}, {"free_rank", p.structure.free_rank}};
      if (variant == Variant::stable)
        doc["expected_rank"] = expected_rank(p.pair);
      return {exit_code::ok, doc.dump(2) + "\n", ""};
    }
    return {exit_code::ok, std::to_string(p.structure.free_rank) + "\n", ""};
  });
}

inline CommandResult cmd_reduce(PresentationCache &cache, int g, int n, Variant variant, const std::string &expr,
                                bool as_json) {
  return detail::run_guarded([&]() -> CommandResult {
    const Presentation p = cache.get({g, n}, variant);
    const DivisorClass reduced = reduce_class(p, parse_class(p, expr));
    const std::string text = format_class(p, reduced);
    if (as_json) {
      const NormalForm nf = normal_form(p, reduced);
      json coords = json::array(), torsion = json::array();
      for (const auto &x : nf.coords)
        coords.push_back(integer_to_json(x));
      for (const auto &x : nf.torsion)
        torsion.push_back(integer_to_json(x));
      json doc{{"expression", text}, {"coordinates", coords}};
      if (!nf.torsion.empty())
        doc["torsion"] = torsion;
      return {exit_code::ok, doc.dump(2) + "\n", ""};
    }
    return {exit_code::ok, text + "\n", ""};
  });
}

inline CommandResult cmd_equal(PresentationCache &cache, int g, int n, Variant variant, const std::string &lhs,
                               const std::string &rhs) {
  return detail::run_guarded([&]() -> CommandResult {
    const Presentation p = cache.get({g, n}, variant);
    const bool eq = classes_equal(p, parse_class(p, lhs), parse_class(p, rhs));
    return {eq ? exit_code::ok : exit_code::negative, eq ? "true\n" : "false\n", ""};
  });
}

inline CommandResult cmd_clgroup(PresentationCache &cache, int g, int n) {
  return detail::run_guarded([&]() -> CommandResult {
    if (g < 1)
      throw DomainError("the class group computation needs g >= 1");
    const Presentation p = cache.get({g, n}, Variant::stable);
    return {exit_code::ok, to_json(cl_subgroup(p)).dump(2) + "\n", ""};
  });
}

inline CommandResult cmd_verify(const VerifyOptions &opts) {
  return detail::run_guarded([&]() -> CommandResult {
    const VerifyReport report = run_verification(opts);
    return {report.ok() ? exit_code::ok : exit_code::negative, format_report(report), ""};
  });
}

} // namespace tautpic
