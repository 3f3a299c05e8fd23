#include "tautpic/cli_io.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <string>

namespace {

struct PairFlags {
  int g = -1;
  int n = -1;
  std::string variant = "stable";
};

void add_pair_flags(CLI::App *cmd, PairFlags &flags, bool with_variant = true) {
  cmd->add_option("--g", flags.g, "genus")->required();
  cmd->add_option("--n", flags.n, "number of markings")->required();
  if (with_variant)
    cmd->add_option("--variant", flags.variant, "stable | open | rpic")
        ->check(CLI::IsMember({"stable", "open", "rpic"}));
}

int emit(const tautpic::CommandResult &r) {
  std::cout << r.out;
  std::cerr << r.err;
  return r.exit_code;
}

} // namespace

int main(int argc, char **argv) {
  using namespace tautpic;

  CLI::App app{"Presentations of tautological Picard groups of moduli of pointed curves"};
  app.require_subcommand(1);

  bool as_json = false;
  std::string cache_dir;
  app.add_flag("--json", as_json, "JSON output")->trigger_on_parse();
  app.add_option("--cache-dir", cache_dir, "presentation cache directory (default: $TAUTPIC_CACHE)");

  PairFlags present_flags, rank_flags, reduce_flags, equal_flags, cl_flags;
  std::string reduce_expr, lhs, rhs;
  VerifyOptions verify_opts;

  auto *present = app.add_subcommand("present", "print a presentation");
  add_pair_flags(present, present_flags);

  auto *rank = app.add_subcommand("rank", "print the free rank");
  add_pair_flags(rank, rank_flags);

  auto *reduce = app.add_subcommand("reduce", "print the canonical form of a class");
  add_pair_flags(reduce, reduce_flags);
  reduce->add_option("expr", reduce_expr, "class expression")->required();

  auto *equal = app.add_subcommand("equal", "decide whether two classes coincide");
  add_pair_flags(equal, equal_flags);
  equal->add_option("lhs", lhs, "first class")->required();
  equal->add_option("rhs", rhs, "second class")->required();

  auto *clgroup = app.add_subcommand("clgroup", "class group of the coarse moduli space inside Pic");
  add_pair_flags(clgroup, cl_flags, false);

  auto *verify = app.add_subcommand("verify", "run the verification sweep");
  verify->add_option("--gmax", verify_opts.g_max, "largest genus")->default_val(3);
  verify->add_option("--nmax", verify_opts.n_max, "largest number of markings")->default_val(4);
  verify->add_option("--jobs", verify_opts.jobs, "worker threads")->default_val(1);

  for (auto *sub : {present, rank, reduce, equal, clgroup, verify}) {
    sub->add_flag("--json", as_json, "JSON output");
    sub->add_option("--cache-dir", cache_dir, "presentation cache directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return exit_code::usage;
  }

  try {
    PresentationCache cache = PresentationCache::from_settings(cache_dir);
    if (*present)
      return emit(cmd_present(cache, present_flags.g, present_flags.n, parse_variant(present_flags.variant), as_json));
    if (*rank)
      return emit(cmd_rank(cache, rank_flags.g, rank_flags.n, parse_variant(rank_flags.variant), as_json));
    if (*reduce)
      return emit(cmd_reduce(cache, reduce_flags.g, reduce_flags.n, parse_variant(reduce_flags.variant), reduce_expr,
                             as_json));
    if (*equal)
      return emit(cmd_equal(cache, equal_flags.g, equal_flags.n, parse_variant(equal_flags.variant), lhs, rhs));
    if (*clgroup)
      return emit(cmd_clgroup(cache, cl_flags.g, cl_flags.n));
    if (*verify)
      return emit(cmd_verify(verify_opts));
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code::usage;
  }
  return exit_code::usage;
}
