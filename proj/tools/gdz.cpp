// gdz: Drazin inverses of matrices, sums and 2x2 block matrices from the
// command line. Reports are JSON on stdout (or --out).

#include <iostream>

#include "CLI11.hpp"
#include "gdz/cli_commands.hpp"

namespace {

struct TolFlags {
  std::optional<double> rank, check, match, tail;

  void attach(CLI::App* app) {
    app->add_option("--eps-rank", rank, "relative singular value cutoff for rank decisions");
    app->add_option("--eps-check", check, "relative residual bound for hypothesis checks");
    app->add_option("--eps-match", match, "relative bound for formula/oracle agreement");
    app->add_option("--eps-tail", tail, "relative size below which series terms are negligible");
  }
};

int emit(const gdz::CommandResult& r, const std::string& out_path) {
  const std::string text = r.report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    try {
      gdz::write_text(out_path, text);
    } catch (const gdz::Error& e) {
      std::cerr << "gdz: " << e.what() << "\n";
      return gdz::exit_io;
    }
  }
  if (r.exit_code != gdz::exit_ok) {
    std::cerr << "gdz: " << r.report.value("status", std::string("error")) << ": "
              << r.report.value("message", std::string()) << "\n";
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Drazin inverse toolkit"};
  app.require_subcommand(1);
  std::string out_path;
  TolFlags tol_flags;

  std::string in_path;
  auto* drazin = app.add_subcommand("drazin", "Drazin inverse, spectral idempotent and index");
  drazin->add_option("--in", in_path, "matrix document")->required();

  std::string a_path, b_path, theorem, lambda = "auto";
  bool force = false;
  auto* sum = app.add_subcommand("sum", "Drazin inverse of a + b by a sum formula");
  sum->add_option("--a", a_path, "matrix document for a")->required();
  sum->add_option("--b", b_path, "matrix document for b")->required();
  sum->add_option("--theorem", theorem, "2.3 or 2.4")->required();
  sum->add_option("--lambda", lambda, "auto, a real, a complex literal like 1+2i, or re,im");
  sum->add_flag("--force", force, "evaluate even when hypotheses fail");

  gdz::BlockPaths bp;
  auto* block = app.add_subcommand("block", "Drazin inverse of [[A, B], [C, D]]");
  block->add_option("--A", bp.A, "matrix document for A")->required();
  block->add_option("--B", bp.B, "matrix document for B")->required();
  block->add_option("--C", bp.C, "matrix document for C")->required();
  block->add_option("--D", bp.D, "matrix document for D")->required();
  block->add_option("--theorem", theorem, "3.1, 3.2, 3.3, 3.4, 4.1, 4.2 or 4.3")->required();
  block->add_option("--lambda", lambda, "auto or a fixed factor");
  block->add_flag("--force", force, "evaluate even when hypotheses fail");

  std::string target, preset, out_dir;
  gdz::Index dim = 4;
  std::optional<gdz::Index> dim2;
  std::string gen_lambda = "0.5";
  std::uint64_t seed = 0;
  bool negate = false;
  int count = 1;
  auto* gen = app.add_subcommand("gen", "generate instances satisfying (or nearly) a hypothesis set");
  gen->add_option("--target", target, "result identifier, e.g. 2.4 or 4.1");
  gen->add_option("--dim", dim, "matrix size (size of A for block results)");
  gen->add_option("--dim2", dim2, "size of D for block results");
  gen->add_option("--lambda", gen_lambda, "nonzero factor");
  gen->add_option("--seed", seed, "random seed");
  gen->add_flag("--negate", negate, "violate exactly one hypothesis");
  gen->add_option("--preset", preset, "example-2.5 or example-4.4");
  gen->add_option("--out-dir", out_dir, "output directory")->required();
  gen->add_option("--count", count, "number of instances (consecutive seeds)");

  std::string dir;
  std::optional<std::string> verify_theorem;
  unsigned jobs = 0;
  auto* verify = app.add_subcommand("verify", "check every instance document in a directory");
  verify->add_option("--dir", dir, "directory of instance documents")->required();
  verify->add_option("--theorem", verify_theorem, "override the instances' own targets");
  verify->add_flag("--force", force, "evaluate even when hypotheses fail");
  verify->add_option("--jobs", jobs, "worker threads (0 = hardware concurrency)");

  for (auto* sub : {drazin, sum, block, gen, verify}) {
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    tol_flags.attach(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return gdz::exit_io;
  }

  gdz::Tolerance tol;
  try {
    tol = gdz::tolerance_with_env(tol_flags.rank, tol_flags.check, tol_flags.match, tol_flags.tail);
  } catch (const gdz::Error& e) {
    std::cerr << "gdz: " << e.what() << "\n";
    return gdz::exit_io;
  }

  if (drazin->parsed()) return emit(gdz::cmd_drazin(in_path, tol), out_path);
  if (sum->parsed()) return emit(gdz::cmd_sum(a_path, b_path, theorem, lambda, force, tol), out_path);
  if (block->parsed()) return emit(gdz::cmd_block(bp, theorem, lambda, force, tol), out_path);
  if (verify->parsed()) {
    return emit(gdz::cmd_verify(dir, verify_theorem, force, jobs, tol), out_path);
  }

  gdz::CaseSpec spec;
  try {
    if (!preset.empty()) {
      spec.preset = gdz::parse_preset(preset);
      if (!spec.preset) throw gdz::Error("unknown preset '" + preset + "'");
      spec.target = spec.preset == gdz::Preset::shift_pair ? gdz::Target::additive
                                                            : gdz::Target::block_bc_zero;
    } else {
      const auto t = gdz::parse_target(target);
      if (!t) throw gdz::Error("gen: --target or --preset required (unknown target '" + target + "')");
      spec.target = *t;
      const auto lam = gdz::parse_lambda(gen_lambda);
      if (!lam) throw gdz::Error("gen: lambda must be a value, not auto");
      spec.lambda = *lam;
    }
    spec.dim = dim;
    spec.dim2 = dim2;
    spec.seed = seed;
    spec.negate = negate;
  } catch (const gdz::Error& e) {
    return emit(gdz::error_result("gen", e.what()), out_path);
  }
  return emit(gdz::cmd_gen(spec, out_dir, count, tol), out_path);
}
