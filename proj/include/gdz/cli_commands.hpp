#pragma once

// The command-line operations as library functions: each returns the JSON
// report and the process exit code.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>

#include "gdz/io.hpp"

namespace gdz {

enum ExitCode : int {
  exit_ok = 0,
  exit_precondition = 2,
  exit_mismatch = 3,
  exit_io = 4,
};

struct CommandResult {
  Json report;
  int exit_code = exit_ok;
};

/// "auto" (no fixed factor), a real ("0.5", "-2"), an imaginary or complex
/// literal ("i", "-2i", "1+2i", "1.5-0.5i") or "re,im".
inline std::optional<Complex> parse_lambda(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  auto number = [&](std::string_view s) {
    const std::string str(trim(s));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(str, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (str.empty() || used != str.size() || !std::isfinite(v)) {
      throw Error("cannot parse lambda '" + std::string(text) + "'");
    }
    return v;
  };
  const std::string_view s = trim(text);
  if (s == "auto") return std::nullopt;
  Complex z;
  if (const auto comma = s.find(','); comma != std::string_view::npos) {
    z = {number(s.substr(0, comma)), number(s.substr(comma + 1))};
  } else if (!s.empty() && s.back() == 'i') {
    const std::string_view body = s.substr(0, s.size() - 1);
    std::size_t split = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
      if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
        split = k;
        break;
      }
    }
    const std::string_view re = split == std::string_view::npos ? std::string_view() : body.substr(0, split);
    std::string_view im = split == std::string_view::npos ? body : body.substr(split);
    double imv = 1.0;
    if (im == "+" || im.empty()) {
      imv = 1.0;
    } else if (im == "-") {
      imv = -1.0;
    } else {
      if (im.front() == '+') im.remove_prefix(1);
      imv = number(im);
    }
    z = {re.empty() ? 0.0 : number(re), imv};
  } else {
    z = number(s);
  }
  if (z == Complex(0.0)) throw Error("lambda must be nonzero");
  return z;
}

/// Fills tolerances not given on the command line from GDZ_TOL_RANK,
/// GDZ_TOL_CHECK, GDZ_TOL_MATCH and GDZ_TOL_TAIL.
inline Tolerance tolerance_with_env(std::optional<double> rank, std::optional<double> check,
                                    std::optional<double> match, std::optional<double> tail) {
  auto pick = [](std::optional<double> flag, const char* env, double fallback) {
    if (flag) return *flag;
    if (const char* v = std::getenv(env); v && *v) {
      char* end = nullptr;
      const double x = std::strtod(v, &end);
      if (end == v || *end != '\0') throw Error(std::string("cannot parse ") + env + "='" + v + "'");
      return x;
    }
    return fallback;
  };
  const Tolerance def;
  Tolerance tol{pick(rank, "GDZ_TOL_RANK", def.eps_rank), pick(check, "GDZ_TOL_CHECK", def.eps_check),
                pick(match, "GDZ_TOL_MATCH", def.eps_match), pick(tail, "GDZ_TOL_TAIL", def.eps_tail)};
  tol.validate();
  return tol;
}

inline Json tolerance_to_json(const Tolerance& tol) {
  return {{"eps_rank", tol.eps_rank},
          {"eps_check", tol.eps_check},
          {"eps_match", tol.eps_match},
          {"eps_tail", tol.eps_tail}};
}

inline Json axioms_to_json(const AxiomReport& r) {
  return {{"product_residual", r.product_residual},
          {"commute_residual", r.commute_residual},
          {"power_residual", r.power_residual},
          {"scale", r.scale},
          {"index", r.index},
          {"verdict", r.verdict}};
}

namespace detail {

using Clock = std::chrono::steady_clock;

inline double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

inline Json base_report(std::string_view command) {
  return {{"schema_version", schema_version},
          {"command", std::string(command)},
          {"theorem", nullptr},
          {"lambda", nullptr},
          {"conditions", Json::array()},
          {"inverse", nullptr},
          {"oracle", nullptr},
          {"axioms", nullptr},
          {"match", false},
          {"status", "error"},
          {"message", ""}};
}

inline Matrix formula_result(Target target, const CaseData& data, std::optional<Complex> lambda,
                             const Tolerance& tol) {
  const FormulaOptions opts{lambda, true};
  if (const auto* p = std::get_if<PairCase>(&data)) {
    switch (target) {
      case Target::nilpotent_pair:
        // The sum of a lambda-commuting nilpotent pair is nilpotent.
        return zeros(p->a.rows(), p->a.cols());
      case Target::nilpotent_drazin:
        return nilpotent_drazin_sum(p->a, p->b, tol, opts);
      default:
        return additive_drazin(p->a, p->b, tol, opts);
    }
  }
  return block_drazin(std::get<Block2x2>(data), target, tol, opts);
}

inline void finish(CommandResult& out, std::string_view status, int code, const std::string& message,
                   Clock::time_point start) {
  out.report["status"] = std::string(status);
  out.report["message"] = message;
  out.report["wall_time_ms"] = elapsed_ms(start);
  out.exit_code = code;
}

}  // namespace detail

/// Hypothesis check, formula, oracle and comparison for one case.
inline CommandResult evaluate_case(std::string_view command, Target target, const CaseData& data,
                                   std::optional<Complex> lambda, bool force,
                                   const Tolerance& tol) {
  const auto start = detail::Clock::now();
  CommandResult out{detail::base_report(command), exit_ok};
  Json& rep = out.report;
  rep["theorem"] = std::string(target_id(target));
  rep["force"] = force;
  rep["tolerance"] = tolerance_to_json(tol);
  if (lambda) rep["lambda"] = complex_to_json(*lambda);
  try {
    const Matrix M = combined_matrix(data);
    const std::vector<ConditionCheck> conditions = certify(target, data, lambda, tol);
    rep["conditions"] = conditions_to_json(conditions);
    if (!lambda) {
      for (const auto& c : conditions) {
        if (c.check.holds && !c.check.degenerate && c.check.lambda) {
          rep["lambda"] = complex_to_json(*c.check.lambda);
          break;
        }
      }
    }
    const bool hypotheses = all_hold(conditions);
    if (!hypotheses && !force) {
      const auto failing = std::find_if(conditions.begin(), conditions.end(),
                                        [](const ConditionCheck& c) { return !c.check.holds; });
      detail::finish(out, "precondition_violated", exit_precondition,
                     "hypothesis '" + failing->name + "' fails", start);
      return out;
    }

    const DrazinResult oracle = drazin_oracle(M, tol);
    rep["oracle"] = matrix_to_json(oracle.d);
    rep["index"] = oracle.index;

    Matrix x;
    try {
      x = detail::formula_result(target, data, lambda, tol);
    } catch (const ConvergenceError& e) {
      detail::finish(out, "mismatch", exit_mismatch, e.what(), start);
      return out;
    }
    rep["inverse"] = matrix_to_json(x);
    const AxiomReport axioms = check_drazin_axioms(M, x, tol);
    rep["axioms"] = axioms_to_json(axioms);
    const double diff = fro_norm(x - oracle.d);
    const double scale = scale_of(M, oracle.d);
    const bool match = diff <= tol.eps_match * scale;
    rep["difference"] = diff;
    rep["scale"] = scale;
    rep["match"] = match;

    std::string message;
    bool closed_ok = true;
    if (hypotheses && is_block_target(target)) {
      const auto& blk = std::get<Block2x2>(data);
      try {
        const double cdiff = fro_norm(block_closed_form(blk, target, tol) - oracle.d);
        closed_ok = cdiff <= tol.eps_match * scale;
        rep["closed_form"] = {{"difference", cdiff}, {"match", closed_ok}};
      } catch (const Error& e) {
        closed_ok = false;
        rep["closed_form"] = {{"error", e.what()}, {"match", false}};
      }
      if (!closed_ok) message = "closed-form expression disagrees with the oracle";
    }
    if (match && axioms.verdict && closed_ok) {
      detail::finish(out, "match", exit_ok, hypotheses ? "" : "hypotheses fail; forced result matches",
                     start);
    } else {
      if (message.empty()) {
        message = !axioms.verdict ? "formula result fails the Drazin axioms"
                                  : "formula result differs from the oracle";
      }
      detail::finish(out, "mismatch", exit_mismatch, message, start);
    }
  } catch (const ParseError& e) {
    detail::finish(out, "error", exit_io, e.what(), start);
  } catch (const DimensionMismatch& e) {
    detail::finish(out, "error", exit_io, e.what(), start);
  } catch (const Error& e) {
    // Ambiguous ranks, reconciliation failures and the like: the computed
    // result cannot be trusted.
    detail::finish(out, "mismatch", exit_mismatch, e.what(), start);
  }
  return out;
}

inline CommandResult error_result(std::string_view command, const std::string& message,
                                  int code = exit_io) {
  CommandResult out{detail::base_report(command), code};
  out.report["message"] = message;
  out.report["wall_time_ms"] = 0.0;
  return out;
}

inline CommandResult cmd_drazin(const std::filesystem::path& input, const Tolerance& tol) {
  const auto start = detail::Clock::now();
  CommandResult out{detail::base_report("drazin"), exit_ok};
  try {
    const Matrix a = read_matrix(input);
    require_square(a, "drazin");
    const DrazinResult r = drazin_oracle(a, tol);
    out.report["inverse"] = matrix_to_json(r.d);
    out.report["oracle"] = out.report["inverse"];
    out.report["pi"] = matrix_to_json(r.pi);
    out.report["index"] = r.index;
    out.report["axioms"] = axioms_to_json(check_drazin_axioms(a, r.d, tol));
    out.report["match"] = true;
    detail::finish(out, "match", exit_ok, "", start);
  } catch (const AxiomViolation& e) {
    detail::finish(out, "mismatch", exit_mismatch, e.what(), start);
  } catch (const Error& e) {
    detail::finish(out, "error", exit_io, e.what(), start);
  }
  return out;
}

inline CommandResult cmd_sum(const std::filesystem::path& a_path, const std::filesystem::path& b_path,
                             std::string_view theorem, std::string_view lambda, bool force,
                             const Tolerance& tol) {
  try {
    const auto target = parse_target(theorem);
    if (!target || (*target != Target::nilpotent_drazin && *target != Target::additive)) {
      throw Error("sum: theorem must be 2.3 or 2.4, got '" + std::string(theorem) + "'");
    }
    const std::optional<Complex> lam = parse_lambda(lambda);
    PairCase pair{read_matrix(a_path), read_matrix(b_path)};
    require_square(pair.a, "sum");
    require_same_shape(pair.a, pair.b, "sum");
    return evaluate_case("sum", *target, pair, lam, force, tol);
  } catch (const Error& e) {
    return error_result("sum", e.what());
  }
}

struct BlockPaths {
  std::filesystem::path A, B, C, D;
};

inline CommandResult cmd_block(const BlockPaths& paths, std::string_view theorem,
                               std::string_view lambda, bool force, const Tolerance& tol) {
  try {
    const auto target = parse_target(theorem);
    if (!target || !is_block_target(*target)) {
      throw Error("block: theorem must be one of 3.1, 3.2, 3.3, 3.4, 4.1, 4.2, 4.3, got '" +
                  std::string(theorem) + "'");
    }
    const std::optional<Complex> lam = parse_lambda(lambda);
    Block2x2 blk{read_matrix(paths.A), read_matrix(paths.B), read_matrix(paths.C),
                 read_matrix(paths.D)};
    blk.validate();
    return evaluate_case("block", *target, blk, lam, force, tol);
  } catch (const Error& e) {
    return error_result("block", e.what());
  }
}

/// Generates `count` instances (seeds seed, seed+1, ...) into `out_dir`:
/// one instance document NAME.json each, plus the individual matrices under
/// NAME/.
inline CommandResult cmd_gen(CaseSpec spec, const std::filesystem::path& out_dir, int count,
                             const Tolerance& tol) {
  const auto start = detail::Clock::now();
  CommandResult out{detail::base_report("gen"), exit_ok};
  out.report["instances"] = Json::array();
  try {
    if (count < 1) throw Error("gen: count must be positive");
    if (spec.preset) count = 1;
    std::filesystem::create_directories(out_dir);
    for (int i = 0; i < count; ++i) {
      CaseSpec s = spec;
      s.seed = spec.seed + static_cast<std::uint64_t>(i);
      const Instance inst = generate(s, tol);
      const std::filesystem::path file = out_dir / (inst.name + ".json");
      write_text(file, instance_to_json(inst).dump(2) + "\n");
      const std::filesystem::path sub = out_dir / inst.name;
      std::filesystem::create_directories(sub);
      if (const auto* p = std::get_if<PairCase>(&inst.data)) {
        write_matrix(sub / "a.json", p->a);
        write_matrix(sub / "b.json", p->b);
      } else {
        const auto& blk = std::get<Block2x2>(inst.data);
        write_matrix(sub / "A.json", blk.A);
        write_matrix(sub / "B.json", blk.B);
        write_matrix(sub / "C.json", blk.C);
        write_matrix(sub / "D.json", blk.D);
      }
      out.report["theorem"] = std::string(target_id(inst.target));
      out.report["lambda"] = complex_to_json(inst.lambda);
      out.report["instances"].push_back({{"name", inst.name},
                                         {"file", file.string()},
                                         {"negated", inst.negated},
                                         {"certificate", conditions_to_json(inst.certificate)}});
      if (i == 0) out.report["conditions"] = conditions_to_json(inst.certificate);
    }
    out.report["match"] = true;
    detail::finish(out, "generated", exit_ok, "", start);
  } catch (const GenerationFailed& e) {
    detail::finish(out, "generation_failed", exit_precondition, e.what(), start);
  } catch (const std::filesystem::filesystem_error& e) {
    detail::finish(out, "error", exit_io, e.what(), start);
  } catch (const Error& e) {
    detail::finish(out, "error", exit_io, e.what(), start);
  }
  return out;
}

/// Runs every instance document (*.json) in `dir` through its target's
/// pipeline (or `theorem` when given). Results are reported sorted by
/// instance file name. Exit code: mismatch if any, else I/O error if any,
/// else precondition violation if any.
inline CommandResult cmd_verify(const std::filesystem::path& dir, std::optional<std::string> theorem,
                                bool force, unsigned jobs, const Tolerance& tol) {
  const auto start = detail::Clock::now();
  CommandResult out{detail::base_report("verify"), exit_ok};
  std::vector<std::filesystem::path> files;
  try {
    std::optional<Target> override_target;
    if (theorem) {
      override_target = parse_target(*theorem);
      if (!override_target) throw Error("verify: unknown theorem '" + *theorem + "'");
      out.report["theorem"] = *theorem;
    }
    if (!std::filesystem::is_directory(dir)) throw Error("verify: not a directory: " + dir.string());
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error("no instances");

    std::vector<CommandResult> results(files.size());
    std::vector<std::string> names(files.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (std::size_t i = next++; i < files.size(); i = next++) {
        names[i] = files[i].stem().string();
        try {
          const Instance inst = read_instance(files[i]);
          if (!inst.name.empty()) names[i] = inst.name;
          const Target t = override_target.value_or(inst.target);
          if (is_block_target(t) != std::holds_alternative<Block2x2>(inst.data)) {
            throw Error("instance shape does not fit theorem " + std::string(target_id(t)));
          }
          const std::optional<Complex> lam =
              override_target ? std::nullopt : std::optional<Complex>(inst.lambda);
          results[i] = evaluate_case("verify", t, inst.data, lam, force, tol);
        } catch (const Error& e) {
          results[i] = error_result("verify", e.what());
        }
      }
    };
    const unsigned n_threads =
        std::max(1u, std::min<unsigned>(jobs == 0 ? std::thread::hardware_concurrency() : jobs,
                                        static_cast<unsigned>(files.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::size_t n_match = 0, n_mismatch = 0, n_pre = 0, n_err = 0;
    double worst_diff = 0.0;
    double worst_residual = 0.0;
    Json entries = Json::array();
    Json failures = Json::array();
    for (std::size_t i = 0; i < files.size(); ++i) {
      const Json& r = results[i].report;
      const int code = results[i].exit_code;
      n_match += code == exit_ok;
      n_mismatch += code == exit_mismatch;
      n_pre += code == exit_precondition;
      n_err += code == exit_io;
      if (r.contains("difference")) worst_diff = std::max(worst_diff, r["difference"].get<double>());
      for (const auto& c : r["conditions"]) {
        if (c["holds"].get<bool>()) worst_residual = std::max(worst_residual, c["residual"].get<double>());
      }
      Json entry = {{"name", names[i]},
                    {"file", files[i].filename().string()},
                    {"theorem", r["theorem"]},
                    {"status", r["status"]},
                    {"exit_code", code},
                    {"difference", r.value("difference", Json(nullptr))},
                    {"message", r["message"]}};
      if (code != exit_ok) failures.push_back(entry);
      entries.push_back(std::move(entry));
    }
    out.report["counts"] = {{"total", files.size()},
                            {"match", n_match},
                            {"mismatch", n_mismatch},
                            {"precondition_violated", n_pre},
                            {"error", n_err}};
    out.report["worst_difference"] = worst_diff;
    out.report["worst_holding_residual"] = worst_residual;
    out.report["results"] = std::move(entries);
    out.report["failures"] = std::move(failures);
    out.report["match"] = n_mismatch == 0 && n_err == 0 && n_pre == 0;
    if (n_mismatch > 0) {
      detail::finish(out, "mismatch", exit_mismatch, std::to_string(n_mismatch) + " mismatch(es)", start);
    } else if (n_err > 0) {
      detail::finish(out, "error", exit_io, std::to_string(n_err) + " unreadable instance(s)", start);
    } else if (n_pre > 0) {
      detail::finish(out, "precondition_violated", exit_precondition,
                     std::to_string(n_pre) + " precondition violation(s)", start);
    } else {
      detail::finish(out, "match", exit_ok, "", start);
    }
  } catch (const Error& e) {
    detail::finish(out, "error", exit_io, e.what(), start);
  } catch (const std::filesystem::filesystem_error& e) {
    detail::finish(out, "error", exit_io, e.what(), start);
  }
  return out;
}

}  // namespace gdz
