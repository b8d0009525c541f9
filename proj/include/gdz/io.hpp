#pragma once

// JSON documents: single matrices ({"rows", "cols", "data": [[re, im], ...]},
// row-major) and generated instances.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "gdz/casegen.hpp"

namespace gdz {

using Json = nlohmann::json;

inline constexpr int schema_version = 1;

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline ParseError schema_error(const std::string& where, const std::string& what) {
  return ParseError(where + ": " + what, 0, 0);
}

inline double finite_number(const Json& v, const std::string& where) {
  if (!v.is_number()) throw schema_error(where, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw schema_error(where, "non-finite number");
  return x;
}

}  // namespace detail

/// Parses JSON text; syntax errors become ParseError with line and column.
inline Json parse_json(std::string_view text, std::string_view source = "input") {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // nlohmann reports the byte just past the offending character.
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    const auto [line, col] = detail::line_column(text, byte);
    throw ParseError(std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) +
                         ": malformed JSON (" + e.what() + ")",
                     line, col);
  }
}

inline Json matrix_to_json(const Matrix& a) {
  if (!is_finite(a)) throw Error("matrix_to_json: matrix has non-finite entries");
  Json data = Json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) data.push_back({a(i, j).real(), a(i, j).imag()});
  }
  return {{"rows", a.rows()}, {"cols", a.cols()}, {"data", std::move(data)}};
}

inline Matrix matrix_from_json(const Json& doc, const std::string& where = "matrix") {
  if (!doc.is_object()) throw detail::schema_error(where, "expected an object");
  for (const char* key : {"rows", "cols", "data"}) {
    if (!doc.contains(key)) throw detail::schema_error(where, std::string("missing \"") + key + "\"");
  }
  const Json& jr = doc["rows"];
  const Json& jc = doc["cols"];
  if (!jr.is_number_integer() || !jc.is_number_integer() || jr.get<long long>() <= 0 ||
      jc.get<long long>() <= 0) {
    throw detail::schema_error(where, "rows and cols must be positive integers");
  }
  const auto rows = static_cast<Index>(jr.get<long long>());
  const auto cols = static_cast<Index>(jc.get<long long>());
  const Json& data = doc["data"];
  if (!data.is_array() || static_cast<Index>(data.size()) != rows * cols) {
    throw detail::schema_error(where, "data must hold rows*cols = " + std::to_string(rows * cols) +
                                          " entries");
  }
  Matrix a(rows, cols);
  for (Index k = 0; k < rows * cols; ++k) {
    const Json& e = data[static_cast<std::size_t>(k)];
    const std::string at = where + ".data[" + std::to_string(k) + "]";
    if (!e.is_array() || e.size() != 2) throw detail::schema_error(at, "expected [re, im]");
    a(k / cols, k % cols) = Complex(detail::finite_number(e[0], at), detail::finite_number(e[1], at));
  }
  return a;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

inline Matrix read_matrix(const std::filesystem::path& path) {
  return matrix_from_json(parse_json(read_text(path), path.string()), path.string());
}

inline void write_matrix(const std::filesystem::path& path, const Matrix& a) {
  write_text(path, matrix_to_json(a).dump(2) + "\n");
}

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& v, const std::string& where) {
  if (v.is_number()) return detail::finite_number(v, where);
  if (!v.is_array() || v.size() != 2) throw detail::schema_error(where, "expected [re, im]");
  return {detail::finite_number(v[0], where), detail::finite_number(v[1], where)};
}

inline Json condition_to_json(const ConditionCheck& c) {
  Json out = {{"name", c.name},
              {"holds", c.check.holds},
              {"residual", c.check.residual},
              {"degenerate", c.check.degenerate}};
  out["lambda"] = c.check.lambda ? complex_to_json(*c.check.lambda) : Json(nullptr);
  return out;
}

inline Json conditions_to_json(const std::vector<ConditionCheck>& checks) {
  Json out = Json::array();
  for (const auto& c : checks) out.push_back(condition_to_json(c));
  return out;
}

inline Json instance_to_json(const Instance& inst) {
  Json mats;
  if (const auto* p = std::get_if<PairCase>(&inst.data)) {
    mats = {{"a", matrix_to_json(p->a)}, {"b", matrix_to_json(p->b)}};
  } else {
    const auto& blk = std::get<Block2x2>(inst.data);
    mats = {{"A", matrix_to_json(blk.A)},
            {"B", matrix_to_json(blk.B)},
            {"C", matrix_to_json(blk.C)},
            {"D", matrix_to_json(blk.D)}};
  }
  return {{"schema_version", schema_version},
          {"name", inst.name},
          {"target", std::string(target_id(inst.target))},
          {"lambda", complex_to_json(inst.lambda)},
          {"negated", inst.negated},
          {"matrices", std::move(mats)},
          {"certificate", conditions_to_json(inst.certificate)}};
}

/// Reads an instance document. The certificate is not trusted; callers
/// re-check hypotheses themselves.
inline Instance instance_from_json(const Json& doc, const std::string& where = "instance") {
  if (!doc.is_object()) throw detail::schema_error(where, "expected an object");
  for (const char* key : {"target", "matrices"}) {
    if (!doc.contains(key)) throw detail::schema_error(where, std::string("missing \"") + key + "\"");
  }
  Instance inst;
  inst.name = doc.value("name", std::string());
  if (!doc["target"].is_string()) throw detail::schema_error(where, "target must be a string");
  const auto target = parse_target(doc["target"].get<std::string>());
  if (!target) throw detail::schema_error(where, "unknown target " + doc["target"].dump());
  inst.target = *target;
  if (doc.contains("lambda")) inst.lambda = complex_from_json(doc["lambda"], where + ".lambda");
  if (doc.contains("negated") && doc["negated"].is_boolean()) inst.negated = doc["negated"].get<bool>();
  const Json& mats = doc["matrices"];
  auto get = [&](const char* key) {
    if (!mats.is_object() || !mats.contains(key)) {
      throw detail::schema_error(where, std::string("missing matrix \"") + key + "\"");
    }
    return matrix_from_json(mats[key], where + ".matrices." + key);
  };
  if (is_block_target(inst.target)) {
    inst.data = Block2x2{get("A"), get("B"), get("C"), get("D")};
  } else {
    inst.data = PairCase{get("a"), get("b")};
  }
  return inst;
}

inline Instance read_instance(const std::filesystem::path& path) {
  return instance_from_json(parse_json(read_text(path), path.string()), path.string());
}

}  // namespace gdz
