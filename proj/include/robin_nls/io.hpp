#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "robin_nls/profile.hpp"
#include "robin_nls/soliton_params.hpp"
#include "robin_nls/spectral.hpp"
#include "robin_nls/types.hpp"
#include "robin_nls/zeros.hpp"

namespace robin_nls {

using Json = nlohmann::json;

/// Shortest decimal representation that reads back to the same double.
inline std::string format_real(Real v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

inline Real parse_real(std::string_view s, const std::string& where) {
  Real v = 0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw Error(ErrorKind::Validation, where + ": '" + std::string(s) + "' is not a number");
  return v;
}

namespace detail {

inline const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw Error(ErrorKind::Validation, path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorKind::Validation, path + "." + key + ": missing field");
  return *it;
}

inline Real number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw Error(ErrorKind::Validation, path + ": expected a number");
  return j.get<Real>();
}

inline Real number_field(const Json& j, const char* key, const std::string& path) {
  return number(field(j, key, path), path + "." + key);
}

inline std::optional<Real> optional_number(const Json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) return std::nullopt;
  return number(j.at(key), path + "." + key);
}

inline Sign sign_field(const Json& j, const std::string& path) {
  const Real l = number_field(j, "lambda", path);
  if (l != 1.0 && l != -1.0) throw Error(ErrorKind::Validation, path + ".lambda: must be +1 or -1");
  return l > 0 ? Sign::Defocusing : Sign::Focusing;
}

/// Byte offset -> "line L, column C".
inline std::string location(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

inline Json parse_json(const std::string& text, const std::string& source = "input") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Validation, source + ": malformed JSON at " + detail::location(text, e.byte > 0 ? e.byte - 1 : 0));
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Validation, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Profile from JSON: explicit samples or a named generator.
inline InitialProfile profile_from_json(const Json& j, const Tolerances& tol = {}) {
  const std::string root = "profile";
  if (!j.is_object()) throw Error(ErrorKind::Validation, root + ": expected an object");
  const Real scale = detail::optional_number(j, "scale", root).value_or(1.0);
  if (j.contains("generator")) {
    if (j.contains("data")) throw Error(ErrorKind::Validation, root + ": give either data or generator, not both");
    const auto& g = j.at("generator");
    if (!g.is_string()) throw Error(ErrorKind::Validation, root + ".generator: expected a string");
    const auto name = g.get<std::string>();
    const Real h = detail::optional_number(j, "h", root).value_or(1.0 / 128);
    if (name == "defocusing_soliton" || name == "focusing_soliton") {
      const Real omega = detail::number_field(j, "omega", root);
      const auto p = name == "defocusing_soliton"
                         ? SolitonParams::defocusing(omega, detail::number_field(j, "alpha", root))
                         : SolitonParams::focusing(omega, detail::number_field(j, "phi", root));
      const Real length = detail::optional_number(j, "L", root).value_or(32.0 / std::sqrt(omega) + std::abs(p.phi()));
      auto prof = InitialProfile::from_function([&](Real x) { return Complex(scale * p.profile(x)); }, h, length,
                                                p.sign(), p.q(), tol.tail_tol);
      return prof;
    }
    if (name == "gaussian") {
      const Real amp = detail::number_field(j, "amplitude", root);
      const Real length = detail::optional_number(j, "L", root).value_or(12.0);
      return InitialProfile::from_function([&](Real x) { return Complex(scale * amp * std::exp(-x * x)); }, h,
                                           length, detail::sign_field(j, root), detail::number_field(j, "q", root),
                                           tol.tail_tol);
    }
    throw Error(ErrorKind::Validation, root + ".generator: unknown generator '" + name + "'");
  }
  const Sign sign = detail::sign_field(j, root);
  const Real q = detail::number_field(j, "q", root);
  const auto& grid = detail::field(j, "grid", root);
  const Real h = detail::number_field(grid, "h", root + ".grid");
  const auto& data = detail::field(j, "data", root);
  if (!data.is_array()) throw Error(ErrorKind::Validation, root + ".data: expected an array");
  if (data.empty()) throw Error(ErrorKind::Validation, root + ".data: empty data array");
  std::vector<Complex> samples;
  samples.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::string path = root + ".data[" + std::to_string(i) + "]";
    const auto& e = data[i];
    if (!e.is_array() || e.size() != 2) throw Error(ErrorKind::Validation, path + ": expected [re, im]");
    samples.emplace_back(detail::number(e[0], path + "[0]") * scale, detail::number(e[1], path + "[1]") * scale);
  }
  if (grid.contains("N")) {
    const Real n = detail::number_field(grid, "N", root + ".grid");
    if (n != static_cast<Real>(samples.size() - 1))
      throw Error(ErrorKind::Validation, root + ".grid.N: " + format_real(n) + " does not match " +
                                             std::to_string(samples.size()) + " samples");
  }
  return InitialProfile(std::move(samples), h, sign, q, tol.tail_tol);
}

inline InitialProfile read_profile(const std::string& path, const Tolerances& tol = {}) {
  return profile_from_json(parse_json(read_file(path), path), tol);
}

inline Json profile_to_json(const InitialProfile& p) {
  Json data = Json::array();
  for (const auto& s : p.samples()) data.push_back({s.real(), s.imag()});
  return {{"lambda", static_cast<int>(p.lambda())},
          {"q", p.q()},
          {"grid", {{"h", p.h()}, {"N", p.intervals()}}},
          {"data", std::move(data)}};
}

/// Tolerance overrides; unknown keys are rejected.
inline Tolerances tolerances_from_json(const Json& j, Tolerances tol = {}) {
  if (!j.is_object()) throw Error(ErrorKind::Validation, "tolerances: expected an object");
  for (const auto& [key, value] : j.items()) {
    const std::string path = "tolerances." + key;
    if (key == "max_refinements") {
      if (!value.is_number_integer()) throw Error(ErrorKind::Validation, path + ": expected an integer");
      tol.max_refinements = value.get<int>();
      continue;
    }
    const Real v = detail::number(value, path);
    if (key == "tail_tol") tol.tail_tol = v;
    else if (key == "unit_tol") tol.unit_tol = v;
    else if (key == "conv_tol") tol.conv_tol = v;
    else if (key == "singular_tol") tol.singular_tol = v;
    else if (key == "zero_sep") tol.zero_sep = v;
    else if (key == "loc_tol") tol.loc_tol = v;
    else if (key == "a_zero_tol") tol.a_zero_tol = v;
    else if (key == "mass_tol") tol.mass_tol = v;
    else if (key == "energy_tol") tol.energy_tol = v;
    else if (key == "reflect_tol") tol.reflect_tol = v;
    else throw Error(ErrorKind::Validation, path + ": unknown tolerance");
  }
  tol.validate();
  return tol;
}

/// Comma-separated numeric table with a header line.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<Real>> rows;
};

inline void write_csv(std::ostream& out, const CsvTable& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_real(row[i]);
    out << '\n';
  }
}

inline CsvTable read_csv(std::istream& in, const std::string& source = "csv") {
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      const auto comma = s.find(',', start);
      parts.push_back(s.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return parts;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1) {
      t.header = split(line);
      continue;
    }
    if (line.empty()) continue;
    const auto parts = split(line);
    if (parts.size() != t.header.size())
      throw Error(ErrorKind::Validation, source + ": line " + std::to_string(lineno) + ": expected " +
                                             std::to_string(t.header.size()) + " fields, found " +
                                             std::to_string(parts.size()));
    std::vector<Real> row;
    row.reserve(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i)
      row.push_back(parse_real(parts[i], source + ": line " + std::to_string(lineno) + ", field " +
                                             std::to_string(i + 1) + " (" + t.header[i] + ")"));
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw Error(ErrorKind::Validation, source + ": empty file");
  return t;
}

/// k, a, b, Delta, r as CSV; r is written as NaN where undefined.
inline CsvTable table_to_csv(const SpectralTable& table) {
  CsvTable t;
  t.header = {"k", "Re a", "Im a", "Re b", "Im b", "Re Δ", "Im Δ", "Re r", "Im r"};
  for (const auto& s : table.samples) {
    const Complex r = s.r.value_or(Complex(std::nan(""), std::nan("")));
    t.rows.push_back({s.k.real(), s.a.real(), s.a.imag(), s.b.real(), s.b.imag(), s.delta.real(), s.delta.imag(),
                      r.real(), r.imag()});
  }
  return t;
}

inline Json spectrum_to_json(const DiscreteSpectrum& s) {
  Json zeros = Json::array();
  for (const auto& z : s.zeros) {
    Json e = {{"xi", {z.xi.real(), z.xi.imag()}}, {"simple", z.simple}, {"a_nonzero", z.a_nonzero}};
    if (z.has_residue) e["c"] = {z.c.real(), z.c.imag()};
    else e["c"] = nullptr;
    zeros.push_back(std::move(e));
  }
  return {{"M", s.count()}, {"zeros", std::move(zeros)}, {"diagnostics", s.diagnostics}};
}

inline void write_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Validation, "cannot write '" + path + "'");
  out << text;
}

}  // namespace robin_nls
