#pragma once

// Text formats.
//
// vbf1: line 1 is "n m"; line 2 holds the 2^n values F(0), ..., F(2^n - 1)
// in hex, separated by whitespace. Blank lines may follow.
//
// lin1: line 1 is "n"; each further line "i c" sets the coefficient of
// x^(2^i) to c, written in hex or as g^k. Missing indices are zero.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "apn/error.hpp"
#include "apn/field.hpp"
#include "apn/linear.hpp"
#include "apn/vbf.hpp"

namespace apn::io {

namespace detail {

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

inline std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

inline bool blank(const std::string& line) { return tokens(line).empty(); }

inline long parse_int(const std::string& tok, int line, const char* what) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(tok, &pos, 10);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != tok.size()) throw ParseError(line, std::string("expected ") + what + ", got '" + tok + "'");
  return v;
}

inline std::uint32_t parse_hex(const std::string& tok, int line) {
  std::string s = tok;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) s = s.substr(2);
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos, 16);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size() || s[0] == '-' || s[0] == '+')
    throw ParseError(line, "expected hex value, got '" + tok + "'");
  if (v > 0xffffffffull) throw ParseError(line, "value '" + tok + "' too large");
  return static_cast<std::uint32_t>(v);
}

}  // namespace detail

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
  if (!out) throw Error("write to '" + path + "' failed");
}

inline Vbf parse_vbf1(const std::string& text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty() || detail::blank(lines[0])) throw ParseError(1, "expected header 'n m'");
  const auto head = detail::tokens(lines[0]);
  if (head.size() != 2) throw ParseError(1, "expected header 'n m'");
  const long n = detail::parse_int(head[0], 1, "input dimension n");
  const long m = detail::parse_int(head[1], 1, "output dimension m");
  if (n < 1 || n > Vbf::kMaxInput) throw ParseError(1, "n must be in [1,16]");
  if (m < 1 || m > Vbf::kMaxOutput) throw ParseError(1, "m must be in [1,31]");
  if (lines.size() < 2) throw ParseError(2, "expected " + std::to_string(1L << n) + " values");
  const auto vals = detail::tokens(lines[1]);
  const std::size_t expect = std::size_t{1} << n;
  if (vals.size() != expect)
    throw ParseError(2, "expected " + std::to_string(expect) + " values, found " + std::to_string(vals.size()));
  std::vector<std::uint32_t> t(expect);
  for (std::size_t i = 0; i < expect; ++i) {
    t[i] = detail::parse_hex(vals[i], 2);
    if (t[i] >= (std::uint64_t{1} << m))
      throw ParseError(2, "value " + vals[i] + " at position " + std::to_string(i) + " exceeds " + std::to_string(m) +
                              " bits");
  }
  for (std::size_t l = 2; l < lines.size(); ++l)
    if (!detail::blank(lines[l])) throw ParseError(static_cast<int>(l + 1), "unexpected content after table");
  return Vbf(static_cast<int>(n), static_cast<int>(m), std::move(t));
}

inline std::string format_vbf1(const Vbf& f) {
  std::string out = std::to_string(f.n()) + " " + std::to_string(f.m()) + "\n";
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (x) out += ' ';
    out += FieldSpec::hex(f(static_cast<std::uint32_t>(x)));
  }
  out += '\n';
  return out;
}

inline LinearMap parse_lin1(const std::string& text, const FieldSpec& field) {
  const auto lines = detail::split_lines(text);
  if (lines.empty() || detail::blank(lines[0])) throw ParseError(1, "expected header 'n'");
  const auto head = detail::tokens(lines[0]);
  if (head.size() != 1) throw ParseError(1, "expected header 'n'");
  const long n = detail::parse_int(head[0], 1, "degree n");
  if (n != field.n())
    throw ParseError(1, "map is over n=" + std::to_string(n) + " but the field has n=" + std::to_string(field.n()));
  std::vector<Elem> coeffs(n, 0);
  std::vector<bool> seen(n, false);
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const int ln = static_cast<int>(l + 1);
    const auto tok = detail::tokens(lines[l]);
    if (tok.empty()) continue;
    if (tok.size() != 2) throw ParseError(ln, "expected 'i coeff'");
    const long i = detail::parse_int(tok[0], ln, "index i");
    if (i < 0 || i >= n) throw ParseError(ln, "index " + tok[0] + " out of range [0," + std::to_string(n) + ")");
    if (seen[i]) throw ParseError(ln, "index " + tok[0] + " given twice");
    seen[i] = true;
    try {
      coeffs[i] = field.parse(tok[1]);
    } catch (const Error& e) {
      throw ParseError(ln, e.what());
    }
  }
  return LinearMap::linearized(field, coeffs);
}

inline std::string format_lin1(const LinearMap& L, const FieldSpec& field, bool as_power = false) {
  const auto a = linearized_coefficients(field, L);
  std::string out = std::to_string(field.n()) + "\n";
  for (int i = 0; i < field.n(); ++i)
    if (a[i]) out += std::to_string(i) + " " + field.format(a[i], as_power) + "\n";
  return out;
}

}  // namespace apn::io
