#pragma once

// Test-only oracles. Nothing here calls into the library's assembly or
// factorization code paths.

#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace chtn::testing {

// Exact rational with 64-bit parts, always reduced, denominator > 0.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Fraction() = default;
  Fraction(std::int64_t n, std::int64_t d = 1) : num(n), den(d) { reduce(); }

  void reduce() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  bool is_zero() const { return num == 0; }
  friend Fraction operator-(Fraction a, Fraction b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
  friend Fraction operator*(Fraction a, Fraction b) { return {a.num * b.num, a.den * b.den}; }
  friend Fraction operator/(Fraction a, Fraction b) {
    if (b.num == 0) throw std::domain_error("division by zero");
    return {a.num * b.den, a.den * b.num};
  }
  friend bool operator==(Fraction a, Fraction b) { return a.num == b.num && a.den == b.den; }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

using IntMatrix = std::vector<std::vector<std::int64_t>>;

// Null space of an integer matrix by exact reduced row echelon form. One
// basis vector per free column, with that column set to 1.
inline std::vector<std::vector<Fraction>> exact_null_space(const IntMatrix& m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::vector<std::vector<Fraction>> a(rows, std::vector<Fraction>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = Fraction(m[i][j]);

  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    const Fraction piv = a[r][c];
    for (auto& x : a[r]) x = x / piv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      const Fraction f = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] = a[i][j] - f * a[r][j];
    }
    pivot_cols.push_back(c);
    ++r;
  }

  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<Fraction>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Fraction> v(cols, Fraction(0));
    v[free] = Fraction(1);
    for (std::size_t k = 0; k < pivot_cols.size(); ++k) v[pivot_cols[k]] = Fraction(0) - a[k][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

// Horizontal stencils of one periodic layer written out by hand, ordered
// (j, species) with species 0 = UD. Row j of species s is (-1, 4, -1) when
// (j even) == (s == UD), otherwise (-2, 2, -2).
inline IntMatrix layer_matrix_by_hand(int width) {
  const int dim = 2 * width;
  IntMatrix m(dim, std::vector<std::int64_t>(dim, 0));
  for (int j = 0; j < width; ++j) {
    for (int s = 0; s < 2; ++s) {
      const bool strong = (j % 2 == 0) == (s == 0);
      const int row = 2 * j + s;
      const int left = 2 * ((j + width - 1) % width) + s;
      const int right = 2 * ((j + 1) % width) + s;
      m[row][row] += strong ? 4 : 2;
      m[row][left] += strong ? -1 : -2;
      m[row][right] += strong ? -1 : -2;
    }
  }
  return m;
}

// Minimal JSON Schema check covering the keywords used in schemas/:
// type, required, properties, items, enum. Returns an empty string on success.
inline std::string schema_violation(const nlohmann::json& doc, const nlohmann::json& schema,
                                    const std::string& path = "$") {
  if (schema.contains("type")) {
    auto matches = [&doc](const std::string& t) {
      if (t == "object") return doc.is_object();
      if (t == "array") return doc.is_array();
      if (t == "string") return doc.is_string();
      if (t == "integer") return doc.is_number_integer();
      if (t == "number") return doc.is_number();
      if (t == "boolean") return doc.is_boolean();
      if (t == "null") return doc.is_null();
      return false;
    };
    const auto& type = schema["type"];
    bool ok = false;
    if (type.is_array()) {
      for (const auto& t : type) ok = ok || matches(t.get<std::string>());
    } else {
      ok = matches(type.get<std::string>());
    }
    if (!ok) return path + ": expected type " + type.dump();
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& e : schema["enum"]) found = found || e == doc;
    if (!found) return path + ": value not in enum";
  }
  if (doc.is_object()) {
    if (schema.contains("required")) {
      for (const auto& key : schema["required"]) {
        if (!doc.contains(key.get<std::string>())) return path + ": missing " + key.dump();
      }
    }
    if (schema.contains("properties")) {
      for (const auto& [key, sub] : schema["properties"].items()) {
        if (doc.contains(key)) {
          if (auto v = schema_violation(doc[key], sub, path + "." + key); !v.empty()) return v;
        }
      }
    }
  }
  if (doc.is_array() && schema.contains("items")) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (auto v = schema_violation(doc[i], schema["items"], path + "[" + std::to_string(i) + "]");
          !v.empty())
        return v;
    }
  }
  return "";
}

}  // namespace chtn::testing
