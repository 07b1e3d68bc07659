#pragma once

// Trace and report serialization. Every document carries the resolved run
// configuration, a report block and a fixed-order record table; complex
// values take two columns (re, im) and the point at infinity is "inf".

#include <charconv>
#include <ios>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "json.hpp"

#include "runckel/scalar.hpp"
#include "runckel/sphere.hpp"

namespace runckel::io {

using Json = nlohmann::ordered_json;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct Document {
  Json config = Json::object();
  Json report = Json::object();
  Table records;
};

enum class Format { Csv, Json };

Format format_from_string(std::string_view name);

/// RFC 4180 field quoting.
std::string csv_escape(std::string_view field);

/// "# config.<key>=<value>" and "# report.<key>=<value>" lines, then the header row and records.
void write_csv(std::ostream& os, const Document& doc);

/// {"config": ..., "records": [...], "report": ...}. Cells that round-trip
/// through double become JSON numbers, everything else stays a string.
void write_json(std::ostream& os, const Document& doc);

void write(std::ostream& os, const Document& doc, Format format);

/// Shortest round-trip text for double; max_digits10 scientific otherwise.
template <typename Real>
std::string format_real(const Real& x) {
  if constexpr (std::is_same_v<Real, double>) {
    if (x != x) return "nan";
    if (x == std::numeric_limits<double>::infinity()) return "inf";
    if (x == -std::numeric_limits<double>::infinity()) return "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
  } else {
    if (x != x) return "nan";
    if (!is_finite(x)) return x > 0 ? "inf" : "-inf";
    return x.str(std::numeric_limits<Real>::max_digits10, std::ios_base::scientific);
  }
}

template <typename Real>
std::pair<std::string, std::string> format_point(const ExtendedComplex<Real>& x) {
  if (x.is_infinite()) return {"inf", "inf"};
  return {format_real(x.real()), format_real(x.imag())};
}

template <typename Real>
std::pair<std::string, std::string> format_point(const Complex<Real>& x) {
  return {format_real(x.real()), format_real(x.imag())};
}

/// Report-side JSON for a point: {"re": ..., "im": ...} or "inf".
template <typename Real>
Json point_json(const ExtendedComplex<Real>& x) {
  if (x.is_infinite()) return "inf";
  return Json{{"re", to_double(x.real())}, {"im", to_double(x.imag())}};
}

template <typename Real>
Json real_json(const Real& x) {
  const double d = to_double(x);
  if (d != d) return nullptr;
  if (d == std::numeric_limits<double>::infinity()) return "inf";
  return d;
}

}  // namespace runckel::io
