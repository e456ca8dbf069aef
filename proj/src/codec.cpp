// Protocol file reader/writer.

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wcf/error.hpp"
#include "wcf/protocol.hpp"

namespace wcf {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw Error(ErrorKind::ParseError, "field '" + field + "': " + message);
}

void reject_unknown_keys(const json& object, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; })) {
      fail(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

const json& member(const json& object, const char* key, const std::string& where) {
  const auto it = object.find(key);
  const std::string path = where.empty() ? key : where + "." + key;
  if (it == object.end()) fail(path, "missing");
  return *it;
}

double number(const json& value, const std::string& field) {
  if (!value.is_number()) fail(field, "expected a number");
  return value.get<double>();
}

int dimension(const json& value, const std::string& field) {
  if (!value.is_number_integer()) fail(field, "expected a positive integer");
  const auto d = value.get<long long>();
  if (d <= 0 || d > 64) fail(field, "dimension must be in [1, 64]");
  return static_cast<int>(d);
}

qla::Complex complex_entry(const json& value, const std::string& field) {
  if (!value.is_array() || value.size() != 2) fail(field, "expected a [re, im] pair");
  return {number(value[0], field + "[0]"), number(value[1], field + "[1]")};
}

std::vector<double> real_array(const json& value, const std::string& field) {
  if (!value.is_array() || value.empty()) fail(field, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(number(value[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Protocol parse_aligned(const json& aligned, double tolerance) {
  if (!aligned.is_object()) fail("aligned", "expected an object");
  reject_unknown_keys(aligned, {"a", "b"}, "aligned");
  std::vector<double> a = real_array(member(aligned, "a", "aligned"), "aligned.a");
  std::vector<double> b = real_array(member(aligned, "b", "aligned"), "aligned.b");
  if (a.size() != b.size()) {
    fail("aligned", "length mismatch: a has " + std::to_string(a.size()) + " entries, b has " +
                        std::to_string(b.size()));
  }
  try {
    return Protocol::from_profile(DiagonalProfile::make(std::move(a), std::move(b)), tolerance);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::OutOfRange) fail("aligned", e.what());
    throw;
  }
}

Protocol parse_explicit(const json& doc, double tolerance) {
  reject_unknown_keys(doc, {"dims", "psi", "E0"}, "");
  const json& dims = member(doc, "dims", "");
  if (!dims.is_object()) fail("dims", "expected an object");
  reject_unknown_keys(dims, {"A", "B"}, "dims");
  const int dim_a = dimension(member(dims, "A", "dims"), "dims.A");
  const int dim_b = dimension(member(dims, "B", "dims"), "dims.B");

  const json& psi = member(doc, "psi", "");
  if (!psi.is_array() || psi.size() != static_cast<std::size_t>(dim_a * dim_b)) {
    fail("psi", "expected " + std::to_string(dim_a * dim_b) + " [re, im] entries");
  }
  ComplexVector amplitudes(dim_a * dim_b);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    amplitudes(static_cast<Eigen::Index>(i)) = complex_entry(psi[i], "psi[" + std::to_string(i) + "]");
  }

  const json& e0 = member(doc, "E0", "");
  if (!e0.is_array() || e0.size() != static_cast<std::size_t>(dim_b)) {
    fail("E0", "expected " + std::to_string(dim_b) + " rows");
  }
  ComplexMatrix effect(dim_b, dim_b);
  for (int r = 0; r < dim_b; ++r) {
    const json& row = e0[static_cast<std::size_t>(r)];
    const std::string row_name = "E0[" + std::to_string(r) + "]";
    if (!row.is_array() || row.size() != static_cast<std::size_t>(dim_b)) {
      fail(row_name, "expected " + std::to_string(dim_b) + " entries");
    }
    for (int c = 0; c < dim_b; ++c) {
      effect(r, c) = complex_entry(row[static_cast<std::size_t>(c)], row_name + "[" + std::to_string(c) + "]");
    }
  }
  return Protocol::validate(dim_a, dim_b, amplitudes, effect, tolerance);
}

int line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

std::string fmt17(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::string fmt_complex(qla::Complex z) { return "[" + fmt17(z.real()) + ", " + fmt17(z.imag()) + "]"; }

std::string fmt_reals(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt17(v[i]);
  }
  return out + "]";
}

}  // namespace

Protocol parse_protocol(std::string_view text, double fairness_tolerance) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError,
                "line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) + ": " + e.what());
  }
  if (!doc.is_object()) fail("<root>", "expected a JSON object");
  if (doc.contains("aligned")) {
    reject_unknown_keys(doc, {"aligned"}, "");
    return parse_aligned(doc["aligned"], fairness_tolerance);
  }
  return parse_explicit(doc, fairness_tolerance);
}

std::string serialize_explicit(const Protocol& p) {
  std::ostringstream os;
  os << "{\n  \"dims\": {\"A\": " << p.dim_a() << ", \"B\": " << p.dim_b() << "},\n  \"psi\": [";
  const ComplexVector& amps = p.psi().amplitudes;
  for (Eigen::Index i = 0; i < amps.size(); ++i) os << (i ? ", " : "") << fmt_complex(amps(i));
  os << "],\n  \"E0\": [\n";
  for (int r = 0; r < p.dim_b(); ++r) {
    os << "    [";
    for (int c = 0; c < p.dim_b(); ++c) os << (c ? ", " : "") << fmt_complex(p.e0()(r, c));
    os << "]" << (r + 1 < p.dim_b() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

std::string serialize_protocol(const Protocol& p) {
  if (!p.source_profile()) return serialize_explicit(p);
  const DiagonalProfile& profile = *p.source_profile();
  return "{\n  \"aligned\": {\n    \"a\": " + fmt_reals(profile.a()) + ",\n    \"b\": " +
         fmt_reals(profile.b()) + "\n  }\n}\n";
}

}  // namespace wcf
