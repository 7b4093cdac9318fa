#include "qdiff/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

namespace qdiff {

namespace {

using nlohmann::json;

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorCode::schema_error, msg); }

double to_double(std::string_view s) { return std::stod(std::string(s)); }

cplx complex_from_json(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    schema(where + ": expected [re, im]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<cplx> complex_list(const json& v, const std::string& where) {
  if (!v.is_array()) schema(where + ": expected an array of [re, im] pairs");
  std::vector<cplx> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(complex_from_json(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

RationalFunction rational_from_json(const json& v, const std::string& where) {
  if (!v.is_object() || !v.contains("num")) schema(where + ": expected {\"num\": [...], \"den\": [...]}");
  const Polynomial num(complex_list(v["num"], where + ".num"));
  Polynomial den = Polynomial::constant(1.0);
  if (v.contains("den")) den = Polynomial(complex_list(v["den"], where + ".den"));
  if (den.is_zero()) schema(where + ".den: zero denominator");
  try {
    return RationalFunction(num, den);
  } catch (const Error& e) {
    schema(where + ": " + e.what());
  }
}

// Syntax errors carry a byte offset; turn it into line:column.
json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    int line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    schema("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col));
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) schema("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int int_field(const json& doc, const char* key, int fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc[key].is_number_integer()) schema(std::string(key) + ": expected an integer");
  return doc[key].get<int>();
}

}  // namespace

cplx parse_complex(std::string_view text) {
  static const std::string unum = R"((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)";
  static const std::regex real_only("^([+-]?" + unum + ")$");
  static const std::regex imag_only("^([+-]?" + unum + ")?([+-])?i$");
  static const std::regex both("^([+-]?" + unum + ")([+-])(" + unum + ")?i$");
  const std::string s(text);
  std::smatch m;
  if (std::regex_match(s, m, real_only)) return {to_double(m[1].str()), 0.0};
  if (std::regex_match(s, m, imag_only) && !(m[1].matched && m[2].matched)) {
    if (m[1].matched) return {0.0, to_double(m[1].str())};
    return {0.0, m[2].matched && m[2].str() == "-" ? -1.0 : 1.0};
  }
  if (std::regex_match(s, m, both)) {
    const double im = m[3].matched ? to_double(m[3].str()) : 1.0;
    return {to_double(m[1].str()), m[2].str() == "-" ? -im : im};
  }
  schema("not a complex number: '" + s + "' (expected re+imi)");
}

std::string format_complex(cplx z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

std::vector<cplx> parse_complex_list(std::string_view text) {
  std::vector<cplx> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(parse_complex(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

ProblemFile parse_problem(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) schema("problem: expected a JSON object");
  for (const char* key : {"k", "q", "A", "initial"}) {
    if (!doc.contains(key)) schema(std::string("problem: missing field '") + key + "'");
  }
  ProblemFile pf;
  pf.problem.k = int_field(doc, "k", 1);
  if (pf.problem.k < 1) schema("k: must be at least 1");
  pf.N = int_field(doc, "N", 30);
  if (pf.N < pf.problem.k) schema("N: must be at least k");
  try {
    pf.problem.qp = QParam(complex_from_json(doc["q"], "q"), std::max(pf.N + pf.problem.k, 64));
  } catch (const Error& e) {
    schema(std::string("q: ") + e.what());
  }
  pf.problem.A = rational_from_json(doc["A"], "A");
  if (doc.contains("B")) pf.problem.B = rational_from_json(doc["B"], "B");
  pf.problem.initial = complex_list(doc["initial"], "initial");
  if (static_cast<int>(pf.problem.initial.size()) != pf.problem.k) {
    schema("initial: expected k = " + std::to_string(pf.problem.k) + " values");
  }
  return pf;
}

ProblemFile load_problem(const std::string& path) { return parse_problem(read_file(path)); }

ModelFile parse_model(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
    schema("model: expected an object with a string 'kind'");
  }
  ModelFile mf;
  if (doc.contains("q")) {
    try {
      mf.qp = QParam(complex_from_json(doc["q"], "q"));
    } catch (const Error& e) {
      schema(std::string("q: ") + e.what());
    }
  }
  const auto kind = doc["kind"].get<std::string>();
  if (kind == "rational") {
    mf.rational = rational_from_json(doc, "model");
  } else if (kind == "series") {
    if (!doc.contains("coeffs")) schema("model: missing field 'coeffs'");
    mf.series = TruncatedSeries::certified(complex_list(doc["coeffs"], "coeffs"));
  } else {
    schema("model: unknown kind '" + kind + "'");
  }
  return mf;
}

ModelFile load_model(const std::string& path) { return parse_model(read_file(path)); }

std::string samples_json(const std::vector<NevanlinnaSample>& samples) {
  const auto val = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  const auto opt = [&](const std::optional<double>& v) { return v ? val(*v) : json(nullptr); };
  json rows = json::array();
  for (const auto& s : samples) {
    rows.push_back({{"r", val(s.r)},
                    {"m", val(s.m)},
                    {"N_0", opt(s.N_0)},
                    {"N_inf", val(s.N_inf)},
                    {"T", val(s.T)},
                    {"nJ_0", opt(s.nJ_0)},
                    {"nJ_inf", opt(s.nJ_inf)},
                    {"quad_err", val(s.quad_err)}});
  }
  return rows.dump(2) + "\n";
}

}  // namespace qdiff
