// JSON and CSV serialisation of the certificate and scan reports.
#include <sstream>

#include "cmcert/cm_verifier.hpp"
#include "cmcert/errors.hpp"
#include "cmcert/proof_replay.hpp"
#include "json.hpp"

namespace cmcert {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kCertificateSchema = "cmcert.certificate/1";
constexpr const char* kScanSchema = "cmcert.cm-scan/1";

// Enough decimal digits to read the value back bit-for-bit at its precision
// (round to nearest in both directions).
std::string exact_decimal(const BigFloat& f) {
  const auto digits = static_cast<int>(mpfr_get_str_ndigits(10, f.precision()));
  return f.to_string(digits);
}

Json ball_json(const Ball& b) {
  return Json{{"mid", exact_decimal(b.mid())}, {"rad", exact_decimal(b.rad())}, {"prec", b.precision()}};
}

Ball ball_from_json(const Json& j) {
  const auto prec = j.at("prec").get<mpfr_prec_t>();
  BigFloat mid(prec), rad(Ball::kRadiusPrecision);
  if (mpfr_set_str(mid.get(), j.at("mid").get<std::string>().c_str(), 10, MPFR_RNDN) != 0 ||
      mpfr_set_str(rad.get(), j.at("rad").get<std::string>().c_str(), 10, MPFR_RNDN) != 0) {
    throw ParseError("malformed ball in report");
  }
  return Ball::from_mid_rad(mid.get(), rad.get(), prec);
}

const char* verdict(bool passed) { return passed ? "pass" : "fail"; }

bool parse_verdict(const Json& j) {
  const auto s = j.get<std::string>();
  if (s != "pass" && s != "fail") throw ParseError("verdict must be pass or fail, got '" + s + "'");
  return s == "pass";
}

Sign parse_sign(const std::string& s) {
  for (Sign v : {Sign::Positive, Sign::Negative, Sign::Indeterminate}) {
    if (s == to_string(v)) return v;
  }
  throw ParseError("unknown sign verdict '" + s + "'");
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

void expect_schema(const Json& j, const char* schema) {
  if (!j.is_object() || j.value("schema", "") != schema) throw ParseError(std::string("expected schema ") + schema);
}

}  // namespace

std::string CertificateReport::to_json() const {
  Json stages_json = Json::array();
  for (const auto& s : stages) {
    stages_json.push_back({{"stage", s.name}, {"verdict", verdict(s.passed)}, {"detail", s.detail}});
  }
  Json steps_json = Json::array();
  for (const auto& s : steps) {
    Json values = Json::object();
    for (const auto& [label, value] : s.exact_values_used) values[label] = value;
    steps_json.push_back({{"step", s.step},
                          {"claim", s.claim},
                          {"method", s.method},
                          {"exact_values_used", values},
                          {"verdict", verdict(s.passed)},
                          {"note", s.note}});
  }
  Json j{{"schema", kCertificateSchema},
         {"verdict", verdict(passed())},
         {"first_failure", first_failure()},
         {"stages", stages_json},
         {"steps", steps_json}};
  return j.dump(2) + "\n";
}

CertificateReport CertificateReport::from_json(std::string_view text) {
  const Json j = parse_json(text);
  expect_schema(j, kCertificateSchema);
  CertificateReport r;
  try {
    for (const auto& s : j.at("stages")) {
      r.stages.push_back({s.at("stage").get<std::string>(), parse_verdict(s.at("verdict")),
                          s.at("detail").get<std::string>()});
    }
    for (const auto& s : j.at("steps")) {
      CertificateStep step;
      step.step = s.at("step").get<int>();
      step.claim = s.at("claim").get<std::string>();
      step.method = s.at("method").get<std::string>();
      for (const auto& [label, value] : s.at("exact_values_used").items()) {
        step.exact_values_used.emplace_back(label, value.get<std::string>());
      }
      step.passed = parse_verdict(s.at("verdict"));
      step.note = s.at("note").get<std::string>();
      r.steps.push_back(std::move(step));
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed certificate: ") + e.what());
  }
  return r;
}

std::string CmScanReport::to_json() const {
  Json cells = Json::array();
  for (const auto& e : entries) {
    cells.push_back({{"k", e.k},
                     {"x", to_string(e.x)},
                     {"value", ball_json(e.value)},
                     {"verdict", to_string(e.verdict)},
                     {"precision_used", e.precision_used}});
  }
  Json j{{"schema", kScanSchema},
         {"kind", to_string(kind)},
         {"k_max", k_max},
         {"grid", grid},
         {"target_bits", target_bits},
         {"summary",
          {{"max_k_verified", summary.max_k_verified},
           {"positive", summary.positive},
           {"indeterminate", summary.indeterminate},
           {"failures", summary.failures}}},
         {"entries", cells}};
  return j.dump(2) + "\n";
}

CmScanReport CmScanReport::from_json(std::string_view text) {
  const Json j = parse_json(text);
  expect_schema(j, kScanSchema);
  CmScanReport r;
  try {
    r.kind = parse_function_kind(j.at("kind").get<std::string>());
    r.k_max = j.at("k_max").get<unsigned>();
    r.grid = j.at("grid").get<std::string>();
    r.target_bits = j.at("target_bits").get<long>();
    for (const auto& c : j.at("entries")) {
      r.entries.push_back({c.at("k").get<unsigned>(), parse_rational(c.at("x").get<std::string>()),
                           ball_from_json(c.at("value")), parse_sign(c.at("verdict").get<std::string>()),
                           c.at("precision_used").get<long>()});
    }
    const Json& s = j.at("summary");
    r.summary.max_k_verified = s.at("max_k_verified").get<int>();
    r.summary.positive = s.at("positive").get<std::size_t>();
    r.summary.indeterminate = s.at("indeterminate").get<std::size_t>();
    r.summary.failures = s.at("failures").get<std::size_t>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed scan report: ") + e.what());
  }
  return r;
}

std::string CmScanReport::to_csv() const {
  std::ostringstream os;
  os << "k,x,mid,rad,verdict\n";
  for (const auto& e : entries) {
    os << e.k << ',' << to_string(e.x) << ',' << exact_decimal(e.value.mid()) << ','
       << exact_decimal(e.value.rad()) << ',' << to_string(e.verdict) << '\n';
  }
  return os.str();
}

std::string InequalityReport::to_json() const {
  Json cells = Json::array();
  for (const auto& e : entries) {
    cells.push_back({{"x", to_string(e.x)},
                     {"value", ball_json(e.value)},
                     {"verdict", e.verdict == Sign::Positive ? "strict" : to_string(e.verdict)},
                     {"precision_used", e.precision_used},
                     {"margin_lower", e.margin_lower}});
  }
  Json j{{"schema", "cmcert.inequality-scan/1"},
         {"grid", grid},
         {"verdict", verdict(passed())},
         {"summary", {{"strict", strict}, {"indeterminate", indeterminate}, {"failures", failures}}},
         {"entries", cells}};
  return j.dump(2) + "\n";
}

std::string DecayReport::to_json() const {
  Json cells = Json::array();
  for (const auto& e : entries) cells.push_back({{"x", to_string(e.x)}, {"value", ball_json(e.value)}});
  Json j{{"schema", "cmcert.decay-check/1"},
         {"kind", to_string(kind)},
         {"j_max", j_max},
         {"threshold", threshold},
         {"verdict", verdict(passed())},
         {"decreasing", decreasing},
         {"below_threshold", below_threshold},
         {"note", note},
         {"entries", cells}};
  return j.dump(2) + "\n";
}

}  // namespace cmcert
