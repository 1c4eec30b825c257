#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cmcert/cm_verifier.hpp"
#include "cmcert/errors.hpp"
#include "cmcert/proof_replay.hpp"

namespace cmcert::cli {

namespace {

constexpr long kDefaultPrecision = 128;

long default_precision() {
  if (const char* env = std::getenv("CMCERT_PREC")) {
    try {
      return std::stol(env);
    } catch (const std::exception&) {
      throw ParseError(std::string("CMCERT_PREC is not an integer: ") + env);
    }
  }
  return kDefaultPrecision;
}

struct Options {
  std::string constants_path;
  long prec = 0;
  bool prec_given = false;

  // eval
  std::string function;
  std::string x;
  int m = 1;

  // identity-check
  std::string which;

  // replay-proof
  std::string emit;

  // scans
  std::string kind;
  unsigned k_max = 8;
  std::string grid;
  std::string geom;
  std::string format = "text";
  std::string output;
  unsigned j_max = 10;
  double threshold = 1e-6;
};

ConstantTable load_table(const Options& o) {
  return o.constants_path.empty() ? ConstantTable::builtin() : ConstantTable::load(o.constants_path);
}

std::unique_ptr<BoundModel> load_model(const Options& o) {
  return std::make_unique<BoundModel>(BoundConstants::from_table(load_table(o)));
}

PrecisionPolicy policy_for(const Options& o) {
  const long bits = o.prec_given ? o.prec : default_precision();
  if (bits < 8) throw DomainError("precision must be at least 8 bits");
  return PrecisionPolicy::with_target(bits);
}

// "num/den  (~ d.ddd... @N bits)"
std::string exact_with_decimal(const BigRational& q, long bits) {
  const Ball b = Ball::from_rational(q, bits);
  const int digits = std::max(6, static_cast<int>(bits * 0.30103) - 1);
  return to_string(q) + "  (~ " + b.mid().to_string(digits) + " @" + std::to_string(bits) + " bits)";
}

std::string ball_line(const Ball& b, long bits) {
  const int digits = std::max(6, static_cast<int>(bits * 0.30103) - 1);
  return b.to_string(digits) + "  @" + std::to_string(bits) + " bits";
}

GridSpec grid_for(const Options& o) {
  if (!o.grid.empty() && !o.geom.empty()) throw DomainError("--grid and --geom are mutually exclusive");
  if (!o.grid.empty()) return GridSpec::parse_list(o.grid);
  if (!o.geom.empty()) {
    std::vector<std::string> parts;
    std::stringstream ss(o.geom);
    for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
    if (parts.size() != 3) throw ParseError("--geom expects start,ratio,count");
    const long count = std::stol(parts[2]);
    if (count <= 0) throw DomainError("--geom count must be positive");
    return GridSpec::geometric(parse_rational(parts[0]), parse_rational(parts[1]), static_cast<unsigned>(count));
  }
  return GridSpec::default_grid();
}

// Writes to --output if given, otherwise to out.
void emit_text(const Options& o, const std::string& text, std::ostream& out) {
  if (o.output.empty() || o.output == "-") {
    out << text;
    return;
  }
  std::ofstream f(o.output, std::ios::binary);
  if (!f || !(f << text)) throw std::ios_base::failure("cannot write " + o.output);
}

int cmd_eval(const Options& o, std::ostream& out) {
  const auto model = load_model(o);
  const PrecisionPolicy policy = policy_for(o);
  const long bits = policy.target_bits;
  const BigRational x = parse_rational(o.x);
  std::string value;
  std::string name = o.function;
  if (o.function == "p") {
    value = exact_with_decimal(model->p(x), bits);
  } else if (o.function == "Q") {
    value = exact_with_decimal(model->q(x), bits);
  } else if (o.function == "B") {
    value = exact_with_decimal(model->bound_exact(x), bits);
  } else if (o.function == "psi1" || o.function == "psi2" || o.function == "polygamma") {
    const int m = o.function == "psi1" ? 1 : o.function == "psi2" ? 2 : o.m;
    if (o.function == "polygamma") name = "psi^(" + std::to_string(m) + ")";
    value = ball_line(polygamma(m, x, policy), bits);
  } else if (o.function == "g") {
    value = ball_line(model->g(x, policy), bits);
  } else if (o.function == "H") {
    value = ball_line(model->h(x, policy), bits);
  } else {
    throw ParseError("unknown function '" + o.function + "'");
  }
  out << name << "(" << to_string(x) << ") = " << value << '\n';
  return kPass;
}

int report_identity(const IdentityReport& r, std::ostream& out) {
  out << r.name << ": " << (r.equal ? "pass" : "fail") << '\n';
  if (!r.equal) {
    for (const auto& d : r.differences) out << "  " << d << '\n';
    if (!r.numerator_difference.is_zero()) {
      out << "  numerator difference: " << to_string(r.numerator_difference) << '\n';
    }
  }
  return r.equal ? kPass : kVerificationFailure;
}

int cmd_identity_check(const Options& o, std::ostream& out) {
  const auto model = load_model(o);
  if (o.which == "expansion") return report_identity(pf_expansion_identity_check(model->constants()), out);
  if (o.which == "remark2") return report_identity(remainder_identity_check(model->constants()), out);
  if (o.which == "telescoping") {
    if (o.x.empty()) throw ParseError("telescoping requires --x");
    const PrecisionPolicy policy = policy_for(o);
    const auto r = telescoping_identity_check(parse_rational(o.x), policy, *model);
    out << "telescoping at x = " << to_string(r.x) << ": " << (r.overlap ? "pass" : "fail") << '\n';
    out << "  g(x) - g(x+1) = " << r.lhs.to_string(30) << '\n';
    out << "  (2/x^2) H(x)  = " << r.rhs.to_string(30) << '\n';
    out << "  |difference| = " << r.gap.to_string(6) << ", radius sum = " << r.radius_sum.to_string(6) << '\n';
    return r.overlap ? kPass : kVerificationFailure;
  }
  throw ParseError("unknown identity '" + o.which + "'");
}

int cmd_replay_proof(const Options& o, std::ostream& out) {
  const CertificateReport report = chain_positivity_certificate(load_table(o));
  if (o.emit == "-") {
    out << report.to_json();
  } else {
    out << report.trace();
    if (!o.emit.empty()) {
      std::ofstream f(o.emit, std::ios::binary);
      if (!f || !(f << report.to_json())) throw std::ios_base::failure("cannot write " + o.emit);
    }
  }
  // with --emit - stdout stays a pure JSON document, which names the failure itself
  if (!report.passed() && o.emit != "-") out << "first failure: " << report.first_failure() << '\n';
  return report.passed() ? kPass : kVerificationFailure;
}

int cmd_cm_scan(const Options& o, std::ostream& out) {
  const auto model = load_model(o);
  const auto report = cm_scan(parse_function_kind(o.kind), o.k_max, grid_for(o), policy_for(o), *model);
  if (o.format == "json") emit_text(o, report.to_json(), out);
  else if (o.format == "csv") emit_text(o, report.to_csv(), out);
  else emit_text(o, report.to_text(), out);
  return report.passed() ? kPass : kVerificationFailure;
}

int cmd_inequality_scan(const Options& o, std::ostream& out) {
  const auto model = load_model(o);
  const auto report = inequality_scan(grid_for(o), policy_for(o), *model);
  emit_text(o, o.format == "json" ? report.to_json() : report.to_text(), out);
  return report.passed() ? kPass : kVerificationFailure;
}

int cmd_decay_check(const Options& o, std::ostream& out) {
  const auto model = load_model(o);
  const auto report = decay_check(parse_function_kind(o.kind), o.j_max, policy_for(o), o.threshold, *model);
  emit_text(o, o.format == "json" ? report.to_json() : report.to_text(), out);
  return report.passed() ? kPass : kVerificationFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact and ball-arithmetic verification of a polygamma complete-monotonicity bound", "cmcert"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--constants", o.constants_path, "constants file replacing the built-in table")
      ->check(CLI::ExistingFile);
  auto add_prec = [&](CLI::App* sub) {
    sub->add_option_function<long>(
        "--prec", [&](const long& v) { o.prec = v, o.prec_given = true; },
        "target precision in bits (default: $CMCERT_PREC or 128)");
  };
  auto add_format = [&](CLI::App* sub, std::vector<std::string> formats) {
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember(formats));
    sub->add_option("--output,-o", o.output, "write the report to this file");
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--grid", o.grid, "explicit points, e.g. 1,2,5/2,0.25");
    sub->add_option("--geom", o.geom, "geometric grid start,ratio,count");
  };

  auto* eval = app.add_subcommand("eval", "evaluate psi1, psi2, polygamma, p, Q, B, g or H at a rational x");
  eval->add_option("function", o.function, "psi1|psi2|polygamma|p|Q|B|g|H")
      ->required()
      ->check(CLI::IsMember({"psi1", "psi2", "polygamma", "p", "Q", "B", "g", "H"}));
  eval->add_option("x", o.x, "rational point, e.g. 1, 3/2, 0.05")->required();
  eval->add_option("--m", o.m, "polygamma order")->check(CLI::Range(1, kMaxPolygammaOrder));
  add_prec(eval);

  auto* identity = app.add_subcommand("identity-check", "exact and numerical identity checks");
  identity->add_option("which", o.which, "expansion|remark2|telescoping")
      ->required()
      ->check(CLI::IsMember({"expansion", "remark2", "telescoping"}));
  identity->add_option("--x", o.x, "point for the telescoping check");
  add_prec(identity);

  auto* replay = app.add_subcommand("replay-proof", "replay the exact positivity certificate");
  replay->add_option("--emit", o.emit, "write the JSON certificate to a file, or - for stdout");

  auto* scan = app.add_subcommand("cm-scan", "sign scan of (-1)^k f^(k) over a grid");
  scan->add_option("kind", o.kind, "g|H")->required()->check(CLI::IsMember({"g", "G", "h", "H"}));
  scan->add_option("--kmax", o.k_max, "highest derivative order")->check(CLI::Range(0, 12));
  add_grid(scan);
  add_format(scan, {"text", "json", "csv"});
  add_prec(scan);

  auto* ineq = app.add_subcommand("inequality-scan", "psi'(x)^2 + psi''(x) > B(x) over a grid");
  add_grid(ineq);
  add_format(ineq, {"text", "json"});
  add_prec(ineq);

  auto* decay = app.add_subcommand("decay-check", "f(2^j) decreasing and eventually below a threshold");
  decay->add_option("kind", o.kind, "g|H")->required()->check(CLI::IsMember({"g", "G", "h", "H"}));
  decay->add_option("--jmax", o.j_max, "largest exponent j")->check(CLI::Range(0u, kMaxDecayExponent));
  decay->add_option("--threshold", o.threshold, "bound for the final value");
  add_format(decay, {"text", "json"});
  add_prec(decay);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsageError;
  }

  try {
    if (*eval) return cmd_eval(o, out);
    if (*identity) return cmd_identity_check(o, out);
    if (*replay) return cmd_replay_proof(o, out);
    if (*scan) return cmd_cm_scan(o, out);
    if (*ineq) return cmd_inequality_scan(o, out);
    if (*decay) return cmd_decay_check(o, out);
  } catch (const CertificateFailure& e) {
    err << "cmcert: " << e.what() << '\n';
    return kVerificationFailure;
  } catch (const Error& e) {
    err << "cmcert: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::ios_base::failure& e) {
    err << "cmcert: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "cmcert: invalid number: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace cmcert::cli
