#include "cmcert/cm_verifier.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>

#include "cmcert/errors.hpp"

namespace cmcert {

const char* to_string(FunctionKind kind) { return kind == FunctionKind::G ? "g" : "H"; }

FunctionKind parse_function_kind(std::string_view s) {
  if (s == "g" || s == "G") return FunctionKind::G;
  if (s == "h" || s == "H") return FunctionKind::H;
  throw ParseError("unknown function '" + std::string(s) + "' (expected g or H)");
}

GridSpec::GridSpec(std::vector<BigRational> points, std::string description)
    : points_(std::move(points)), description_(std::move(description)) {
  if (points_.empty()) throw DomainError("grid is empty");
  for (const auto& p : points_) {
    if (sgn(p) <= 0) throw DomainError("grid point " + to_string(p) + " is not positive");
  }
  std::sort(points_.begin(), points_.end());
  points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
}

GridSpec GridSpec::explicit_points(std::vector<BigRational> points) {
  std::ostringstream os;
  for (std::size_t i = 0; i < points.size(); ++i) os << (i ? "," : "") << to_string(points[i]);
  return GridSpec(std::move(points), "points " + os.str());
}

GridSpec GridSpec::geometric(const BigRational& start, const BigRational& ratio, unsigned count) {
  if (count == 0) throw DomainError("geometric grid needs count >= 1");
  if (sgn(ratio) <= 0) throw DomainError("geometric grid needs a positive ratio");
  std::vector<BigRational> pts;
  BigRational x = start;
  for (unsigned i = 0; i < count; ++i, x *= ratio) pts.push_back(x);
  return GridSpec(std::move(pts), "geometric " + to_string(start) + " * " + to_string(ratio) + "^i, i < " +
                                      std::to_string(count));
}

GridSpec GridSpec::log_spaced(const BigRational& lo, const BigRational& hi, unsigned count, unsigned resolution_bits) {
  if (count < 2) throw DomainError("log-spaced grid needs count >= 2");
  if (sgn(lo) <= 0 || hi <= lo) throw DomainError("log-spaced grid needs 0 < lo < hi");
  if (lo < pow2(-static_cast<long>(resolution_bits))) throw DomainError("grid resolution is coarser than lo");
  constexpr mpfr_prec_t prec = 128;
  BigFloat llo(prec), lhi(prec), t(prec), v(prec);
  mpfr_set_q(llo.get(), lo.get_mpq_t(), MPFR_RNDN);
  mpfr_set_q(lhi.get(), hi.get_mpq_t(), MPFR_RNDN);
  mpfr_log2(llo.get(), llo.get(), MPFR_RNDN);
  mpfr_log2(lhi.get(), lhi.get(), MPFR_RNDN);
  std::vector<BigRational> pts{lo};
  const BigRational unit = pow2(-static_cast<long>(resolution_bits));
  for (unsigned i = 1; i + 1 < count; ++i) {
    // 2^(llo + (lhi - llo) i / (count - 1) + resolution_bits), rounded to an integer
    mpfr_sub(t.get(), lhi.get(), llo.get(), MPFR_RNDN);
    mpfr_mul_ui(t.get(), t.get(), i, MPFR_RNDN);
    mpfr_div_ui(t.get(), t.get(), count - 1, MPFR_RNDN);
    mpfr_add(t.get(), t.get(), llo.get(), MPFR_RNDN);
    mpfr_add_ui(t.get(), t.get(), resolution_bits, MPFR_RNDN);
    mpfr_ui_pow(v.get(), 2, t.get(), MPFR_RNDN);
    mpfr_rint(v.get(), v.get(), MPFR_RNDN);
    BigInt n;
    mpfr_get_z(n.get_mpz_t(), v.get(), MPFR_RNDN);
    pts.push_back(BigRational(n) * unit);
  }
  pts.push_back(hi);
  return GridSpec(std::move(pts), "log-spaced " + to_string(lo) + " .. " + to_string(hi) + ", " +
                                      std::to_string(count) + " points, 2^-" + std::to_string(resolution_bits) +
                                      " resolution");
}

GridSpec GridSpec::default_grid() { return log_spaced(BigRational(1, 16), BigRational(64), 25); }

GridSpec GridSpec::parse_list(std::string_view list) {
  std::vector<BigRational> pts;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = std::min(list.find(',', start), list.size());
    std::string_view item = list.substr(start, comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty()) throw ParseError("empty grid point in '" + std::string(list) + "'");
    pts.push_back(parse_rational(item));
    start = comma + 1;
  }
  return explicit_points(std::move(pts));
}

GridSpec GridSpec::merged(const GridSpec& other) const {
  std::vector<BigRational> pts = points_;
  pts.insert(pts.end(), other.points_.begin(), other.points_.end());
  return GridSpec(std::move(pts), description_ + " + " + other.description_);
}

CmScanSummary summarize(const std::vector<CmScanEntry>& entries, unsigned k_max) {
  CmScanSummary s;
  std::vector<bool> clean(k_max + 1, true);
  for (const auto& e : entries) {
    switch (e.verdict) {
      case Sign::Positive: ++s.positive; break;
      case Sign::Negative: ++s.failures; break;
      case Sign::Indeterminate: ++s.indeterminate; break;
    }
    if (e.verdict != Sign::Positive && e.k <= k_max) clean[e.k] = false;
  }
  for (unsigned k = 0; k <= k_max && clean[k]; ++k) s.max_k_verified = static_cast<int>(k);
  if (entries.empty()) s.max_k_verified = -1;
  return s;
}

namespace {

std::vector<Ball> derivatives(FunctionKind kind, unsigned k_max, const BigRational& x, const PrecisionPolicy& policy,
                              const BoundModel& model) {
  auto values = kind == FunctionKind::G ? model.g_derivatives(k_max, x, policy) : model.h_derivatives(k_max, x, policy);
  for (unsigned k = 1; k <= k_max; k += 2) values[k] = -values[k];
  return values;
}

// Evaluates one grid column (all k at a fixed x) up the escalation ladder.
std::vector<CmScanEntry> scan_column(FunctionKind kind, unsigned k_max, const BigRational& x,
                                     const PrecisionPolicy& policy, const BoundModel& model, unsigned escalations) {
  std::vector<CmScanEntry> column;
  PrecisionPolicy p = policy;
  auto values = derivatives(kind, k_max, x, p, model);
  for (unsigned k = 0; k <= k_max; ++k) {
    column.push_back({k, x, values[k], values[k].sign(), p.target_bits});
  }
  for (unsigned rung = 0; rung < escalations && p.target_bits < p.max_bits; ++rung) {
    const bool undecided = std::any_of(column.begin(), column.end(),
                                       [](const CmScanEntry& e) { return e.verdict == Sign::Indeterminate; });
    if (!undecided) break;
    p = p.escalated();
    values = derivatives(kind, k_max, x, p, model);
    for (auto& e : column) {
      if (e.verdict != Sign::Indeterminate) continue;
      e.value = values[e.k];
      e.verdict = e.value.sign();
      e.precision_used = p.target_bits;
    }
  }
  return column;
}

template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace

CmScanReport cm_scan(FunctionKind kind, unsigned k_max, const GridSpec& grid, const PrecisionPolicy& policy,
                     const BoundModel& model, const ScanOptions& options) {
  policy.validate();
  if (k_max > model.max_derivative_order()) {
    throw DomainError("k_max " + std::to_string(k_max) + " exceeds the supported order " +
                      std::to_string(model.max_derivative_order()));
  }
  if (grid.size() == 0) throw DomainError("grid is empty");
  const auto& xs = grid.points();
  std::vector<std::vector<CmScanEntry>> columns(xs.size());
  parallel_for(xs.size(), options.threads, [&](std::size_t i) {
    columns[i] = scan_column(kind, k_max, xs[i], policy, model, options.escalations);
  });

  CmScanReport report;
  report.kind = kind;
  report.k_max = k_max;
  report.grid = grid.description();
  report.target_bits = policy.target_bits;
  for (auto& column : columns) {
    for (auto& e : column) report.entries.push_back(std::move(e));
  }
  std::stable_sort(report.entries.begin(), report.entries.end(), [](const CmScanEntry& a, const CmScanEntry& b) {
    return a.k != b.k ? a.k < b.k : a.x < b.x;
  });
  report.summary = summarize(report.entries, k_max);
  return report;
}

std::string CmScanReport::to_text() const {
  std::ostringstream os;
  os << "cm-scan " << to_string(kind) << ", k <= " << k_max << ", " << grid << ", target " << target_bits
     << " bits\n";
  for (const auto& e : entries) {
    os << "k=" << e.k << " x=" << to_string(e.x) << "  (-1)^k f^(k) = " << e.value.to_string(12) << "  "
       << cmcert::to_string(e.verdict) << " @" << e.precision_used << '\n';
  }
  os << "summary: " << summary.positive << " positive, " << summary.indeterminate << " indeterminate, "
     << summary.failures << " negative; max k verified " << summary.max_k_verified << '\n';
  return os.str();
}

InequalityReport inequality_scan(const GridSpec& grid, const PrecisionPolicy& policy, const BoundModel& model,
                                 const ScanOptions& options) {
  const CmScanReport scan = cm_scan(FunctionKind::G, 0, grid, policy, model, options);
  InequalityReport report;
  report.grid = scan.grid;
  for (const auto& e : scan.entries) {
    InequalityEntry entry{e.x, e.value, e.verdict, e.precision_used, e.value.lower().to_double()};
    switch (e.verdict) {
      case Sign::Positive: ++report.strict; break;
      case Sign::Negative: ++report.failures; break;
      case Sign::Indeterminate: ++report.indeterminate; break;
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

std::string InequalityReport::to_text() const {
  std::ostringstream os;
  os << "inequality psi'(x)^2 + psi''(x) > B(x) on " << grid << '\n';
  for (const auto& e : entries) {
    os << "x=" << to_string(e.x) << "  margin = " << e.value.to_string(12) << "  "
       << (e.verdict == Sign::Positive ? "strict" : cmcert::to_string(e.verdict)) << " @" << e.precision_used
       << '\n';
  }
  os << "summary: " << strict << " strict, " << indeterminate << " indeterminate, " << failures << " failed\n";
  return os.str();
}

DecayReport decay_check(FunctionKind kind, unsigned j_max, const PrecisionPolicy& policy, double threshold,
                        const BoundModel& model) {
  if (j_max > kMaxDecayExponent) {
    throw DomainError("j_max " + std::to_string(j_max) + " exceeds " + std::to_string(kMaxDecayExponent));
  }
  DecayReport report;
  report.kind = kind;
  report.j_max = j_max;
  report.threshold = threshold;
  report.decreasing = true;
  for (unsigned j = 0; j <= j_max; ++j) {
    const BigRational x = pow2(j);
    try {
      report.entries.push_back({x, kind == FunctionKind::G ? model.g(x, policy) : model.h(x, policy)});
    } catch (const Error& e) {
      report.decreasing = false;
      report.note = "evaluation at x = " + to_string(x) + " failed: " + e.what();
      return report;
    }
  }
  for (std::size_t i = 1; i < report.entries.size(); ++i) {
    const Ball& prev = report.entries[i - 1].value;
    const Ball& cur = report.entries[i].value;
    if (mpfr_less_p(cur.upper().get(), prev.lower().get()) == 0) {
      report.decreasing = false;
      report.note = "f(" + to_string(report.entries[i].x) + ") is not certifiably below f(" +
                    to_string(report.entries[i - 1].x) + ")";
      break;
    }
  }
  const Ball& last = report.entries.back().value;
  report.below_threshold = mpfr_cmp_d(last.upper().get(), threshold) < 0;
  if (!report.below_threshold && report.note.empty()) {
    report.note = "f(" + to_string(report.entries.back().x) + ") = " + last.to_string(12) + " is not below " +
                  std::to_string(threshold);
  }
  return report;
}

std::string DecayReport::to_text() const {
  std::ostringstream os;
  os << "decay of " << to_string(kind) << " at x = 2^j, j <= " << j_max << '\n';
  for (const auto& e : entries) os << "x=" << to_string(e.x) << "  " << e.value.to_string(12) << '\n';
  os << "decreasing: " << (decreasing ? "yes" : "no") << "; final below " << threshold << ": "
     << (below_threshold ? "yes" : "no") << '\n';
  if (!note.empty()) os << "note: " << note << '\n';
  return os.str();
}

}  // namespace cmcert
