#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmcert/ball.hpp"
#include "cmcert/bound_functions.hpp"
#include "cmcert/polygamma.hpp"

namespace cmcert {

enum class FunctionKind { G, H };

/// "g" or "H".
const char* to_string(FunctionKind kind);
/// Accepts "g", "G", "h", "H"; throws ParseError otherwise.
FunctionKind parse_function_kind(std::string_view s);

/// Finite set of positive rational sample points, sorted and deduplicated.
class GridSpec {
 public:
  GridSpec() = default;

  /// Throws DomainError for an empty list or a point <= 0.
  static GridSpec explicit_points(std::vector<BigRational> points);
  /// start, start*ratio, ..., start*ratio^(count-1) with exact rationals.
  static GridSpec geometric(const BigRational& start, const BigRational& ratio, unsigned count);
  /// count points log-uniformly spaced from lo to hi, each rounded to the
  /// nearest multiple of 2^-resolution_bits (endpoints kept exact).
  static GridSpec log_spaced(const BigRational& lo, const BigRational& hi, unsigned count,
                             unsigned resolution_bits = 20);
  /// 25 log-spaced points from 1/16 to 64.
  static GridSpec default_grid();
  /// Parses "1,2,5/2,0.25" into explicit points.
  static GridSpec parse_list(std::string_view list);

  /// Union of two grids.
  GridSpec merged(const GridSpec& other) const;

  const std::vector<BigRational>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const std::string& description() const { return description_; }

 private:
  GridSpec(std::vector<BigRational> points, std::string description);

  std::vector<BigRational> points_;
  std::string description_;
};

/// One cell of a scan: the sign of (-1)^k f^(k)(x).
struct CmScanEntry {
  unsigned k = 0;
  BigRational x;
  Ball value;  // enclosure of (-1)^k f^(k)(x)
  Sign verdict = Sign::Indeterminate;
  long precision_used = 0;  // target bits at which the verdict was reached
};

struct CmScanSummary {
  /// Largest K with every cell k <= K positive; -1 if none.
  int max_k_verified = -1;
  std::size_t positive = 0;
  std::size_t indeterminate = 0;
  std::size_t failures = 0;  // negative verdicts
};

struct CmScanReport {
  FunctionKind kind = FunctionKind::G;
  unsigned k_max = 0;
  std::string grid;
  long target_bits = 0;
  std::vector<CmScanEntry> entries;  // sorted by (k, x)
  CmScanSummary summary;

  /// No negative verdict. Indeterminate cells do not fail the scan.
  bool passed() const { return summary.failures == 0; }
  /// Every cell positive.
  bool all_positive() const { return summary.positive == entries.size(); }

  std::string to_text() const;
  std::string to_json() const;
  static CmScanReport from_json(std::string_view json);
  /// Columns k,x,mid,rad,verdict.
  std::string to_csv() const;
};

/// Recomputes the summary from the entries.
CmScanSummary summarize(const std::vector<CmScanEntry>& entries, unsigned k_max);

struct ScanOptions {
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
  /// Rungs of the escalation ladder after the first attempt (target, 2x, 4x).
  unsigned escalations = 2;
};

/// Signs of (-1)^k f^(k)(x) for k <= k_max over the grid. An undecided cell
/// is retried at 2x and 4x the target (capped at policy.max_bits) and
/// reported indeterminate if it still straddles zero. Throws DomainError for
/// k_max above the model's supported order.
CmScanReport cm_scan(FunctionKind kind, unsigned k_max, const GridSpec& grid, const PrecisionPolicy& policy,
                     const BoundModel& model = BoundModel::reference(), const ScanOptions& options = {});

struct InequalityEntry {
  BigRational x;
  Ball value;  // psi'(x)^2 + psi''(x) - B(x)
  Sign verdict = Sign::Indeterminate;
  long precision_used = 0;
  /// Certified lower bound of the margin (value.lower()) as a double.
  double margin_lower = 0;
};

struct InequalityReport {
  std::string grid;
  std::vector<InequalityEntry> entries;
  std::size_t strict = 0;
  std::size_t failures = 0;
  std::size_t indeterminate = 0;

  bool passed() const { return failures == 0 && indeterminate == 0; }
  std::string to_text() const;
  std::string to_json() const;
};

/// psi'(x)^2 + psi''(x) > B(x) at each grid point, with the same escalation
/// ladder as cm_scan (so both agree verdict for verdict).
InequalityReport inequality_scan(const GridSpec& grid, const PrecisionPolicy& policy,
                                 const BoundModel& model = BoundModel::reference(), const ScanOptions& options = {});

struct DecayEntry {
  BigRational x;
  Ball value;
};

struct DecayReport {
  FunctionKind kind = FunctionKind::G;
  unsigned j_max = 0;
  double threshold = 1e-6;
  std::vector<DecayEntry> entries;  // x = 1, 2, 4, ..., 2^j_max
  bool decreasing = false;          // certified strictly decreasing
  bool below_threshold = false;     // certified final value < threshold
  std::string note;                 // first problem, if any

  bool passed() const { return decreasing && below_threshold; }
  std::string to_text() const;
  std::string to_json() const;
};

constexpr unsigned kMaxDecayExponent = 16;

/// f at x = 2^j, j = 0..j_max. Failures are reported, not thrown; only
/// j_max > 16 raises DomainError.
DecayReport decay_check(FunctionKind kind, unsigned j_max, const PrecisionPolicy& policy, double threshold = 1e-6,
                        const BoundModel& model = BoundModel::reference());

}  // namespace cmcert
