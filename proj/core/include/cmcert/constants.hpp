#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cmcert/exppoly.hpp"
#include "cmcert/partial_fraction.hpp"
#include "cmcert/poly.hpp"

namespace cmcert {

/// Labeled exact rationals, in file order.
///
/// Text grammar (one entry per line, '#' starts a comment):
///
///     entry    := label '=' rational
///     label    := ident { '.' ident } { '[' uint ']' }
///     rational := [ '-' ] digits [ '/' digits ]
///
/// Labels are unique. Indexed families encode structured values:
///   name[i]         polynomial coefficient of x^i
///   name[a][m]      partial fraction coefficient of 1/(x+a)^m
///   name[k][j]      exponential polynomial coefficient of t^j e^{kt}
class ConstantTable {
 public:
  struct Entry {
    std::string label;
    BigRational value;
  };

  static ConstantTable parse(std::string_view text);
  static ConstantTable load(const std::filesystem::path& path);
  /// The table compiled into the library.
  static const ConstantTable& builtin();

  const std::vector<Entry>& entries() const { return entries_; }
  bool contains(std::string_view label) const;
  /// Throws ParseError for a missing label.
  const BigRational& get(std::string_view label) const;
  /// Replaces an existing entry (ParseError if absent).
  void set(std::string_view label, const BigRational& value);

  /// Collects name[i] into a polynomial.
  RationalPoly polynomial(std::string_view name) const;
  /// Collects name[a][m] into a partial fraction form.
  PartialFractionForm partial_fractions(std::string_view name) const;
  /// Collects name[k][j] into an exponential polynomial.
  ExpPoly exp_polynomial(std::string_view name) const;
  /// Entries whose label starts with prefix, in file order.
  std::vector<Entry> with_prefix(std::string_view prefix) const;

  /// Canonical "label = value" lines, comments stripped.
  std::string canonical_text() const;
  /// CRC-32 of canonical_text().
  std::uint32_t checksum() const;

 private:
  std::vector<Entry> entries_;
};

std::string_view builtin_constants_text();

/// The inputs of the rational bound and of the H remainder.
struct BoundConstants {
  RationalPoly p;
  RationalPoly q;
  BigRational scale_p;  // B(x) = p(x) / (scale_p x^4 (x+1)^10)
  BigRational scale_q;  // remainder = Q(x) / (scale_q x^2 (x+1)^10 (x+2)^10)
  PartialFractionForm remainder_terms;

  static BoundConstants from_table(const ConstantTable& table);
};

}  // namespace cmcert
