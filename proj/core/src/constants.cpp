#include "cmcert/constants.hpp"

#include <boost/crc.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "cmcert/errors.hpp"

namespace cmcert {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_label(std::string_view label) {
  std::size_t i = 0;
  auto ident = [&]() {
    const std::size_t start = i;
    if (i >= label.size() || !(std::isalpha(static_cast<unsigned char>(label[i])) || label[i] == '_')) return false;
    while (i < label.size() && (std::isalnum(static_cast<unsigned char>(label[i])) || label[i] == '_')) ++i;
    return i > start;
  };
  if (!ident()) return false;
  while (i < label.size() && label[i] == '.') {
    ++i;
    if (!ident()) return false;
  }
  while (i < label.size() && label[i] == '[') {
    const std::size_t start = ++i;
    while (i < label.size() && std::isdigit(static_cast<unsigned char>(label[i]))) ++i;
    if (i == start || i >= label.size() || label[i] != ']') return false;
    ++i;
  }
  return i == label.size();
}

// name[a][b]... -> indices when the base name matches exactly.
bool split_indices(std::string_view label, std::string_view name, std::vector<unsigned>& out) {
  if (label.size() <= name.size() || label.substr(0, name.size()) != name || label[name.size()] != '[') {
    return false;
  }
  out.clear();
  std::size_t i = name.size();
  while (i < label.size()) {
    const std::size_t close = label.find(']', i);
    out.push_back(static_cast<unsigned>(std::stoul(std::string(label.substr(i + 1, close - i - 1)))));
    i = close + 1;
  }
  return true;
}

}  // namespace

ConstantTable ConstantTable::parse(std::string_view text) {
  ConstantTable table;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos) throw ParseError(where + "expected 'label = value'");
    const std::string_view label = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!valid_label(label)) throw ParseError(where + "invalid label '" + std::string(label) + "'");
    if (value.find('.') != std::string_view::npos) throw ParseError(where + "decimal values are not exact rationals");
    if (table.contains(label)) throw ParseError(where + "duplicate label '" + std::string(label) + "'");
    try {
      table.entries_.push_back({std::string(label), parse_rational(value)});
    } catch (const Error& e) {
      throw ParseError(where + e.what());
    }
  }
  return table;
}

ConstantTable ConstantTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open constants file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const ConstantTable& ConstantTable::builtin() {
  static const ConstantTable table = parse(builtin_constants_text());
  return table;
}

bool ConstantTable::contains(std::string_view label) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.label == label; });
}

const BigRational& ConstantTable::get(std::string_view label) const {
  for (const auto& e : entries_) {
    if (e.label == label) return e.value;
  }
  throw ParseError("missing constant '" + std::string(label) + "'");
}

void ConstantTable::set(std::string_view label, const BigRational& value) {
  for (auto& e : entries_) {
    if (e.label == label) {
      e.value = value;
      return;
    }
  }
  throw ParseError("missing constant '" + std::string(label) + "'");
}

RationalPoly ConstantTable::polynomial(std::string_view name) const {
  std::vector<BigRational> coeffs;
  std::vector<unsigned> idx;
  bool any = false;
  for (const auto& e : entries_) {
    if (!split_indices(e.label, name, idx)) continue;
    if (idx.size() != 1) throw ParseError("'" + e.label + "' is not a polynomial coefficient");
    if (idx[0] >= coeffs.size()) coeffs.resize(idx[0] + 1);
    coeffs[idx[0]] = e.value;
    any = true;
  }
  if (!any) throw ParseError("missing polynomial '" + std::string(name) + "'");
  return RationalPoly(std::move(coeffs));
}

PartialFractionForm ConstantTable::partial_fractions(std::string_view name) const {
  std::vector<PartialFractionTerm> terms;
  std::vector<unsigned> idx;
  for (const auto& e : entries_) {
    if (!split_indices(e.label, name, idx)) continue;
    if (idx.size() != 2 || idx[1] == 0) throw ParseError("'" + e.label + "' is not a partial fraction term");
    terms.push_back({e.value, idx[0], idx[1]});
  }
  if (terms.empty()) throw ParseError("missing partial fractions '" + std::string(name) + "'");
  return PartialFractionForm(RationalPoly{}, std::move(terms));
}

ExpPoly ConstantTable::exp_polynomial(std::string_view name) const {
  std::map<unsigned, std::vector<BigRational>> blocks;
  std::vector<unsigned> idx;
  for (const auto& e : entries_) {
    if (!split_indices(e.label, name, idx)) continue;
    if (idx.size() != 2) throw ParseError("'" + e.label + "' is not an exponential polynomial coefficient");
    auto& v = blocks[idx[0]];
    if (idx[1] >= v.size()) v.resize(idx[1] + 1);
    v[idx[1]] = e.value;
  }
  if (blocks.empty()) throw ParseError("missing exponential polynomial '" + std::string(name) + "'");
  ExpPoly::Blocks out;
  for (auto& [k, v] : blocks) out.emplace(k, RationalPoly(std::move(v)));
  return ExpPoly(std::move(out));
}

std::vector<ConstantTable::Entry> ConstantTable::with_prefix(std::string_view prefix) const {
  std::vector<Entry> out;
  for (const auto& e : entries_) {
    if (e.label.starts_with(prefix)) out.push_back(e);
  }
  return out;
}

std::string ConstantTable::canonical_text() const {
  std::string out;
  for (const auto& e : entries_) {
    out += e.label;
    out += " = ";
    out += to_string(e.value);
    out += '\n';
  }
  return out;
}

std::uint32_t ConstantTable::checksum() const {
  const std::string text = canonical_text();
  boost::crc_32_type crc;
  crc.process_bytes(text.data(), text.size());
  return crc.checksum();
}

BoundConstants BoundConstants::from_table(const ConstantTable& table) {
  return BoundConstants{
      table.polynomial("p"),
      table.polynomial("q"),
      table.get("scale_p"),
      table.get("scale_q"),
      table.partial_fractions("remainder"),
  };
}

}  // namespace cmcert
