#pragma once

#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "primeset/codebook.hpp"
#include "primeset/error.hpp"
#include "primeset/multiset.hpp"

namespace primeset {

/// How unknown symbols in multiset text are handled.
enum class InternMode {
  first_use,     // new symbols get primes in order of first appearance
  sorted,        // new symbols get primes in lexicographic order
  require_known  // unknown symbols are an error
};

namespace detail {

inline std::vector<std::pair<std::string, Multiplicity>> parse_multiset_lines(
    std::string_view text, Multiplicity limit) {
  std::vector<std::pair<std::string, Multiplicity>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string symbol, count, extra;
    if (!(fields >> symbol)) continue;
    if (!(fields >> count) || (fields >> extra)) {
      throw ParseError(line_no, "expected '<symbol> <multiplicity>'");
    }
    if (count.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError(line_no, "malformed multiplicity '" + count + "'");
    }
    Multiplicity k = 0;
    try {
      k = std::stoull(count);
    } catch (const std::exception&) {
      throw ParseError(line_no, "multiplicity '" + count + "' out of range");
    }
    if (k == 0) throw ParseError(line_no, "multiplicity must be at least 1");
    if (k > limit) {
      throw Error(ErrorKind::resource_limit,
                  "line " + std::to_string(line_no) + ": multiplicity " +
                      count + " exceeds limit " + std::to_string(limit));
    }
    rows.emplace_back(std::move(symbol), k);
  }
  return rows;
}

}  // namespace detail

/// Reads the `<symbol> <multiplicity>` text format. Duplicate symbols sum.
inline Multiset parse_multiset(std::string_view text, PrimeCodebook& cb,
                               InternMode mode = InternMode::first_use,
                               Multiplicity limit = kDefaultMultiplicityLimit) {
  auto rows = detail::parse_multiset_lines(text, limit);
  if (mode == InternMode::sorted) {
    std::vector<std::string> symbols;
    for (const auto& row : rows) symbols.push_back(row.first);
    cb.intern_sorted(std::move(symbols));
  }
  Multiset result;
  for (const auto& [symbol, k] : rows) {
    ElementId id;
    if (mode == InternMode::require_known) {
      auto found = cb.find(symbol);
      if (!found) {
        throw Error(ErrorKind::unknown_symbol,
                    "symbol '" + symbol + "' is not in the codebook");
      }
      id = *found;
    } else {
      id = cb.intern(symbol);
    }
    result.add(id, k, limit);
  }
  return result;
}

/// Writes one line per element, in beta order.
inline std::string format_multiset(const Multiset& x, const PrimeCodebook& cb) {
  std::string out;
  for (const auto& [id, k] : x) {
    out += cb.symbol(id);
    out += ' ';
    out += std::to_string(k);
    out += '\n';
  }
  return out;
}

/// Single-line rendering for diagnostics, e.g. `{a:2, b:1}`.
inline std::string format_inline(const Multiset& x, const PrimeCodebook& cb) {
  std::string out = "{";
  for (const auto& [id, k] : x) {
    if (out.size() > 1) out += ", ";
    out += cb.symbol(id) + ":" + std::to_string(k);
  }
  return out + "}";
}

}  // namespace primeset
