#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "primeset/error.hpp"
#include "primeset/multiset.hpp"
#include "primeset/prime_sieve.hpp"

namespace primeset {

inline constexpr std::string_view kCodebookMagic = "primeset-codebook";
inline constexpr int kCodebookVersion = 1;

/// Result of inverting beta on an arbitrary integer.
struct BetaInverse {
  enum class Status { assigned, prime_unassigned, not_prime };

  Status status;
  ElementId id{};

  bool assigned() const noexcept { return status == Status::assigned; }
};

/// Symbols must survive the whitespace-delimited, '#'-commented text formats.
inline bool is_valid_symbol(std::string_view symbol) {
  if (symbol.empty()) return false;
  return std::none_of(symbol.begin(), symbol.end(), [](unsigned char c) {
    return c == '#' || c == ' ' || c == '\t' || c == '\n' || c == '\r' ||
           c == '\v' || c == '\f' || c == 0;
  });
}

/// The bijection beta between interned symbols and primes. The symbol with
/// id i maps to the (i+1)-th prime, so assignment is append-only.
///
/// Lookups take a shared lock; interning takes an exclusive one. Copies are
/// independent snapshots.
class PrimeCodebook {
 public:
  PrimeCodebook() = default;

  PrimeCodebook(const PrimeCodebook& other) {
    std::shared_lock lock(other.mutex_);
    symbols_ = other.symbols_;
    index_ = other.index_;
    primes_ = other.primes_;
  }

  PrimeCodebook& operator=(const PrimeCodebook& other) {
    if (this != &other) {
      PrimeCodebook copy(other);
      std::unique_lock lock(mutex_);
      symbols_ = std::move(copy.symbols_);
      index_ = std::move(copy.index_);
      primes_ = std::move(copy.primes_);
    }
    return *this;
  }

  PrimeCodebook(PrimeCodebook&& other) noexcept
      : symbols_(std::move(other.symbols_)),
        index_(std::move(other.index_)),
        primes_(std::move(other.primes_)) {}

  PrimeCodebook& operator=(PrimeCodebook&& other) noexcept {
    symbols_ = std::move(other.symbols_);
    index_ = std::move(other.index_);
    primes_ = std::move(other.primes_);
    return *this;
  }

  /// Immutable copy for parallel bulk encoding.
  PrimeCodebook snapshot() const { return *this; }

  /// Returns the id of symbol, assigning the next unused prime on first use.
  ElementId intern(std::string_view symbol) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = index_.find(std::string(symbol)); it != index_.end()) {
        return ElementId{it->second};
      }
    }
    std::unique_lock lock(mutex_);
    return intern_locked(symbol);
  }

  /// Interns the not-yet-known symbols of a batch in sorted order, so the
  /// resulting assignment does not depend on input order.
  void intern_sorted(std::vector<std::string> symbols) {
    std::sort(symbols.begin(), symbols.end());
    symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());
    std::unique_lock lock(mutex_);
    for (const auto& s : symbols) intern_locked(s);
  }

  std::optional<ElementId> find(std::string_view symbol) const {
    std::shared_lock lock(mutex_);
    auto it = index_.find(std::string(symbol));
    if (it == index_.end()) return std::nullopt;
    return ElementId{it->second};
  }

  std::uint64_t beta(ElementId x) const {
    std::shared_lock lock(mutex_);
    check_id(x);
    return primes_[x.index];
  }

  BetaInverse beta_inverse(std::uint64_t p) const {
    std::shared_lock lock(mutex_);
    auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
    if (it != primes_.end() && *it == p) {
      return {BetaInverse::Status::assigned,
              ElementId{static_cast<std::uint32_t>(it - primes_.begin())}};
    }
    return {is_prime(p) ? BetaInverse::Status::prime_unassigned
                        : BetaInverse::Status::not_prime,
            ElementId{}};
  }

  std::string symbol(ElementId x) const {
    std::shared_lock lock(mutex_);
    check_id(x);
    return symbols_[x.index];
  }

  bool contains(ElementId x) const {
    std::shared_lock lock(mutex_);
    return x.index < primes_.size();
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return primes_.size();
  }

  /// Largest assigned prime, or 1 for an empty codebook.
  std::uint64_t max_prime() const {
    std::shared_lock lock(mutex_);
    return primes_.empty() ? 1 : primes_.back();
  }

  /// Assigned primes in id order.
  std::vector<std::uint64_t> primes() const {
    std::shared_lock lock(mutex_);
    return primes_;
  }

  std::string serialize() const {
    std::shared_lock lock(mutex_);
    std::ostringstream out;
    out << kCodebookMagic << " v" << kCodebookVersion << '\n';
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      out << symbols_[i] << ' ' << primes_[i] << '\n';
    }
    return out.str();
  }

  /// Parses the text form. Nothing is returned on error.
  static PrimeCodebook parse(std::string_view text) {
    PrimeCodebook cb;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!header_seen) {
        parse_header(line, line_no);
        header_seen = true;
        continue;
      }
      std::istringstream fields(line);
      std::string symbol;
      if (!(fields >> symbol) || symbol.front() == '#') continue;
      std::string prime_text, extra;
      if (!(fields >> prime_text) || (fields >> extra && extra.front() != '#')) {
        throw ParseError(line_no, "expected '<symbol> <prime>'");
      }
      std::uint64_t prime = 0;
      try {
        std::size_t used = 0;
        prime = std::stoull(prime_text, &used);
        if (used != prime_text.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw ParseError(line_no, "malformed prime '" + prime_text + "'");
      }
      if (cb.index_.count(symbol)) {
        throw ParseError(line_no, "duplicate symbol '" + symbol + "'");
      }
      std::uint64_t expected = nth_prime(cb.primes_.size());
      if (prime != expected) {
        throw ParseError(line_no, "symbol '" + symbol + "' maps to " +
                                      prime_text + ", expected prime " +
                                      std::to_string(expected));
      }
      if (!is_valid_symbol(symbol)) {
        throw ParseError(line_no, "invalid symbol '" + symbol + "'");
      }
      cb.index_.emplace(symbol, static_cast<std::uint32_t>(cb.symbols_.size()));
      cb.symbols_.push_back(symbol);
      cb.primes_.push_back(prime);
    }
    if (!header_seen) throw ParseError(1, "missing codebook header");
    return cb;
  }

  void save(const std::filesystem::path& path) const {
    const std::string text = serialize();
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error(ErrorKind::io, "cannot write " + tmp.string());
      out << text;
      if (!out.flush()) throw Error(ErrorKind::io, "cannot write " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorKind::io, "cannot replace " + path.string());
  }

  static PrimeCodebook load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
  }

 private:
  static void parse_header(const std::string& line, std::size_t line_no) {
    std::istringstream fields(line);
    std::string magic, version;
    fields >> magic >> version;
    if (magic != kCodebookMagic || version.size() < 2 || version[0] != 'v') {
      throw ParseError(line_no, "missing codebook header");
    }
    if (version != "v" + std::to_string(kCodebookVersion)) {
      throw Error(ErrorKind::version_mismatch,
                  "codebook version " + version.substr(1) +
                      " is not supported (expected " +
                      std::to_string(kCodebookVersion) + ")");
    }
  }

  void check_id(ElementId x) const {
    if (x.index >= primes_.size()) {
      throw Error(ErrorKind::unknown_symbol,
                  "element id " + std::to_string(x.index) +
                      " is not assigned in this codebook");
    }
  }

  ElementId intern_locked(std::string_view symbol) {
    std::string key(symbol);
    if (auto it = index_.find(key); it != index_.end()) {
      return ElementId{it->second};
    }
    if (!is_valid_symbol(symbol)) {
      throw Error(ErrorKind::invalid_argument,
                  "invalid symbol '" + key + "'");
    }
    const auto id = static_cast<std::uint32_t>(primes_.size());
    primes_.push_back(nth_prime(id));
    symbols_.push_back(key);
    index_.emplace(std::move(key), id);
    return ElementId{id};
  }

  std::vector<std::string> symbols_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::uint64_t> primes_;
  mutable std::shared_mutex mutex_;
};

}  // namespace primeset
