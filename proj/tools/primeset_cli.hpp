#pragma once

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "primeset/primeset.hpp"

namespace primeset::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kParseFailure = 2,
  kUnknownSymbol = 3,
  kUnknownFactor = 4,
  kResourceCap = 5,
  kPrecisionEscalation = 6,
};

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse: return kParseFailure;
    case ErrorKind::unknown_symbol: return kUnknownSymbol;
    case ErrorKind::unknown_factor: return kUnknownFactor;
    case ErrorKind::resource_limit: return kResourceCap;
    case ErrorKind::precision_escalation: return kPrecisionEscalation;
    default: return kFailure;
  }
}

struct CliConfig {
  mpfr_prec_t precision_bits = kDefaultPrecision;
  std::string eps = "sqrt2";
  std::string codebook_path;
  std::size_t bit_cap = kDefaultBitCap;
  bool machine = false;
};

namespace detail {

inline std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Codebook loaded from --codebook (created when absent) or held in memory.
class CodebookFile {
 public:
  explicit CodebookFile(const std::string& path) : path_(path) {
    if (!path_.empty() && std::filesystem::exists(path_)) {
      cb_ = PrimeCodebook::load(path_);
      existed_ = true;
    }
    initial_size_ = cb_.size();
  }

  PrimeCodebook& get() { return cb_; }

  bool on_disk() const { return existed_; }

  /// Writes back when the file is new or the codebook grew.
  void persist() {
    if (path_.empty()) return;
    if (!existed_ || cb_.size() != initial_size_) cb_.save(path_);
  }

 private:
  std::string path_;
  PrimeCodebook cb_;
  bool existed_ = false;
  std::size_t initial_size_ = 0;
};

/// Printer for the two output modes.
class Report {
 public:
  Report(std::ostream& out, bool machine) : out_(out), machine_(machine) {}

  void field(const std::string& key, const std::string& human_key,
             const std::string& value) {
    if (machine_) {
      out_ << key << '=' << value << '\n';
    } else {
      out_ << human_key << ": " << value << '\n';
    }
  }

  void real(const std::string& key, const RealCode& r) {
    if (machine_) {
      out_ << key << '=' << r.value.to_string() << '\n'
           << key << "_radius=" << r.radius.to_string_up() << '\n'
           << key << "_precision=" << r.precision() << '\n';
    } else {
      out_ << key << ": " << r.value.to_string() << " ± "
           << r.radius.to_string_up() << " (" << r.precision() << " bits)\n";
    }
  }

 private:
  std::ostream& out_;
  bool machine_;
};

inline const char* yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace detail

inline int cmd_encode(const CliConfig& cfg, const std::string& file,
                      InternMode mode, std::ostream& out) {
  detail::CodebookFile book(cfg.codebook_path);
  Multiset x = parse_multiset(detail::read_text(file), book.get(), mode);
  ExactCode code = encode_exact(book.get(), x, cfg.bit_cap);
  RealCode real = aggregate(book.get(), x, cfg.precision_bits);
  book.persist();

  detail::Report report(out, cfg.machine);
  report.field("exact", "exact", code.to_hex());
  if (cfg.machine) {
    report.field("real", "real", real.value.to_string());
    report.field("radius", "radius", real.radius.to_string_up());
    report.field("precision", "precision", std::to_string(real.precision()));
  } else {
    report.real("real", real);
  }
  return kOk;
}

inline int cmd_decode(const CliConfig& cfg, const std::string& hex,
                      std::ostream& out) {
  if (cfg.codebook_path.empty() ||
      !std::filesystem::exists(cfg.codebook_path)) {
    throw Error(ErrorKind::io, "decode needs an existing --codebook file");
  }
  PrimeCodebook cb = PrimeCodebook::load(cfg.codebook_path);
  Multiset x = decode_exact(cb, ExactCode::from_hex(hex));
  out << format_multiset(x, cb);
  return kOk;
}

inline int cmd_encode_pair(const CliConfig& cfg, const std::string& file,
                           const std::string& center, bool sorted,
                           std::ostream& out) {
  detail::CodebookFile book(cfg.codebook_path);
  Multiset x = parse_multiset(detail::read_text(file), book.get(),
                              sorted ? InternMode::sorted : InternMode::first_use);
  ElementId c = book.get().intern(center);
  Epsilon eps = Epsilon::parse(cfg.eps);
  PairCode code =
      encode_pair(book.get(), eps, c, x, cfg.precision_bits, cfg.bit_cap);
  book.persist();

  detail::Report report(out, cfg.machine);
  report.field("epsilon", "epsilon", eps.label());
  report.field("epsilon_safety", "epsilon safety", to_string(eps.safety()));
  report.field("center_prime", "center prime",
               std::to_string(code.center_prime));
  report.field("multiset_code", "multiset code", code.multiset_code.to_hex());
  report.real("real", code.real_value);
  return kOk;
}

inline int cmd_eps_check(const CliConfig& cfg, const std::string& value,
                         std::ostream& out) {
  Epsilon eps = Epsilon::parse(value);
  detail::Report report(out, cfg.machine);
  report.field("epsilon", "epsilon", eps.label());
  report.field("status", "status", to_string(eps.safety()));
  if (const auto& q = eps.as_rational()) {
    ZWitness w = rational_eps_z_witness(*q);
    auto [lhs, rhs] = w.identity_sides();
    report.field("p", "witness p", w.p.get_str());
    report.field("q", "witness q", w.q.get_str());
    report.field("identity", "identity",
                 "(" + w.p.get_str() + ")^" + w.denominator.get_str() + " = " +
                     lhs.get_str() + " = (" + w.q.get_str() + ")^" +
                     w.numerator.get_str());
    report.field("verified", "verified", detail::yes_no(w.verify() && lhs == rhs));
  } else {
    report.field("argument", "argument",
                 eps.safety_argument().empty() ? "none on record"
                                               : eps.safety_argument());
  }
  return kOk;
}

inline int cmd_collide(const CliConfig& cfg, long k, std::ostream& out) {
  detail::CodebookFile book(cfg.codebook_path);
  PrimeCodebook& cb = book.get();
  if (cb.size() < 2) {
    cb.intern("a");
    cb.intern("b");
  }
  IntegerEpsCollision hit = construct_integer_eps_collision(cb, k, cfg.bit_cap);
  Epsilon eps = Epsilon::integer(k);
  PairCode one = encode_pair(cb, eps, hit.center1, hit.multiset1,
                             cfg.precision_bits, cfg.bit_cap);
  PairCode two = encode_pair(cb, eps, hit.center2, hit.multiset2,
                             cfg.precision_bits, cfg.bit_cap);
  book.persist();

  detail::Report report(out, cfg.machine);
  report.field("epsilon", "epsilon", std::to_string(k));
  report.field("pair1", "pair 1",
               "center=" + cb.symbol(hit.center1) +
                   " multiset=" + format_inline(hit.multiset1, cb));
  report.field("pair2", "pair 2",
               "center=" + cb.symbol(hit.center2) +
                   " multiset=" + format_inline(hit.multiset2, cb));
  report.field("product1", "product 1", hit.side1.get_str());
  report.field("product2", "product 2", hit.side2.get_str());
  report.field("exact_equal", "exact equal", detail::yes_no(hit.side1 == hit.side2));
  report.real("real1", one.real_value);
  report.real("real2", two.real_value);
  report.field("real_certainty", "real certainty",
               to_string(certified_distinct(one.real_value, two.real_value)));
  return kOk;
}

inline int cmd_wl_hash(const CliConfig& cfg, const std::string& file,
                       std::optional<std::size_t> max_rounds,
                       const std::string& palette_path, std::ostream& out) {
  Graph g = parse_graph(detail::read_text(file));
  detail::CodebookFile palette(palette_path);
  WlResult r = wl_fingerprint(g, palette.get(), max_rounds, cfg.bit_cap);
  palette.persist();
  detail::Report report(out, cfg.machine);
  report.field("fingerprint", "fingerprint", r.fingerprint.to_hex());
  report.field("rounds", "rounds", std::to_string(r.rounds));
  return kOk;
}

inline int cmd_wl_compare(const CliConfig& cfg, const std::string& first,
                          const std::string& second,
                          std::optional<std::size_t> max_rounds,
                          std::ostream& out) {
  Graph g1 = parse_graph(detail::read_text(first));
  Graph g2 = parse_graph(detail::read_text(second));
  PrimeCodebook palette;
  WlResult r1 = wl_fingerprint(g1, palette, max_rounds, cfg.bit_cap);
  WlResult r2 = wl_fingerprint(g2, palette, max_rounds, cfg.bit_cap);
  detail::Report report(out, cfg.machine);
  report.field("fingerprint1", "fingerprint 1", r1.fingerprint.to_hex());
  report.field("fingerprint2", "fingerprint 2", r2.fingerprint.to_hex());
  report.field("result", "result",
               r1.fingerprint == r2.fingerprint ? "not-distinguished-by-1-WL"
                                                : "distinguishable");
  return kOk;
}

inline int cmd_min_gap(const CliConfig& cfg, std::uint32_t alphabet,
                       Multiplicity max_size, mpfr_prec_t max_precision,
                       std::ostream& out) {
  detail::CodebookFile book(cfg.codebook_path);
  PrimeCodebook& cb = book.get();
  for (std::uint32_t i = static_cast<std::uint32_t>(cb.size()); i < alphabet;
       ++i) {
    cb.intern("x" + std::to_string(i));
  }
  MinGap gap =
      min_gap(cb, alphabet, max_size, cfg.precision_bits, max_precision);
  book.persist();
  detail::Report report(out, cfg.machine);
  report.real("gap", gap.gap);
  report.field("first", "first", format_inline(gap.first, cb));
  report.field("second", "second", format_inline(gap.second, cb));
  report.field("certified_precision", "certified at",
               std::to_string(gap.precision) + (cfg.machine ? "" : " bits"));
  return kOk;
}

struct BenchOptions {
  double min_seconds = 0.2;
  std::uint64_t seed = 42;
};

inline int cmd_bench(const CliConfig& cfg, const BenchOptions& opts,
                     std::ostream& out) {
  using clock = std::chrono::steady_clock;
  // Repeats fn until min_seconds elapse; returns operations per second.
  auto rate = [&](const std::function<std::size_t()>& fn) {
    std::size_t ops = 0;
    const auto start = clock::now();
    double elapsed = 0;
    do {
      ops += fn();
      elapsed = std::chrono::duration<double>(clock::now() - start).count();
    } while (elapsed < opts.min_seconds);
    return static_cast<double>(ops) / elapsed;
  };

  detail::CodebookFile book(cfg.codebook_path);
  PrimeCodebook& cb = book.get();
  constexpr std::uint32_t kAlphabet = 100;
  for (std::uint32_t i = 0; i < kAlphabet; ++i) cb.intern("s" + std::to_string(i));
  book.persist();
  std::vector<ElementId> alphabet;
  for (std::uint32_t i = 0; i < kAlphabet; ++i) {
    alphabet.push_back(*cb.find("s" + std::to_string(i)));
  }

  std::mt19937_64 rng(opts.seed);
  auto random_multiset = [&](std::size_t size) {
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    Multiset m;
    for (std::size_t i = 0; i < size; ++i) m.add(alphabet[pick(rng)], 1);
    return m;
  };
  auto batch = [&](std::size_t size) {
    std::vector<Multiset> out_sets;
    for (int i = 0; i < 16; ++i) out_sets.push_back(random_multiset(size));
    return out_sets;
  };

  std::vector<std::pair<std::string, std::string>> rows;
  auto add_rate = [&](const std::string& key, double r) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(0) << r;
    rows.emplace_back(key, s.str());
  };

  add_rate("sieve_primes_per_sec", rate([] {
             PrimeSieve sieve;
             constexpr std::size_t kCount = 100'000;
             sieve.reserve_primes(kCount);
             return kCount;
           }));

  std::vector<std::pair<std::string, std::string>> samples;
  for (std::size_t size : {10, 100, 1000}) {
    auto sets = batch(size);
    samples.emplace_back("sample_code_size" + std::to_string(size),
                         encode_exact(cb, sets.front(), cfg.bit_cap).to_hex());
    add_rate("encode_per_sec_size" + std::to_string(size), rate([&] {
               for (const auto& m : sets) encode_exact(cb, m, cfg.bit_cap);
               return sets.size();
             }));
  }

  {
    auto sets = batch(100);
    std::vector<ExactCode> codes;
    for (const auto& m : sets) codes.push_back(encode_exact(cb, m, cfg.bit_cap));
    add_rate("decode_per_sec_size100", rate([&] {
               for (const auto& c : codes) decode_exact(cb, c);
               return codes.size();
             }));
    for (mpfr_prec_t p : {53, 256}) {
      add_rate("aggregate_per_sec_p" + std::to_string(p), rate([&] {
                 for (const auto& m : sets) aggregate(cb, m, p);
                 return sets.size();
               }));
    }
  }

  if (cfg.machine) {
    for (const auto& [k, v] : rows) out << k << '=' << v << '\n';
    for (const auto& [k, v] : samples) out << k << '=' << v << '\n';
  } else {
    out << std::left << std::setw(28) << "benchmark" << "ops/sec\n";
    for (const auto& [k, v] : rows) out << std::setw(28) << k << v << '\n';
    for (const auto& [k, v] : samples) out << k << ": " << v << '\n';
  }
  return kOk;
}

/// Parses argv and dispatches. Errors become diagnostics on err and a
/// nonzero exit code.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"Injective multiset encoding via prime factorization", "primeset"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "Optional config file; flags win");

  CliConfig cfg;
  app.add_option("--precision", cfg.precision_bits, "Working precision in bits")
      ->check(CLI::Range(static_cast<mpfr_prec_t>(kMinPrecision),
                         static_cast<mpfr_prec_t>(1 << 20)));
  app.add_option("--eps", cfg.eps, "Epsilon: sqrt2, sqrt(n), pi, e, a/b, k");
  app.add_option("--codebook", cfg.codebook_path,
                 "Codebook file; created when absent");
  app.add_option("--cap", cfg.bit_cap, "Bit-length cap for exact codes");
  app.add_flag("--machine", cfg.machine, "key=value output");

  std::function<int()> action;

  std::string file, hex, center, palette, second, eps_value;
  bool sorted = false;
  bool known_only = false;
  mpfr_prec_t max_precision = kMaxPrecision;
  long k = 0;
  std::uint32_t alphabet = 0;
  Multiplicity max_size = 0;
  std::optional<std::size_t> max_rounds;
  BenchOptions bench;

  auto* encode = app.add_subcommand("encode", "Exact and real codes of a multiset file");
  encode->add_option("file", file, "Multiset file ('-' for stdin)")->required();
  encode->add_flag("--sorted", sorted, "Intern new symbols in sorted order");
  encode->add_flag("--known-only", known_only,
                   "Reject symbols missing from the codebook");
  encode->callback([&] {
    const InternMode mode = known_only ? InternMode::require_known
                            : sorted   ? InternMode::sorted
                                       : InternMode::first_use;
    action = [&, mode] { return cmd_encode(cfg, file, mode, out); };
  });

  auto* decode = app.add_subcommand("decode", "Multiset of a hex exact code");
  decode->add_option("code", hex, "Hex exact code")->required();
  decode->callback([&] { action = [&] { return cmd_decode(cfg, hex, out); }; });

  auto* pair = app.add_subcommand("encode-pair", "Code of a (center, multiset) pair");
  pair->add_option("file", file, "Multiset file")->required();
  pair->add_option("--center", center, "Center symbol")->required();
  pair->add_flag("--sorted", sorted, "Intern new symbols in sorted order");
  pair->callback([&] {
    action = [&] { return cmd_encode_pair(cfg, file, center, sorted, out); };
  });

  auto* eps_check = app.add_subcommand("eps-check", "Excluded-set status of an epsilon");
  eps_check->add_option("value", eps_value, "Epsilon value")->required();
  eps_check->callback([&] { action = [&] { return cmd_eps_check(cfg, eps_value, out); }; });

  auto* collide = app.add_subcommand("collide", "Colliding pairs for integer epsilon");
  collide->add_option("--eps", k, "Nonzero integer epsilon")->required();
  collide->callback([&] { action = [&] { return cmd_collide(cfg, k, out); }; });

  auto* wl_hash = app.add_subcommand("wl-hash", "1-WL fingerprint of a graph");
  wl_hash->add_option("file", file, "Graph file")->required();
  wl_hash->add_option("--max-rounds", max_rounds, "Round limit");
  wl_hash->add_option("--palette", palette, "Color codebook file shared across runs");
  wl_hash->callback([&] {
    action = [&] { return cmd_wl_hash(cfg, file, max_rounds, palette, out); };
  });

  auto* wl_compare = app.add_subcommand("wl-compare", "Compare two graphs under 1-WL");
  wl_compare->add_option("first", file, "Graph file")->required();
  wl_compare->add_option("second", second, "Graph file")->required();
  wl_compare->add_option("--max-rounds", max_rounds, "Round limit");
  wl_compare->callback([&] {
    action = [&] { return cmd_wl_compare(cfg, file, second, max_rounds, out); };
  });

  auto* gap = app.add_subcommand("min-gap", "Smallest log-sum gap over an enumeration");
  gap->add_option("--alphabet", alphabet, "Alphabet size")->required();
  gap->add_option("--max-size", max_size, "Maximum multiset size")->required();
  gap->add_option("--max-precision", max_precision, "Escalation ceiling in bits")
      ->check(CLI::Range(static_cast<mpfr_prec_t>(kMinPrecision),
                         static_cast<mpfr_prec_t>(kMaxPrecision)));
  gap->callback([&] {
    action = [&] {
      return cmd_min_gap(cfg, alphabet, max_size, max_precision, out);
    };
  });

  auto* bench_cmd = app.add_subcommand("bench", "Throughput benchmarks");
  bench_cmd->add_option("--min-time", bench.min_seconds, "Seconds per measurement");
  bench_cmd->add_option("--seed", bench.seed, "Input generator seed");
  bench_cmd->callback([&] { action = [&] { return cmd_bench(cfg, bench, out); }; });

  std::vector<const char*> argv{"primeset"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseFailure;
  }

  try {
    return action ? action() : kFailure;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace primeset::cli
