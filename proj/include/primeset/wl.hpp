#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "primeset/codebook.hpp"
#include "primeset/error.hpp"
#include "primeset/exact_code.hpp"
#include "primeset/multiset.hpp"

namespace primeset {

/// Simple undirected graph. Parallel edges collapse; a self-loop is kept once.
class Graph {
 public:
  using Node = std::uint32_t;
  using Edge = std::pair<Node, Node>;

  Graph() = default;

  Graph(std::size_t node_count, const std::vector<Edge>& edges,
        std::vector<std::optional<std::string>> labels = {})
      : adjacency_(node_count), labels_(std::move(labels)) {
    if (labels_.empty()) labels_.resize(node_count);
    if (labels_.size() != node_count) {
      throw Error(ErrorKind::invalid_argument,
                  "label count does not match node count");
    }
    for (auto [u, v] : edges) {
      if (u >= node_count || v >= node_count) {
        throw Error(ErrorKind::invalid_argument,
                    "edge (" + std::to_string(u) + ", " + std::to_string(v) +
                        ") out of range for " + std::to_string(node_count) +
                        " nodes");
      }
      adjacency_[u].push_back(v);
      if (u != v) adjacency_[v].push_back(u);
    }
    for (auto& nbrs : adjacency_) {
      std::sort(nbrs.begin(), nbrs.end());
      nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
  }

  std::size_t node_count() const noexcept { return adjacency_.size(); }

  const std::vector<Node>& neighbors(Node u) const { return adjacency_.at(u); }

  const std::optional<std::string>& label(Node u) const { return labels_.at(u); }

  /// Edges with u <= v, each once.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (Node u = 0; u < adjacency_.size(); ++u) {
      for (Node v : adjacency_[u]) {
        if (u <= v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  /// Relabels node u as perm[u].
  Graph permuted(const std::vector<Node>& perm) const {
    if (perm.size() != node_count()) {
      throw Error(ErrorKind::invalid_argument, "permutation size mismatch");
    }
    std::vector<Edge> mapped;
    for (auto [u, v] : edges()) mapped.emplace_back(perm[u], perm[v]);
    std::vector<std::optional<std::string>> labels(node_count());
    for (Node u = 0; u < node_count(); ++u) labels[perm[u]] = labels_[u];
    return Graph(node_count(), mapped, std::move(labels));
  }

 private:
  std::vector<std::vector<Node>> adjacency_;
  std::vector<std::optional<std::string>> labels_;
};

/// Parses `nodes <n>`, `u v` and `label <u> <symbol>` lines.
inline Graph parse_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> declared;
  bool body_started = false;
  std::vector<Graph::Edge> edges;
  std::vector<std::pair<Graph::Node, std::string>> labels;
  std::size_t inferred = 0;

  auto parse_node = [&](const std::string& token) -> Graph::Node {
    if (token.empty() ||
        token.find_first_not_of("0123456789") != std::string::npos ||
        token.size() > 9) {
      throw ParseError(line_no, "invalid node index '" + token + "'");
    }
    auto u = static_cast<Graph::Node>(std::stoul(token));
    if (declared && u >= *declared) {
      throw ParseError(line_no, "node " + token + " out of range for " +
                                    std::to_string(*declared) + " nodes");
    }
    inferred = std::max<std::size_t>(inferred, std::size_t{u} + 1);
    return u;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    if (tok[0] == "nodes") {
      if (body_started || declared) {
        throw ParseError(line_no, "'nodes' header must come first");
      }
      if (tok.size() != 2 ||
          tok[1].find_first_not_of("0123456789") != std::string::npos ||
          tok[1].size() > 9) {
        throw ParseError(line_no, "expected 'nodes <n>'");
      }
      declared = std::stoul(tok[1]);
      continue;
    }
    body_started = true;
    if (tok[0] == "label") {
      if (tok.size() != 3 || !is_valid_symbol(tok[2])) {
        throw ParseError(line_no, "expected 'label <u> <symbol>'");
      }
      labels.emplace_back(parse_node(tok[1]), tok[2]);
      continue;
    }
    if (tok.size() != 2) throw ParseError(line_no, "expected 'u v'");
    Graph::Node u = parse_node(tok[0]);
    Graph::Node v = parse_node(tok[1]);
    edges.emplace_back(u, v);
  }

  const std::size_t n = declared.value_or(inferred);
  std::vector<std::optional<std::string>> node_labels(n);
  for (auto& [u, symbol] : labels) node_labels[u] = std::move(symbol);
  return Graph(n, edges, std::move(node_labels));
}

inline Graph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

/// Per-node colors after some number of refinement rounds. Colors are ids in
/// a palette codebook shared by every graph that is to be compared.
struct ColoringState {
  std::size_t round = 0;
  std::vector<ElementId> colors;
  std::vector<ExactCode> history;  // code of the color multiset per round

  std::size_t class_count() const {
    return std::set<ElementId>(colors.begin(), colors.end()).size();
  }
};

namespace detail {

inline Multiset color_multiset(const std::vector<ElementId>& colors) {
  Multiset m;
  for (ElementId c : colors) m.add(c, 1);
  return m;
}

/// New palette entries are interned in sorted order so the assignment does
/// not depend on node numbering.
inline std::vector<ElementId> intern_colors(
    PrimeCodebook& palette, const std::vector<std::string>& symbols) {
  palette.intern_sorted(symbols);
  std::vector<ElementId> out;
  out.reserve(symbols.size());
  for (const auto& s : symbols) out.push_back(*palette.find(s));
  return out;
}

}  // namespace detail

inline ColoringState initial_coloring(const Graph& g, PrimeCodebook& palette,
                                      std::size_t bit_cap = kDefaultBitCap) {
  std::vector<std::string> symbols;
  symbols.reserve(g.node_count());
  for (Graph::Node u = 0; u < g.node_count(); ++u) {
    const auto& label = g.label(u);
    symbols.push_back(label ? "init:" + *label : "init");
  }
  ColoringState state;
  state.colors = detail::intern_colors(palette, symbols);
  state.history.push_back(
      encode_exact(palette, detail::color_multiset(state.colors), bit_cap));
  return state;
}

/// One refinement step: a node's new color is interned from its old color id
/// and the exact code of its neighbors' color multiset.
inline ColoringState wl_round(const Graph& g, const ColoringState& state,
                              PrimeCodebook& palette,
                              std::size_t bit_cap = kDefaultBitCap) {
  if (state.colors.size() != g.node_count()) {
    throw Error(ErrorKind::invalid_argument,
                "coloring does not match the graph");
  }
  std::vector<std::string> symbols(g.node_count());
  for (Graph::Node u = 0; u < g.node_count(); ++u) {
    Multiset around;
    for (Graph::Node v : g.neighbors(u)) around.add(state.colors[v], 1);
    symbols[u] = std::to_string(state.colors[u].index) + "|" +
                 encode_exact(palette, around, bit_cap).to_hex();
  }
  ColoringState next;
  next.round = state.round + 1;
  next.colors = detail::intern_colors(palette, symbols);
  next.history = state.history;
  next.history.push_back(
      encode_exact(palette, detail::color_multiset(next.colors), bit_cap));
  return next;
}

struct WlResult {
  ExactCode fingerprint;
  std::size_t rounds = 0;
  ColoringState state;
};

/// Refines until the partition stops changing (or max_rounds), then encodes
/// the multiset of final colors.
inline WlResult wl_fingerprint(const Graph& g, PrimeCodebook& palette,
                               std::optional<std::size_t> max_rounds = {},
                               std::size_t bit_cap = kDefaultBitCap) {
  ColoringState state = initial_coloring(g, palette, bit_cap);
  std::size_t classes = state.class_count();
  while (!max_rounds || state.round < *max_rounds) {
    state = wl_round(g, state, palette, bit_cap);
    const std::size_t refined = state.class_count();
    if (refined == classes) break;
    classes = refined;
  }
  WlResult out;
  out.fingerprint =
      encode_exact(palette, detail::color_multiset(state.colors), bit_cap);
  out.rounds = state.round;
  out.state = std::move(state);
  return out;
}

/// Fingerprint against a fresh palette. Only comparable with fingerprints of
/// graphs that produce the same palette, e.g. relabelings of g.
inline WlResult wl_fingerprint(const Graph& g,
                               std::optional<std::size_t> max_rounds = {}) {
  PrimeCodebook palette;
  return wl_fingerprint(g, palette, max_rounds);
}

}  // namespace primeset
