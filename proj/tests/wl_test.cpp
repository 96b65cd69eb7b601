#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "oracles.hpp"
#include "primeset/wl.hpp"

using namespace primeset;

namespace {

using Edges = std::vector<Graph::Edge>;

Graph cycle(std::size_t n) {
  Edges e;
  for (Graph::Node u = 0; u < n; ++u) e.emplace_back(u, (u + 1) % n);
  return Graph(n, e);
}

Graph complete(std::size_t n) {
  Edges e;
  for (Graph::Node u = 0; u < n; ++u) {
    for (Graph::Node v = u + 1; v < n; ++v) e.emplace_back(u, v);
  }
  return Graph(n, e);
}

Graph path(std::size_t n) {
  Edges e;
  for (Graph::Node u = 0; u + 1 < n; ++u) e.emplace_back(u, u + 1);
  return Graph(n, e);
}

Graph random_graph(std::mt19937_64& rng, std::size_t n, double density) {
  std::bernoulli_distribution coin(density);
  Edges e;
  for (Graph::Node u = 0; u < n; ++u) {
    for (Graph::Node v = u + 1; v < n; ++v) {
      if (coin(rng)) e.emplace_back(u, v);
    }
  }
  return Graph(n, e);
}

/// Graph on n nodes whose upper-triangle edges are the bits of mask.
Graph from_mask(std::size_t n, std::uint64_t mask, oracle::AdjacencyMatrix& adj) {
  adj.assign(n, std::vector<bool>(n, false));
  Edges e;
  std::size_t bit = 0;
  for (Graph::Node u = 0; u < n; ++u) {
    for (Graph::Node v = u + 1; v < n; ++v, ++bit) {
      if (mask >> bit & 1) {
        e.emplace_back(u, v);
        adj[u][v] = adj[v][u] = true;
      }
    }
  }
  return Graph(n, e);
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("primeset_wl_test_" + name);
}

}  // namespace

TEST(Wl, EdgelessGraphIsStableAfterOneRound) {
  PrimeCodebook palette;
  WlResult r = wl_fingerprint(Graph(5, {}), palette);
  EXPECT_EQ(r.rounds, 1u);
  EXPECT_EQ(r.state.class_count(), 1u);
  // One color, five nodes: the fingerprint is a fifth power of a prime.
  Multiset colors = decode_exact(palette, r.fingerprint);
  EXPECT_EQ(colors.support_size(), 1u);
  EXPECT_EQ(colors.size(), 5u);
}

TEST(Wl, PathOnThreeNodesSplitsEndsFromMiddle) {
  PrimeCodebook palette;
  WlResult r = wl_fingerprint(path(3), palette);
  EXPECT_EQ(r.state.class_count(), 2u);
  EXPECT_EQ(r.state.colors[0], r.state.colors[2]);
  EXPECT_NE(r.state.colors[0], r.state.colors[1]);
  Multiset colors = decode_exact(palette, r.fingerprint);
  std::vector<Multiplicity> counts;
  for (const auto& [c, k] : colors) counts.push_back(k);
  std::sort(counts.begin(), counts.end());
  EXPECT_EQ(counts, (std::vector<Multiplicity>{1, 2}));
}

TEST(Wl, StarAndPathOnFourNodesDiffer) {
  PrimeCodebook palette;
  Graph star(4, {{0, 1}, {0, 2}, {0, 3}});
  EXPECT_NE(wl_fingerprint(star, palette).fingerprint,
            wl_fingerprint(path(4), palette).fingerprint);
}

TEST(Wl, CompleteGraphAndCycleOnFourNodesDifferUnderASharedPalette) {
  PrimeCodebook palette;
  EXPECT_NE(wl_fingerprint(complete(4), palette).fingerprint,
            wl_fingerprint(cycle(4), palette).fingerprint);
}

TEST(Wl, SixCycleAndTwoTrianglesAreNotDistinguished) {
  // Both 2-regular on six nodes: 1-WL cannot separate them.
  Graph two_triangles(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
  PrimeCodebook palette;
  WlResult c6 = wl_fingerprint(cycle(6), palette);
  WlResult tt = wl_fingerprint(two_triangles, palette);
  EXPECT_EQ(c6.fingerprint, tt.fingerprint);
  EXPECT_EQ(c6.rounds, tt.rounds);
  // They are not isomorphic.
  oracle::AdjacencyMatrix a(6, std::vector<bool>(6)), b = a;
  for (auto [u, v] : cycle(6).edges()) a[u][v] = a[v][u] = true;
  for (auto [u, v] : two_triangles.edges()) b[u][v] = b[v][u] = true;
  EXPECT_NE(oracle::canonical_form(a), oracle::canonical_form(b));
}

TEST(Wl, InvariantUnderRandomPermutations) {
  std::mt19937_64 rng(77);
  for (int g = 0; g < 50; ++g) {
    std::size_t n = 3 + rng() % 10;
    Graph graph = random_graph(rng, n, 0.3);
    // A fresh palette per run: invariance must not rely on sharing state.
    ExactCode reference = wl_fingerprint(graph).fingerprint;
    std::vector<Graph::Node> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int t = 0; t < 20; ++t) {
      std::shuffle(perm.begin(), perm.end(), rng);
      ASSERT_EQ(wl_fingerprint(graph.permuted(perm)).fingerprint, reference)
          << "graph " << g << " permutation " << t;
    }
  }
}

TEST(Wl, LabelsArePartOfTheInitialColor) {
  PrimeCodebook palette;
  Graph plain = path(3);
  Graph labeled(3, {{0, 1}, {1, 2}}, {std::string("x"), std::nullopt, std::nullopt});
  Graph mirrored(3, {{0, 1}, {1, 2}}, {std::nullopt, std::nullopt, std::string("x")});
  EXPECT_NE(wl_fingerprint(plain, palette).fingerprint,
            wl_fingerprint(labeled, palette).fingerprint);
  EXPECT_EQ(wl_fingerprint(labeled, palette).fingerprint,
            wl_fingerprint(mirrored, palette).fingerprint);
}

TEST(Wl, RefinementNeverMergesClasses) {
  std::mt19937_64 rng(5);
  for (int g = 0; g < 30; ++g) {
    Graph graph = random_graph(rng, 12, 0.25);
    PrimeCodebook palette;
    ColoringState state = initial_coloring(graph, palette);
    for (int round = 0; round < 6; ++round) {
      ColoringState next = wl_round(graph, state, palette);
      ASSERT_GE(next.class_count(), state.class_count());
      for (Graph::Node u = 0; u < 12; ++u) {
        for (Graph::Node v = 0; v < 12; ++v) {
          if (next.colors[u] == next.colors[v]) {
            ASSERT_EQ(state.colors[u], state.colors[v]);
          }
        }
      }
      ASSERT_EQ(next.history.size(), state.history.size() + 1);
      state = std::move(next);
    }
  }
}

TEST(Wl, MaxRoundsBoundsTheRefinement) {
  PrimeCodebook palette;
  WlResult r = wl_fingerprint(path(9), palette, 1);
  EXPECT_EQ(r.rounds, 1u);
  EXPECT_GT(wl_fingerprint(path(9), palette).rounds, 1u);
}

TEST(Wl, IsomorphicGraphsShareFingerprintsAndClassesNeverSplitIsomorphismClasses) {
  // Every graph on up to six nodes, checked against a brute-force
  // canonical form. Known counts of unlabeled graphs: 1, 2, 4, 11, 34, 156.
  const std::size_t expected_iso[] = {0, 1, 2, 4, 11, 34, 156};
  for (std::size_t n = 1; n <= 6; ++n) {
    PrimeCodebook palette;
    std::map<std::uint64_t, ExactCode> by_iso;
    std::set<ExactCode> fingerprints;
    const std::uint64_t masks = std::uint64_t{1} << (n * (n - 1) / 2);
    oracle::AdjacencyMatrix adj;
    for (std::uint64_t mask = 0; mask < masks; ++mask) {
      Graph g = from_mask(n, mask, adj);
      ExactCode fp = wl_fingerprint(g, palette).fingerprint;
      auto [it, fresh] = by_iso.emplace(oracle::canonical_form(adj), fp);
      if (!fresh) {
        ASSERT_EQ(it->second, fp) << "n=" << n << " mask=" << mask;
      }
      fingerprints.insert(fp);
    }
    EXPECT_EQ(by_iso.size(), expected_iso[n]);
    EXPECT_LE(fingerprints.size(), by_iso.size());
  }
}

TEST(Wl, LabeledGraphsOnFourNodes) {
  const char* choices[] = {nullptr, "x", "y"};
  PrimeCodebook palette;
  oracle::AdjacencyMatrix adj;
  std::mt19937_64 rng(31);
  for (std::uint64_t mask = 0; mask < 64; ++mask) {
    for (int labeling = 0; labeling < 81; ++labeling) {
      Graph bare = from_mask(4, mask, adj);
      std::vector<std::optional<std::string>> labels(4);
      for (int u = 0, rest = labeling; u < 4; ++u, rest /= 3) {
        if (choices[rest % 3]) labels[u] = choices[rest % 3];
      }
      Graph g(4, bare.edges(), labels);
      ExactCode fp = wl_fingerprint(g, palette).fingerprint;
      std::vector<Graph::Node> perm{0, 1, 2, 3};
      std::shuffle(perm.begin(), perm.end(), rng);
      ASSERT_EQ(wl_fingerprint(g.permuted(perm), palette).fingerprint, fp);
    }
  }
}

TEST(GraphFile, ParseExample) {
  Graph g = parse_graph(
      "# triangle with a tail\n"
      "nodes 4\n"
      "label 3 leaf\n"
      "0 1\n1 2\n2 0\n2 3  # tail\n"
      "2 3\n");
  EXPECT_EQ(g.node_count(), 4u);
  EXPECT_EQ(g.edges().size(), 4u);
  EXPECT_EQ(g.label(3), std::optional<std::string>("leaf"));
  EXPECT_FALSE(g.label(0).has_value());
  EXPECT_EQ(g.neighbors(2), (std::vector<Graph::Node>{0, 1, 3}));
}

TEST(GraphFile, NodeCountInferredWithoutHeader) {
  Graph g = parse_graph("0 4\n");
  EXPECT_EQ(g.node_count(), 5u);
  EXPECT_EQ(parse_graph("").node_count(), 0u);
  EXPECT_EQ(parse_graph("nodes 3\n").edges().size(), 0u);
}

TEST(GraphFile, SelfLoopsAreKeptOnce) {
  Graph g = parse_graph("nodes 2\n0 0\n0 0\n0 1\n");
  EXPECT_EQ(g.edges().size(), 2u);
  EXPECT_EQ(g.neighbors(0), (std::vector<Graph::Node>{0, 1}));
}

TEST(GraphFile, ErrorsCarryLineNumbers) {
  struct Case {
    const char* text;
    std::size_t line;
  };
  for (const auto& [text, line] : std::vector<Case>{
           {"nodes 3\n0 1\n1 3\n", 3},
           {"nodes 3\n0 1 2\n", 2},
           {"0 1\nnodes 3\n", 2},
           {"nodes x\n", 1},
           {"nodes 2\n\n-1 0\n", 3},
           {"nodes 2\nlabel 0\n", 2},
           {"nodes 2\nlabel 5 x\n", 2},
       }) {
    try {
      parse_graph(text);
      ADD_FAILURE() << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << text;
    }
  }
}

TEST(GraphFile, LoadFromDisk) {
  auto path = temp_path("k3.txt");
  {
    std::ofstream out(path);
    out << "nodes 3\n0 1\n1 2\n2 0\n";
  }
  Graph g = load_graph(path);
  EXPECT_EQ(g.edges().size(), 3u);
  std::filesystem::remove(path);
  try {
    load_graph(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io);
  }
}

TEST(GraphFile, ConstructorRejectsOutOfRangeEdges) {
  EXPECT_THROW(Graph(2, {{0, 2}}), Error);
  EXPECT_THROW(Graph(2, {}, {std::nullopt}), Error);
}
