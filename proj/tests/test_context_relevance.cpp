#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace ontodex;
using testing_support::chain_abc;

namespace {

LabeledGraph graph(std::vector<std::string> nodes, std::vector<std::pair<std::string, std::string>> edges) {
  return LabeledGraph(std::move(nodes), edges);
}

LabeledGraph from_oracle(const oracle::Graph& g) {
  return graph(g.nodes, {g.edges.begin(), g.edges.end()});
}

/// Random graph whose node names are short strings over a small alphabet,
/// so that near-miss names (and ties) are common.
LabeledGraph random_labeled(std::mt19937& rng, std::size_t max_nodes) {
  std::set<std::string> names;
  const std::size_t n = std::uniform_int_distribution<std::size_t>(0, max_nodes)(rng);
  while (names.size() < n) names.insert("q" + oracle::random_string(rng, "ab", 3));
  std::vector<std::string> nodes(names.begin(), names.end());
  std::vector<std::pair<std::string, std::string>> edges;
  std::bernoulli_distribution coin(0.4);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (coin(rng)) edges.emplace_back(nodes[i], nodes[j]);
    }
  }
  return graph(nodes, edges);
}

AbstractContext parse_context(const std::string& json, const Ontology& ont) {
  std::istringstream in(json);
  return load_context(in, ont);
}

}  // namespace

TEST(AbstractContext, NormalizesAndInducesRelations) {
  const auto ont = chain_abc();
  const AbstractContext ctx(ont, {"C", "a", "B"});
  EXPECT_EQ(ctx.classes(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(ctx.relations().size(), 2u);
  const AbstractContext ends(ont, {"A", "C"});
  EXPECT_TRUE(ends.relations().empty());
}

TEST(AbstractContext, LoadErrors) {
  const auto ont = testing_support::load_fixture_ontology();
  EXPECT_THROW(parse_context(R"({"classes":["Jazz","Polka"]})", ont), ValidationError);
  EXPECT_THROW(parse_context(R"({"classes":[]})", ont), ValidationError);
  EXPECT_THROW(parse_context(R"({"classes":"Jazz"})", ont), ParseError);
  EXPECT_THROW(parse_context("{", ont), ParseError);
  EXPECT_THROW(parse_context(R"({"classes":["Jazz"],"attributes":[{"class":"Jazz","name":"Tempo"}]})", ont),
               ValidationError);
  const auto ctx = parse_context(R"({"classes":["Jazz"],"attributes":[{"class":"Jazz","name":"Improvisation"}]})", ont);
  ASSERT_EQ(ctx.attributes().size(), 1u);
  EXPECT_EQ(ctx.attributes()[0], ElementRef::of_attribute("jazz", "improvisation"));
}

TEST(ContextWeights, LmaxZeroKeepsOnlyTheContext) {
  const auto ont = chain_abc();
  const auto w = context_weights(ont, AbstractContext(ont, {"A"}), 0);
  ASSERT_EQ(w.weights.size(), 1u);
  EXPECT_EQ(w.weight(ElementRef::of_class("a")), 1.0);
  EXPECT_EQ(w.weight(ElementRef::of_class("b")), 0.0);
}

TEST(ContextWeights, DecayWithDistance) {
  const auto ont = chain_abc();
  const auto w = context_weights(ont, AbstractContext(ont, {"A"}), 2);
  EXPECT_EQ(w.weight(ElementRef::of_class("a")), 1.0);
  EXPECT_DOUBLE_EQ(w.weight(ElementRef::of_class("b")), 0.5);
  EXPECT_DOUBLE_EQ(w.weight(ElementRef::of_class("c")), 1.0 / 3.0);
}

TEST(ContextWeights, BeyondLmaxIsExcluded) {
  const Ontology ont({{"A", "", {}}, {"B", "", {}}, {"C", "", {}}, {"D", "", {}}},
                     {{"A", "B", RelationKind::associative},
                      {"B", "C", RelationKind::associative},
                      {"C", "D", RelationKind::associative}});
  const auto w = context_weights(ont, AbstractContext(ont, {"A"}), 2);
  EXPECT_EQ(w.weights.count(ElementRef::of_class("d")), 0u);
  EXPECT_EQ(w.weights.size(), 3u);
}

TEST(ContextWeights, AttributesShareTheOwnerWeight) {
  const auto ont = testing_support::load_fixture_ontology();
  const auto w = context_weights(ont, AbstractContext(ont, {"Music"}), 2);
  EXPECT_DOUBLE_EQ(w.weight(ElementRef::of_attribute("jazz", "improvisation")), 0.5);
  EXPECT_DOUBLE_EQ(w.weight(ElementRef::of_attribute("instrument", "timbre")), 0.5);
  EXPECT_DOUBLE_EQ(w.weight(ElementRef::of_class("sport")), 1.0 / 3.0);
}

TEST(ContextWeights, NonIncreasingInDistance) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = oracle::random_graph(rng, 2 + trial % 8, 0.2, trial % 2 == 0);
    const auto ont = testing_support::to_ontology(g);
    const AbstractContext ctx(ont, {g.nodes[0]});
    const auto w = context_weights(ont, ctx, 1 + trial % 3);
    const auto dist = oracle::distances(g, g.nodes[0]);
    for (const auto& a : g.nodes) {
      for (const auto& b : g.nodes) {
        if (dist.at(a) <= dist.at(b)) {
          EXPECT_GE(w.weight(ElementRef::of_class(a)), w.weight(ElementRef::of_class(b)));
        }
      }
    }
  }
}

TEST(MatchNodes, PicksTheClosestName) {
  const auto g1 = graph({"jazz"}, {});
  const auto g2 = graph({"jazz", "jizz"}, {});
  const auto m = match_nodes(g1, g2, 0.6);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(g2.nodes()[m[0].right], "jazz");
  EXPECT_EQ(m[0].similarity, 1.0);
}

TEST(MatchNodes, ThetaFiltersWeakPairs) {
  const auto g1 = graph({"jazz"}, {});
  const auto g2 = graph({"jizz"}, {});
  EXPECT_EQ(match_nodes(g1, g2, 0.75).size(), 1u);
  EXPECT_TRUE(match_nodes(g1, g2, 0.8).empty());
}

TEST(GraphSimilarity, Examples) {
  const auto g = graph({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  EXPECT_EQ(graph_similarity(g, g, 0.6), 1.0);
  EXPECT_EQ(graph_similarity(g, LabeledGraph{}, 0.6), 0.0);
  EXPECT_EQ(graph_similarity(LabeledGraph{}, LabeledGraph{}, 0.6), 0.0);
  const auto triangle = graph({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"a", "c"}});
  EXPECT_NEAR(graph_similarity(g, triangle, 0.6), 5.0 / 9.0, 1e-12);
}

TEST(GraphSimilarity, IdentityOnRandomGraphs) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = from_oracle(oracle::random_graph(rng, 1 + trial % 8, 0.3, trial % 3 != 0));
    EXPECT_EQ(graph_similarity(g, g, 0.6), 1.0);
  }
}

TEST(GraphSimilarity, SymmetricAndBounded) {
  std::mt19937 rng(37);
  for (int trial = 0; trial < 300; ++trial) {
    const auto g1 = random_labeled(rng, 6);
    const auto g2 = random_labeled(rng, 6);
    const double theta = (trial % 5) * 0.25;
    const double s = graph_similarity(g1, g2, theta);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_NEAR(s, graph_similarity(g2, g1, theta), 1e-12);
  }
}

TEST(AngularSeparation, Examples) {
  const std::map<std::string, double> u{{"x", 1.0}, {"y", 0.5}};
  const std::map<std::string, double> v{{"x", 0.5}, {"y", 1.0}};
  EXPECT_NEAR(angular_separation(u, v), 0.8, 1e-12);
  EXPECT_NEAR(angular_separation(u, u), 1.0, 1e-12);
  EXPECT_EQ(angular_separation(u, std::map<std::string, double>{{"z", 1.0}}), 0.0);
  EXPECT_EQ(angular_separation(u, std::map<std::string, double>{}), 0.0);
  EXPECT_EQ(angular_separation(u, std::map<std::string, double>{{"x", 0.0}}), 0.0);
}

TEST(AngularSeparation, ScaleInvariantAndBounded) {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> scale(1e-3, 100.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::map<int, double> u, v;
    for (int k = 0; k < 6; ++k) {
      if (unit(rng) < 0.7) u[k] = unit(rng);
      if (unit(rng) < 0.7) v[k] = unit(rng);
    }
    const double s = angular_separation(u, v);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_NEAR(s, angular_separation(v, u), 1e-12);
    const double c = scale(rng);
    auto scaled = u;
    for (auto& [k, x] : scaled) x *= c;
    EXPECT_NEAR(angular_separation(scaled, v), s, 1e-12);
  }
}

TEST(DocumentRelevance, ProductAndBlend) {
  EXPECT_NEAR(document_relevance(0.8, 0.8625), 0.69, 1e-12);
  EXPECT_NEAR(document_relevance(0.8, 0.8625, RelevanceMode::blend(0.5)), 0.83125, 1e-12);
  EXPECT_EQ(document_relevance(0.0, 1.0), 0.0);
  EXPECT_EQ(document_relevance(1.0, 0.4, RelevanceMode::blend(1.0)), 1.0);
}

TEST(DocumentRelevance, OutOfRangeInputs) {
  EXPECT_THROW(document_relevance(1.2, 0.5), RangeError);
  EXPECT_THROW(document_relevance(0.5, -0.1), RangeError);
  EXPECT_THROW(document_relevance(0.5, 0.5, RelevanceMode::blend(2.0)), RangeError);
}

namespace {

struct FixtureRanking {
  Ontology ont = testing_support::load_fixture_ontology();
  Index index = build_index(testing_support::load_fixture_corpus(), ont, {}).index;
  AbstractContext ctx = AbstractContext(ont, {"Jazz", "Music"});

  std::vector<RankedResult> rank(RankMethod method) const {
    RankParams p;
    p.method = method;
    return rank_documents(index, ont, ctx, p);
  }
};

void expect_ranking(const std::vector<RankedResult>& got,
                    const std::vector<std::tuple<std::string, double, double>>& expected) {
  ASSERT_EQ(got.size(), expected.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    const auto& [id, s, relevance] = expected[i];
    EXPECT_EQ(got[i].doc_id, id) << "rank " << i;
    EXPECT_NEAR(got[i].s, s, 1e-9) << id;
    EXPECT_NEAR(got[i].relevance, relevance, 1e-9) << id;
  }
}

}  // namespace

// Expected values come from tests/oracles/fixture_oracle.py.
TEST(RankDocuments, GraphMethodOnFixture) {
  const FixtureRanking f;
  expect_ranking(f.rank(RankMethod::graph), {{"jazz", 1.0, 0.7443181818181819},
                                             {"concert", 0.5, 0.38462752525252525},
                                             {"saxophone", 0.5, 0.37073863636363635},
                                             {"stadium-anthem", 0.4, 0.31439393939393945},
                                             {"cooking", 0.0, 0.0}});
}

TEST(RankDocuments, WeightMethodOnFixture) {
  const FixtureRanking f;
  expect_ranking(f.rank(RankMethod::weight), {{"jazz", 0.5299534507629329, 0.39445398892013755},
                                              {"stadium-anthem", 0.36758528265232576, 0.2889164626907485},
                                              {"concert", 0.26573567829030187, 0.20441851262420002},
                                              {"saxophone", 0.16724840200141813, 0.12401088898400606},
                                              {"cooking", 0.0, 0.0}});
}

TEST(RankDocuments, FragmentEqualToContextGivesIndexSim) {
  const FixtureRanking f;
  const auto* jazz = f.index.find("jazz");
  ASSERT_NE(jazz, nullptr);
  ASSERT_EQ(jazz->fragment, f.ctx.as_fragment());
  const auto ranked = f.rank(RankMethod::graph);
  EXPECT_EQ(ranked[0].doc_id, "jazz");
  EXPECT_EQ(ranked[0].relevance, jazz->sim);
}

TEST(RankDocuments, PermutationSortedAndDeterministic) {
  const FixtureRanking f;
  for (auto method : {RankMethod::graph, RankMethod::weight}) {
    const auto a = f.rank(method);
    const auto b = f.rank(method);
    std::set<std::string> ids;
    for (std::size_t i = 0; i < a.size(); ++i) {
      ids.insert(a[i].doc_id);
      EXPECT_EQ(a[i].doc_id, b[i].doc_id);
      EXPECT_EQ(a[i].relevance, b[i].relevance);
      if (i > 0) {
        EXPECT_TRUE(a[i - 1].relevance > a[i].relevance ||
                    (a[i - 1].relevance == a[i].relevance && a[i - 1].doc_id < a[i].doc_id));
      }
    }
    EXPECT_EQ(ids.size(), f.index.records.size());
  }
}

TEST(RankDocuments, EmptyIndexAndBadParams) {
  const FixtureRanking f;
  EXPECT_TRUE(rank_documents(Index{}, f.ont, f.ctx).empty());
  RankParams p;
  p.theta = 1.5;
  EXPECT_THROW(rank_documents(f.index, f.ont, f.ctx, p), RangeError);
}
