#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace ontodex;
using testing_support::chain_abc;
using testing_support::to_ontology;

namespace {

Ontology parse(const std::string& json) {
  std::istringstream in(json);
  return load_ontology(in);
}

std::vector<std::string> sample_seed(std::mt19937& rng, const std::vector<std::string>& nodes, std::size_t count) {
  auto pool = nodes;
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(std::min(count, pool.size()));
  return pool;
}

}  // namespace

TEST(LoadOntology, TwoClassesOneRelation) {
  const auto ont = parse(R"({"classes":[{"name":"A","description":""},{"name":"B","description":""}],
                             "relations":[{"from":"A","to":"B","kind":"taxonomical"}]})");
  EXPECT_EQ(ont.class_count(), 2u);
  ASSERT_EQ(ont.relations().size(), 1u);
  EXPECT_EQ(ont.relations()[0].kind, RelationKind::taxonomical);
  EXPECT_EQ(ont.classes()[0].name, "a");
}

TEST(LoadOntology, UnknownEndpointIsAValidationError) {
  EXPECT_THROW(parse(R"({"classes":[{"name":"A"}],"relations":[{"from":"A","to":"Z","kind":"associative"}]})"),
               ValidationError);
}

TEST(LoadOntology, EmptyIsValid) {
  const auto ont = parse(R"({"classes":[],"relations":[]})");
  EXPECT_EQ(ont.class_count(), 0u);
  EXPECT_EQ(ont.element_count(), 0u);
}

TEST(LoadOntology, RejectsInvalidModels) {
  // Duplicate after normalization.
  EXPECT_THROW(parse(R"({"classes":[{"name":"Jazz_Music"},{"name":"jazz music"}]})"), ValidationError);
  EXPECT_THROW(parse(R"({"classes":[{"name":"  "}]})"), ValidationError);
  EXPECT_THROW(parse(R"({"classes":[{"name":"A","attributes":[{"name":"x"},{"name":"X"}]}]})"), ValidationError);
  EXPECT_THROW(parse(R"({"classes":[{"name":"A"}],"relations":[{"from":"A","to":"a","kind":"associative"}]})"),
               ValidationError);
  EXPECT_THROW(parse(R"({"classes":[{"name":"A"},{"name":"B"}],"relations":[
                         {"from":"A","to":"B","kind":"associative"},{"from":"a","to":"b","kind":"associative"}]})"),
               ValidationError);
}

TEST(LoadOntology, MalformedInputIsAParseError) {
  EXPECT_THROW(parse(R"({"classes":[{"name":"A"})"), ParseError);
  EXPECT_THROW(parse(R"({"classes":[{"description":"x"}]})"), ParseError);
  EXPECT_THROW(parse(R"({"classes":[{"name":"A"},{"name":"B"}],
                         "relations":[{"from":"A","to":"B","kind":"causal"}]})"),
               ParseError);
  EXPECT_THROW(parse("[]"), ParseError);
}

TEST(LoadOntology, SameKindInBothDirectionsIsAllowed) {
  const auto ont = parse(R"({"classes":[{"name":"A"},{"name":"B"}],"relations":[
      {"from":"A","to":"B","kind":"associative"},{"from":"B","to":"A","kind":"associative"},
      {"from":"A","to":"B","kind":"hierarchical"}]})");
  EXPECT_EQ(ont.relations().size(), 3u);
  EXPECT_EQ(ont.neighbors(0).size(), 1u);
}

TEST(Ontology, ElementCountIncludesAttributes) {
  const auto ont = testing_support::load_fixture_ontology();
  EXPECT_EQ(ont.class_count(), 6u);
  EXPECT_EQ(ont.element_count(), 8u);
  const auto* jazz = ont.find_class("JAZZ");
  ASSERT_NE(jazz, nullptr);
  ASSERT_EQ(jazz->attributes.size(), 1u);
  EXPECT_EQ(jazz->attributes[0].owner, "jazz");
}

TEST(ShortestPath, Examples) {
  const auto ont = chain_abc();
  EXPECT_EQ(shortest_path(ont, "A", "C"), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(shortest_path(ont, "A", "A"), (std::vector<std::string>{"a"}));
  EXPECT_THROW(shortest_path(ont, "A", "Q"), ValidationError);
}

TEST(ShortestPath, DiamondTieBreaksLexicographically) {
  oracle::Graph g;
  g.nodes = {"a", "b", "c", "d"};
  g.add_edge("a", "b");
  g.add_edge("b", "d");
  g.add_edge("a", "c");
  g.add_edge("c", "d");
  const auto expected = oracle::smallest_shortest_path(g, "a", "d");
  ASSERT_TRUE(expected);
  EXPECT_EQ(*expected, (std::vector<std::string>{"a", "b", "d"}));
  EXPECT_EQ(shortest_path(to_ontology(g), "a", "d"), expected);
}

TEST(ShortestPath, UnreachableIsNullopt) {
  const Ontology ont({{"A", "", {}}, {"B", "", {}}}, {});
  EXPECT_FALSE(shortest_path(ont, "A", "B").has_value());
}

TEST(ShortestPath, AgreesWithPathEnumerationOnRandomGraphs) {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 150; ++trial) {
    const auto g = oracle::random_graph(rng, 2 + trial % 7, 0.3, trial % 3 != 0);
    const auto ont = to_ontology(g);
    for (const auto& a : g.nodes) {
      for (const auto& b : g.nodes) {
        const auto got = shortest_path(ont, a, b);
        ASSERT_EQ(got, oracle::smallest_shortest_path(g, a, b)) << "trial " << trial << " " << a << "->" << b;
        const auto back = shortest_path(ont, b, a);
        ASSERT_EQ(got.has_value(), back.has_value());
        if (got) {
          ASSERT_EQ(got->size(), back->size());
        }
      }
    }
  }
}

TEST(SelectFragment, SingleSeed) {
  const auto ont = chain_abc();
  const std::vector<std::string> seed{"A"};
  const auto sel = select_fragment(ont, seed);
  EXPECT_EQ(sel.fragment.classes, (std::vector<std::string>{"a"}));
  EXPECT_TRUE(sel.fragment.relations.empty());
  EXPECT_TRUE(sel.unreachable.empty());
}

TEST(SelectFragment, ChainEndpointsPullInTheMiddle) {
  const auto ont = chain_abc();
  const std::vector<std::string> seed{"C", "A"};
  const auto sel = select_fragment(ont, seed);
  EXPECT_EQ(sel.fragment.classes, (std::vector<std::string>{"a", "b", "c"}));
  ASSERT_EQ(sel.fragment.relations.size(), 2u);
  EXPECT_EQ(sel.fragment.relations[0], (Relation{"a", "b", RelationKind::associative}));
  EXPECT_EQ(sel.fragment.relations[1], (Relation{"b", "c", RelationKind::taxonomical}));

  // Oracle: b lies on the only shortest a-c path.
  oracle::Graph g;
  g.nodes = {"a", "b", "c"};
  g.add_edge("a", "b");
  g.add_edge("b", "c");
  const auto da = oracle::distances(g, "a");
  const auto dc = oracle::distances(g, "c");
  EXPECT_EQ(da.at("b") + dc.at("b"), da.at("c"));
}

TEST(SelectFragment, DisconnectedSeedIsReported) {
  const Ontology ont({{"A", "", {}}, {"B", "", {}}, {"D", "", {}}}, {{"A", "B", RelationKind::associative}});
  const std::vector<std::string> seed{"A", "D"};
  const auto sel = select_fragment(ont, seed);
  EXPECT_EQ(sel.fragment.classes, (std::vector<std::string>{"a", "d"}));
  EXPECT_TRUE(sel.fragment.relations.empty());
  ASSERT_EQ(sel.unreachable.size(), 1u);
  EXPECT_EQ(sel.unreachable[0], (std::pair<std::string, std::string>{"a", "d"}));
}

TEST(SelectFragment, KeepsDirectRelationsBetweenSeeds) {
  // Two relation kinds between the same seed pair both survive.
  const Ontology ont({{"A", "", {}}, {"B", "", {}}},
                     {{"A", "B", RelationKind::associative}, {"B", "A", RelationKind::hierarchical}});
  const std::vector<std::string> seed{"A", "B"};
  EXPECT_EQ(select_fragment(ont, seed).fragment.relations.size(), 2u);
}

TEST(SelectFragment, Errors) {
  const auto ont = chain_abc();
  EXPECT_THROW(select_fragment(ont, std::vector<std::string>{}), ValidationError);
  EXPECT_THROW(select_fragment(ont, std::vector<std::string>{"A", "nope"}), ValidationError);
}

TEST(SelectFragment, PropertiesOnRandomGraphs) {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const auto g = oracle::random_graph(rng, n, 0.25, trial % 4 != 0);
    const auto ont = to_ontology(g);
    auto seed = sample_seed(rng, g.nodes, 2 + trial % 3);
    // Pairs are taken in name order, as the selection does.
    std::sort(seed.begin(), seed.end());
    const auto sel = select_fragment(ont, seed);

    for (const auto& s : seed) ASSERT_TRUE(sel.fragment.contains(s));
    ASSERT_EQ(sel.fragment.classes, select_fragment(ont, seed).fragment.classes);
    ASSERT_EQ(sel.fragment.relations, select_fragment(ont, seed).fragment.relations);

    const std::set<std::string> members(sel.fragment.classes.begin(), sel.fragment.classes.end());
    const auto fg = testing_support::fragment_graph(g, sel.fragment);
    for (const auto& r : sel.fragment.relations) {
      ASSERT_TRUE(members.count(r.from) && members.count(r.to));
    }
    std::set<std::string> on_some_path(seed.begin(), seed.end());
    for (std::size_t i = 0; i < seed.size(); ++i) {
      const auto full = oracle::distances(g, seed[i]);
      const auto inside = oracle::distances(fg, seed[i], &members);
      for (std::size_t j = i + 1; j < seed.size(); ++j) {
        ASSERT_EQ(inside.at(seed[j]), full.at(seed[j])) << "trial " << trial;
        if (auto p = shortest_path(ont, seed[i], seed[j])) on_some_path.insert(p->begin(), p->end());
      }
    }
    // Minimality: nothing beyond the seeds and their chosen paths.
    ASSERT_EQ(members, on_some_path);
  }
}

TEST(SelectFragment, AttributesComeFromIncludedClasses) {
  const auto ont = testing_support::load_fixture_ontology();
  const std::vector<std::string> seed{"Saxophone", "Jazz"};
  const auto sel = select_fragment(ont, seed);
  EXPECT_EQ(sel.fragment.classes, (std::vector<std::string>{"instrument", "jazz", "music", "saxophone"}));
  const auto attrs = sel.fragment.attributes(ont);
  ASSERT_EQ(attrs.size(), 2u);
  EXPECT_EQ(attrs[0].name, "timbre");
  EXPECT_EQ(attrs[1].name, "improvisation");
}

TEST(HopDistances, MultiSource) {
  const auto ont = chain_abc();
  const std::size_t sources[] = {0};
  const auto d = hop_distances(ont, sources);
  EXPECT_EQ(d, (std::vector<std::size_t>{0, 1, 2}));
}
