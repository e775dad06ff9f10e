#include <random>
#include <sstream>

#include "collab/cociting.hpp"
#include "collab/rng.hpp"
#include "collab/error.hpp"
#include "collab/modularity.hpp"
#include "collab/stats.hpp"
#include "collab/synth.hpp"
#include "collab/topics.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace collab;
using testutil::paper;

namespace {

Corpus random_corpus(std::uint64_t seed, int n_papers, int n_refs) {
  std::mt19937_64 rng(seed);
  std::vector<PaperRecord> recs;
  for (int i = 0; i < n_papers; ++i) {
    std::vector<std::string> refs;
    const int k = static_cast<int>(rng() % 5);
    for (int r = 0; r < k; ++r) refs.push_back("r" + std::to_string(rng() % n_refs));
    std::vector<std::string> authors{"me"};
    if (rng() % 3 == 0) authors.push_back("other");
    recs.push_back(paper("p" + std::to_string(i), 1980 + static_cast<int>(rng() % 30), authors,
                         refs));
  }
  return Corpus::build(recs);
}

}  // namespace

TEST_CASE("co-citing network matches pairwise intersection") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto c = random_corpus(seed, 40, 25);
    auto net = build_cociting(c, "me");
    auto ref = build_cociting_reference(c, c.require_author("me"));
    CHECK(net.edges == ref.edges);
    CHECK(net.nodes == ref.nodes);

    auto expect = oracle::cociting_pairs(c, "me");
    std::map<std::pair<std::string, std::string>, int> got;
    for (const auto& e : net.edges) {
      CHECK(e.u < e.v);
      got[{c.paper(net.nodes[e.u]).paper_id, c.paper(net.nodes[e.v]).paper_id}] =
          static_cast<int>(e.weight);
    }
    CHECK(got == expect);
  }
}

TEST_CASE("co-citing graph weights and edge list export") {
  auto c = Corpus::build({paper("a", 2000, {"x"}, {"r1", "r2"}), paper("b", 2001, {"x"}, {"r1", "r2"}),
                          paper("c", 2002, {"x"}, {"r3"})});
  auto net = build_cociting(c, "x");
  REQUIRE(net.edges.size() == 1);
  CHECK(net.edges[0].weight == 2);
  CHECK(net.to_graph(true).total_weight() == 4.0);
  CHECK(net.to_graph(false).total_weight() == 2.0);
  CHECK(net.adjacency()[2].empty());
  std::ostringstream out;
  write_edge_list_csv(c, net, out);
  CHECK(out.str() == "paper_u,paper_v,weight\na,b,2\n");
}

TEST_CASE("topics: isolated papers and small communities are unlabeled") {
  std::vector<PaperRecord> recs;
  for (int i = 0; i < 37; ++i) recs.push_back(paper("m" + std::to_string(i), 2000 + i % 5, {"x"}, {"A"}));
  recs.push_back(paper("s1", 1990, {"x"}, {"B"}));
  recs.push_back(paper("s2", 1991, {"x"}, {"B"}));
  recs.push_back(paper("iso", 1980, {"x"}, {"C"}));
  auto c = Corpus::build(recs);
  auto ta = detect_topics(c, c.require_author("x"), 1);
  CHECK(ta.n_topics() == 1);  // 2 of 40 papers is exactly 5%, not more
  CHECK(ta.topic_size[0] == 37);
  CHECK(ta.topic_first_year[0] == 2000);
  for (std::size_t i = 0; i < ta.papers.size(); ++i) {
    const auto& id = c.paper(ta.papers[i]).paper_id;
    CHECK(ta.topic[i] == (id[0] == 'm' ? 0 : kNoTopic));
  }

  auto loose = detect_topics(c, c.require_author("x"), 1, {0.04, false});
  CHECK(loose.n_topics() == 2);
  // the earlier community gets label 0
  CHECK(loose.topic_first_year[0] == 1990);
  CHECK(loose.topic_size[0] == 2);
  CHECK_THROWS_AS(detect_topics(c, 0, 1, {1.5, false}), DomainError);
}

TEST_CASE("edgeless networks give no topics") {
  auto c = Corpus::build({paper("a", 2000, {"x"}, {"r1"}), paper("b", 2001, {"x"}, {})});
  auto ta = detect_topics(c, c.require_author("x"), 1);
  CHECK(ta.n_topics() == 0);
  CHECK(ta.topic == std::vector<int>{kNoTopic, kNoTopic});
}

TEST_CASE("topics from labels round trip and validation") {
  auto c = Corpus::build({paper("a", 2000, {"x"}, {}), paper("b", 2001, {"x"}, {}),
                          paper("d", 2003, {"x"}, {})});
  auto x = c.require_author("x");
  std::vector<int> labels{0, kNoTopic, 1};
  auto ta = topics_from_labels(c, x, labels);
  CHECK(ta.n_topics() == 2);
  CHECK(ta.topic_first_year == std::vector<int>{2000, 2003});
  auto series = colored_series(c, ta);
  CHECK(series[1].topic == kNoTopic);
  std::ostringstream out;
  write_topics_csv(c, series, out);
  CHECK(out.str() == "paper_id,year,topic_id,c10\na,2000,0,0\nb,2001,-1,0\nd,2003,1,0\n");

  std::vector<int> reversed{1, kNoTopic, 0};
  CHECK_THROWS_AS(topics_from_labels(c, x, reversed), ValidationError);
  std::vector<int> short_labels{0};
  CHECK_THROWS_AS(topics_from_labels(c, x, short_labels), ValidationError);
}

TEST_CASE("planted topics are recovered") {
  SynthSpec spec;
  spec.n_focal = 5;
  spec.topics_per_focal = 4;
  spec.seed = 3;
  auto sc = generate(spec);
  for (const auto& id : sc.truth.focal_ids) {
    auto a = sc.corpus.require_author(id);
    auto ta = detect_topics(sc.corpus, a, fnv1a(id));
    CHECK(ta.n_topics() == 4);
    std::vector<int> truth, got;
    for (std::size_t i = 0; i < ta.papers.size(); ++i) {
      truth.push_back(sc.truth.paper_topic.at(sc.corpus.paper(ta.papers[i]).paper_id));
      got.push_back(ta.topic[i]);
    }
    CHECK(adjusted_rand_index(truth, got) >= 0.9);
  }
}
