#include <sstream>

#include "collab/error.hpp"
#include "collab/synth.hpp"
#include "collab/table.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace collab;

TEST_CASE("synthetic corpus is deterministic in the seed") {
  SynthSpec spec;
  spec.n_focal = 4;
  auto a = generate(spec);
  auto b = generate(spec);
  CHECK(corpus_checksum(a.corpus) == corpus_checksum(b.corpus));
  spec.seed = 43;
  CHECK(corpus_checksum(generate(spec).corpus) != corpus_checksum(a.corpus));
}

TEST_CASE("synthetic corpus follows its spec") {
  SynthSpec spec;
  spec.n_focal = 3;
  spec.topics_per_focal = 2;
  spec.papers_per_topic = 15;
  spec.multi_topic_fraction = 0.5;
  auto sc = generate(spec);
  CHECK(sc.truth.focal_ids == std::vector<std::string>{"F0001", "F0002", "F0003"});
  for (const auto& id : sc.truth.focal_ids) {
    CHECK(sc.corpus.papers_of(sc.corpus.require_author(id)).size() == 30);
  }
  CHECK(sc.truth.paper_topic.size() == 90);
  bool any_multi = false;
  for (const auto& [c, topics] : sc.truth.collaborator_topics) {
    CHECK_FALSE(topics.empty());
    any_multi |= topics.size() > 1;
  }
  CHECK(any_multi);

  std::ostringstream out;
  write_ground_truth_json(sc.truth, spec, out);
  auto j = nlohmann::json::parse(out.str());
  CHECK(j["spec"]["topics_per_focal"] == 2);
  CHECK(j["paper_topic"].size() == 90);
}

TEST_CASE("invalid synthetic specs") {
  SynthSpec s;
  s.pool_size = 4;
  CHECK_THROWS_AS(generate(s), DomainError);
  s = {};
  s.multi_topic_fraction = 1.5;
  CHECK_THROWS_AS(generate(s), DomainError);
  s = {};
  s.year_end = s.year_start - 1;
  CHECK_THROWS_AS(generate(s), DomainError);
}

TEST_CASE("table formatting") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
  CHECK(format_double(std::nan("")) == "");
  CHECK(format_cell(Cell{}) == "");
  CHECK(format_cell(Cell{std::size_t{7}}) == "7");
  CHECK(format_cell(Cell{"a,b"}) == "\"a,b\"");
  CHECK(format_cell(Cell{std::optional<double>{}}) == "");
  CHECK(format_cell(Cell{std::optional<double>{2.5}}) == "2.5");

  Table t{"t", {"x", "y"}, {}};
  t.add({1, "q\"uote"});
  CHECK_THROWS_AS(t.add({1}), Error);
  std::ostringstream out;
  write_csv(t, out);
  CHECK(out.str() == "x,y\n1,\"q\"\"uote\"\n");
}
