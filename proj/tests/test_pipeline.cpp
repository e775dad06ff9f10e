#include <set>
#include <sstream>

#include "collab/error.hpp"
#include "collab/stages.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"

using namespace collab;
using testutil::TempDir;

namespace {

RunConfig small_config(const std::filesystem::path& corpus, const std::filesystem::path& out) {
  RunConfig c;
  c.inputs = {{corpus.string(), "synth"}};
  c.output_dir = out;
  c.seed = 7;
  c.surrogate = true;
  return c;
}

SynthSpec small_spec() {
  SynthSpec s;
  s.n_focal = 12;
  s.multi_topic_fraction = 0.3;
  s.seed = 7;
  return s;
}

std::string report_csv(const StatReport& r) {
  std::ostringstream out;
  for (const auto& t : r.tables) {
    out << "# " << t.name << '\n';
    write_csv(t, out);
  }
  return out.str();
}

}  // namespace

TEST_CASE("parallel kernels match their serial references") {
  TempDir tmp("kernels");
  auto file = testutil::write_synth_corpus(small_spec(), tmp.path);
  auto cfg = small_config(file, tmp.path / "out");
  cfg.workers = 4;
  auto datasets = load_datasets(cfg);
  REQUIRE(datasets.size() == 1);
  const auto& ds = datasets[0];
  CHECK(ds.focal.size() == 12);

  auto par = detect_all_topics(ds, cfg);
  auto ser = detect_all_topics_serial(ds, cfg);
  REQUIRE(par.size() == ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    CHECK(par[i].topic == ser[i].topic);
    CHECK(par[i].papers == ser[i].papers);
  }

  std::vector<DatasetAnalysis> a{{&ds, analyze_all(ds, par, cfg)}};
  std::vector<DatasetAnalysis> b{{&ds, analyze_all_serial(ds, ser, cfg)}};
  CHECK(report_csv(build_report(a, cfg)) == report_csv(build_report(b, cfg)));
}

TEST_CASE("run is byte-identical across reruns and worker counts") {
  TempDir tmp("determinism");
  auto file = testutil::write_synth_corpus(small_spec(), tmp.path / "data");
  auto cfg = small_config(file, tmp.path / "one");
  run_pipeline(cfg);
  auto first = testutil::read_tree(cfg.output_dir);
  cfg.output_dir = tmp.path / "two";
  cfg.workers = 8;
  run_pipeline(cfg);
  CHECK(first == testutil::read_tree(cfg.output_dir));
  CHECK(first.count("manifest.json") == 1);
  CHECK(first.count("fig2a.csv") == 1);
  CHECK(first.count("topics/topics.csv") == 1);
}

TEST_CASE("staged run equals monolithic run") {
  TempDir tmp("stages");
  auto file = testutil::write_synth_corpus(small_spec(), tmp.path / "data");
  auto cfg = small_config(file, tmp.path / "mono");
  run_pipeline(cfg);
  cfg.output_dir = tmp.path / "staged";
  stage_detect_topics(cfg);
  stage_stats(cfg);
  CHECK(testutil::read_tree(tmp.path / "mono") == testutil::read_tree(tmp.path / "staged"));

  stage_decompose(cfg);
  stage_shuffle(cfg);
  CHECK(std::filesystem::exists(cfg.output_dir / "decompose" / "synth" / "F0001.csv"));
  CHECK(std::filesystem::exists(cfg.output_dir / "shuffle" / "summary.csv"));
  stage_report(cfg.output_dir);
  CHECK(std::filesystem::exists(cfg.output_dir / "report.md"));
  CHECK(std::filesystem::exists(cfg.output_dir / "index.csv"));
}

TEST_CASE("stage dependencies are enforced") {
  TempDir tmp("deps");
  auto file = testutil::write_synth_corpus(small_spec(), tmp.path / "data");
  auto cfg = small_config(file, tmp.path / "out");
  CHECK_THROWS_AS(stage_stats(cfg), DependencyError);
  CHECK_THROWS_AS(stage_decompose(cfg), DependencyError);
  CHECK_THROWS_AS(stage_report(cfg.output_dir), DependencyError);

  stage_detect_topics(cfg);
  auto other = cfg;
  other.topic_threshold = 0.1;
  CHECK_THROWS_AS(stage_stats(other), DependencyError);
  other = cfg;
  other.seed = 8;
  CHECK_THROWS_AS(stage_stats(other), DependencyError);
  CHECK_NOTHROW(stage_stats(cfg));
}

TEST_CASE("configuration errors") {
  TempDir tmp("config");
  auto file = testutil::write_synth_corpus(small_spec(), tmp.path / "data");
  auto cfg = small_config(file, tmp.path / "out");
  cfg.min_papers = 1000;
  CHECK_THROWS_WITH_AS(run_pipeline(cfg), doctest::Contains("zero focal scientists"),
                       ValidationError);
  cfg = small_config(file, tmp.path / "out");
  cfg.seed.reset();
  CHECK_THROWS_AS(run_pipeline(cfg), ValidationError);
  cfg = small_config(file, tmp.path / "out");
  cfg.topic_threshold = 1.0;
  CHECK_THROWS_AS(run_pipeline(cfg), ValidationError);
  cfg = small_config(file, tmp.path / "out");
  cfg.top_k = {0.0};
  CHECK_THROWS_AS(run_pipeline(cfg), ValidationError);
  cfg = small_config(tmp.path / "missing.jsonl", tmp.path / "out");
  CHECK_THROWS_AS(run_pipeline(cfg), Error);
}

TEST_CASE("bundle contents") {
  TempDir tmp("bundle");
  auto file = testutil::write_synth_corpus(small_spec(), tmp.path / "data");
  auto cfg = small_config(file, tmp.path / "out");
  cfg.export_intermediates = true;
  auto rep = run_pipeline(cfg);
  for (const char* name : {"fig2a", "fig2b", "fig2c", "fig2d", "fig2e", "fig2f", "fig3a", "fig3b",
                           "fig3c", "fig3d", "fig3e", "fig3f", "fig4a", "fig4b", "fig4c", "fig4d",
                           "fig5a", "fig5b", "fig5c", "fig5d", "fig5e", "fig5f", "fig6a", "fig6b",
                           "fig6c", "fig6d", "figS3", "figS4", "figS7", "figS8", "tableS1"}) {
    CHECK_MESSAGE(rep.find(name) != nullptr, name);
  }
  const auto* fig5a = rep.find("fig5a");
  CHECK(fig5a->columns ==
        std::vector<std::string>{"bin_low", "bin_high", "mode", "probability", "ci_low", "ci_high", "n"});

  // with the surrogate on, topic-count tables carry both series
  std::set<std::string> series;
  for (const auto& row : rep.find("fig2a")->rows) series.insert(format_cell(row[0]));
  CHECK(series == std::set<std::string>{"real", "surrogate"});

  std::ifstream mf(cfg.output_dir / "manifest.json");
  auto m = nlohmann::json::parse(mf);
  CHECK(m["seed"] == 7);
  CHECK(m["datasets"][0]["focal_scientists"] == 12);
  CHECK(m["config"].contains("min_copub"));
  CHECK_FALSE(m["config"].contains("workers"));
  CHECK(std::filesystem::exists(cfg.output_dir / "intermediates" / "synth" / "F0001" / "cociting.csv"));
}

TEST_CASE("ingest-validate reports rejected records") {
  TempDir tmp("ingest");
  auto file = tmp.path / "bad.jsonl";
  {
    std::ofstream out(file);
    out << R"({"paper_id":"a","year":2000,"author_ids":["x"],"reference_ids":[],"c10":1})" << '\n'
        << "garbage\n";
  }
  RunConfig cfg;
  cfg.inputs = {{file.string(), ""}};
  cfg.output_dir = tmp.path / "out";
  cfg.min_papers = 1;
  auto sum = stage_ingest_validate(cfg);
  CHECK(sum.records == 2);
  CHECK(sum.rejected == 1);
  CHECK(sum.focal == 1);
  auto tree = testutil::read_tree(cfg.output_dir);
  CHECK(tree.at("ingest/diagnostics.csv").find("bad,2,") != std::string::npos);
}
