// collabtopics: collaborator topic-involvement analysis from the command line.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "collab/error.hpp"
#include "collab/stages.hpp"
#include "collab/synth.hpp"

using namespace collab;

namespace {

constexpr int kExitOther = 1;
constexpr int kExitValidation = 2;
constexpr int kExitDependency = 3;

std::string default_output_dir() {
  const char* env = std::getenv("COLLAB_OUTPUT_DIR");
  return env && *env ? env : "collab_out";
}

// `path[:label]`; a label may not contain '/'.
InputSpec parse_input(const std::string& arg) {
  auto colon = arg.rfind(':');
  if (colon != std::string::npos && colon + 1 < arg.size() &&
      arg.find('/', colon) == std::string::npos) {
    return {arg.substr(0, colon), arg.substr(colon + 1)};
  }
  return {arg, ""};
}

struct Options {
  std::vector<std::string> inputs;
  std::string out = default_output_dir();
  std::optional<std::uint64_t> seed;
  RunConfig config;
  bool unweighted = false;
  bool exclude_minor = false;

  RunConfig finish() {
    RunConfig c = config;
    for (const auto& i : inputs) c.inputs.push_back(parse_input(i));
    c.output_dir = out;
    c.seed = seed;
    c.count_minor_papers = !exclude_minor;
    if (unweighted) c.weighted = false;
    return c;
  }
};

void add_input_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("-i,--input", o.inputs, "corpus file (JSONL or .csv), optionally path:label")
      ->required();
  cmd->add_option("-o,--out", o.out, "output directory (default $COLLAB_OUTPUT_DIR)");
  cmd->add_option("--min-papers", o.config.min_papers, "papers needed to be a focal scientist");
  cmd->add_option("--min-year", o.config.validation.min_year, "earliest valid year");
  cmd->add_option("--max-year", o.config.validation.max_year, "latest valid year");
}

void add_topic_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("-s,--seed", o.seed, "global seed (required)");
  cmd->add_option("-j,--workers", o.config.workers, "worker threads");
  cmd->add_option("--threshold", o.config.topic_threshold, "minimum topic share of papers");
  auto* w = cmd->add_flag("--weighted", o.config.weighted, "weight edges by shared references");
  cmd->add_flag("--unweighted", o.unweighted, "binary co-citing edges (default)")->excludes(w);
}

void add_analysis_flags(CLI::App* cmd, Options& o) {
  auto& c = o.config;
  cmd->add_option("--min-copub-low", c.min_copub_low, "lower co-publication filter");
  cmd->add_option("--min-copub-high", c.min_copub_high, "higher co-publication filter");
  cmd->add_flag("--exclude-minor-copub", o.exclude_minor,
                "do not count minor-community papers toward co-publications");
  cmd->add_option("--rounds-factor", c.rounds_factor, "swap attempts per link");
  cmd->add_flag("--surrogate", c.surrogate, "also analyze the time-controlled reshuffle");
  cmd->add_option("--recent-years", c.recent_years, "calendar years in the recent window");
  cmd->add_option("--join-min-copub", c.join_min_copub,
                  "joint papers before a topic start to count as existing");
  cmd->add_option("--top-k", c.top_k, "top-k percent groups");
  cmd->add_option("--cohort-window", c.cohort_window, "career years kept for cohorts");
  cmd->add_option("--cohort-bin", c.cohort_bin_width, "cohort width in years");
  cmd->add_option("--n-rewires", c.n_rewires, "degree-preserving rewires for Q_rand");
  cmd->add_flag("--export-intermediates", c.export_intermediates,
                "write per-scientist networks, topics and collaborators");
}

void add_synth_flags(CLI::App* cmd, SynthSpec& s, std::string& out) {
  cmd->add_option("-o,--out", out, "output directory")->required();
  cmd->add_option("-s,--seed", s.seed, "generator seed")->required();
  cmd->add_option("--n-focal", s.n_focal);
  cmd->add_option("--topics", s.topics_per_focal);
  cmd->add_option("--pool-size", s.pool_size);
  cmd->add_option("--papers-per-topic", s.papers_per_topic);
  cmd->add_option("--papers-jitter", s.papers_jitter);
  cmd->add_option("--refs-per-paper", s.refs_per_paper);
  cmd->add_option("--collaborators-per-topic", s.collaborators_per_topic);
  cmd->add_option("--multi-topic-fraction", s.multi_topic_fraction);
  cmd->add_option("--coauthors-min", s.coauthors_min);
  cmd->add_option("--coauthors-max", s.coauthors_max);
  cmd->add_option("--year-start", s.year_start);
  cmd->add_option("--year-end", s.year_end);
  cmd->add_option("--career-years", s.career_years);
  cmd->add_option("--topic-stagger", s.topic_stagger);
  cmd->add_option("--pool-overlap", s.pool_overlap);
  cmd->add_option("--collaborator-own-papers", s.collaborator_own_papers);
  cmd->add_option("--newcomer-fraction", s.newcomer_fraction);
  cmd->add_option("--c10-mean", s.c10_mean);
  cmd->add_option("--impact-spread", s.impact_spread);
}

void write_synth(const SynthSpec& spec, const std::filesystem::path& dir) {
  auto sc = generate(spec);
  std::filesystem::create_directories(dir);
  std::ofstream corpus(dir / "corpus.jsonl", std::ios::binary);
  write_corpus_jsonl(sc.corpus, corpus);
  std::ofstream truth(dir / "ground_truth.json", std::ios::binary);
  write_ground_truth_json(sc.truth, spec, truth);
  if (!corpus || !truth) throw Error("cannot write to " + dir.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collaborator topic-involvement analysis"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Options run_o, ingest_o, topics_o, decomp_o, shuffle_o, stats_o;
  auto* run = app.add_subcommand("run", "full pipeline: topics, statistics, manifest");
  add_input_flags(run, run_o);
  add_topic_flags(run, run_o);
  add_analysis_flags(run, run_o);

  auto* ingest = app.add_subcommand("ingest-validate", "validate inputs and profile authors");
  add_input_flags(ingest, ingest_o);

  auto* topics = app.add_subcommand("detect-topics", "detect topics of each focal scientist");
  add_input_flags(topics, topics_o);
  add_topic_flags(topics, topics_o);

  auto* decomp = app.add_subcommand("decompose", "per-collaborator series from detected topics");
  add_input_flags(decomp, decomp_o);
  add_topic_flags(decomp, decomp_o);
  add_analysis_flags(decomp, decomp_o);

  auto* shuffle = app.add_subcommand("shuffle", "time-controlled reshuffle of authorship links");
  add_input_flags(shuffle, shuffle_o);
  add_topic_flags(shuffle, shuffle_o);
  add_analysis_flags(shuffle, shuffle_o);

  auto* stats = app.add_subcommand("stats", "statistics bundle from detected topics");
  add_input_flags(stats, stats_o);
  add_topic_flags(stats, stats_o);
  add_analysis_flags(stats, stats_o);

  SynthSpec spec;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus with ground truth");
  add_synth_flags(synth, spec, synth_out);

  std::string report_out = default_output_dir();
  auto* report = app.add_subcommand("report", "render a bundle into index.csv and report.md");
  report->add_option("-o,--out", report_out, "bundle directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  try {
    if (*run) {
      run_pipeline(run_o.finish());
    } else if (*ingest) {
      auto sum = stage_ingest_validate(ingest_o.finish());
      std::cout << sum.records << " records, " << sum.rejected << " rejected, " << sum.focal
                << " focal scientists\n";
      if (sum.rejected > 0) {
        std::cerr << "validation failed; see ingest/diagnostics.csv\n";
        return kExitValidation;
      }
    } else if (*topics) {
      stage_detect_topics(topics_o.finish());
    } else if (*decomp) {
      stage_decompose(decomp_o.finish());
    } else if (*shuffle) {
      stage_shuffle(shuffle_o.finish());
    } else if (*stats) {
      stage_stats(stats_o.finish());
    } else if (*synth) {
      write_synth(spec, synth_out);
    } else if (*report) {
      stage_report(report_out);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DependencyError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDependency;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
  return 0;
}
