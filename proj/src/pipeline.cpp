#include "collab/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>

#include "collab/cociting.hpp"
#include "collab/error.hpp"
#include "collab/rng.hpp"
#include "json.hpp"

namespace collab {

namespace fs = std::filesystem;

void RunConfig::validate() const {
  auto bad = [](const std::string& what) { throw ValidationError("invalid config: " + what); };
  if (inputs.empty()) bad("no input corpus given");
  if (min_papers < 1) bad("min_papers must be >= 1");
  if (!(topic_threshold > 0.0 && topic_threshold < 1.0)) bad("topic_threshold must lie in (0, 1)");
  if (min_copub_low < 1 || min_copub_high < 1) bad("min_copub filters must be >= 1");
  if (rounds_factor < 1) bad("rounds_factor must be >= 1");
  if (recent_years < 1) bad("recent window must cover at least one year");
  if (join_min_copub < 1) bad("join_min_copub must be >= 1");
  for (double k : top_k) {
    if (!(k > 0.0 && k <= 100.0)) bad("top-k percentages must lie in (0, 100]");
  }
  if (cohort_window < 1) bad("cohort window must be >= 1 year");
  if (cohort_bin_width < 1) bad("cohort bin width must be >= 1 year");
  if (n_rewires < 1) bad("n_rewires must be >= 1");
  if (workers < 1) bad("workers must be >= 1");
  if (!seed) bad("a seed is required for the randomized steps");
}

std::uint64_t RunConfig::require_seed() const {
  if (!seed) throw ValidationError("invalid config: a seed is required for the randomized steps");
  return *seed;
}

std::vector<Dataset> load_datasets(const RunConfig& config) {
  std::vector<Dataset> out;
  for (const auto& in : config.inputs) {
    Dataset ds;
    ds.name = in.dataset.empty() ? fs::path(in.path).stem().string() : in.dataset;
    auto loaded = load_corpus_file(in.path, config.validation);
    ds.corpus = std::move(loaded.corpus);
    ds.rejected = std::move(loaded.rejected);
    for (const auto& id : select_focal(ds.corpus, config.min_papers)) {
      ds.focal.push_back(*ds.corpus.find_author(id));
    }
    if (ds.focal.empty()) {
      throw ValidationError("zero focal scientists in '" + ds.name + "' with at least " +
                            std::to_string(config.min_papers) + " papers");
    }
    out.push_back(std::move(ds));
  }
  return out;
}

namespace {

std::string work_key(const char* stage, const Dataset& ds, AuthorIdx a) {
  return std::string(stage) + '/' + ds.name + '/' + ds.corpus.author_id(a);
}

// Runs body(i) for i in [0, n) on `workers` threads; rethrows the first
// exception by index so failures are reported deterministically.
template <typename Body>
void parallel_for(std::size_t n, int workers, Body body) {
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (std::size_t i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

TopicOptions topic_options(const RunConfig& config) {
  return {config.topic_threshold, config.weighted};
}

AuthorshipBipartite truncate_bipartite(const AuthorshipBipartite& bip, int end_year) {
  AuthorshipBipartite out;
  out.focal = bip.focal;
  out.collaborators = bip.collaborators;
  std::vector<std::int64_t> remap(bip.papers.size(), -1);
  for (std::size_t p = 0; p < bip.papers.size(); ++p) {
    if (bip.papers[p].year < end_year) {
      remap[p] = static_cast<std::int64_t>(out.papers.size());
      out.papers.push_back(bip.papers[p]);
    }
  }
  for (auto [c, p] : bip.links) {
    if (remap[p] >= 0) out.links.emplace_back(c, static_cast<std::uint32_t>(remap[p]));
  }
  return out;
}

FocalAnalysis::Decomposition decompose_all(const Corpus& corpus, const AuthorshipBipartite& bip,
                                           int cohort_end, const RunConfig& config) {
  FocalAnalysis::Decomposition d;
  auto stats_at = [&](const AuthorshipBipartite& b, int min_copub) {
    return collaborator_stats(decompose(corpus, b, {min_copub, config.count_minor_papers}));
  };
  d.all = decompose(corpus, bip, {1, true});
  d.low = stats_at(bip, config.min_copub_low);
  d.high = stats_at(bip, config.min_copub_high);
  auto cohort = truncate_bipartite(bip, cohort_end);
  d.cohort_all = decompose(corpus, cohort, {1, true});
  d.cohort_low = stats_at(cohort, config.min_copub_low);
  d.cohort_high = stats_at(cohort, config.min_copub_high);
  return d;
}

}  // namespace

std::vector<TopicAssignment> detect_all_topics(const Dataset& ds, const RunConfig& config) {
  const auto seed = config.require_seed();
  std::vector<TopicAssignment> out(ds.focal.size());
  parallel_for(ds.focal.size(), config.workers, [&](std::size_t i) {
    out[i] = detect_topics(ds.corpus, ds.focal[i],
                           derive_seed(seed, work_key("topics", ds, ds.focal[i])),
                           topic_options(config));
  });
  return out;
}

std::vector<TopicAssignment> detect_all_topics_serial(const Dataset& ds, const RunConfig& config) {
  const auto seed = config.require_seed();
  std::vector<TopicAssignment> out;
  for (auto a : ds.focal) {
    out.push_back(detect_topics(ds.corpus, a, derive_seed(seed, work_key("topics", ds, a)),
                                topic_options(config)));
  }
  return out;
}

FocalAnalysis analyze_focal(const Dataset& ds, const TopicAssignment& ta, const RunConfig& config) {
  const auto seed = config.require_seed();
  const auto& corpus = ds.corpus;
  FocalAnalysis fa;
  fa.record.profile = profile(corpus, ta.owner);
  fa.record.n_topics = ta.n_topics();
  fa.series = colored_series(corpus, ta);

  auto bip = build_bipartite(corpus, ta.owner, fa.series);
  fa.n_collaborators = static_cast<int>(bip.collaborators.size());
  const int cohort_end = fa.record.profile.career_start_year + config.cohort_window;
  fa.real = decompose_all(corpus, bip, cohort_end, config);

  if (config.surrogate) {
    auto shuffled = reshuffle_time_controlled(bip, config.rounds_factor,
                                              derive_seed(seed, work_key("shuffle", ds, ta.owner)));
    fa.shuffle_accepted = shuffled.accepted;
    fa.surrogate = decompose_all(corpus, shuffled.bipartite, cohort_end, config);
  }

  fa.join = join_events(fa.series, ta, fa.real.all,
                        {config.join_min_copub, config.recent_years});

  auto net = build_collab_network(corpus, bip);
  if (!net.edges.empty()) {
    fa.q = q_significance(net, config.n_rewires,
                          derive_seed(seed, work_key("collab-q", ds, ta.owner)),
                          config.rounds_factor);
  }

  auto sim = similarity_profile(corpus, ta.owner, fa.real.all);
  fa.sim_overall = sim.mean_overall;
  fa.sim_before = sim.mean_before;
  fa.initial = initial_collaborator_features(corpus, fa.real.all);
  return fa;
}

std::vector<FocalAnalysis> analyze_all(const Dataset& ds, std::span<const TopicAssignment> topics,
                                       const RunConfig& config) {
  std::vector<FocalAnalysis> out(topics.size());
  parallel_for(topics.size(), config.workers,
               [&](std::size_t i) { out[i] = analyze_focal(ds, topics[i], config); });
  return out;
}

std::vector<FocalAnalysis> analyze_all_serial(const Dataset& ds,
                                              std::span<const TopicAssignment> topics,
                                              const RunConfig& config) {
  std::vector<FocalAnalysis> out;
  out.reserve(topics.size());
  for (const auto& ta : topics) out.push_back(analyze_focal(ds, ta, config));
  return out;
}

// ---------------------------------------------------------------------------
// Report tables

namespace {

struct Summary {
  std::size_t n = 0;
  std::optional<double> mean;
  std::optional<double> se;
};

Summary summarize(std::span<const double> xs) {
  Summary s;
  s.n = xs.size();
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  s.mean = mean;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    s.se = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  }
  return s;
}

using Decomp = FocalAnalysis::Decomposition;
using StatsOf = const CollaboratorStats& (*)(const Decomp&);

const CollaboratorStats& low_of(const Decomp& d) { return d.low; }
const CollaboratorStats& high_of(const Decomp& d) { return d.high; }
const CollaboratorStats& cohort_low_of(const Decomp& d) { return d.cohort_low; }
const CollaboratorStats& cohort_high_of(const Decomp& d) { return d.cohort_high; }

struct SeriesKind {
  const char* name;
  bool surrogate;
};

std::vector<SeriesKind> series_kinds(const RunConfig& config) {
  std::vector<SeriesKind> out{{"real", false}};
  if (config.surrogate) out.push_back({"surrogate", true});
  return out;
}

const Decomp& pick(const FocalAnalysis& fa, bool surrogate) {
  return surrogate ? *fa.surrogate : fa.real;
}

std::vector<double> single_fractions(std::span<const FocalAnalysis* const> group, bool surrogate,
                                     StatsOf which) {
  std::vector<double> out;
  for (const auto* fa : group) {
    const auto& st = which(pick(*fa, surrogate));
    if (!st.empty()) out.push_back(st.fraction_single);
  }
  return out;
}

std::vector<const FocalAnalysis*> all_of(std::span<const FocalAnalysis> focal) {
  std::vector<const FocalAnalysis*> out;
  for (const auto& fa : focal) out.push_back(&fa);
  return out;
}

std::vector<FocalRecord> records_of(std::span<const FocalAnalysis* const> group) {
  std::vector<FocalRecord> out;
  for (const auto* fa : group) out.push_back(fa->record);
  return out;
}

// Members of `group` whose stratify label equals `label`.
std::vector<const FocalAnalysis*> members(std::span<const FocalAnalysis* const> group,
                                          const std::map<std::string, int>& labels, int label) {
  std::vector<const FocalAnalysis*> out;
  for (const auto* fa : group) {
    if (labels.at(fa->record.profile.author_id) == label) out.push_back(fa);
  }
  return out;
}

std::string group_label(StratKey key) {
  return key == StratKey::productivity ? "productive" : "impactful";
}

std::string key_label(StratKey key) {
  switch (key) {
    case StratKey::productivity: return "productivity";
    case StratKey::impact: return "impact";
    case StratKey::career_start: return "career_start";
    case StratKey::career_stage: return "career_stage";
    case StratKey::n_topics: return "n_topics";
  }
  return "";
}

std::optional<KsResult> try_ks(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return std::nullopt;
  return ks_test(a, b);
}

void add_ks_cells(std::vector<Cell>& row, const std::optional<KsResult>& ks) {
  if (ks) {
    row.push_back(ks->d);
    row.push_back(ks->p);
    row.push_back(p_stars(ks->p));
  } else {
    row.insert(row.end(), {Cell{}, Cell{}, Cell{}});
  }
}

std::optional<double> try_tau(std::span<const double> x, std::span<const double> y) {
  try {
    return kendall_tau(x, y).value;
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

std::vector<const std::vector<CollaboratorSeries>*> lists_of(
    std::span<const FocalAnalysis* const> group, bool surrogate, bool cohort) {
  std::vector<const std::vector<CollaboratorSeries>*> out;
  for (const auto* fa : group) {
    const auto& d = pick(*fa, surrogate);
    out.push_back(cohort ? &d.cohort_all : &d.all);
  }
  return out;
}

// Copies the referenced lists, applying a co-publication filter.
std::vector<std::vector<CollaboratorSeries>> filtered(
    std::span<const std::vector<CollaboratorSeries>* const> lists, int min_copub) {
  std::vector<std::vector<CollaboratorSeries>> out;
  for (const auto* l : lists) {
    auto& v = out.emplace_back();
    for (const auto& cs : *l) {
      if (cs.n_copub >= min_copub) v.push_back(cs);
    }
  }
  return out;
}

void add_copub_rows(Table& t, std::vector<Cell> prefix,
                    std::span<const std::vector<CollaboratorSeries>> lists, bool fraction) {
  for (const auto& r : topics_vs_copub(lists)) {
    auto row = prefix;
    row.push_back(r.bin_low);
    row.push_back(r.bin_high);
    row.push_back(r.n);
    if (r.n == 0) {
      row.insert(row.end(), {Cell{}, Cell{}});
    } else if (fraction) {
      row.push_back(r.fraction_single);
      row.push_back(r.se_fraction);
    } else {
      row.push_back(r.mean_topics);
      row.push_back(r.se_topics);
    }
    t.add(std::move(row));
  }
}

std::vector<CollaboratorStats> stats_list(std::span<const FocalAnalysis* const> group,
                                          bool surrogate, StatsOf which) {
  std::vector<CollaboratorStats> out;
  for (const auto* fa : group) out.push_back(which(pick(*fa, surrogate)));
  return out;
}

void scientists_table(StatReport& rep, std::span<const FocalAnalysis> focal, const RunConfig& cfg) {
  Table t{"scientists",
          {"author_id", "paper_count", "mean_c10", "career_start_year", "career_years",
           "n_topics", "n_collaborators", "fraction_single_low", "fraction_single_high",
           "surrogate_fraction_single_low", "surrogate_fraction_single_high", "q_real",
           "q_rand", "q_ratio", "jaccard_before", "jaccard_overall"},
          {}};
  auto frac = [](const CollaboratorStats& st) {
    return st.empty() ? Cell{} : Cell{st.fraction_single};
  };
  for (const auto& fa : focal) {
    const auto& p = fa.record.profile;
    std::vector<Cell> row{p.author_id, p.paper_count, p.mean_c10, p.career_start_year,
                          p.career_years, fa.record.n_topics, fa.n_collaborators,
                          frac(fa.real.low), frac(fa.real.high)};
    if (cfg.surrogate) {
      row.push_back(frac(fa.surrogate->low));
      row.push_back(frac(fa.surrogate->high));
    } else {
      row.insert(row.end(), {Cell{}, Cell{}});
    }
    if (fa.q) {
      row.insert(row.end(), {fa.q->q_real, fa.q->q_rand_mean, fa.q->ratio});
    } else {
      row.insert(row.end(), {Cell{}, Cell{}, Cell{}});
    }
    row.push_back(fa.sim_before ? Cell{fa.sim_before->jaccard} : Cell{});
    row.push_back(fa.sim_overall ? Cell{fa.sim_overall->jaccard} : Cell{});
    t.add(std::move(row));
  }
  rep.add(std::move(t));
}

// fig2a/2c: pooled n_topics distribution; fig2b/2d: histogram of per-focal
// single-topic fractions.
void fig2_distributions(StatReport& rep, std::span<const FocalAnalysis* const> group,
                        const RunConfig& cfg) {
  struct Panel {
    const char* dist;
    const char* hist;
    int min_copub;
    StatsOf which;
  };
  for (const auto& panel : {Panel{"fig2a", "fig2b", cfg.min_copub_low, low_of},
                            Panel{"fig2c", "fig2d", cfg.min_copub_high, high_of}}) {
    Table dist{panel.dist, {"series", "min_copub", "n_topics", "fraction"}, {}};
    Table hist{panel.hist,
               {"series", "min_copub", "bin_low", "bin_high", "n_scientists", "share"},
               {}};
    for (const auto& kind : series_kinds(cfg)) {
      auto stats = stats_list(group, kind.surrogate, panel.which);
      bool any = std::any_of(stats.begin(), stats.end(), [](const auto& s) { return !s.empty(); });
      if (any) {
        for (auto [k, v] : pooled_topic_distribution(stats)) {
          dist.add({kind.name, panel.min_copub, k, v});
        }
      }
      auto fr = single_fractions(group, kind.surrogate, panel.which);
      std::vector<int> counts(10, 0);
      for (double f : fr) ++counts[std::min(9, static_cast<int>(std::floor(f * 10.0)))];
      for (int b = 0; b < 10; ++b) {
        hist.add({kind.name, panel.min_copub, b / 10.0, (b + 1) / 10.0, counts[b],
                  fr.empty() ? Cell{} : Cell{static_cast<double>(counts[b]) / fr.size()}});
      }
    }
    rep.add(std::move(dist));
    rep.add(std::move(hist));
  }
}

void fig2_copub(StatReport& rep, std::span<const FocalAnalysis* const> group, const RunConfig& cfg) {
  Table e{"fig2e", {"series", "bin_low", "bin_high", "n", "mean_topics", "se"}, {}};
  Table f{"fig2f", {"series", "bin_low", "bin_high", "n", "fraction_single", "se"}, {}};
  for (const auto& kind : series_kinds(cfg)) {
    auto lists = filtered(lists_of(group, kind.surrogate, false), 1);
    add_copub_rows(e, {kind.name}, lists, false);
    add_copub_rows(f, {kind.name}, lists, true);
  }
  rep.add(std::move(e));
  rep.add(std::move(f));
}

void fig3(StatReport& rep, std::span<const FocalAnalysis* const> group, const RunConfig& cfg) {
  auto records = records_of(group);

  Table a{"fig3a", {"statistic", "x", "y", "value", "n"}, {}};
  std::vector<double> prod, imp, topics;
  for (const auto& r : records) {
    prod.push_back(r.profile.paper_count);
    imp.push_back(r.profile.mean_c10);
    topics.push_back(r.n_topics);
  }
  auto pearson_row = [&](const char* xn, const char* yn, std::span<const double> x,
                         std::span<const double> y) {
    try {
      auto r = pearson_r(x, y);
      a.add({"pearson_r", xn, yn, r.value, r.n});
    } catch (const DomainError&) {
      a.add({"pearson_r", xn, yn, Cell{}, x.size()});
    }
  };
  pearson_row("paper_count", "mean_c10", prod, imp);
  pearson_row("mean_c10", "n_topics", imp, topics);
  rep.add(std::move(a));

  Table b{"fig3b", {"top_k", "group", "bin_low", "bin_high", "n", "fraction_single", "se"}, {}};
  Table c{"fig3c", {"top_k", "group", "n_topics", "fraction"}, {}};
  Table cks{"fig3c_ks", {"top_k", "n_productive", "n_impactful", "ks_d", "ks_p", "stars"}, {}};
  for (double k : cfg.top_k) {
    std::vector<std::vector<double>> fracs;
    for (auto key : {StratKey::productivity, StratKey::impact}) {
      auto top = members(group, stratify(records, key, TopPercent{k}), 1);
      auto lists = filtered(lists_of(top, false, false), 1);
      add_copub_rows(b, {k, group_label(key)}, lists, true);
      auto stats = stats_list(top, false, high_of);
      if (std::any_of(stats.begin(), stats.end(), [](const auto& s) { return !s.empty(); })) {
        for (auto [n, v] : pooled_topic_distribution(stats)) c.add({k, group_label(key), n, v});
      }
      fracs.push_back(single_fractions(top, false, high_of));
    }
    std::vector<Cell> row{k, fracs[0].size(), fracs[1].size()};
    add_ks_cells(row, try_ks(fracs[0], fracs[1]));
    cks.add(std::move(row));
  }
  rep.add(std::move(b));
  rep.add(std::move(c));
  rep.add(std::move(cks));

  // fig3d/3e: single-topic share by decile of one key, with Kendall tau
  // against that key inside deciles of the other.
  struct Panel {
    const char* name;
    StratKey key;
    StratKey fixed;
  };
  for (const auto& panel : {Panel{"fig3d", StratKey::productivity, StratKey::impact},
                            Panel{"fig3e", StratKey::impact, StratKey::productivity}}) {
    Table t{panel.name, {key_label(panel.key) + "_decile", "n", "mean_fraction_single", "se"}, {}};
    auto deciles = stratify(records, panel.key, Deciles{});
    for (int d = 0; d < 10; ++d) {
      auto fr = single_fractions(members(group, deciles, d), false, high_of);
      auto s = summarize(fr);
      t.add({d, s.n, cell(s.mean), cell(s.se)});
    }
    rep.add(std::move(t));

    Table tau{std::string(panel.name) + "_tau",
              {key_label(panel.fixed) + "_decile", "n", "kendall_tau"},
              {}};
    auto fixed = stratify(records, panel.fixed, Deciles{});
    auto tau_of = [&](std::span<const FocalAnalysis* const> sub) {
      std::vector<double> x, y;
      for (const auto* fa : sub) {
        if (fa->real.high.empty()) continue;
        x.push_back(strat_value(fa->record, panel.key));
        y.push_back(fa->real.high.fraction_single);
      }
      return std::pair{x.size(), try_tau(x, y)};
    };
    for (int d = 0; d < 10; ++d) {
      auto [n, v] = tau_of(members(group, fixed, d));
      tau.add({std::to_string(d), n, cell(v)});
    }
    auto [n, v] = tau_of(group);
    tau.add({"all", n, cell(v)});
    rep.add(std::move(tau));
  }

  Table f{"fig3f", {"n_topics", "n", "mean_fraction_single", "se"}, {}};
  std::map<int, std::vector<double>> by_topics;
  for (const auto* fa : group) {
    if (!fa->real.high.empty()) by_topics[fa->record.n_topics].push_back(fa->real.high.fraction_single);
  }
  for (const auto& [nt, fr] : by_topics) {
    auto s = summarize(fr);
    f.add({nt, s.n, cell(s.mean), cell(s.se)});
  }
  rep.add(std::move(f));
}

void fig4(StatReport& rep, std::span<const FocalAnalysis* const> group) {
  Table a{"fig4a", {"author_id", "q_real", "q_rand", "ratio"}, {}};
  for (const auto* fa : group) {
    if (!fa->q) continue;
    a.add({fa->record.profile.author_id, fa->q->q_real, fa->q->q_rand_mean, fa->q->ratio});
  }
  rep.add(std::move(a));

  Table b{"fig4b", {"bin_low", "bin_high", "n_scientists", "share"}, {}};
  std::vector<double> sims;
  for (const auto* fa : group) {
    if (fa->sim_before) sims.push_back(fa->sim_before->jaccard);
  }
  constexpr int kBins = 20;
  std::vector<int> counts(kBins, 0);
  for (double s : sims) ++counts[std::min(kBins - 1, static_cast<int>(std::floor(s * kBins)))];
  for (int i = 0; i < kBins; ++i) {
    b.add({static_cast<double>(i) / kBins, static_cast<double>(i + 1) / kBins, counts[i],
           sims.empty() ? Cell{} : Cell{static_cast<double>(counts[i]) / sims.size()}});
  }
  rep.add(std::move(b));

  auto records = records_of(group);
  Table c{"fig4c", {"key", "decile", "n", "mean_q_ratio", "se"}, {}};
  Table d{"fig4d", {"key", "decile", "n", "mean_jaccard_before", "se"}, {}};
  for (auto key : {StratKey::productivity, StratKey::impact}) {
    auto deciles = stratify(records, key, Deciles{});
    for (int dec = 0; dec < 10; ++dec) {
      std::vector<double> ratios, jac;
      for (const auto* fa : members(group, deciles, dec)) {
        if (fa->q && std::isfinite(fa->q->ratio)) ratios.push_back(fa->q->ratio);
        if (fa->sim_before) jac.push_back(fa->sim_before->jaccard);
      }
      auto sr = summarize(ratios);
      auto sj = summarize(jac);
      c.add({key_label(key), dec, sr.n, cell(sr.mean), cell(sr.se)});
      d.add({key_label(key), dec, sj.n, cell(sj.mean), cell(sj.se)});
    }
  }
  rep.add(std::move(c));
  rep.add(std::move(d));
}

void add_join_rows(Table& t, std::span<const JoinEvent> events, JoinBinning binning) {
  for (auto mode : {JoinMode::overall, JoinMode::recent}) {
    if (events.empty()) continue;
    for (const auto& r : join_probability(events, mode, binning)) {
      t.add({r.bin_low, r.bin_high, to_string(mode), cell(r.probability), cell(r.ci_low),
             cell(r.ci_high), r.n});
    }
  }
}

std::vector<JoinEvent> events_of(std::span<const FocalAnalysis* const> group) {
  std::vector<JoinEvent> out;
  for (const auto* fa : group) out.insert(out.end(), fa->join.begin(), fa->join.end());
  return out;
}

void fig5(StatReport& rep, std::span<const FocalAnalysis* const> group) {
  const std::vector<std::string> cols{"bin_low", "bin_high", "mode", "probability",
                                      "ci_low", "ci_high", "n"};
  auto events = events_of(group);

  Table a{"fig5a", cols, {}};
  Table alog{"fig5a_log", cols, {}};
  Table b{"fig5b", cols, {}};
  Table e{"fig5e", cols, {}};
  add_join_rows(a, events, JoinBinning::past_copub);
  add_join_rows(alog, events, JoinBinning::past_copub_log);
  add_join_rows(b, events, JoinBinning::past_mean_c10);
  add_join_rows(e, events, JoinBinning::career_stage);

  Table pooled{"fig5a_pooled",
               {"mode", "probability", "ci_low", "ci_high", "n", "joiners", "per_focal_mean"},
               {}};
  for (auto mode : {JoinMode::overall, JoinMode::recent}) {
    auto r = join_probability_pooled(events, mode);
    pooled.add({to_string(mode), cell(r.probability), cell(r.ci_low), cell(r.ci_high), r.n,
                r.joiners, cell(join_probability_per_focal(events, mode))});
  }

  auto records = records_of(group);
  Table c{"fig5c", {"key", "decile", "mode", "kendall_tau", "n"}, {}};
  Table d{"fig5d", {"key", "decile", "mode", "kendall_tau", "n"}, {}};
  for (auto key : {StratKey::productivity, StratKey::impact}) {
    auto deciles = stratify(records, key, Deciles{});
    for (int dec = 0; dec < 10; ++dec) {
      auto ev = events_of(members(group, deciles, dec));
      for (auto mode : {JoinMode::overall, JoinMode::recent}) {
        for (auto [table, cov] : {std::pair{&c, JoinCovariate::past_copub},
                                  std::pair{&d, JoinCovariate::past_mean_c10}}) {
          auto tau = join_tau(ev, mode, cov);
          table->add({key_label(key), dec, to_string(mode),
                      tau ? Cell{tau->value} : Cell{},
                      join_probability_pooled(ev, mode).n});
        }
      }
    }
  }

  Table f{"fig5f", {"stage_low", "stage_high", "covariate", "mode", "kendall_tau", "n"}, {}};
  int max_stage = 0;
  for (const auto& ev : events) max_stage = std::max(max_stage, ev.career_stage);
  for (int lo = 0; lo <= max_stage; lo += 5) {
    std::vector<JoinEvent> sub;
    for (const auto& ev : events) {
      if (ev.career_stage >= lo && ev.career_stage < lo + 5) sub.push_back(ev);
    }
    for (auto [name, cov] : {std::pair{"past_copub", JoinCovariate::past_copub},
                             std::pair{"past_mean_c10", JoinCovariate::past_mean_c10}}) {
      for (auto mode : {JoinMode::overall, JoinMode::recent}) {
        auto tau = join_tau(sub, mode, cov);
        f.add({lo, lo + 5, name, to_string(mode), tau ? Cell{tau->value} : Cell{},
               join_probability_pooled(sub, mode).n});
      }
    }
  }
  for (auto* t : {&a, &alog, &pooled, &b, &c, &d, &e, &f}) rep.add(std::move(*t));
}

void fig6_cohorts(StatReport& rep, std::span<const FocalAnalysis* const> group,
                  const RunConfig& cfg) {
  auto records = records_of(group);
  auto cohorts = stratify(records, StratKey::career_start, YearBins{cfg.cohort_bin_width});
  std::vector<int> keys;
  for (const auto& [a, c] : cohorts) keys.push_back(c);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  Table a{"fig6a", {"cohort_start", "cohort_end", "series", "n", "mean_fraction_single", "se"}, {}};
  Table aks{"fig6a_ks", {"cohort_start", "cohort_end", "ks_d", "ks_p", "stars"}, {}};
  Table inset{"fig6a_inset", {"cohort_start", "cohort_end", "bin_low", "bin_high", "n",
                              "fraction_single", "se"}, {}};
  Table c{"fig6c", {"cohort_start", "cohort_end", "top_k", "group", "n", "mean_fraction_single", "se"}, {}};
  Table cks{"fig6c_ks", {"cohort_start", "cohort_end", "top_k", "ks_d", "ks_p", "stars"}, {}};
  for (int lo : keys) {
    const int hi = lo + cfg.cohort_bin_width;
    auto sub = members(group, cohorts, lo);
    std::vector<std::vector<double>> fr;
    for (const auto& kind : series_kinds(cfg)) {
      fr.push_back(single_fractions(sub, kind.surrogate, cohort_low_of));
      auto s = summarize(fr.back());
      a.add({lo, hi, kind.name, s.n, cell(s.mean), cell(s.se)});
    }
    std::vector<Cell> row{lo, hi};
    add_ks_cells(row, fr.size() == 2 ? try_ks(fr[0], fr[1]) : std::nullopt);
    aks.add(std::move(row));

    add_copub_rows(inset, {lo, hi}, filtered(lists_of(sub, false, true), 1), true);

    auto sub_records = records_of(sub);
    for (double k : cfg.top_k) {
      std::vector<std::vector<double>> gfr;
      for (auto key : {StratKey::productivity, StratKey::impact}) {
        auto top = members(sub, stratify(sub_records, key, TopPercent{k}), 1);
        gfr.push_back(single_fractions(top, false, cohort_high_of));
        auto s = summarize(gfr.back());
        c.add({lo, hi, k, group_label(key), s.n, cell(s.mean), cell(s.se)});
      }
      std::vector<Cell> krow{lo, hi, k};
      add_ks_cells(krow, try_ks(gfr[0], gfr[1]));
      cks.add(std::move(krow));
    }
  }
  for (auto* t : {&a, &aks, &inset, &c, &cks}) rep.add(std::move(*t));
}

void fig6_disciplines(StatReport& rep, std::span<const DatasetAnalysis> analyses,
                      const RunConfig& cfg) {
  Table b{"fig6b", {"dataset", "n_topics", "fraction"}, {}};
  Table inset{"fig6b_inset", {"dataset", "bin_low", "bin_high", "n", "fraction_single", "se"}, {}};
  Table d{"fig6d", {"dataset", "top_k", "group", "n", "mean_fraction_single", "se"}, {}};
  Table dks{"fig6d_ks", {"dataset", "top_k", "ks_d", "ks_p", "stars"}, {}};
  for (const auto& an : analyses) {
    const auto& name = an.dataset->name;
    auto group = all_of(an.focal);
    auto stats = stats_list(group, false, low_of);
    if (std::any_of(stats.begin(), stats.end(), [](const auto& s) { return !s.empty(); })) {
      for (auto [k, v] : pooled_topic_distribution(stats)) b.add({name, k, v});
    }
    add_copub_rows(inset, {name}, filtered(lists_of(group, false, false), 1), true);
    auto records = records_of(group);
    for (double k : cfg.top_k) {
      std::vector<std::vector<double>> gfr;
      for (auto key : {StratKey::productivity, StratKey::impact}) {
        auto top = members(group, stratify(records, key, TopPercent{k}), 1);
        gfr.push_back(single_fractions(top, false, high_of));
        auto s = summarize(gfr.back());
        d.add({name, k, group_label(key), s.n, cell(s.mean), cell(s.se)});
      }
      std::vector<Cell> row{name, k};
      add_ks_cells(row, try_ks(gfr[0], gfr[1]));
      dks.add(std::move(row));
    }
  }
  for (auto* t : {&b, &inset, &d, &dks}) rep.add(std::move(*t));
}

void fig_s3(StatReport& rep, std::span<const FocalAnalysis* const> group) {
  Table t{"figS3", {"n_topics", "n_real", "n_surrogate", "ks_d", "ks_p", "stars"}, {}};
  for (int k = 1; k <= 6; ++k) {
    std::vector<double> real, sur;
    for (const auto* fa : group) {
      auto share = [k](const CollaboratorStats& st) {
        auto it = st.distribution.find(k);
        return it == st.distribution.end() ? 0.0 : it->second;
      };
      if (!fa->real.low.empty()) real.push_back(share(fa->real.low));
      if (!fa->surrogate->low.empty()) sur.push_back(share(fa->surrogate->low));
    }
    std::vector<Cell> row{k, real.size(), sur.size()};
    add_ks_cells(row, try_ks(real, sur));
    t.add(std::move(row));
  }
  rep.add(std::move(t));
}

void fig_s4(StatReport& rep, std::span<const FocalAnalysis* const> group) {
  std::vector<std::vector<CollaboratorSeries>> lists;
  for (const auto* fa : group) lists.push_back(fa->real.all);
  auto st = topic_span_stats(lists);
  Table t{"figS4", {"quantity", "value", "count"}, {}};
  for (auto [v, n] : st.span_years) t.add({"span_years", v, n});
  for (auto [v, n] : st.copapers) t.add({"copapers", v, n});
  rep.add(std::move(t));
  Table s{"figS4_summary", {"pairs", "mean_span_years"}, {}};
  s.add({st.pairs, st.pairs ? Cell{st.mean_span} : Cell{}});
  rep.add(std::move(s));
}

void fig_s7(StatReport& rep, std::span<const FocalAnalysis* const> group) {
  auto records = records_of(group);
  Table t{"figS7", {"key", "decile", "variant", "metric", "n", "mean", "se"}, {}};
  for (auto key : {StratKey::productivity, StratKey::impact}) {
    auto deciles = stratify(records, key, Deciles{});
    for (int dec = 0; dec < 10; ++dec) {
      auto sub = members(group, deciles, dec);
      for (auto variant : {SimilarityVariant::overall, SimilarityVariant::before}) {
        for (auto metric : {SimilarityMetric::jaccard, SimilarityMetric::cosine,
                            SimilarityMetric::lhn}) {
          std::vector<double> xs;
          for (const auto* fa : sub) {
            const auto& s = variant == SimilarityVariant::overall ? fa->sim_overall : fa->sim_before;
            if (!s) continue;
            xs.push_back(metric == SimilarityMetric::jaccard  ? s->jaccard
                         : metric == SimilarityMetric::cosine ? s->cosine
                                                              : s->lhn);
          }
          auto sm = summarize(xs);
          t.add({key_label(key), dec,
                 variant == SimilarityVariant::overall ? "overall" : "before",
                 metric == SimilarityMetric::jaccard  ? "jaccard"
                 : metric == SimilarityMetric::cosine ? "cosine"
                                                      : "lhn",
                 sm.n, cell(sm.mean), cell(sm.se)});
        }
      }
    }
  }
  rep.add(std::move(t));
}

// Per-focal averages of the initial-collaborator features.
struct FeatureMeans {
  std::optional<double> career_years, publications, citations;
};

FeatureMeans feature_means(const FocalAnalysis& fa) {
  FeatureMeans m;
  std::vector<double> y, p, c;
  for (const auto& f : fa.initial) {
    y.push_back(f.past_career_years);
    p.push_back(f.past_publications);
    if (f.citations_per_past_paper) c.push_back(*f.citations_per_past_paper);
  }
  m.career_years = summarize(y).mean;
  m.publications = summarize(p).mean;
  m.citations = summarize(c).mean;
  return m;
}

void fig_s8(StatReport& rep, std::span<const FocalAnalysis* const> group, const RunConfig& cfg) {
  auto records = records_of(group);
  struct Group {
    std::string name;
    Cell top_k;
    std::vector<const FocalAnalysis*> focal;
  };
  std::vector<Group> groups{{"overall", Cell{}, {group.begin(), group.end()}}};
  for (double k : cfg.top_k) {
    for (auto key : {StratKey::productivity, StratKey::impact}) {
      groups.push_back({group_label(key), k, members(group, stratify(records, key, TopPercent{k}), 1)});
    }
  }

  Table hist{"figS8", {"group", "top_k", "feature", "bin_low", "bin_high", "count", "share"}, {}};
  Table summary{"figS8_summary",
                {"group", "top_k", "n_collaborators", "newcomer_share", "mean_past_career_years",
                 "mean_past_publications", "mean_citations_per_past_paper"},
                {}};
  for (const auto& g : groups) {
    std::vector<double> years, pubs, cites;
    std::size_t newcomers = 0;
    for (const auto* fa : g.focal) {
      for (const auto& f : fa->initial) {
        years.push_back(f.past_career_years);
        pubs.push_back(f.past_publications);
        if (f.citations_per_past_paper) cites.push_back(*f.citations_per_past_paper);
        if (f.past_publications == 0) ++newcomers;
      }
    }
    auto int_hist = [&](const char* feature, const std::vector<double>& xs) {
      std::map<int, int> h;
      for (double x : xs) ++h[static_cast<int>(x)];
      for (auto [v, n] : h) {
        hist.add({g.name, g.top_k, feature, v, v + 1, n, static_cast<double>(n) / xs.size()});
      }
    };
    int_hist("past_career_years", years);
    int_hist("past_publications", pubs);
    std::map<int, int> ch;  // log2 bins: [0,1), [1,2), [2,4), ...
    for (double x : cites) ++ch[x < 1.0 ? -1 : static_cast<int>(std::floor(std::log2(x)))];
    for (auto [b, n] : ch) {
      const double lo = b < 0 ? 0.0 : std::ldexp(1.0, b);
      const double hi = std::ldexp(1.0, b + 1);
      hist.add({g.name, g.top_k, "citations_per_past_paper", lo, hi, n,
                static_cast<double>(n) / cites.size()});
    }
    summary.add({g.name, g.top_k, years.size(),
                 years.empty() ? Cell{} : Cell{static_cast<double>(newcomers) / years.size()},
                 cell(summarize(years).mean), cell(summarize(pubs).mean),
                 cell(summarize(cites).mean)});
  }
  rep.add(std::move(hist));
  rep.add(std::move(summary));

  Table dec{"figS8_deciles",
            {"key", "decile", "n", "mean_past_career_years", "mean_past_publications",
             "mean_citations_per_past_paper"},
            {}};
  for (auto key : {StratKey::productivity, StratKey::impact}) {
    auto deciles = stratify(records, key, Deciles{});
    for (int d = 0; d < 10; ++d) {
      std::vector<double> y, p, c;
      auto sub = members(group, deciles, d);
      for (const auto* fa : sub) {
        auto m = feature_means(*fa);
        if (m.career_years) y.push_back(*m.career_years);
        if (m.publications) p.push_back(*m.publications);
        if (m.citations) c.push_back(*m.citations);
      }
      dec.add({key_label(key), d, sub.size(), cell(summarize(y).mean), cell(summarize(p).mean),
               cell(summarize(c).mean)});
    }
  }
  rep.add(std::move(dec));

  Table s1{"tableS1", {"top_k", "feature", "group_a", "group_b", "ks_d", "ks_p", "stars"}, {}};
  auto feature_values = [](std::span<const FocalAnalysis* const> sub, int which) {
    std::vector<double> out;
    for (const auto* fa : sub) {
      auto m = feature_means(*fa);
      const auto& v = which == 0 ? m.career_years : which == 1 ? m.publications : m.citations;
      if (v) out.push_back(*v);
    }
    return out;
  };
  const char* features[] = {"past_career_years", "past_publications", "citations_per_past_paper"};
  for (std::size_t gi = 1; gi + 1 < groups.size(); gi += 2) {
    const auto& prod = groups[gi];
    const auto& impa = groups[gi + 1];
    for (int f = 0; f < 3; ++f) {
      auto all = feature_values(groups[0].focal, f);
      auto pv = feature_values(prod.focal, f);
      auto iv = feature_values(impa.focal, f);
      for (auto [na, a, nb, b] : {std::tuple{"overall", &all, "productive", &pv},
                                  std::tuple{"overall", &all, "impactful", &iv},
                                  std::tuple{"productive", &pv, "impactful", &iv}}) {
        std::vector<Cell> row{prod.top_k, features[f], na, nb};
        add_ks_cells(row, try_ks(*a, *b));
        s1.add(std::move(row));
      }
    }
  }
  rep.add(std::move(s1));
}

}  // namespace

StatReport build_report(std::span<const DatasetAnalysis> analyses, const RunConfig& config) {
  if (analyses.empty()) throw Error("no dataset to report on");
  StatReport rep;
  const auto& primary = analyses.front().focal;
  auto group = all_of(primary);
  scientists_table(rep, primary, config);
  fig2_distributions(rep, group, config);
  fig2_copub(rep, group, config);
  fig3(rep, group, config);
  fig4(rep, group);
  fig5(rep, group);
  fig6_cohorts(rep, group, config);
  fig6_disciplines(rep, analyses, config);
  if (config.surrogate) fig_s3(rep, group);
  fig_s4(rep, group);
  fig_s7(rep, group);
  fig_s8(rep, group, config);
  std::sort(rep.tables.begin(), rep.tables.end(),
            [](const Table& a, const Table& b) { return a.name < b.name; });
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::ordered_json topic_stage_json(std::span<const Dataset> datasets, const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["seed"] = cfg.require_seed();
  j["min_papers"] = cfg.min_papers;
  j["topic_threshold"] = cfg.topic_threshold;
  j["weighted"] = cfg.weighted;
  auto& ds = j["datasets"];
  ds = nlohmann::ordered_json::array();
  for (const auto& d : datasets) {
    ds.push_back({{"name", d.name}, {"checksum", std::to_string(corpus_checksum(d.corpus))}});
  }
  return j;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_topics_artifact(std::span<const Dataset> datasets,
                           std::span<const std::vector<TopicAssignment>> topics,
                           const RunConfig& config) {
  const auto dir = config.output_dir / "topics";
  fs::create_directories(dir);
  std::ofstream out(dir / "topics.csv", std::ios::binary);
  if (!out) throw Error("cannot write " + (dir / "topics.csv").string());
  out << "dataset,author_id,paper_id,year,topic_id,c10\n";
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    const auto& corpus = datasets[d].corpus;
    for (const auto& ta : topics[d]) {
      for (const auto& s : colored_series(corpus, ta)) {
        out << datasets[d].name << ',' << corpus.author_id(ta.owner) << ','
            << corpus.paper(s.paper).paper_id << ',' << s.year << ',' << s.topic << ','
            << s.c10 << '\n';
      }
    }
  }
  std::ofstream meta(dir / "stage.json", std::ios::binary);
  meta << topic_stage_json(datasets, config).dump(2) << '\n';
}

std::vector<std::vector<TopicAssignment>> read_topics_artifact(std::span<const Dataset> datasets,
                                                               const RunConfig& config) {
  const auto dir = config.output_dir / "topics";
  std::ifstream meta(dir / "stage.json");
  std::ifstream in(dir / "topics.csv");
  if (!meta || !in) {
    throw DependencyError("topic assignments not found in " + dir.string() +
                          "; run detect-topics first");
  }
  nlohmann::ordered_json stored;
  try {
    stored = nlohmann::ordered_json::parse(meta);
  } catch (const nlohmann::json::exception& e) {
    throw DependencyError("unreadable " + (dir / "stage.json").string() + ": " + e.what());
  }
  if (stored != topic_stage_json(datasets, config)) {
    throw DependencyError("topic assignments in " + dir.string() +
                          " were produced for a different corpus or configuration; "
                          "rerun detect-topics");
  }

  // dataset -> author -> paper -> label
  std::map<std::string, std::map<std::string, std::map<std::string, int>>> labels;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != 6) throw DependencyError("malformed row in topics.csv: " + line);
    labels[f[0]][f[1]][f[2]] = std::stoi(f[4]);
  }

  std::vector<std::vector<TopicAssignment>> out;
  for (const auto& ds : datasets) {
    auto& per = out.emplace_back();
    for (auto a : ds.focal) {
      const auto& id = ds.corpus.author_id(a);
      auto it = labels[ds.name].find(id);
      if (it == labels[ds.name].end()) {
        throw DependencyError("topics.csv lacks focal scientist '" + id + "'");
      }
      std::vector<int> lab;
      for (PaperIdx p : ds.corpus.papers_of(a)) {
        auto pit = it->second.find(ds.corpus.paper(p).paper_id);
        if (pit == it->second.end()) {
          throw DependencyError("topics.csv lacks paper '" + ds.corpus.paper(p).paper_id + "'");
        }
        lab.push_back(pit->second);
      }
      per.push_back(topics_from_labels(ds.corpus, a, lab));
    }
  }
  return out;
}

void write_manifest(std::span<const Dataset> datasets, const StatReport& report,
                    const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["tool"] = "collabtopics";
  j["version"] = kVersion;
  j["seed"] = cfg.require_seed();
  auto& c = j["config"];
  c["min_papers"] = cfg.min_papers;
  c["topic_threshold"] = cfg.topic_threshold;
  c["weighted"] = cfg.weighted;
  c["min_copub"] = {cfg.min_copub_low, cfg.min_copub_high};
  c["count_minor_papers"] = cfg.count_minor_papers;
  c["rounds_factor"] = cfg.rounds_factor;
  c["surrogate"] = cfg.surrogate;
  c["recent_years"] = cfg.recent_years;
  c["join_min_copub"] = cfg.join_min_copub;
  c["top_k"] = cfg.top_k;
  c["cohort_window"] = cfg.cohort_window;
  c["cohort_bin_width"] = cfg.cohort_bin_width;
  c["n_rewires"] = cfg.n_rewires;
  c["validation"] = {{"min_year", cfg.validation.min_year}, {"max_year", cfg.validation.max_year}};
  auto& ds = j["datasets"];
  ds = nlohmann::ordered_json::array();
  for (const auto& d : datasets) {
    ds.push_back({{"name", d.name},
                  {"checksum", std::to_string(corpus_checksum(d.corpus))},
                  {"papers", d.corpus.paper_count()},
                  {"authors", d.corpus.author_count()},
                  {"rejected_records", d.rejected.size()},
                  {"focal_scientists", d.focal.size()}});
  }
  auto& tables = j["tables"];
  tables = nlohmann::ordered_json::array();
  for (const auto& t : report.tables) tables.push_back(t.name + ".csv");
  std::ofstream out(cfg.output_dir / "manifest.json", std::ios::binary);
  if (!out) throw Error("cannot write manifest.json");
  out << j.dump(2) << '\n';
}

void write_intermediates(std::span<const DatasetAnalysis> analyses,
                         std::span<const std::vector<TopicAssignment>> topics,
                         const RunConfig& config) {
  for (std::size_t d = 0; d < analyses.size(); ++d) {
    const auto& ds = *analyses[d].dataset;
    for (std::size_t i = 0; i < ds.focal.size(); ++i) {
      const auto dir = config.output_dir / "intermediates" / ds.name / ds.corpus.author_id(ds.focal[i]);
      fs::create_directories(dir);
      std::ofstream edges(dir / "cociting.csv", std::ios::binary);
      write_edge_list_csv(ds.corpus, build_cociting(ds.corpus, ds.focal[i]), edges);
      std::ofstream tp(dir / "topics.csv", std::ios::binary);
      write_topics_csv(ds.corpus, colored_series(ds.corpus, topics[d][i]), tp);
      std::ofstream co(dir / "collaborators.csv", std::ios::binary);
      write_collaborators_csv(analyses[d].focal[i].real.all, co);
    }
  }
}

StatReport run_pipeline(const RunConfig& config) {
  config.validate();
  auto datasets = load_datasets(config);
  std::vector<std::vector<TopicAssignment>> topics;
  for (const auto& ds : datasets) topics.push_back(detect_all_topics(ds, config));
  fs::create_directories(config.output_dir);
  write_topics_artifact(datasets, topics, config);

  std::vector<DatasetAnalysis> analyses;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    analyses.push_back({&datasets[d], analyze_all(datasets[d], topics[d], config)});
  }
  auto report = build_report(analyses, config);
  report.write(config.output_dir);
  write_manifest(datasets, report, config);
  if (config.export_intermediates) write_intermediates(analyses, topics, config);
  return report;
}

}  // namespace collab
