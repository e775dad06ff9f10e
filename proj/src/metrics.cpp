#include "collab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "collab/error.hpp"

namespace collab {

std::vector<JoinEvent> join_events(std::span<const SeriesEntry> series,
                                   const TopicAssignment& ta,
                                   std::span<const CollaboratorSeries> collaborators,
                                   const JoinOptions& opts) {
  std::vector<JoinEvent> events;
  if (ta.n_topics() < 2 || series.empty()) return events;
  const int career_start = series.front().year;

  for (int t = 1; t < ta.n_topics(); ++t) {
    JoinEvent ev;
    ev.focal = ta.owner;
    ev.topic_id = t;
    ev.topic_start_year = ta.topic_first_year[t];
    ev.career_stage = ev.topic_start_year - career_start;
    const int start = ev.topic_start_year;

    for (const auto& cs : collaborators) {
      JoinCandidate c;
      c.collaborator = cs.collaborator;
      std::int64_t c10_sum = 0;
      for (const auto& s : cs.papers) {
        if (s.year < start) {
          ++c.past_copub;
          c10_sum += s.c10;
        }
        if (s.year <= start && s.year > start - opts.recent_years) c.recent = true;
        if (s.topic == t) c.joined = true;
      }
      if (c.past_copub < opts.min_past_copub || c.past_copub == 0) continue;
      c.past_mean_c10 = static_cast<double>(c10_sum) / c.past_copub;
      ev.existing.push_back(c);
    }
    events.push_back(std::move(ev));
  }
  return events;
}

std::string to_string(JoinMode m) { return m == JoinMode::overall ? "overall" : "recent"; }

std::string to_string(JoinBinning b) {
  switch (b) {
    case JoinBinning::past_copub: return "past_copub";
    case JoinBinning::past_copub_log: return "past_copub_log";
    case JoinBinning::past_mean_c10: return "past_mean_c10";
    case JoinBinning::career_stage: return "career_stage";
  }
  return "";
}

namespace {

struct Sample {
  double value;
  bool joined;
};

std::vector<Sample> candidates(std::span<const JoinEvent> events, JoinMode mode,
                               JoinBinning binning) {
  std::vector<Sample> out;
  for (const auto& ev : events) {
    for (const auto& c : ev.existing) {
      if (mode == JoinMode::recent && !c.recent) continue;
      double v = 0.0;
      switch (binning) {
        case JoinBinning::past_copub:
        case JoinBinning::past_copub_log: v = c.past_copub; break;
        case JoinBinning::past_mean_c10: v = c.past_mean_c10; break;
        case JoinBinning::career_stage: v = ev.career_stage; break;
      }
      out.push_back({v, c.joined});
    }
  }
  return out;
}

std::vector<double> join_bin_edges(JoinBinning binning, double max_value) {
  std::vector<double> edges;
  switch (binning) {
    case JoinBinning::past_copub:
      for (int e = 1; edges.empty() || edges.back() <= max_value; ++e) edges.push_back(e);
      break;
    case JoinBinning::past_copub_log:
      for (int e : copub_bin_edges(static_cast<int>(max_value))) edges.push_back(e);
      break;
    case JoinBinning::past_mean_c10:
      edges.push_back(0.0);
      for (double e = 1.0; edges.back() <= max_value; e *= 2.0) edges.push_back(e);
      break;
    case JoinBinning::career_stage:
      for (int e = 0; edges.empty() || edges.back() <= max_value; e += 5) edges.push_back(e);
      break;
  }
  return edges;
}

JoinRow make_row(double lo, double hi, JoinMode mode, std::size_t n, std::size_t joiners) {
  JoinRow r;
  r.bin_low = lo;
  r.bin_high = hi;
  r.mode = mode;
  r.n = n;
  r.joiners = joiners;
  if (n > 0) {
    r.probability = static_cast<double>(joiners) / static_cast<double>(n);
    auto ci = wilson_interval(joiners, n);
    r.ci_low = ci.low;
    r.ci_high = ci.high;
  }
  return r;
}

}  // namespace

std::vector<JoinRow> join_probability(std::span<const JoinEvent> events, JoinMode mode,
                                      JoinBinning binning) {
  if (events.empty()) throw DomainError("join_probability needs at least one event");
  auto samples = candidates(events, mode, binning);
  double max_value = 0.0;
  for (const auto& s : samples) max_value = std::max(max_value, s.value);
  const auto edges = join_bin_edges(binning, max_value);
  const auto bins = edges.size() - 1;
  std::vector<std::size_t> n(bins, 0), joined(bins, 0);
  for (const auto& s : samples) {
    auto it = std::upper_bound(edges.begin(), edges.end(), s.value);
    auto b = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - edges.begin() - 1, 0));
    ++n[b];
    if (s.joined) ++joined[b];
  }
  std::vector<JoinRow> rows;
  for (std::size_t b = 0; b < bins; ++b) {
    rows.push_back(make_row(edges[b], edges[b + 1], mode, n[b], joined[b]));
  }
  return rows;
}

JoinRow join_probability_pooled(std::span<const JoinEvent> events, JoinMode mode) {
  std::size_t n = 0, joined = 0;
  for (const auto& s : candidates(events, mode, JoinBinning::past_copub)) {
    ++n;
    if (s.joined) ++joined;
  }
  return make_row(0.0, 0.0, mode, n, joined);
}

std::optional<double> join_probability_per_focal(std::span<const JoinEvent> events,
                                                 JoinMode mode) {
  std::map<AuthorIdx, std::pair<std::size_t, std::size_t>> per;
  for (const auto& ev : events) {
    auto& [n, j] = per[ev.focal];
    for (const auto& c : ev.existing) {
      if (mode == JoinMode::recent && !c.recent) continue;
      ++n;
      if (c.joined) ++j;
    }
  }
  double sum = 0.0;
  int count = 0;
  for (const auto& [focal, nj] : per) {
    if (nj.first == 0) continue;
    sum += static_cast<double>(nj.second) / static_cast<double>(nj.first);
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum / count;
}

std::optional<CorrelationResult> join_tau(std::span<const JoinEvent> events, JoinMode mode,
                                          JoinCovariate covariate) {
  auto samples = candidates(events, mode,
                            covariate == JoinCovariate::past_copub ? JoinBinning::past_copub
                                                                   : JoinBinning::past_mean_c10);
  std::vector<double> x, y;
  for (const auto& s : samples) {
    x.push_back(s.value);
    y.push_back(s.joined ? 1.0 : 0.0);
  }
  try {
    return kendall_tau(x, y);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------

SimilarityTriple set_similarity(std::span<const RefIdx> a, std::span<const RefIdx> b) {
  std::size_t common = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  const double c = static_cast<double>(common);
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double uni = na + nb - c;
  return {uni > 0 ? c / uni : 0.0, c / std::sqrt(na * nb), c / (na * nb)};
}

namespace {

int first_joint_year(const Corpus& corpus, AuthorIdx focal, AuthorIdx collaborator) {
  for (PaperIdx p : corpus.papers_of(focal)) {
    auto authors = corpus.authors_of(p);
    if (std::find(authors.begin(), authors.end(), collaborator) != authors.end()) {
      return corpus.paper(p).year;
    }
  }
  return std::numeric_limits<int>::max();
}

bool coauthored(const Corpus& corpus, PaperIdx p, AuthorIdx other) {
  auto authors = corpus.authors_of(p);
  return std::find(authors.begin(), authors.end(), other) != authors.end();
}

// Union of references over the selected papers; nullopt if no paper selected.
std::optional<std::vector<RefIdx>> gather_refs(const Corpus& corpus, AuthorIdx who,
                                               AuthorIdx other, SimilarityVariant variant,
                                               int cutoff_year) {
  std::vector<RefIdx> refs;
  bool any = false;
  for (PaperIdx p : corpus.papers_of(who)) {
    if (variant == SimilarityVariant::before) {
      if (corpus.paper(p).year >= cutoff_year) break;
    } else if (coauthored(corpus, p, other)) {
      continue;
    }
    any = true;
    auto r = corpus.refs_of(p);
    refs.insert(refs.end(), r.begin(), r.end());
  }
  if (!any) return std::nullopt;
  std::sort(refs.begin(), refs.end());
  refs.erase(std::unique(refs.begin(), refs.end()), refs.end());
  return refs;
}

}  // namespace

std::optional<SimilarityTriple> reference_similarities(const Corpus& corpus, AuthorIdx focal,
                                                       AuthorIdx collaborator,
                                                       SimilarityVariant variant) {
  const int cutoff = variant == SimilarityVariant::before
                         ? first_joint_year(corpus, focal, collaborator)
                         : 0;
  auto a = gather_refs(corpus, focal, collaborator, variant, cutoff);
  auto b = gather_refs(corpus, collaborator, focal, variant, cutoff);
  if (!a || !b || a->empty() || b->empty()) return std::nullopt;
  return set_similarity(*a, *b);
}

std::optional<double> reference_similarity(const Corpus& corpus, std::string_view focal,
                                           std::string_view collaborator,
                                           SimilarityMetric metric, SimilarityVariant variant) {
  auto s = reference_similarities(corpus, corpus.require_author(focal),
                                  corpus.require_author(collaborator), variant);
  if (!s) return std::nullopt;
  switch (metric) {
    case SimilarityMetric::jaccard: return s->jaccard;
    case SimilarityMetric::cosine: return s->cosine;
    case SimilarityMetric::lhn: return s->lhn;
  }
  return std::nullopt;
}

namespace {

std::optional<SimilarityTriple> mean_of(std::span<const std::optional<SimilarityTriple>> xs) {
  SimilarityTriple sum;
  int n = 0;
  for (const auto& x : xs) {
    if (!x) continue;
    sum.jaccard += x->jaccard;
    sum.cosine += x->cosine;
    sum.lhn += x->lhn;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return SimilarityTriple{sum.jaccard / n, sum.cosine / n, sum.lhn / n};
}

}  // namespace

SimilarityProfile similarity_profile(const Corpus& corpus, AuthorIdx focal,
                                     std::span<const CollaboratorSeries> collaborators) {
  SimilarityProfile prof;
  prof.focal = focal;
  for (const auto& cs : collaborators) {
    prof.overall.push_back(
        reference_similarities(corpus, focal, cs.collaborator, SimilarityVariant::overall));
    prof.before.push_back(
        reference_similarities(corpus, focal, cs.collaborator, SimilarityVariant::before));
  }
  prof.mean_overall = mean_of(prof.overall);
  prof.mean_before = mean_of(prof.before);
  return prof;
}

// ---------------------------------------------------------------------------

std::vector<InitialFeatures> initial_collaborator_features(
    const Corpus& corpus, std::span<const CollaboratorSeries> collaborators) {
  std::vector<InitialFeatures> out;
  out.reserve(collaborators.size());
  for (const auto& cs : collaborators) {
    InitialFeatures f;
    f.collaborator = cs.collaborator;
    f.start_year = cs.first_year;
    auto papers = corpus.papers_of(cs.collaborator);
    const int own_start = corpus.paper(papers.front()).year;
    f.past_career_years = std::max(0, f.start_year - own_start);
    std::int64_t c10 = 0;
    for (PaperIdx p : papers) {
      if (corpus.paper(p).year >= f.start_year) break;
      ++f.past_publications;
      c10 += corpus.paper(p).c10;
    }
    if (f.past_publications > 0) {
      f.citations_per_past_paper = static_cast<double>(c10) / f.past_publications;
    }
    out.push_back(f);
  }
  return out;
}

// ---------------------------------------------------------------------------

double strat_value(const FocalRecord& r, StratKey key) {
  switch (key) {
    case StratKey::productivity: return r.profile.paper_count;
    case StratKey::impact: return r.profile.mean_c10;
    case StratKey::career_start: return r.profile.career_start_year;
    case StratKey::career_stage: return r.profile.career_years;
    case StratKey::n_topics: return r.n_topics;
  }
  return 0.0;
}

std::map<std::string, int> stratify(std::span<const FocalRecord> records, StratKey key,
                                    const StratScheme& scheme) {
  std::map<std::string, int> out;
  const auto n = records.size();
  if (n == 0) return out;

  if (const auto* yb = std::get_if<YearBins>(&scheme)) {
    if (yb->width < 1) throw DomainError("bin width must be positive");
    for (const auto& r : records) {
      const auto v = static_cast<int>(std::floor(strat_value(r, key)));
      const int lo = static_cast<int>(std::floor(static_cast<double>(v) / yb->width)) * yb->width;
      out[r.profile.author_id] = lo;
    }
    return out;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (const auto* tp = std::get_if<TopPercent>(&scheme)) {
    if (!(tp->k > 0.0 && tp->k <= 100.0)) throw DomainError("top-k percent must be in (0, 100]");
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double va = strat_value(records[a], key), vb = strat_value(records[b], key);
      if (va != vb) return va > vb;
      return records[a].profile.author_id < records[b].profile.author_id;
    });
    const auto take = static_cast<std::size_t>(std::ceil(tp->k * static_cast<double>(n) / 100.0 - 1e-9));
    for (std::size_t i = 0; i < n; ++i) {
      out[records[order[i]].profile.author_id] = i < std::max<std::size_t>(take, 1) ? 1 : 0;
    }
    return out;
  }

  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double va = strat_value(records[a], key), vb = strat_value(records[b], key);
    if (va != vb) return va < vb;
    return records[a].profile.author_id < records[b].profile.author_id;
  });
  for (std::size_t i = 0; i < n; ++i) {
    out[records[order[i]].profile.author_id] = static_cast<int>(i * 10 / n);
  }
  return out;
}

std::vector<SeriesEntry> truncate_series(std::span<const SeriesEntry> series,
                                         int career_start_year, int window_years) {
  std::vector<SeriesEntry> out;
  for (const auto& s : series) {
    if (s.year < career_start_year + window_years) out.push_back(s);
  }
  return out;
}

}  // namespace collab
