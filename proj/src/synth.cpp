#include "collab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <set>

#include "collab/error.hpp"
#include "collab/rng.hpp"
#include "json.hpp"

namespace collab {

namespace {

std::string padded(const char* prefix, int value, int width) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%0*d", prefix, width, value);
  return buf;
}

constexpr int kBackgroundPool = 10000;

// Draws `k` distinct values from [0, n).
std::vector<int> sample_distinct(Rng& rng, int n, int k) {
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  for (int i = 0; i < k; ++i) {
    std::swap(all[i], all[i + static_cast<int>(uniform_index(rng, n - i))]);
  }
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

struct Member {
  std::string id;
  std::set<int> planted;
  std::set<int> actual;
  int first_joint_year = 0;
};

void generate_focal(const SynthSpec& spec, int index, std::vector<PaperRecord>& papers,
                    GroundTruth& truth) {
  const std::string focal = padded("F", index + 1, 4);
  Rng rng(derive_seed(spec.seed, focal));
  truth.focal_ids.push_back(focal);

  const int k = spec.topics_per_focal;
  const int latest_start = std::max(spec.year_start, spec.year_end - spec.career_years);
  const int career_start = uniform_int(rng, spec.year_start, latest_start);
  const int career_end = std::min(spec.year_end, career_start + spec.career_years);
  const double impact =
      spec.c10_mean * std::lognormal_distribution<double>(0.0, spec.impact_spread)(rng);

  // Collaborator teams: a home topic each, some with one extra topic.
  const int n_collab = k * spec.collaborators_per_topic;
  std::vector<Member> members(n_collab);
  for (int c = 0; c < n_collab; ++c) {
    members[c].id = focal + padded("_C", c + 1, 4);
    members[c].planted.insert(c / spec.collaborators_per_topic);
  }
  if (k > 1) {
    const int multi = static_cast<int>(std::lround(spec.multi_topic_fraction * n_collab));
    for (int c : sample_distinct(rng, n_collab, multi)) {
      const int home = *members[c].planted.begin();
      int extra = uniform_int(rng, 0, k - 2);
      if (extra >= home) ++extra;
      members[c].planted.insert(extra);
    }
  }
  std::vector<std::vector<int>> team(k);
  for (int c = 0; c < n_collab; ++c) {
    for (int t : members[c].planted) team[t].push_back(c);
  }

  auto topic_ref = [&](int topic, int r) {
    return focal + padded("_T", topic, 1) + padded("_R", r, 3);
  };
  auto draw_refs = [&](int topic) {
    std::vector<std::string> refs;
    for (int r : sample_distinct(rng, spec.pool_size, spec.refs_per_paper)) {
      if (spec.pool_overlap > 0.0 &&
          std::uniform_real_distribution<double>(0.0, 1.0)(rng) < spec.pool_overlap) {
        refs.push_back(focal + padded("_S_R", static_cast<int>(uniform_index(rng, spec.pool_size)), 3));
      } else {
        refs.push_back(topic_ref(topic, r));
      }
    }
    std::sort(refs.begin(), refs.end());
    refs.erase(std::unique(refs.begin(), refs.end()), refs.end());
    return refs;
  };
  std::poisson_distribution<int> c10_draw(impact);

  int serial = 0;
  for (int t = 0; t < k; ++t) {
    const int topic_start = std::min(career_end, career_start + t * spec.topic_stagger);
    int count = spec.papers_per_topic;
    if (spec.papers_jitter > 0) count += uniform_int(rng, -spec.papers_jitter, spec.papers_jitter);
    count = std::max(count, 1);
    for (int i = 0; i < count; ++i) {
      PaperRecord p;
      p.paper_id = focal + padded("_P", ++serial, 4);
      p.year = i == 0 ? topic_start : uniform_int(rng, topic_start, career_end);
      p.author_ids.push_back(focal);
      const int pool = static_cast<int>(team[t].size());
      const int n_co = std::min(pool, uniform_int(rng, spec.coauthors_min, spec.coauthors_max));
      for (int idx : sample_distinct(rng, pool, n_co)) {
        auto& m = members[team[t][idx]];
        p.author_ids.push_back(m.id);
        if (m.actual.empty() || p.year < m.first_joint_year) m.first_joint_year = p.year;
        m.actual.insert(t);
      }
      p.reference_ids = draw_refs(t);
      p.c10 = c10_draw(rng);
      truth.paper_topic[p.paper_id] = t;
      papers.push_back(std::move(p));
    }
  }

  // Collaborators' own papers, placing newcomers at their first joint year.
  for (auto& m : members) {
    if (m.actual.empty()) continue;
    truth.collaborator_topics[m.id].assign(m.actual.begin(), m.actual.end());
    truth.collaborator_focal[m.id] = focal;
    const int n_own = spec.collaborator_own_papers > 0
                          ? uniform_int(rng, 0, 2 * spec.collaborator_own_papers)
                          : 0;
    const bool newcomer =
        std::uniform_real_distribution<double>(0.0, 1.0)(rng) < spec.newcomer_fraction;
    const int own_start = newcomer ? m.first_joint_year
                                   : m.first_joint_year - uniform_int(rng, 1, 10);
    const int own_topic = *m.actual.begin();
    for (int i = 0; i < n_own; ++i) {
      PaperRecord p;
      p.paper_id = m.id + padded("_O", i + 1, 2);
      p.year = i == 0 ? own_start : uniform_int(rng, own_start, m.first_joint_year + 5);
      p.author_ids.push_back(m.id);
      const int from_pool = spec.refs_per_paper / 2;
      for (int r : sample_distinct(rng, spec.pool_size, from_pool)) {
        p.reference_ids.push_back(topic_ref(own_topic, r));
      }
      for (int r : sample_distinct(rng, kBackgroundPool, spec.refs_per_paper - from_pool)) {
        p.reference_ids.push_back(padded("BG_R", r, 5));
      }
      p.c10 = c10_draw(rng);
      papers.push_back(std::move(p));
    }
  }
}

}  // namespace

void SynthSpec::validate() const {
  if (n_focal < 1 || topics_per_focal < 1 || pool_size < 1 || papers_per_topic < 1 ||
      refs_per_paper < 1 || collaborators_per_topic < 1 || career_years < 0 ||
      topic_stagger < 0 || collaborator_own_papers < 0 || coauthors_min < 0 ||
      coauthors_max < coauthors_min) {
    throw DomainError("synthetic spec: counts must be positive");
  }
  if (pool_size < refs_per_paper) {
    throw DomainError("synthetic spec: pool_size must be >= refs_per_paper");
  }
  if (multi_topic_fraction < 0.0 || multi_topic_fraction > 1.0 || pool_overlap < 0.0 ||
      pool_overlap > 1.0 || newcomer_fraction < 0.0 || newcomer_fraction > 1.0) {
    throw DomainError("synthetic spec: fractions must lie in [0, 1]");
  }
  if (year_end < year_start) throw DomainError("synthetic spec: empty year range");
  if (papers_jitter >= papers_per_topic) {
    throw DomainError("synthetic spec: papers_jitter must be below papers_per_topic");
  }
}

SynthCorpus generate(const SynthSpec& spec) {
  spec.validate();
  std::vector<PaperRecord> papers;
  GroundTruth truth;
  for (int f = 0; f < spec.n_focal; ++f) generate_focal(spec, f, papers, truth);
  ValidationConfig wide;
  wide.min_year = std::min(wide.min_year, spec.year_start - 20);
  wide.max_year = std::max(wide.max_year, spec.year_end + 10);
  return {Corpus::build(std::move(papers), wide), std::move(truth)};
}

void write_ground_truth_json(const GroundTruth& truth, const SynthSpec& spec, std::ostream& out) {
  nlohmann::ordered_json j;
  auto& s = j["spec"];
  s["n_focal"] = spec.n_focal;
  s["topics_per_focal"] = spec.topics_per_focal;
  s["pool_size"] = spec.pool_size;
  s["papers_per_topic"] = spec.papers_per_topic;
  s["papers_jitter"] = spec.papers_jitter;
  s["refs_per_paper"] = spec.refs_per_paper;
  s["collaborators_per_topic"] = spec.collaborators_per_topic;
  s["multi_topic_fraction"] = spec.multi_topic_fraction;
  s["coauthors_min"] = spec.coauthors_min;
  s["coauthors_max"] = spec.coauthors_max;
  s["year_start"] = spec.year_start;
  s["year_end"] = spec.year_end;
  s["career_years"] = spec.career_years;
  s["topic_stagger"] = spec.topic_stagger;
  s["pool_overlap"] = spec.pool_overlap;
  s["collaborator_own_papers"] = spec.collaborator_own_papers;
  s["newcomer_fraction"] = spec.newcomer_fraction;
  s["c10_mean"] = spec.c10_mean;
  s["impact_spread"] = spec.impact_spread;
  s["seed"] = spec.seed;
  j["focal"] = truth.focal_ids;
  j["paper_topic"] = truth.paper_topic;
  j["collaborator_topics"] = truth.collaborator_topics;
  j["collaborator_focal"] = truth.collaborator_focal;
  out << j.dump(2) << '\n';
}

}  // namespace collab
