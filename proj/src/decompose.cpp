#include "collab/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "collab/error.hpp"

namespace collab {

AuthorshipBipartite build_bipartite(const Corpus& corpus, AuthorIdx focal,
                                    std::span<const SeriesEntry> series) {
  AuthorshipBipartite bip;
  bip.focal = focal;
  for (const auto& s : series) {
    for (auto a : corpus.authors_of(s.paper)) {
      if (a != focal) bip.collaborators.push_back(a);
    }
  }
  std::sort(bip.collaborators.begin(), bip.collaborators.end(),
            [&corpus](AuthorIdx a, AuthorIdx b) {
              return corpus.author_id(a) < corpus.author_id(b);
            });
  bip.collaborators.erase(std::unique(bip.collaborators.begin(), bip.collaborators.end()),
                          bip.collaborators.end());

  std::unordered_map<AuthorIdx, std::uint32_t> local;
  for (std::uint32_t i = 0; i < bip.collaborators.size(); ++i) {
    local.emplace(bip.collaborators[i], i);
  }
  for (const auto& s : series) {
    auto authors = corpus.authors_of(s.paper);
    if (authors.size() < 2) continue;
    const auto p = static_cast<std::uint32_t>(bip.papers.size());
    bip.papers.push_back(s);
    for (auto a : authors) {
      if (a != focal) bip.links.emplace_back(local.at(a), p);
    }
  }
  std::sort(bip.links.begin(), bip.links.end());
  return bip;
}

std::vector<CollaboratorSeries> decompose(const Corpus& corpus,
                                          const AuthorshipBipartite& bip,
                                          const DecomposeOptions& opts) {
  if (opts.min_copub < 1) throw DomainError("min_copub must be >= 1");
  std::vector<std::vector<std::uint32_t>> by_collab(bip.collaborators.size());
  for (auto [c, p] : bip.links) by_collab[c].push_back(p);

  std::vector<CollaboratorSeries> out;
  for (std::size_t c = 0; c < by_collab.size(); ++c) {
    auto& plist = by_collab[c];
    std::sort(plist.begin(), plist.end());
    int counted = 0;
    for (auto p : plist) {
      if (opts.count_minor_papers || bip.papers[p].topic != kNoTopic) ++counted;
    }
    if (plist.empty() || counted < opts.min_copub) continue;

    CollaboratorSeries cs;
    cs.collaborator = bip.collaborators[c];
    cs.collaborator_id = corpus.author_id(cs.collaborator);
    for (auto p : plist) cs.papers.push_back(bip.papers[p]);
    cs.n_copub = counted;
    cs.first_year = cs.papers.front().year;
    cs.last_year = cs.papers.back().year;
    for (const auto& s : cs.papers) {
      if (s.topic != kNoTopic) cs.involved_topics.push_back(s.topic);
    }
    std::sort(cs.involved_topics.begin(), cs.involved_topics.end());
    cs.involved_topics.erase(
        std::unique(cs.involved_topics.begin(), cs.involved_topics.end()),
        cs.involved_topics.end());
    out.push_back(std::move(cs));
  }
  return out;
}

std::vector<CollaboratorSeries> decompose(const Corpus& corpus,
                                          std::span<const SeriesEntry> series,
                                          std::string_view focal, int min_copub) {
  auto bip = build_bipartite(corpus, corpus.require_author(focal), series);
  return decompose(corpus, bip, {.min_copub = min_copub});
}

CollaboratorStats collaborator_stats(std::span<const CollaboratorSeries> series) {
  CollaboratorStats st;
  std::map<int, int> counts;
  for (const auto& cs : series) {
    if (cs.involved_topics.empty()) {
      ++st.n_no_topic;
      continue;
    }
    ++counts[cs.n_topics_involved()];
    ++st.n_qualifying;
  }
  if (st.n_qualifying == 0) return st;
  for (auto [k, c] : counts) {
    st.distribution[k] = static_cast<double>(c) / st.n_qualifying;
  }
  st.fraction_single = static_cast<double>(counts[1]) / st.n_qualifying;
  return st;
}

std::map<int, double> pooled_topic_distribution(std::span<const CollaboratorStats> stats) {
  std::map<int, double> sum;
  int scientists = 0;
  for (const auto& st : stats) {
    if (st.empty()) continue;
    ++scientists;
    for (auto [k, v] : st.distribution) sum[k] += v;
  }
  if (scientists == 0) throw DomainError("no scientist has qualifying collaborators");
  for (auto& [k, v] : sum) v /= scientists;
  return sum;
}

std::vector<int> copub_bin_edges(int max_copub) {
  std::vector<int> edges{1};
  int width = 4;
  while (edges.back() <= std::max(max_copub, 1)) {
    const int last = edges.back();
    if (last < 6) {
      edges.push_back(last + 1);
    } else {
      edges.push_back(last + width);
      width *= 2;
    }
  }
  return edges;
}

std::vector<CopubBinRow> topics_vs_copub(
    std::span<const std::vector<CollaboratorSeries>> per_focal) {
  int max_copub = 1;
  for (const auto& list : per_focal) {
    for (const auto& cs : list) max_copub = std::max(max_copub, cs.n_copub);
  }
  const auto edges = copub_bin_edges(max_copub);
  const auto bins = edges.size() - 1;
  std::vector<int> n(bins, 0), single(bins, 0);
  std::vector<double> sum(bins, 0.0), sumsq(bins, 0.0);
  for (const auto& list : per_focal) {
    for (const auto& cs : list) {
      if (cs.involved_topics.empty()) continue;
      auto b = static_cast<std::size_t>(
          std::upper_bound(edges.begin(), edges.end(), cs.n_copub) - edges.begin() - 1);
      const double t = cs.n_topics_involved();
      ++n[b];
      sum[b] += t;
      sumsq[b] += t * t;
      if (cs.n_topics_involved() == 1) ++single[b];
    }
  }
  std::vector<CopubBinRow> rows;
  for (std::size_t b = 0; b < bins; ++b) {
    CopubBinRow r;
    r.bin_low = edges[b];
    r.bin_high = edges[b + 1];
    r.n = n[b];
    if (n[b] > 0) {
      r.mean_topics = sum[b] / n[b];
      if (n[b] > 1) {
        const double var = (sumsq[b] - n[b] * r.mean_topics * r.mean_topics) / (n[b] - 1);
        r.se_topics = std::sqrt(std::max(var, 0.0) / n[b]);
      }
      r.fraction_single = static_cast<double>(single[b]) / n[b];
      r.se_fraction = std::sqrt(r.fraction_single * (1.0 - r.fraction_single) / n[b]);
    }
    rows.push_back(r);
  }
  return rows;
}

TopicSpanStats topic_span_stats(std::span<const std::vector<CollaboratorSeries>> per_focal) {
  TopicSpanStats st;
  double total_span = 0.0;
  for (const auto& list : per_focal) {
    for (const auto& cs : list) {
      for (int t : cs.involved_topics) {
        int first = 0, last = 0, count = 0;
        for (const auto& s : cs.papers) {
          if (s.topic != t) continue;
          if (count == 0) first = s.year;
          last = s.year;
          ++count;
        }
        const int span = last - first + 1;
        ++st.span_years[span];
        ++st.copapers[count];
        ++st.pairs;
        total_span += span;
      }
    }
  }
  if (st.pairs > 0) st.mean_span = total_span / static_cast<double>(st.pairs);
  return st;
}

void write_collaborators_csv(std::span<const CollaboratorSeries> series, std::ostream& out) {
  out << "collaborator_id,n_copub,first_year,last_year,n_topics_involved,topics\n";
  for (const auto& cs : series) {
    out << cs.collaborator_id << ',' << cs.n_copub << ',' << cs.first_year << ','
        << cs.last_year << ',' << cs.n_topics_involved() << ',';
    for (std::size_t i = 0; i < cs.involved_topics.size(); ++i) {
      if (i) out << ';';
      out << cs.involved_topics[i];
    }
    out << '\n';
  }
}

}  // namespace collab
