#include "collab/topics.hpp"

#include <algorithm>
#include <ostream>

#include "collab/error.hpp"

namespace collab {

namespace {

void fill_topic_years(const Corpus& corpus, TopicAssignment& ta, int k) {
  ta.topic_first_year.assign(k, 0);
  ta.topic_size.assign(k, 0);
  std::vector<char> started(k, 0);
  for (std::size_t i = 0; i < ta.papers.size(); ++i) {
    const int t = ta.topic[i];
    if (t == kNoTopic) continue;
    if (!started[t]) {
      started[t] = 1;
      ta.topic_first_year[t] = corpus.paper(ta.papers[i]).year;
    }
    ++ta.topic_size[t];
  }
}

}  // namespace

TopicAssignment assign_topics(const Corpus& corpus, const CoCitingNetwork& net,
                              const ModularityContext& ctx, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw DomainError("topic threshold must lie in (0, 1)");
  }
  const auto n = net.nodes.size();
  if (ctx.community.size() != n) throw DomainError("partition does not cover the network");

  std::vector<char> isolated(n, 1);
  for (const auto& e : net.edges) isolated[e.u] = isolated[e.v] = 0;

  const auto k = ctx.community_count();
  std::vector<std::size_t> size(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!isolated[i]) ++size[ctx.community[i]];
  }

  // Nodes are chronological, so the first member seen fixes the order.
  std::vector<int> label(k, kNoTopic);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = ctx.community[i];
    if (isolated[i] || label[c] != kNoTopic) continue;
    if (static_cast<double>(size[c]) / static_cast<double>(n) > threshold) label[c] = next++;
  }

  TopicAssignment ta;
  ta.owner = net.owner;
  ta.papers = net.nodes;
  ta.topic.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ta.topic[i] = isolated[i] ? kNoTopic : label[ctx.community[i]];
  }
  fill_topic_years(corpus, ta, next);
  return ta;
}

TopicAssignment detect_topics(const Corpus& corpus, AuthorIdx author, std::uint64_t seed,
                              const TopicOptions& opts) {
  auto net = build_cociting(corpus, author);
  if (net.edges.empty()) {
    TopicAssignment ta;
    ta.owner = author;
    ta.papers = net.nodes;
    ta.topic.assign(net.nodes.size(), kNoTopic);
    return ta;
  }
  auto ctx = detect_communities(net.to_graph(opts.weighted), seed);
  return assign_topics(corpus, net, ctx, opts.threshold);
}

TopicAssignment topics_from_labels(const Corpus& corpus, AuthorIdx author,
                                   std::span<const int> labels) {
  auto papers = corpus.papers_of(author);
  if (labels.size() != papers.size()) {
    throw ValidationError("topic labels for '" + corpus.author_id(author) +
                          "' do not match the paper count");
  }
  TopicAssignment ta;
  ta.owner = author;
  ta.papers.assign(papers.begin(), papers.end());
  ta.topic.assign(labels.begin(), labels.end());
  int k = 0;
  for (int t : ta.topic) {
    if (t < kNoTopic) throw ValidationError("negative topic label");
    if (t != kNoTopic) {
      if (t > k) throw ValidationError("topic labels are not in first-year order");
      if (t == k) ++k;
    }
  }
  fill_topic_years(corpus, ta, k);
  return ta;
}

std::vector<SeriesEntry> colored_series(const Corpus& corpus, const TopicAssignment& ta) {
  std::vector<SeriesEntry> out;
  out.reserve(ta.papers.size());
  for (std::size_t i = 0; i < ta.papers.size(); ++i) {
    const auto& p = corpus.paper(ta.papers[i]);
    out.push_back({ta.papers[i], p.year, ta.topic[i], p.c10});
  }
  return out;
}

void write_topics_csv(const Corpus& corpus, std::span<const SeriesEntry> series,
                      std::ostream& out) {
  out << "paper_id,year,topic_id,c10\n";
  for (const auto& s : series) {
    out << corpus.paper(s.paper).paper_id << ',' << s.year << ',' << s.topic << ','
        << s.c10 << '\n';
  }
}

}  // namespace collab
