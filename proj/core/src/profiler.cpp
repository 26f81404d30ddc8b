#include "jnkit/profiler.hpp"

#include <algorithm>
#include <cmath>

#include "jnkit/errors.hpp"
#include "jnkit/text.hpp"

namespace jnkit {

std::string_view to_string(Direction direction) {
  return direction == Direction::kPreceding ? "preceding" : "following";
}

std::string target_label(const std::set<std::string>& tags) {
  return join(std::vector<std::string>(tags.begin(), tags.end()), "/");
}

TagDistribution context_distribution(const Corpus& corpus,
                                     const std::set<std::string>& target_tags,
                                     Direction direction,
                                     const ProfileOptions& options,
                                     std::string label) {
  TagDistribution dist;
  dist.direction = direction;
  dist.target = label.empty() ? target_label(target_tags) : std::move(label);

  for (const auto& sentence : corpus.sentences) {
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      if (!target_tags.contains(sentence[i].pos)) continue;
      const bool at_edge = direction == Direction::kPreceding
                               ? i == 0
                               : i + 1 == sentence.size();
      if (at_edge) {
        if (options.boundary == BoundaryMode::kSkip) continue;
        ++dist.counts[std::string(kBoundarySymbol)];
      } else {
        const auto& ctx = direction == Direction::kPreceding
                              ? sentence[i - 1].pos
                              : sentence[i + 1].pos;
        ++dist.counts[ctx];
      }
      ++dist.support_count;
    }
  }
  for (const auto& [tag, n] : dist.counts) {
    dist.probs[tag] =
        static_cast<double>(n) / static_cast<double>(dist.support_count);
  }
  return dist;
}

namespace {

std::map<std::string, double> truncate(const std::map<std::string, double>& probs,
                                       std::size_t top_k) {
  if (top_k == 0 || probs.size() <= top_k) return probs;
  std::vector<std::pair<std::string, double>> items(probs.begin(), probs.end());
  std::stable_sort(items.begin(), items.end(), [](const auto& x, const auto& y) {
    return x.second > y.second;
  });
  items.resize(top_k);
  return {items.begin(), items.end()};
}

}  // namespace

double cosine_similarity(const TagDistribution& a, const TagDistribution& b,
                         std::size_t top_k) {
  if (a.empty() || b.empty()) {
    throw UndefinedSimilarityError("cosine similarity of '" + a.target +
                                   "' and '" + b.target +
                                   "' is undefined: empty distribution");
  }
  const auto pa = truncate(a.probs, top_k);
  const auto pb = truncate(b.probs, top_k);
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (const auto& [tag, v] : pa) {
    na += v * v;
    if (const auto it = pb.find(tag); it != pb.end()) dot += v * it->second;
  }
  for (const auto& [tag, v] : pb) nb += v * v;
  if (dot == 0.0) return 0.0;
  return std::min(1.0, dot / (std::sqrt(na) * std::sqrt(nb)));
}

ProfileReport profile_report(const Corpus& corpus,
                             const std::vector<NamedTagSet>& target_sets,
                             const ProfileOptions& options) {
  if (target_sets.size() < 2) {
    throw ConfigError("profile needs at least two target sets");
  }
  ProfileReport report;
  for (const auto direction : {Direction::kPreceding, Direction::kFollowing}) {
    std::vector<TagDistribution> dists;
    for (const auto& [name, tags] : target_sets) {
      dists.push_back(
          context_distribution(corpus, tags, direction, options, name));
    }
    for (std::size_t k = 1; k < dists.size(); ++k) {
      report.pairs.push_back(SimilarityPair{
          dists[0].target, dists[k].target, direction,
          cosine_similarity(dists[0], dists[k], options.top_k)});
    }
    for (auto& d : dists) report.distributions.push_back(std::move(d));
  }
  return report;
}

std::string write_profile_report(const ProfileReport& report) {
  std::string out = "targetA\ttargetB\tdirection\tcosine\n";
  for (const auto& p : report.pairs) {
    out += p.target_a + '\t' + p.target_b + '\t' +
           std::string(to_string(p.direction)) + '\t' +
           format_fixed(p.cosine, 6) + '\n';
  }
  for (const auto& d : report.distributions) {
    out += "\n# distribution\t" + d.target + '\t' +
           std::string(to_string(d.direction)) + "\tsupport=" +
           std::to_string(d.support_count) + '\n';
    out += "tag\tcount\tprobability\n";
    for (const auto& [tag, p] : d.probs) {
      out += tag + '\t' + std::to_string(d.counts.at(tag)) + '\t' +
             format_fixed(p, 6) + '\n';
    }
  }
  return out;
}

}  // namespace jnkit
