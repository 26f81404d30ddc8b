#include "jnkit/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <set>
#include <unordered_map>

#include "jnkit/errors.hpp"
#include "jnkit/text.hpp"

namespace jnkit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double numerator, double denominator) {
  if (numerator <= 0.0) return kNegInf;
  return std::log(numerator / denominator);
}

}  // namespace

std::string_view to_string(UnknownWordMode mode) {
  return mode == UnknownWordMode::kSuffix ? "suffix" : "uniform";
}

UnknownWordMode parse_unknown_word_mode(std::string_view text) {
  const std::string s = to_lower_ascii(trim(text));
  if (s == "suffix") return UnknownWordMode::kSuffix;
  if (s == "uniform") return UnknownWordMode::kUniform;
  throw ConfigError("unknown_word_mode must be uniform or suffix, got '" + s +
                    "'");
}

void HmmConfig::validate() const {
  if (!(transition_smoothing_k >= 0.0) || !(emission_smoothing_k >= 0.0)) {
    throw ConfigError("hmm: smoothing constants must be >= 0");
  }
  if (suffix_max_len < 1) throw ConfigError("hmm: suffix_max_len must be >= 1");
  if (rare_threshold < 0) throw ConfigError("hmm: rare_threshold must be >= 0");
  if (unknown_word_mode == UnknownWordMode::kSuffix &&
      !(suffix_smoothing_k > 0.0)) {
    throw ConfigError("hmm: suffix_smoothing_k must be > 0 in suffix mode");
  }
}

HmmModel::HmmModel(HmmParams params) : params_(std::move(params)) {
  const std::size_t n = params_.tags.size();
  if (n == 0) throw ValidationError("HMM needs at least one tag");
  auto check = [n](std::size_t size, const char* what) {
    if (size != n) {
      throw ValidationError(std::string("HMM table '") + what +
                            "' does not match the tag count");
    }
  };
  check(params_.start_logp.size(), "start");
  check(params_.stop_logp.size(), "stop");
  check(params_.transition_logp.size(), "transitions");
  for (const auto& row : params_.transition_logp) check(row.size(), "transitions");
  if (params_.emission_floor_logp.empty()) {
    params_.emission_floor_logp.assign(n, kNegInf);
  }
  if (params_.unknown_logp.empty()) params_.unknown_logp.assign(n, kNegInf);
  check(params_.emission_floor_logp.size(), "emission floor");
  check(params_.unknown_logp.size(), "unknown");
  for (const auto& [word, column] : params_.emission_logp) {
    check(column.size(), "emissions");
  }
  for (const auto& table : params_.suffix_logp) {
    for (const auto& [suffix, column] : table) check(column.size(), "suffixes");
  }
  for (std::size_t t = 0; t < n; ++t) {
    if (!index_.emplace(params_.tags[t], t).second) {
      throw ValidationError("duplicate tag '" + params_.tags[t] + "'");
    }
  }
}

std::vector<std::string> HmmModel::tagset() const {
  std::vector<std::string> out;
  out.emplace_back(kStartTag);
  out.insert(out.end(), params_.tags.begin(), params_.tags.end());
  out.emplace_back(kStopTag);
  return out;
}

std::size_t HmmModel::tag_index(std::string_view tag) const {
  const auto it = index_.find(tag);
  if (it == index_.end()) {
    throw ValidationError("tag '" + std::string(tag) + "' is not in the tagset");
  }
  return it->second;
}

bool HmmModel::in_vocabulary(const std::string& word) const {
  return params_.emission_logp.contains(word);
}

std::vector<double> HmmModel::emission_column(const std::string& word) const {
  if (const auto it = params_.emission_logp.find(word);
      it != params_.emission_logp.end()) {
    return it->second;
  }
  std::vector<double> column = params_.unknown_logp;
  if (params_.unknown_word_mode != UnknownWordMode::kSuffix) return column;
  const std::size_t longest =
      std::min(params_.suffix_logp.size(), word.size());
  for (std::size_t len = longest; len >= 1; --len) {
    const auto& table = params_.suffix_logp[len - 1];
    const auto it = table.find(word.substr(word.size() - len));
    if (it == table.end()) continue;
    for (std::size_t t = 0; t < column.size(); ++t) column[t] += it->second[t];
    return column;
  }
  return column;
}

HmmModel train_hmm(const Corpus& train, const HmmConfig& config) {
  config.validate();
  if (train.token_count() == 0) throw TrainingError("empty training corpus");

  std::set<std::string> tag_set;
  for (const auto& s : train.sentences) {
    for (const auto& t : s) tag_set.insert(t.pos);
  }
  HmmParams p;
  p.tags.assign(tag_set.begin(), tag_set.end());
  const std::size_t n = p.tags.size();
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t t = 0; t < n; ++t) index.emplace(p.tags[t], t);

  std::vector<double> start(n, 0.0), stop(n, 0.0), tag_count(n, 0.0);
  std::vector<std::vector<double>> trans(n, std::vector<double>(n, 0.0));
  std::map<std::string, std::vector<double>> word_tag;
  std::unordered_map<std::string, std::size_t> word_total;
  std::size_t sentence_count = 0;

  for (const auto& sentence : train.sentences) {
    if (sentence.empty()) continue;
    ++sentence_count;
    std::size_t prev = 0;
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      const std::size_t t = index.at(sentence[i].pos);
      if (i == 0) {
        start[t] += 1;
      } else {
        trans[prev][t] += 1;
      }
      tag_count[t] += 1;
      auto& column = word_tag[sentence[i].word];
      if (column.empty()) column.assign(n, 0.0);
      column[t] += 1;
      ++word_total[sentence[i].word];
      prev = t;
    }
    stop[prev] += 1;
  }

  const double kt = config.transition_smoothing_k;
  const double start_den =
      static_cast<double>(sentence_count) + kt * static_cast<double>(n);
  p.start_logp.resize(n);
  p.stop_logp.resize(n);
  p.transition_logp.assign(n, std::vector<double>(n));
  for (std::size_t t = 0; t < n; ++t) {
    p.start_logp[t] = safe_log(start[t] + kt, start_den);
    // Successor events of t: every real tag plus STOP.
    const double den = tag_count[t] + kt * static_cast<double>(n + 1);
    for (std::size_t u = 0; u < n; ++u) {
      p.transition_logp[t][u] = safe_log(trans[t][u] + kt, den);
    }
    p.stop_logp[t] = safe_log(stop[t] + kt, den);
  }

  // Tokens of rare words stand in for the unknown-word population.
  std::vector<double> rare(n, 0.0);
  const auto threshold = static_cast<std::size_t>(config.rare_threshold);
  std::vector<std::map<std::string, std::vector<double>>> suffix_counts(
      static_cast<std::size_t>(config.suffix_max_len));
  std::vector<std::vector<double>> suffix_tag_total(
      suffix_counts.size(), std::vector<double>(n, 0.0));
  for (const auto& [word, column] : word_tag) {
    if (word_total.at(word) > threshold) continue;
    for (std::size_t t = 0; t < n; ++t) {
      if (column[t] == 0.0) continue;
      rare[t] += column[t];
      for (std::size_t len = 1; len <= suffix_counts.size() && len <= word.size();
           ++len) {
        auto& counts = suffix_counts[len - 1][word.substr(word.size() - len)];
        if (counts.empty()) counts.assign(n, 0.0);
        counts[t] += column[t];
        suffix_tag_total[len - 1][t] += column[t];
      }
    }
  }

  const double ke = config.emission_smoothing_k;
  const double vocab_events = static_cast<double>(word_tag.size() + 1);
  std::vector<double> emission_den(n);
  p.emission_floor_logp.resize(n);
  p.unknown_logp.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    emission_den[t] = tag_count[t] + rare[t] + ke * vocab_events;
    p.emission_floor_logp[t] = safe_log(ke, emission_den[t]);
    p.unknown_logp[t] = safe_log(rare[t] + ke, emission_den[t]);
  }
  for (const auto& [word, column] : word_tag) {
    auto& out = p.emission_logp[word];
    out.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
      out[t] = column[t] == 0.0 ? p.emission_floor_logp[t]
                                : safe_log(column[t] + ke, emission_den[t]);
    }
  }

  p.unknown_word_mode = config.unknown_word_mode;
  if (config.unknown_word_mode == UnknownWordMode::kSuffix) {
    const double ks = config.suffix_smoothing_k;
    p.suffix_logp.resize(suffix_counts.size());
    for (std::size_t len = 0; len < suffix_counts.size(); ++len) {
      const double events = static_cast<double>(suffix_counts[len].size() + 1);
      auto& table = p.suffix_logp[len];
      for (const auto& [suffix, counts] : suffix_counts[len]) {
        auto& out = table[suffix];
        out.resize(n);
        for (std::size_t t = 0; t < n; ++t) {
          out[t] = safe_log(counts[t] + ks,
                            suffix_tag_total[len][t] + ks * events);
        }
      }
      auto& unseen = table[std::string(kUnseenSuffix)];
      unseen.resize(n);
      for (std::size_t t = 0; t < n; ++t) {
        unseen[t] = safe_log(ks, suffix_tag_total[len][t] + ks * events);
      }
    }
  }
  return HmmModel(std::move(p));
}

TagSequence viterbi_decode(const HmmModel& model,
                           const std::vector<std::string>& words) {
  TagSequence result;
  if (words.empty()) return result;
  const auto& p = model.params();
  const std::size_t n = model.num_tags();
  const std::size_t len = words.size();

  std::vector<double> delta(n), next(n);
  std::vector<std::vector<std::size_t>> back(len, std::vector<std::size_t>(n, 0));

  auto emission = model.emission_column(words[0]);
  for (std::size_t t = 0; t < n; ++t) delta[t] = p.start_logp[t] + emission[t];

  for (std::size_t i = 1; i < len; ++i) {
    emission = model.emission_column(words[i]);
    for (std::size_t t = 0; t < n; ++t) {
      std::size_t best_prev = 0;
      double best = delta[0] + p.transition_logp[0][t];
      for (std::size_t u = 1; u < n; ++u) {
        const double cand = delta[u] + p.transition_logp[u][t];
        if (cand > best) {
          best = cand;
          best_prev = u;
        }
      }
      back[i][t] = best_prev;
      next[t] = best + emission[t];
    }
    delta.swap(next);
  }

  std::size_t best_last = 0;
  double best = delta[0] + p.stop_logp[0];
  for (std::size_t t = 1; t < n; ++t) {
    const double cand = delta[t] + p.stop_logp[t];
    if (cand > best) {
      best = cand;
      best_last = t;
    }
  }

  std::vector<std::size_t> path(len);
  path[len - 1] = best_last;
  for (std::size_t i = len - 1; i > 0; --i) path[i - 1] = back[i][path[i]];
  result.tags.reserve(len);
  for (const auto t : path) result.tags.push_back(p.tags[t]);
  result.score = best;
  return result;
}

double sequence_log_prob(const HmmModel& model,
                         const std::vector<std::string>& words,
                         const std::vector<std::string>& tags) {
  if (words.size() != tags.size()) {
    throw ValidationError("words and tags differ in length");
  }
  if (words.empty()) return 0.0;
  const auto& p = model.params();
  std::size_t prev = model.tag_index(tags[0]);
  double score = p.start_logp[prev] + model.emission_column(words[0])[prev];
  for (std::size_t i = 1; i < words.size(); ++i) {
    const std::size_t t = model.tag_index(tags[i]);
    score = score + p.transition_logp[prev][t];
    score = score + model.emission_column(words[i])[t];
    prev = t;
  }
  return score + p.stop_logp[prev];
}

Corpus tag_corpus(const HmmModel& model, const Corpus& corpus) {
  Corpus out = corpus;
  std::vector<std::string> words;
  for (auto& sentence : out.sentences) {
    words.clear();
    for (const auto& t : sentence) words.push_back(t.word);
    const auto decoded = viterbi_decode(model, words);
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      sentence[i].pos = decoded.tags[i];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

constexpr std::string_view kMagic = "jnkit-hmm";

void write_row(std::string& out, std::initializer_list<std::string_view> fields) {
  bool first = true;
  for (const auto f : fields) {
    if (!first) out += '\t';
    out += f;
    first = false;
  }
  out += '\n';
}

bool same_bits(double a, double b) {
  return std::memcmp(&a, &b, sizeof a) == 0;
}

}  // namespace

std::string save_hmm(const HmmModel& model, int version) {
  const auto& p = model.params();
  const std::size_t n = p.tags.size();
  std::string out;
  write_row(out, {kMagic, std::to_string(version)});
  out += "[CONFIG]\n";
  write_row(out, {"unknown_word_mode", to_string(p.unknown_word_mode)});
  write_row(out, {"suffix_max_len", std::to_string(p.suffix_logp.size())});

  out += "[TAGS]\n";
  for (const auto& tag : model.tagset()) write_row(out, {tag});

  out += "[TRANSITIONS]\n";
  for (std::size_t t = 0; t < n; ++t) {
    write_row(out, {kStartTag, p.tags[t], format_g17(p.start_logp[t])});
  }
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t u = 0; u < n; ++u) {
      write_row(out, {p.tags[t], p.tags[u], format_g17(p.transition_logp[t][u])});
    }
    write_row(out, {p.tags[t], kStopTag, format_g17(p.stop_logp[t])});
  }

  out += "[EMISSION_FLOOR]\n";
  for (std::size_t t = 0; t < n; ++t) {
    write_row(out, {p.tags[t], format_g17(p.emission_floor_logp[t])});
  }
  out += "[UNKNOWN]\n";
  for (std::size_t t = 0; t < n; ++t) {
    write_row(out, {p.tags[t], format_g17(p.unknown_logp[t])});
  }

  // Entries equal to the floor are implied.
  out += "[EMISSIONS]\n";
  for (const auto& [word, column] : p.emission_logp) {
    bool any = false;
    for (std::size_t t = 0; t < n; ++t) {
      if (same_bits(column[t], p.emission_floor_logp[t])) continue;
      write_row(out, {p.tags[t], word, format_g17(column[t])});
      any = true;
    }
    if (!any) write_row(out, {p.tags[0], word, format_g17(column[0])});
  }

  out += "[SUFFIXES]\n";
  for (std::size_t len = 0; len < p.suffix_logp.size(); ++len) {
    const std::string len_text = std::to_string(len + 1);
    for (const auto& [suffix, column] : p.suffix_logp[len]) {
      for (std::size_t t = 0; t < n; ++t) {
        write_row(out, {len_text, suffix, p.tags[t], format_g17(column[t])});
      }
    }
  }
  out += "[END]\n";
  return out;
}

HmmModel load_hmm(std::string_view text, int expected_version) {
  std::vector<std::string_view> lines = split_view(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw ModelLoadError("empty HMM model file");

  const auto header = split_view(lines[0], '\t');
  if (header.size() != 2 || header[0] != kMagic) {
    throw ModelLoadError("not an HMM model file");
  }
  long long version = 0;
  try {
    version = parse_int(header[1], "version");
  } catch (const ConfigError&) {
    throw ModelLoadError("unreadable HMM model version");
  }
  if (version != expected_version) {
    throw ModelLoadError("HMM model format version " + std::to_string(version) +
                         " but this reader expects " +
                         std::to_string(expected_version));
  }
  if (lines.back() != "[END]") {
    throw ModelLoadError("HMM model file is truncated (missing [END])");
  }

  HmmParams p;
  std::string section;
  std::vector<std::string> all_tags;
  std::map<std::string, std::size_t> index;
  std::size_t suffix_max_len = 0;
  std::size_t transitions_seen = 0;
  auto fail = [](std::size_t line, const std::string& what) {
    return ModelLoadError("HMM model line " + std::to_string(line + 1) + ": " +
                          what);
  };
  auto value = [&](std::string_view field, std::size_t line) {
    try {
      return parse_double(field, "log-probability");
    } catch (const ConfigError& e) {
      throw fail(line, e.what());
    }
  };
  auto tag_of = [&](std::string_view name, std::size_t line) {
    const auto it = index.find(std::string(name));
    if (it == index.end()) throw fail(line, "unknown tag '" + std::string(name) + "'");
    return it->second;
  };
  auto ensure_tags = [&](std::size_t line) {
    if (!p.tags.empty() && p.start_logp.size() == p.tags.size()) return;
    if (all_tags.size() < 3 || all_tags.front() != kStartTag ||
        all_tags.back() != kStopTag) {
      throw fail(line, "[TAGS] must list ⟨START⟩, the tags, then ⟨STOP⟩");
    }
    p.tags.assign(all_tags.begin() + 1, all_tags.end() - 1);
    for (std::size_t t = 0; t < p.tags.size(); ++t) index[p.tags[t]] = t;
    const std::size_t n = p.tags.size();
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    p.start_logp.assign(n, nan);
    p.stop_logp.assign(n, nan);
    p.transition_logp.assign(n, std::vector<double>(n, nan));
    p.emission_floor_logp.assign(n, nan);
    p.unknown_logp.assign(n, nan);
    p.suffix_logp.assign(suffix_max_len, {});
  };

  for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (line.starts_with('[')) {
      section = std::string(line);
      if (section != "[TAGS]" && section != "[CONFIG]") ensure_tags(i);
      continue;
    }
    const auto f = split_view(line, '\t');
    if (section == "[CONFIG]") {
      if (f.size() != 2) throw fail(i, "bad config row");
      if (f[0] == "unknown_word_mode") {
        try {
          p.unknown_word_mode = parse_unknown_word_mode(f[1]);
        } catch (const ConfigError& e) {
          throw fail(i, e.what());
        }
      } else if (f[0] == "suffix_max_len") {
        suffix_max_len = static_cast<std::size_t>(value(f[1], i));
      }
    } else if (section == "[TAGS]") {
      if (f.size() != 1 || f[0].empty()) throw fail(i, "bad tag row");
      all_tags.emplace_back(f[0]);
    } else if (section == "[TRANSITIONS]") {
      if (f.size() != 3) throw fail(i, "bad transition row");
      const double v = value(f[2], i);
      if (f[0] == kStartTag) {
        p.start_logp[tag_of(f[1], i)] = v;
      } else if (f[1] == kStopTag) {
        p.stop_logp[tag_of(f[0], i)] = v;
      } else {
        p.transition_logp[tag_of(f[0], i)][tag_of(f[1], i)] = v;
      }
      ++transitions_seen;
    } else if (section == "[EMISSION_FLOOR]" || section == "[UNKNOWN]") {
      if (f.size() != 2) throw fail(i, "bad per-tag row");
      auto& target = section == "[UNKNOWN]" ? p.unknown_logp
                                            : p.emission_floor_logp;
      target[tag_of(f[0], i)] = value(f[1], i);
    } else if (section == "[EMISSIONS]") {
      if (f.size() != 3) throw fail(i, "bad emission row");
      auto& column = p.emission_logp[std::string(f[1])];
      if (column.empty()) column = p.emission_floor_logp;
      column[tag_of(f[0], i)] = value(f[2], i);
    } else if (section == "[SUFFIXES]") {
      if (f.size() != 4) throw fail(i, "bad suffix row");
      const auto len = static_cast<std::size_t>(value(f[0], i));
      if (len < 1 || len > p.suffix_logp.size()) throw fail(i, "bad suffix length");
      auto& column = p.suffix_logp[len - 1][std::string(f[1])];
      if (column.empty()) {
        column.assign(p.tags.size(), std::numeric_limits<double>::quiet_NaN());
      }
      column[tag_of(f[2], i)] = value(f[3], i);
    } else {
      throw fail(i, "row outside a known section");
    }
  }

  ensure_tags(lines.size() - 1);
  const std::size_t n = p.tags.size();
  if (transitions_seen != n * (n + 2)) {
    throw ModelLoadError("HMM model has an incomplete [TRANSITIONS] table");
  }
  auto complete = [](const std::vector<double>& v) {
    return std::none_of(v.begin(), v.end(), [](double x) { return std::isnan(x); });
  };
  bool ok = complete(p.start_logp) && complete(p.stop_logp) &&
            complete(p.emission_floor_logp) && complete(p.unknown_logp);
  for (const auto& row : p.transition_logp) ok = ok && complete(row);
  for (const auto& table : p.suffix_logp) {
    for (const auto& [s, column] : table) ok = ok && complete(column);
  }
  if (!ok) throw ModelLoadError("HMM model has missing table entries");
  try {
    return HmmModel(std::move(p));
  } catch (const ValidationError& e) {
    throw ModelLoadError(e.what());
  }
}

}  // namespace jnkit
