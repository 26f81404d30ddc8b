#include "jnkit/evaluator.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "jnkit/errors.hpp"
#include "jnkit/text.hpp"

namespace jnkit {

std::string_view to_string(Column column) {
  return column == Column::kPos ? "pos" : "bio";
}

Column parse_column(std::string_view text) {
  const auto s = to_lower_ascii(trim(text));
  if (s == "pos") return Column::kPos;
  if (s == "bio") return Column::kBio;
  throw ConfigError("column must be pos or bio, got '" + s + "'");
}

double f1_score(double precision, double recall) {
  const double sum = precision + recall;
  return sum == 0.0 ? 0.0 : 2.0 * precision * recall / sum;
}

Prf Prf::from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  Prf r;
  r.tp = tp;
  r.fp = fp;
  r.fn = fn;
  if (tp + fp == 0 || tp + fn == 0) r.degenerate = true;
  if (tp + fp > 0) r.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) r.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  r.f1 = f1_score(r.precision, r.recall);
  return r;
}

void check_alignment(const Corpus& gold, const Corpus& pred) {
  if (gold.sentences.size() != pred.sentences.size()) {
    throw AlignmentError("gold has " + std::to_string(gold.sentences.size()) +
                         " sentences, prediction has " +
                         std::to_string(pred.sentences.size()));
  }
  for (std::size_t s = 0; s < gold.sentences.size(); ++s) {
    const auto& g = gold.sentences[s];
    const auto& p = pred.sentences[s];
    if (g.size() != p.size()) {
      throw AlignmentError("sentence " + std::to_string(s) +
                           " differs in length");
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i].word != p[i].word) {
        throw AlignmentError("sentence " + std::to_string(s) + ", token " +
                             std::to_string(i) + ": '" + g[i].word +
                             "' vs '" + p[i].word + "'");
      }
    }
  }
}

namespace {

const std::string& field(const Token& t, Column c) {
  return c == Column::kPos ? t.pos : t.bio;
}

struct Confusion {
  std::map<std::string, std::size_t> tp, fp, fn;

  void add(const std::string& gold, const std::string& pred) {
    if (gold == pred) {
      ++tp[gold];
    } else {
      ++fn[gold];
      ++fp[pred];
    }
  }

  std::map<std::string, Prf> scores() const {
    std::set<std::string> tags;
    for (const auto* m : {&tp, &fp, &fn}) {
      for (const auto& [tag, n] : *m) tags.insert(tag);
    }
    auto get = [](const std::map<std::string, std::size_t>& m,
                  const std::string& k) -> std::size_t {
      const auto it = m.find(k);
      return it == m.end() ? 0 : it->second;
    };
    std::map<std::string, Prf> out;
    for (const auto& tag : tags) {
      out[tag] = Prf::from_counts(get(tp, tag), get(fp, tag), get(fn, tag));
    }
    return out;
  }
};

}  // namespace

double token_accuracy(const Corpus& gold, const Corpus& pred, Column column) {
  check_alignment(gold, pred);
  std::size_t total = 0;
  std::size_t correct = 0;
  for (std::size_t s = 0; s < gold.sentences.size(); ++s) {
    for (std::size_t i = 0; i < gold.sentences[s].size(); ++i) {
      ++total;
      if (field(gold.sentences[s][i], column) == field(pred.sentences[s][i], column)) {
        ++correct;
      }
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

Prf per_tag_prf(const Corpus& gold, const Corpus& pred, std::string_view tag,
                Column column, const std::vector<Position>* positions) {
  check_alignment(gold, pred);
  std::size_t tp = 0, fp = 0, fn = 0;
  auto visit = [&](std::size_t s, std::size_t i) {
    const bool g = field(gold.sentences[s][i], column) == tag;
    const bool p = field(pred.sentences[s][i], column) == tag;
    if (g && p) ++tp;
    if (!g && p) ++fp;
    if (g && !p) ++fn;
  };
  if (positions) {
    for (const auto& [s, i] : *positions) {
      if (s >= gold.sentences.size() || i >= gold.sentences[s].size()) {
        throw AlignmentError("evaluation position out of range");
      }
      visit(s, i);
    }
  } else {
    for (std::size_t s = 0; s < gold.sentences.size(); ++s) {
      for (std::size_t i = 0; i < gold.sentences[s].size(); ++i) visit(s, i);
    }
  }
  return Prf::from_counts(tp, fp, fn);
}

ChunkScores chunk_prf(const Corpus& gold, const Corpus& pred) {
  check_alignment(gold, pred);
  const auto g = extract_chunks(gold);
  const auto p = extract_chunks(pred);
  const std::set<ChunkSpan> gold_set(g.begin(), g.end());
  ChunkScores scores;
  scores.gold_chunks = g.size();
  scores.predicted_chunks = p.size();
  for (const auto& span : p) {
    if (gold_set.contains(span)) ++scores.correct_chunks;
  }
  scores.prf = Prf::from_counts(scores.correct_chunks,
                                scores.predicted_chunks - scores.correct_chunks,
                                scores.gold_chunks - scores.correct_chunks);
  return scores;
}

EvalReport evaluate(const Corpus& gold, const Corpus& pred, Column column,
                    const std::set<std::string>& focus_tags,
                    const std::vector<Position>* focus_positions) {
  check_alignment(gold, pred);
  EvalReport r;
  r.column = column;
  Confusion all;
  for (std::size_t s = 0; s < gold.sentences.size(); ++s) {
    for (std::size_t i = 0; i < gold.sentences[s].size(); ++i) {
      const auto& g = field(gold.sentences[s][i], column);
      const auto& p = field(pred.sentences[s][i], column);
      ++r.total_tokens;
      if (g == p) ++r.correct_tokens;
      all.add(g, p);
    }
  }
  r.token_accuracy = r.total_tokens == 0
                         ? 0.0
                         : static_cast<double>(r.correct_tokens) /
                               static_cast<double>(r.total_tokens);
  r.per_tag = all.scores();
  if (column == Column::kBio) r.chunks = chunk_prf(gold, pred);
  r.focus_positions =
      focus_positions ? focus_positions->size() : r.total_tokens;
  for (const auto& tag : focus_tags) {
    r.focus[tag] = per_tag_prf(gold, pred, tag, column, focus_positions);
  }
  return r;
}

DeltaReport compare_runs(const EvalReport& baseline, const EvalReport& modified) {
  if (baseline.column != modified.column) {
    throw ComparisonError("reports evaluate different columns");
  }
  if (baseline.total_tokens != modified.total_tokens) {
    throw ComparisonError("reports were computed on different test sets");
  }
  if (baseline.chunks.has_value() != modified.chunks.has_value()) {
    throw ComparisonError("only one report has chunk scores");
  }
  DeltaReport d;
  auto add = [&d](std::string name, double b, double m) {
    d.metrics.push_back(MetricDelta{std::move(name), b, m, m - b});
  };
  add("accuracy", baseline.token_accuracy, modified.token_accuracy);
  if (baseline.chunks) {
    add("chunk.precision", baseline.chunks->prf.precision, modified.chunks->prf.precision);
    add("chunk.recall", baseline.chunks->prf.recall, modified.chunks->prf.recall);
    add("chunk.f1", baseline.chunks->prf.f1, modified.chunks->prf.f1);
  }
  auto diff_tags = [&d](const std::string& scope,
                        const std::map<std::string, Prf>& b,
                        const std::map<std::string, Prf>& m) {
    std::set<std::string> tags;
    for (const auto& [t, _] : b) tags.insert(t);
    for (const auto& [t, _] : m) tags.insert(t);
    for (const auto& tag : tags) {
      TagDelta td;
      td.scope = scope;
      td.tag = tag;
      const auto bi = b.find(tag);
      const auto mi = m.find(tag);
      if (bi != b.end()) td.baseline = bi->second;
      if (mi != m.end()) td.modified = mi->second;
      td.presence = !td.baseline   ? TagPresence::kModifiedOnly
                    : !td.modified ? TagPresence::kBaselineOnly
                                   : TagPresence::kBoth;
      d.tags.push_back(std::move(td));
    }
  };
  diff_tags("all", baseline.per_tag, modified.per_tag);
  diff_tags("focus", baseline.focus, modified.focus);
  return d;
}

namespace {

std::string pct(double v) { return format_fixed(100.0 * v, 2); }

std::vector<std::vector<std::string>> comparison_rows(const EvalReport& baseline,
                                                      const EvalReport& modified) {
  std::vector<std::vector<std::string>> rows{
      {"Model", "Accuracy (%)", "Precision (%)", "Recall (%)", "F1 Score (%)"}};
  for (const auto* r : {&baseline, &modified}) {
    std::vector<std::string> row{r == &baseline ? "Baseline" : "Modified",
                                 pct(r->token_accuracy)};
    if (r->chunks) {
      row.push_back(pct(r->chunks->prf.precision));
      row.push_back(pct(r->chunks->prf.recall));
      row.push_back(pct(r->chunks->prf.f1));
    } else {
      row.insert(row.end(), {"-", "-", "-"});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string presence_name(TagPresence p) {
  switch (p) {
    case TagPresence::kBoth:
      return "both";
    case TagPresence::kBaselineOnly:
      return "removed";
    case TagPresence::kModifiedOnly:
      return "added";
  }
  return "both";
}

}  // namespace

std::string render_comparison_table(const EvalReport& baseline,
                                    const EvalReport& modified) {
  const auto rows = comparison_rows(baseline, modified);
  std::vector<std::size_t> width(rows[0].size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::ostringstream out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << "  ";
      if (c == 0) {
        out << std::left << std::setw(static_cast<int>(width[c])) << row[c];
      } else {
        out << std::right << std::setw(static_cast<int>(width[c])) << row[c];
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string render_comparison_tsv(const EvalReport& baseline,
                                  const EvalReport& modified) {
  std::string out;
  for (const auto& row : comparison_rows(baseline, modified)) {
    out += join(row, "\t") + '\n';
  }
  return out;
}

std::string render_delta_tsv(const DeltaReport& delta) {
  std::string out = "metric\tbaseline\tmodified\tdifference\n";
  for (const auto& m : delta.metrics) {
    out += m.metric + '\t' + format_fixed(m.baseline, 6) + '\t' +
           format_fixed(m.modified, 6) + '\t' + format_fixed(m.difference, 6) +
           '\n';
  }
  out += "\nscope\ttag\tstatus\tbaseline_p\tbaseline_r\tbaseline_f1\t"
         "baseline_support\tmodified_p\tmodified_r\tmodified_f1\t"
         "modified_support\tf1_difference\n";
  auto cells = [](const std::optional<Prf>& p) -> std::string {
    if (!p) return "-\t-\t-\t-";
    return format_fixed(p->precision, 6) + '\t' + format_fixed(p->recall, 6) +
           '\t' + format_fixed(p->f1, 6) + '\t' + std::to_string(p->support());
  };
  for (const auto& t : delta.tags) {
    out += t.scope + '\t' + t.tag + '\t' + presence_name(t.presence) + '\t' +
           cells(t.baseline) + '\t' + cells(t.modified) + '\t' +
           (t.presence == TagPresence::kBoth
                ? format_fixed(t.modified->f1 - t.baseline->f1, 6)
                : std::string("-")) +
           '\n';
  }
  return out;
}

std::string render_report_tsv(const EvalReport& report) {
  std::string out = "metric\tvalue\n";
  out += "column\t" + std::string(to_string(report.column)) + '\n';
  out += "tokens\t" + std::to_string(report.total_tokens) + '\n';
  out += "accuracy\t" + format_fixed(report.token_accuracy, 6) + '\n';
  if (report.chunks) {
    const auto& c = *report.chunks;
    out += "chunk.precision\t" + format_fixed(c.prf.precision, 6) + '\n';
    out += "chunk.recall\t" + format_fixed(c.prf.recall, 6) + '\n';
    out += "chunk.f1\t" + format_fixed(c.prf.f1, 6) + '\n';
    out += "chunk.gold\t" + std::to_string(c.gold_chunks) + '\n';
    out += "chunk.predicted\t" + std::to_string(c.predicted_chunks) + '\n';
    out += "chunk.correct\t" + std::to_string(c.correct_chunks) + '\n';
  }
  auto table = [&out](const std::string& scope, const std::map<std::string, Prf>& m) {
    out += "\nscope\ttag\tprecision\trecall\tf1\tsupport\tdegenerate\n";
    for (const auto& [tag, p] : m) {
      out += scope + '\t' + tag + '\t' + format_fixed(p.precision, 6) + '\t' +
             format_fixed(p.recall, 6) + '\t' + format_fixed(p.f1, 6) + '\t' +
             std::to_string(p.support()) + '\t' + (p.degenerate ? "yes" : "no") +
             '\n';
    }
  };
  table("all", report.per_tag);
  if (!report.focus.empty()) table("focus", report.focus);
  return out;
}

std::string render_key_values(const EvalReport& report, std::string_view prefix) {
  const std::string p(prefix);
  std::string out;
  out += p + ".tokens: " + std::to_string(report.total_tokens) + '\n';
  out += p + ".accuracy: " + format_g17(report.token_accuracy) + '\n';
  if (report.chunks) {
    out += p + ".chunk.precision: " + format_g17(report.chunks->prf.precision) + '\n';
    out += p + ".chunk.recall: " + format_g17(report.chunks->prf.recall) + '\n';
    out += p + ".chunk.f1: " + format_g17(report.chunks->prf.f1) + '\n';
  }
  for (const auto& [tag, s] : report.focus) {
    out += p + ".focus." + tag + ".precision: " + format_g17(s.precision) + '\n';
    out += p + ".focus." + tag + ".recall: " + format_g17(s.recall) + '\n';
    out += p + ".focus." + tag + ".f1: " + format_g17(s.f1) + '\n';
    out += p + ".focus." + tag + ".support: " + std::to_string(s.support()) + '\n';
  }
  return out;
}

}  // namespace jnkit
