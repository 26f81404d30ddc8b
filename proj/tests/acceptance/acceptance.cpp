// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "jnkit/corpus.hpp"
#include "jnkit/evaluator.hpp"
#include "jnkit/experiment.hpp"
#include "jnkit/hmm.hpp"
#include "jnkit/maxent.hpp"
#include "jnkit/profiler.hpp"
#include "jnkit/screener.hpp"
#include "jnkit/synthetic.hpp"
#include "jnkit/text.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace jnkit;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

Corpus random_corpus(std::mt19937_64& rng, std::size_t max_tokens) {
  const std::vector<std::string> words{"the", "poor", "Rich", "ran", "very", "1990", "cats"};
  const std::vector<std::string> tags{"DT", "JJ", "JJS", "NN", "NNS", "VBD", "RB", "IN"};
  const std::vector<std::string> types{"NP", "VP", "PP"};
  std::uniform_int_distribution<std::size_t> len(1, 8), w(0, 6), t(0, 7), ty(0, 2), act(0, 2);
  Corpus c;
  std::size_t tokens = 0;
  while (true) {
    const std::size_t n = len(rng);
    if (tokens + n > max_tokens) break;
    tokens += n;
    Sentence s;
    std::string open;
    for (std::size_t i = 0; i < n; ++i) {
      Token tok{words[w(rng)], tags[t(rng)], "O"};
      const auto a = act(rng);
      if (a == 0) {
        open.clear();
      } else if (a == 1 || open.empty()) {
        open = types[ty(rng)];
        tok.bio = "B-" + open;
      } else {
        tok.bio = "I-" + open;
      }
      s.push_back(tok);
    }
    c.sentences.push_back(s);
  }
  return c;
}

// ----------------------------------------------------------------------------

Outcome viterbi_oracle() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 rng(20240501);
  std::uniform_int_distribution<std::size_t> tags(1, 8), len(1, 6), vocab(1, 6);
  std::size_t paths = 0;
  for (int m = 0; m < 500 && o.pass; ++m) {
    const std::size_t v = vocab(rng);
    const auto model = testing::random_hmm(rng, tags(rng), v);
    std::uniform_int_distribution<std::size_t> word(0, v - 1);
    std::vector<std::string> words(len(rng));
    for (auto& w : words) w = "w" + std::to_string(word(rng));
    const auto got = viterbi_decode(model, words);
    const auto brute = testing::brute_force_viterbi(model, words, true);
    paths += brute.paths_enumerated;
    std::vector<std::string> expected;
    for (auto t : brute.path) expected.push_back(model.params().tags[t]);
    o.require(got.tags == expected, "path differs from exhaustive argmax in model " +
                                        std::to_string(m));
    for (double s : brute.all_scores)
      o.require(got.score >= s - 1e-9, "an enumerated path outscores Viterbi in model " +
                                           std::to_string(m));
  }
  const double elapsed = seconds_since(start);
  o.require(elapsed < 60.0, "took " + format_fixed(elapsed, 2) + " s");
  if (o.pass)
    o.detail = "500 models, " + std::to_string(paths) + " paths, " +
               format_fixed(elapsed, 2) + " s";
  return o;
}

Outcome gradient_check() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<std::size_t> feats(1, 20), labels(2, 4), examples(1, 30);
  std::uniform_real_distribution<double> wdist(-1.5, 1.5), ldist(0.0, 0.5);
  double worst = 0;
  for (int m = 0; m < 50; ++m) {
    const auto prob = testing::random_problem(rng, feats(rng), labels(rng), examples(rng));
    std::vector<double> w(prob.num_weights());
    for (auto& x : w) x = wdist(rng);
    const double lambda = ldist(rng);
    const auto r = objective_and_gradient(w, prob, lambda);
    const auto fd = testing::finite_difference_gradient(w, prob, lambda, 1e-5);
    for (std::size_t i = 0; i < w.size(); ++i)
      worst = std::max(worst, testing::relative_error(r.gradient[i], fd[i]));
  }
  const double elapsed = seconds_since(start);
  o.require(worst <= 1e-4, "worst relative error " + format_g17(worst));
  o.require(elapsed < 30.0, "took " + format_fixed(elapsed, 2) + " s");
  if (o.pass)
    o.detail = "50 models, worst relative error " + format_g17(worst) + ", " +
               format_fixed(elapsed, 2) + " s";
  return o;
}

Outcome optimizer_monotone() {
  Outcome o;
  const double tol = 1e-6;
  OptimizeTrace trace;
  const auto prob = testing::separable_problem();
  const auto w = optimize_weights(prob, 0.1, 200, tol, &trace);
  for (std::size_t i = 1; i < trace.objective_history.size(); ++i)
    o.require(trace.objective_history[i] >= trace.objective_history[i - 1],
              "objective decreased at step " + std::to_string(i));
  const auto g = objective_and_gradient(w, prob, 0.1).gradient;
  double gmax = 0;
  for (double x : g) gmax = std::max(gmax, std::abs(x));
  o.require(trace.converged, "optimizer did not converge");
  o.require(gmax <= 10 * tol, "gradient max-norm " + format_g17(gmax));

  // Same check through the corpus-level trainer.
  std::vector<std::string> sentences;
  for (int i = 0; i < 5; ++i) sentences.push_back("the/DT/B-NP ran/VBD/O");
  OptimizeTrace corpus_trace;
  MaxEntConfig cfg;
  cfg.convergence_tol = tol;
  train_maxent(testing::corpus_of(sentences), cfg, &corpus_trace);
  for (std::size_t i = 1; i < corpus_trace.objective_history.size(); ++i)
    o.require(corpus_trace.objective_history[i] >= corpus_trace.objective_history[i - 1],
              "corpus objective decreased at step " + std::to_string(i));
  o.require(corpus_trace.converged && corpus_trace.gradient_max_norm <= 10 * tol,
            "corpus trainer gradient max-norm " +
                format_g17(corpus_trace.gradient_max_norm));
  if (o.pass)
    o.detail = std::to_string(trace.iterations) + " iterations, max|g| = " +
               format_g17(gmax);
  return o;
}

Outcome screener_fixture() {
  Outcome o;
  const auto corpus = testing::corpus_of(testing::kScreenerFixture);
  o.require(corpus.sentences.size() == 25, "fixture is not 25 sentences");
  std::set<std::pair<std::size_t, std::size_t>> got;
  for (const auto& c : screen_candidates(corpus, ScreenConfig{}))
    got.insert({c.sentence_index, c.token_index});
  o.require(got == testing::kScreenerFixtureGold,
            "returned " + std::to_string(got.size()) + " positions, expected 6");
  if (o.pass) o.detail = "6 of 6 labeled positions, no extras";
  return o;
}

Outcome relabel_integrity() {
  Outcome o;
  std::mt19937_64 rng(55);
  std::size_t trials = 0;
  for (int trial = 0; trial < 300 && o.pass; ++trial) {
    const auto corpus = random_corpus(rng, 60);
    if (corpus.empty()) continue;
    ++trials;
    std::vector<CandidateRef> cands;
    std::bernoulli_distribution take(0.2);
    for (std::size_t s = 0; s < corpus.sentences.size(); ++s)
      for (std::size_t i = 0; i < corpus.sentences[s].size(); ++i)
        if (take(rng)) cands.push_back({s, i, corpus.sentences[s][i].pos});
    const auto relabeled = apply_jn_relabel(corpus, cands);
    std::size_t pos_changes = 0, other_changes = 0;
    for (std::size_t s = 0; s < corpus.sentences.size(); ++s)
      for (std::size_t i = 0; i < corpus.sentences[s].size(); ++i) {
        const auto& a = corpus.sentences[s][i];
        const auto& b = relabeled.sentences[s][i];
        pos_changes += a.pos != b.pos;
        other_changes += (a.word != b.word) + (a.bio != b.bio);
      }
    o.require(pos_changes == cands.size(), "changed " + std::to_string(pos_changes) +
                                               " POS fields for " +
                                               std::to_string(cands.size()) + " candidates");
    o.require(other_changes == 0, "word or BIO fields changed");
    o.require(write_pos_chunk(restore_original_pos(relabeled, cands)) ==
                  write_pos_chunk(corpus),
              "restore is not byte-exact");
  }
  if (o.pass) o.detail = std::to_string(trials) + " random corpora";
  return o;
}

Outcome profiler_oracle() {
  Outcome o;
  std::mt19937_64 rng(66);
  const std::vector<std::vector<std::string>> targets{{"JJ"}, {"NN", "NNS"}, {"DT"}};
  for (int trial = 0; trial < 300 && o.pass; ++trial) {
    const auto text = write_pos_chunk(random_corpus(rng, 100));
    const auto corpus = parse_pos_chunk(text);
    if (corpus.empty()) continue;
    for (const auto& tset : targets)
      for (const bool preceding : {true, false}) {
        const auto d = context_distribution(
            corpus, {tset.begin(), tset.end()},
            preceding ? Direction::kPreceding : Direction::kFollowing);
        o.require(d.counts == testing::tally_context(text, tset, preceding, false),
                  "counts differ from the brute-force tally");
        if (d.empty()) continue;
        double sum = 0;
        for (const auto& [k, p] : d.probs) sum += p;
        o.require(std::abs(sum - 1) <= 1e-9, "probabilities sum to " + format_g17(sum));
        o.require(std::abs(cosine_similarity(d, d) - 1) <= 1e-9, "cos(a,a) != 1");
      }
  }
  TagDistribution a, b;
  a.probs = {{"DT", 0.7}, {"JJ", 0.3}};
  a.support_count = 10;
  b.probs = {{"NN", 1.0}};
  b.support_count = 3;
  o.require(cosine_similarity(a, b) == 0.0, "disjoint supports do not give exactly 0");
  if (o.pass) o.detail = "300 corpora <= 100 tokens";
  return o;
}

Outcome metric_arithmetic() {
  Outcome o;
  // 611/650 = 0.94 precision, 611/1175 = 0.52 recall.
  Corpus gold, pred;
  auto add = [&](const char* g, const char* p, int n) {
    for (int i = 0; i < n; ++i) {
      gold.sentences.push_back({{"w", g, "O"}});
      pred.sentences.push_back({{"w", p, "O"}});
    }
  };
  add("JJ", "JJ", 611);
  add("NN", "JJ", 39);
  add("JJ", "NN", 564);
  const auto s = per_tag_prf(gold, pred, "JJ", Column::kPos);
  o.require(std::abs(s.precision - 0.94) <= 1e-12 && std::abs(s.recall - 0.52) <= 1e-12,
            "fixture does not give P=0.94, R=0.52");
  o.require(std::abs(s.f1 - 0.67) <= 0.005, "F1 = " + format_g17(s.f1));
  const auto corpus = testing::corpus_of(testing::kScreenerFixture);
  const auto c = chunk_prf(corpus, corpus).prf;
  o.require(c.precision == 1.0 && c.recall == 1.0 && c.f1 == 1.0,
            "identical corpora do not score (1,1,1)");
  if (o.pass) o.detail = "F1 = " + format_fixed(s.f1, 4) + ", chunk (1,1,1)";
  return o;
}

Outcome format_round_trip() {
  Outcome o;
  std::vector<std::string> fixtures{testing::to_pos_chunk(testing::kScreenerFixture)};
  std::mt19937_64 rng(88);
  for (int i = 0; i < 200; ++i) fixtures.push_back(write_pos_chunk(random_corpus(rng, 80)));
  for (const auto& text : fixtures) {
    const auto c = parse_pos_chunk(text, Scheme::kIob2);
    o.require(write_pos_chunk(c) == text, "parse -> write is not byte-identical");
    const auto iob1 = normalize_bio(c, Scheme::kIob1);
    const auto back = normalize_bio(iob1, Scheme::kIob2);
    o.require(extract_chunks(iob1) == extract_chunks(c), "IOB1 spans differ");
    o.require(extract_chunks(back) == extract_chunks(c), "round-tripped spans differ");
    o.require(write_pos_chunk(back) == text, "IOB2 -> IOB1 -> IOB2 is not identity");
    o.require(write_pos_chunk(parse_pos_chunk(write_pos_chunk(iob1), Scheme::kIob1)) ==
                  write_pos_chunk(iob1),
              "IOB1 text does not round-trip");
  }
  if (o.pass) o.detail = std::to_string(fixtures.size()) + " fixtures";
  return o;
}

// word and chunk columns of a pos-chunk file
std::string word_bio(const std::string& path) {
  std::string out;
  for (const auto& line : split(read_file(path), '\n')) {
    const auto f = split(line, '\t');
    out += f.size() == 3 ? f[0] + '\t' + f[2] + '\n' : "\n";
  }
  return out;
}

struct DeskScale {
  fs::path root;
  std::string input;
  ExperimentResult first;
  double first_seconds = 0;
};

DeskScale& desk_scale() {
  static DeskScale d = [] {
    DeskScale out;
    out.root = fs::temp_directory_path() / "jnkit_acceptance";
    fs::remove_all(out.root);
    fs::create_directories(out.root);
    SyntheticConfig sc;
    sc.seed = 2024;
    sc.target_tokens = 50000;
    sc.nominal_rate = 0.001;
    out.input = (out.root / "synthetic.pos-chunk").string();
    write_pos_chunk_file(generate_synthetic_corpus(sc).corpus, out.input);
    ExperimentConfig cfg;
    cfg.input_path = out.input;
    cfg.output_dir = (out.root / "run1").string();
    const auto start = Clock::now();
    out.first = run_experiment(cfg);
    out.first_seconds = seconds_since(start);
    return out;
  }();
  return d;
}

Outcome end_to_end() {
  Outcome o;
  auto& d = desk_scale();
  const auto corpus = read_pos_chunk_file(d.input);
  const double rate = double(d.first.candidates.size()) / double(corpus.token_count());
  o.require(corpus.token_count() >= 50000, "corpus has " +
                                               std::to_string(corpus.token_count()) +
                                               " tokens");
  o.require(rate > 0.0005 && rate < 0.002, "candidate rate " + format_g17(rate));
  o.require(d.first_seconds < 120.0, "took " + format_fixed(d.first_seconds, 2) + " s");
  std::string accs;
  for (const auto& [task, outcome] : d.first.tasks) {
    const double diff =
        100.0 * std::abs(outcome.modified.token_accuracy - outcome.baseline.token_accuracy);
    o.require(diff <= 0.5, std::string(to_string(task)) + " accuracy differs by " +
                               format_fixed(diff, 3) + " pp");
    accs += std::string(to_string(task)) + " " +
            format_fixed(100 * outcome.baseline.token_accuracy, 2) + "/" +
            format_fixed(100 * outcome.modified.token_accuracy, 2) + "%, ";
  }
  o.require(d.first.tasks.size() == 2, "both tasks did not run");
  const auto run = d.root / "run1";
  for (const auto* part : {"train", "test"}) {
    const auto b = (run / "baseline" / (std::string(part) + ".pos-chunk")).string();
    const auto m = (run / "modified" / (std::string(part) + ".pos-chunk")).string();
    o.require(word_bio(b) == word_bio(m),
              std::string(part) + " BIO column differs between arms");
  }
  if (o.pass)
    o.detail = std::to_string(corpus.token_count()) + " tokens, " +
               std::to_string(d.first.candidates.size()) + " candidates, " + accs +
               format_fixed(d.first_seconds, 2) + " s";
  return o;
}

Outcome determinism() {
  Outcome o;
  auto& d = desk_scale();
  ExperimentConfig cfg;
  cfg.input_path = d.input;
  cfg.output_dir = (d.root / "run2").string();
  const auto second = run_experiment(cfg);
  o.require(second.manifest == d.first.manifest, "manifests differ");
  std::size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(d.root / "run1")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), d.root / "run1");
    if (rel == "timings.txt") continue;
    const auto other = d.root / "run2" / rel;
    o.require(fs::exists(other) && read_file(entry.path().string()) ==
                                       read_file(other.string()),
              rel.string() + " differs between runs");
    ++compared;
  }
  if (o.pass) o.detail = std::to_string(compared) + " files byte-identical";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"viterbi matches exhaustive search on 500 random HMMs", viterbi_oracle},
      {"maxent gradient matches finite differences", gradient_check},
      {"optimizer is monotone and converges to a stationary point", optimizer_monotone},
      {"screener returns exactly the hand-labeled fixture set", screener_fixture},
      {"relabel changes only candidate POS fields and restores exactly", relabel_integrity},
      {"profiler matches brute-force tallies", profiler_oracle},
      {"metric arithmetic", metric_arithmetic},
      {"format round-trip and IOB normalization", format_round_trip},
      {"desk-scale end-to-end experiment", end_to_end},
      {"experiment determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.pass;
    std::printf("%s criterion %zu: %s (%s)\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  fs::remove_all(fs::temp_directory_path() / "jnkit_acceptance");
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
