// Copyright 2026 The PromptScope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// Acceptance runner: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "promptscope/analytics/explore.hpp"
#include "promptscope/analytics/optics.hpp"
#include "promptscope/analytics/projection.hpp"
#include "promptscope/common/error.hpp"
#include "promptscope/llm/agents.hpp"
#include "promptscope/llm/backend.hpp"
#include "promptscope/llm/experiment.hpp"
#include "promptscope/llm/gateway.hpp"
#include "promptscope/metrics/levels.hpp"
#include "promptscope/metrics/metrics.hpp"
#include "promptscope/text/tokenizer.hpp"
#include "promptscope/workspace/dataset.hpp"
#include "promptscope/workspace/project.hpp"
#include "promptscope/workspace/views.hpp"

namespace {

namespace fs = std::filesystem;
namespace ps = promptscope;
using ps::analytics::FeatureRow;
using ps::analytics::Point;
using ps::metrics::Feature;

// Pinned tolerances and time limits.
constexpr double kFormulaTolerance = 1e-9;
constexpr double kProjectionTolerance = 1e-6;
constexpr double kOracleEigenTolerance = 1e-8;
constexpr double kMetricSuiteSeconds = 1.0;
constexpr double kProjectionSeconds = 1.0;
constexpr double kClusteringSeconds = 5.0;
constexpr double kLoopSeconds = 30.0;

class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && first_failure_.empty()) first_failure_ = what;
    failures_ += !ok;
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream s;
    s.precision(12);
    s << what << ": got " << got << ", want " << want;
    expect(std::abs(got - want) <= tol, s.str());
  }
  bool ok() const { return failures_ == 0; }
  std::string summary() const {
    std::ostringstream s;
    s << checks_ << " checks";
    if (failures_) s << ", " << failures_ << " failed; first: " << first_failure_;
    return s.str();
  }

 private:
  int checks_ = 0;
  int failures_ = 0;
  std::string first_failure_;
};

// ---- metric formulas -------------------------------------------------------

double flesch_complexity(double words, double sentences, double syllables) {
  double r = 206.835 - 1.015 * (words / sentences) - 84.6 * (syllables / words);
  return 100.0 - std::clamp(r, 0.0, 100.0);
}

void metric_formulas(Checker& c) {
  // Syllables counted by hand with the vowel-group rule: each run of
  // a/e/i/o/u/y counts once, a trailing e after a consonant is silent unless
  // the word ends in consonant+"le", minimum one; "museum" is an irregular (3).
  struct CaseC {
    const char* text;
    int words, sentences, syllables;
  };
  const CaseC complexity_cases[] = {
      // the1 cat1 sat1
      {"The cat sat.", 3, 1, 3},
      // el-e-pha3 re-me-mbe3 wa-te2 ho-le2 a-cro2 the1 va-lley2
      {"Elephants remember water holes across the valley.", 7, 1, 15},
      // ye-ste-day3 the1 chi-dre2 vi-si-te3 a1 fa-mou2 museum3 they1 e-njoye2 the1 pai-ti2
      {"Yesterday the children visited a famous museum. They enjoyed the paintings.", 11, 2, 21},
      // a1 qui1 bro1 fo1 ju1 o-ve2 the1 la-zy2 do1
      {"A quick brown fox jumps over the lazy dog.", 9, 1, 11},
      // u-ni-ve-si-ty5 a-mi-i-a-o5 a-ou-e3 i-i-i-a4 e-u-a-io-a5 e-o2
      {"University administrators announced significant educational reforms.", 6, 1, 24},
      // my1 mo-the2 ba-ke2 brea1 ea1 mo-i2 the1 ki-te2 sme1 wo-de-fu3
      {"My mother bakes bread each morning. The kitchen smells wonderful.", 10, 2, 16},
      // scie-ti2 di-co-ve-e4 a1 ti-ny2 pla-e2 nea1 a1 di-a2 sta1
      {"Scientists discovered a tiny planet near a distant star.", 9, 1, 16},
      // rai1 fe1 bi1 sa1 nei-o2 ga-e-e3 ou-i2 be-nea2 co-o-u3 u-e-a3
      {"Rain fell. Birds sang. Neighbors gathered outside beneath colorful umbrellas.", 10, 3, 19},
      // pho-to-sy-the-si5 co-ve2 su-li2 i-to2 che-i-ca3 e-e-gy3 fo1 pla1
      {"Photosynthesis converts sunlight into chemical energy for plants.", 8, 1, 19},
      // the1 ge-tle2 tu-tle2 cro-se2 a1 li-tle2 bri1
      {"The gentle turtle crossed a little bridge.", 7, 1, 11},
  };
  for (const auto& k : complexity_cases) {
    auto t = ps::text::tokenize(k.text);
    c.expect(t.word_count == static_cast<std::size_t>(k.words), std::string("words: ") + k.text);
    c.expect(t.sentence_count() == static_cast<std::size_t>(k.sentences),
             std::string("sentences: ") + k.text);
    c.near(ps::metrics::complexity(t), flesch_complexity(k.words, k.sentences, k.syllables),
           kFormulaTolerance, std::string("complexity: ") + k.text);
  }

  // MTLD hand traces over stems, threshold 0.72, partial factor (1 - TTR)/0.28;
  // score = words / mean(forward, backward factors), or words when no factor.
  constexpr double kPartial34 = (1.0 - 0.75) / 0.28;  // TTR 3/4 left over
  struct CaseF {
    const char* text;
    double expected;
  };
  const CaseF formality_cases[] = {
      {"cat cat cat cat.", 4.0 / 2.0},                      // c c|c c| both ways
      {"cat dog cat.", 3.0 / 1.0},                          // c d c| both ways
      {"cat dog sun cat.", 4.0 / kPartial34},               // remainder 3/4 both ways
      {"one two three four five.", 5.0},                    // no factor
      {"cat dog cat sun.", 4.0 / ((1.0 + kPartial34) / 2)}, // fwd c d c|s, bwd s c d c
      {"red red blue.", 3.0 / 1.0},                         // fwd r r|b, bwd b r r|
      {"sun sky sun sky sun sky.", 6.0 / 2.0},              // s k s|k s k|
      {"cat dog sun sky cat dog.", 6.0 / 1.0},              // TTR 4/6 at the end
      {"big cat big dog big sun.", 6.0 / 1.0},              // fwd b c b|d b s, bwd 4/6
      {"hot hot dog dog.", 4.0 / 2.0},                      // h h|d d|
  };
  for (const auto& k : formality_cases) {
    c.near(ps::metrics::formality_mtld(ps::text::tokenize(k.text)), k.expected, kFormulaTolerance,
           std::string("formality: ") + k.text);
  }

  // Valence / 4, negation x -0.74 within three preceding words, booster x1.29
  // on the next hit, all caps x1.15, "!" sentence x1.09, sum / word count.
  // Lexicon: love 3.2, bad -2.5, happy 2.7, nice 1.8, great 3.1,
  // terrible -2.1, hate -2.7, kind 2.4, poor -2.1, awful -2.0.
  const CaseF sentiment_cases[] = {
      {"The cat sat on the mat.", 0.0},
      {"I love dogs.", (3.2 / 4) / 3},
      {"The food was bad.", (-2.5 / 4) / 4},
      {"Not happy today.", (2.7 / 4 * -0.74) / 3},
      {"A very nice day.", (1.8 / 4 * 1.29) / 4},
      {"We left. It was great!", (3.1 / 4 * 1.09) / 5},
      {"TERRIBLE service.", (-2.1 / 4 * 1.15) / 2},
      {"I hate bad news.", (-2.7 / 4 + -2.5 / 4) / 4},
      {"She is kind but poor.", (2.4 / 4 + -2.1 / 4) / 5},
      {"They did not find it awful.", (-2.0 / 4 * -0.74) / 6},
  };
  for (const auto& k : sentiment_cases) {
    c.near(ps::metrics::sentiment(ps::text::tokenize(k.text)), k.expected, kFormulaTolerance,
           std::string("sentiment: ") + k.text);
  }

  // Entity overlap: U_a ranked by occurrences (ties keep first appearance),
  // T = top 5 when |U_s| < 3 and |U_a| > 4, U_a when |U_a| < |U_s| or U_s is
  // empty, else top |U_s|; score = matches / |T|.
  using V = std::vector<std::string>;
  struct CaseE {
    V article, summary;
    double expected;
    const char* name;
  };
  const CaseE faithfulness_cases[] = {
      // U_a = Alice Paris Bob UN 2020; |U_s| = 2 -> top 5; 2 matches.
      {{"Alice", "Paris", "Alice", "Bob", "UN", "2020", "Paris", "Alice", "alice"},
       {"Alice", "Paris"},
       2.0 / 5.0,
       "top-5 penalty"},
      {{"Alice", "Bob"}, {}, 0.0, "empty summary"},
      {{"Alice"}, {"Alice", "Bob", "Carol"}, 1.0 / 1.0, "article smaller"},
      {{"Alice", "Bob", "Alice", "Carol"}, {"Bob"}, 0.0 / 1.0, "top-1 misses"},
      {{}, {"Alice"}, 1.0, "no article entities"},
      {{"Tokyo", "Tokyo", "Kyoto", "Osaka"}, {"Tokyo", "Osaka"}, 1.0 / 2.0, "top-2"},
      {{"Alice", "Bob", "Carol", "Dave", "Erin", "Frank"}, {"Alice", "Frank"}, 1.0 / 5.0,
       "penalty drops the sixth"},
      {{"Obama", "Obama", "Merkel"}, {"Obamas"}, 1.0 / 1.0, "fuzzy match"},
      {{"Paris", "London", "Berlin", "Madrid"}, {"Paris", "London", "Rome"}, 2.0 / 3.0, "top-3"},
      {{"Nile", "Nile", "Nile", "Amazon", "Amazon", "Danube"},
       {"Danube", "Volga", "Thames", "Seine"},
       1.0 / 3.0,
       "summary larger"},
  };
  for (const auto& k : faithfulness_cases) {
    c.near(ps::metrics::faithfulness(k.article, k.summary), k.expected, kFormulaTolerance,
           std::string("faithfulness: ") + k.name);
  }

  struct CaseL {
    const char* text;
    std::size_t words;
  };
  const CaseL length_cases[] = {
      {"The cat sat.", 3},
      {"In 2020, 3 cats ran.", 3},
      {"", 0},
      {"Hello!", 1},
      {"One. Two. Three. Four.", 4},
      {"A quick brown fox jumps over the lazy dog.", 9},
      {"Rain fell; birds sang, and kids played.", 7},
      {"   spaced    out   words   ", 3},
      {"Numbers like 42 and 7 are not words here.", 7},
      {"My mother bakes bread each morning. The kitchen smells wonderful.", 10},
  };
  for (const auto& k : length_cases) {
    c.expect(ps::metrics::length(ps::text::tokenize(k.text)) == k.words,
             std::string("length: '") + k.text + "'");
  }
}

// ---- categorization ----------------------------------------------------------

void categorization(Checker& c) {
  struct Table {
    Feature feature;
    std::vector<double> lower;  // lower bound of each level after the first
    std::vector<std::string> names;
  };
  const std::vector<Table> tables = {
      {Feature::kComplexity,
       {0, 10, 40, 50, 90},
       {"Elementary", "Middle School", "High School", "College", "Professional"}},
      {Feature::kFormality, {0, 60, 100, 200}, {"Informal", "Standard", "Formal", "Very Formal"}},
      {Feature::kSentiment, {-1, -0.3, 0.3}, {"Negative", "Neutral", "Positive"}},
      {Feature::kFaithfulness, {0, 0.25, 0.4, 0.6}, {"Bad", "Low", "Avg", "Good"}},
      {Feature::kNaturalness, {0, 0.435, 0.607, 0.715}, {"Bad", "Low", "Avg", "Good"}},
      {Feature::kLength, {0, 100, 300, 500}, {"Short", "Mid", "Long", "Very Long"}},
  };
  const double inf = std::numeric_limits<double>::infinity();
  for (const auto& t : tables) {
    std::string f(ps::metrics::feature_name(t.feature));
    c.expect(ps::metrics::level_names(t.feature) == t.names, f + ": level names");
    for (std::size_t i = 0; i < t.names.size(); ++i) {
      double lo = t.lower[i];
      c.expect(ps::metrics::categorize(t.feature, lo) == t.names[i],
               f + ": " + std::to_string(lo) + " -> " + t.names[i]);
      double below = std::nextafter(lo, -inf);
      const auto& before = i == 0 ? t.names[0] : t.names[i - 1];
      c.expect(ps::metrics::categorize(t.feature, below) == before,
               f + ": just below " + std::to_string(lo) + " -> " + before);
      if (i + 1 < t.names.size()) {
        double mid = (lo + t.lower[i + 1]) / 2;
        c.expect(ps::metrics::categorize(t.feature, mid) == t.names[i],
                 f + ": interior of " + t.names[i]);
      }
    }
    c.expect(ps::metrics::categorize(t.feature, t.lower.back() * 10 + 1000) == t.names.back(),
             f + ": top level open above");
  }
}

// ---- shared fixtures ---------------------------------------------------------

std::vector<Point> blobs(std::uint32_t seed, std::size_t per_blob, double offset) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<Point> pts;
  for (int b = 0; b < 2; ++b) {
    for (std::size_t i = 0; i < per_blob; ++i) {
      Point p(6);
      for (auto& x : p) x = nd(rng);
      p[0] += b * offset;
      pts.push_back(p);
    }
  }
  return pts;
}

std::vector<Point> fixture4() {
  return {{1, 0, 0, 0.5, 0, 0}, {0, 1, 0, 0, 0.2, 0}, {1, 1, 0.3, 0, 0, 0}, {-1, 0.5, 0, 0, 0, 1}};
}

std::uint64_t fnv(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : s) h = (h ^ ch) * 1099511628211ULL;
  return h;
}

const std::string kPersona = "You are a news editor.";

// Blocks for which the mock backend keeps the first k sentences.
ps::llm::PromptBlocks blocks_with_k(int k) {
  ps::llm::PromptBlocks b;
  b.persona = kPersona;
  for (int i = 0;; ++i) {
    std::string cst = "Write clearly, draft " + std::to_string(i) + ".";
    if (static_cast<int>(1 + fnv(kPersona + cst) % 3) == k) {
      b.constraints = cst;
      break;
    }
  }
  b.data = "Summarize:\n{{ARTICLE}}";
  return b;
}

std::string corpus_path() { return std::string(PROMPTSCOPE_TEST_DATA) + "/e2e_corpus.jsonl"; }

class CountingBackend : public ps::llm::Backend {
 public:
  std::string id() const override { return "mock"; }
  ps::llm::CompletionResult complete(const ps::llm::CompletionRequest& r) override {
    ++calls;
    return mock.complete(r);
  }
  std::atomic<int> calls{0};
  ps::llm::MockBackend mock;
};

// ---- naturalness -------------------------------------------------------------

void naturalness(Checker& c) {
  auto p = ps::workspace::Project::create("", ps::workspace::Dataset::load(corpus_path()));
  ps::llm::Gateway g(std::make_shared<ps::llm::MockBackend>());
  int v1 = p.add_version(blocks_with_k(1), std::nullopt);
  p.run_prompt(v1, ps::workspace::RunScope::kBaseline, g);
  const auto& base = p.run(p.baseline().run_id);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  double raw_lo = lo, raw_hi = -lo;
  for (const auto& o : base.outputs) {
    if (!o.ok()) continue;
    lo = std::min(lo, *o.scores->naturalness);
    hi = std::max(hi, *o.scores->naturalness);
    raw_lo = std::min(raw_lo, o.scores->naturalness_raw);
    raw_hi = std::max(raw_hi, o.scores->naturalness_raw);
  }
  c.expect(raw_hi > raw_lo, "fixture has max != min");
  c.expect(lo == 0.0, "min normalized score is exactly 0");
  c.expect(hi == 1.0, "max normalized score is exactly 1");

  const auto frozen = p.baseline().naturalness;
  const auto stats = p.baseline().stats;
  c.expect(frozen.min == raw_lo && frozen.max == raw_hi, "frozen scale holds the corpus extremes");

  int v2 = p.add_version(blocks_with_k(3), v1);
  auto second = p.run_prompt(v2, ps::workspace::RunScope::kFull, g);
  c.expect(p.baseline().naturalness.min == frozen.min && p.baseline().naturalness.max == frozen.max,
           "second run leaves min/max untouched");
  c.expect(p.baseline().stats.mean == stats.mean && p.baseline().stats.stddev == stats.stddev,
           "second run leaves baseline statistics untouched");
  for (const auto& o : second.outputs) {
    if (!o.ok()) continue;
    double raw = o.scores->naturalness_raw;
    double want = std::clamp(1.0 - (raw - frozen.min) / (frozen.max - frozen.min), 0.0, 1.0);
    c.near(*o.scores->naturalness, want, 0.0, "second-run score uses frozen scale: " + o.doc_id);
  }
}

// ---- projection --------------------------------------------------------------

// Cyclic Jacobi eigenvalue iteration for symmetric matrices.
void jacobi(std::vector<std::vector<double>> a, std::vector<double>& values,
            std::vector<std::vector<double>>& vectors) {
  const std::size_t n = a.size();
  vectors.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) vectors[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-26) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        double t = (theta >= 0 ? 1 : -1) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        double cs = 1 / std::sqrt(t * t + 1), sn = t * cs;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = cs * akp - sn * akq;
          a[k][q] = sn * akp + cs * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = cs * apk - sn * aqk;
          a[q][k] = sn * apk + cs * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = vectors[k][p], vkq = vectors[k][q];
          vectors[k][p] = cs * vkp - sn * vkq;
          vectors[k][q] = sn * vkp + cs * vkq;
        }
      }
    }
  }
  values.resize(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a[i][i];
}

double cosine(const Point& a, const Point& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    dot += a[d] * b[d];
    na += a[d] * a[d];
    nb += b[d] * b[d];
  }
  return dot / std::sqrt(na * nb);
}

void projection(Checker& c) {
  auto training = blobs(21, 20, 4.0);
  auto model = ps::analytics::fit_projection(training);
  double worst = 0;
  for (std::size_t i = 0; i < training.size(); ++i) {
    auto p = model.project(training[i]);
    worst = std::max({worst, std::abs(p[0] - model.coordinates[i][0]),
                      std::abs(p[1] - model.coordinates[i][1])});
  }
  c.near(worst, 0.0, kProjectionTolerance, "re-projection of 40 training points");

  // Brute-force oracle on four points: kernel, double centering, Jacobi.
  auto pts = fixture4();
  auto small = ps::analytics::fit_projection(pts);
  const std::size_t n = pts.size();
  std::vector<std::vector<double>> k(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) k[i][j] = cosine(pts[i], pts[j]);
  std::vector<double> rowmean(n, 0.0);
  double grand = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) rowmean[i] += k[i][j] / n;
    grand += rowmean[i] / n;
  }
  std::vector<std::vector<double>> kc(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) kc[i][j] = k[i][j] - rowmean[i] - rowmean[j] + grand;
  std::vector<double> vals;
  std::vector<std::vector<double>> vecs;
  jacobi(kc, vals, vecs);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return vals[a] > vals[b]; });

  const std::vector<Point> queries = {{0.5, 0.5, 0.15, 0.25, 0, 0}, {0, 0, 1, 0, 0, 0},
                                      {1, 2, 3, 4, 5, 6}, {-1, 0, 0, 0, 1, 0}};
  for (std::size_t comp = 0; comp < 2; ++comp) {
    const auto& col = order[comp];
    c.near(small.eigenvalues[comp], vals[col], kOracleEigenTolerance, "eigenvalue");
    // Fix the sign from the training coordinates.
    double sign = 0;
    for (std::size_t i = 0; i < n && sign == 0; ++i) {
      double oracle = std::sqrt(vals[col]) * vecs[i][col];
      if (std::abs(oracle) > 1e-6) sign = oracle * small.coordinates[i][comp] > 0 ? 1 : -1;
    }
    for (std::size_t i = 0; i < n; ++i) {
      c.near(small.coordinates[i][comp], sign * std::sqrt(vals[col]) * vecs[i][col],
             kOracleEigenTolerance, "training coordinate");
    }
    for (const auto& q : queries) {
      std::vector<double> kq(n);
      for (std::size_t j = 0; j < n; ++j) kq[j] = cosine(q, pts[j]);
      double kq_mean = std::accumulate(kq.begin(), kq.end(), 0.0) / n;
      double s = 0;
      for (std::size_t j = 0; j < n; ++j) s += (kq[j] - kq_mean - rowmean[j] + grand) * vecs[j][col];
      c.near(small.project(q)[comp], sign * s / std::sqrt(vals[col]), kOracleEigenTolerance,
             "out-of-sample coordinate");
    }
  }
}

// ---- clustering --------------------------------------------------------------

void clustering(Checker& c) {
  auto pts = blobs(3, 20, 10.0);
  Point far(6, 0.0);
  far[1] = 60.0;
  const std::size_t isolated = 7;
  pts.insert(pts.begin() + isolated, far);
  auto in_blob = [&](std::size_t i) -> int {
    if (i == isolated) return -1;
    return (i < isolated ? i : i - 1) < 20 ? 0 : 1;
  };
  auto m = ps::analytics::cluster_optics(pts);
  c.expect(m.cluster_count() == 2, "two clusters, got " + std::to_string(m.cluster_count()));
  c.expect(m.labels[isolated] == ps::analytics::kNoise, "isolated point is noise");
  if (m.cluster_count() == 2) {
    int first_label[2] = {m.labels[0], m.labels[pts.size() - 1]};
    c.expect(first_label[0] != first_label[1] && first_label[0] != ps::analytics::kNoise &&
                 first_label[1] != ps::analytics::kNoise,
             "blobs get distinct labels");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i == isolated) continue;
      c.expect(m.labels[i] == first_label[in_blob(i)], "point " + std::to_string(i) + " in its blob");
    }
  }
  std::vector<ps::analytics::ValidationEntry> validation;
  try {
    validation = ps::analytics::select_validation_set(m);
  } catch (const ps::Error& e) {
    c.expect(false, std::string("validation set: ") + e.what());
  }
  c.expect(validation.size() == m.cluster_count(), "one validation case per cluster");
  for (const auto& v : validation) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (m.labels[i] == v.cluster) members.push_back(i);
    }
    c.expect(v.weight == members.size(), "weight equals cluster size");
    Point mean(6, 0.0);
    for (auto i : members)
      for (int d = 0; d < 6; ++d) mean[d] += pts[i][d] / static_cast<double>(members.size());
    std::size_t best = members.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (auto i : members) {
      double s = 0;
      for (int d = 0; d < 6; ++d) s += (pts[i][d] - mean[d]) * (pts[i][d] - mean[d]);
      if (s < best_d) {
        best_d = s;
        best = i;
      }
    }
    c.expect(v.index == best, "validation case is the member nearest the mean");
  }
}

// ---- trajectory --------------------------------------------------------------

void trajectory(Checker& c) {
  using ps::analytics::TrajectoryClass;
  auto model = ps::analytics::fit_projection(fixture4());
  std::array<bool, ps::analytics::kFeatureCount> all{}, only0{}, only1{};
  all.fill(true);
  only0[0] = true;
  only1[1] = true;
  const FeatureRow target{0, 1, 0, 0, 0.2, 0};
  struct Fixture {
    const char* name;
    FeatureRow old_z, new_z;
    std::array<bool, ps::analytics::kFeatureCount> mask;
    TrajectoryClass expected;
  };
  const Fixture fixtures[] = {
      // |old - t| = sqrt(1 + 1 + 0.25 + 0.04) = 1.513, |new - t| = 0.
      {"toward target", {1, 0, 0, 0.5, 0, 0}, target, all, TrajectoryClass::kBetter},
      // Reverse: delta = -1.513.
      {"away from target", target, {1, 0, 0, 0.5, 0, 0}, all, TrajectoryClass::kWorse},
      // Complexity only: 0.25 - 0 = 0.25, exactly the threshold.
      {"threshold", {0.25, 1, 0, 0, 0.2, 0}, target, only0, TrajectoryClass::kBetter},
      // Complexity only: 0.2 - 0 = 0.2 < 0.25.
      {"small move", {0.2, 1, 0, 0, 0.2, 0}, target, only0, TrajectoryClass::kInsignificant},
      // Only an excluded feature changes: delta 0 on the formality mask.
      {"excluded feature", {3, 1, 0, 0, 0.2, 0}, target, only1, TrajectoryClass::kInsignificant},
  };
  for (const auto& f : fixtures) {
    auto seg = ps::analytics::sample_trajectory(model, f.old_z, f.new_z, target, f.mask);
    c.expect(seg.samples.size() == 100, std::string(f.name) + ": 100 samples");
    c.expect(seg.cls == f.expected, std::string(f.name) + ": class");
    c.expect(seg.samples.front() == model.project(Point(f.old_z.begin(), f.old_z.end())),
             std::string(f.name) + ": first sample is project(old)");
    c.expect(seg.samples.back() == model.project(Point(f.new_z.begin(), f.new_z.end())),
             std::string(f.name) + ": last sample is project(new)");
  }
  FeatureRow same{0.3, -0.2, 1.1, 0, 0.5, -1};
  auto seg = ps::analytics::sample_trajectory(model, same, same, target, all);
  c.expect(seg.cls == TrajectoryClass::kInsignificant, "F_old = F_new is insignificant");
  c.expect(seg.samples.size() == 100, "F_old = F_new has 100 samples");
}

// ---- end-to-end loop ---------------------------------------------------------

void end_to_end(Checker& c) {
  auto p = ps::workspace::Project::create("", ps::workspace::Dataset::load(corpus_path()));
  auto backend = std::make_shared<ps::llm::MockBackend>();
  ps::llm::Gateway g(backend);
  c.expect(g.backend_id() == "mock", "offline mock backend");
  int v1 = p.add_version(blocks_with_k(1), std::nullopt);
  auto base = p.run_prompt(v1, ps::workspace::RunScope::kBaseline, g);
  c.expect(base.status == ps::workspace::RunStatus::kCompleted, "baseline completed");

  auto rec = ps::llm::recommend_features(g, "news for kids");
  p.set_config(rec.config);
  const auto& b = p.baseline();
  auto match = ps::analytics::match_cluster(rec.config, b.clusters, b.rows);
  c.expect(match.fit == 1.0, "match fit is 1.0");
  bool planted = match.cluster != ps::analytics::kNoise;
  for (auto i : b.clusters.members(match.cluster)) planted = planted && b.ids[i][0] == 'k';
  c.expect(planted, "matched cluster is the planted kids cluster");

  auto examples = ps::workspace::recommend_examples(p);
  c.expect(examples.cards.size() >= 2, "at least two example cards");
  if (examples.cards.size() < 2) return;
  p.star(examples.cards[0].doc_id);
  p.star(examples.cards[1].doc_id);
  int v2 = p.add_version(blocks_with_k(3), v1);
  c.expect(p.version(v2).starred.size() == 2, "new version snapshots two stars");
  auto run = p.run_prompt(v2, ps::workspace::RunScope::kValidation, g);
  std::vector<std::string> covered;
  for (const auto& o : run.outputs) covered.push_back(o.doc_id);
  c.expect(covered == b.validation_ids(), "validation run covers exactly the centroids");

  auto cmp = ps::workspace::compare_versions(p, v1, v2);
  c.expect(cmp.trajectories.size() == b.validation.size(), "one trajectory per validation case");
  c.expect(cmp.better > cmp.worse, "better (" + std::to_string(cmp.better) + ") > worse (" +
                                       std::to_string(cmp.worse) + ")");
}

// ---- consistency harness -----------------------------------------------------

class LevelBackend : public ps::llm::Backend {
 public:
  std::string id() const override { return "levels"; }
  ps::llm::CompletionResult complete(const ps::llm::CompletionRequest& r) override {
    auto level = r.tag_or("level");
    return {level == "none" ? "1" : level == "beginner" ? "3" : "5", {}, {}, id()};
  }
};

void consistency(Checker& c) {
  using namespace ps::llm;
  std::vector<ExperimentItem> items = {
      {"a", "The town opened a new park.", "The town opened a new park on Monday."},
      {"b", "Heavy rain closed the school.", "Heavy rain closed the school for two days."},
      {"c", "A local team won the final.", "A local team won the final in Leeds."},
  };
  ExperimentOptions opt;
  opt.levels = {DefinitionLevel::kNone, DefinitionLevel::kBeginner, DefinitionLevel::kExpert};
  opt.temperatures = {0.0, 0.7, 1.4};
  opt.repeats = 2;
  for (auto metric : {ScoreMetric::kSentiment, ScoreMetric::kReadability,
                      ScoreMetric::kTruthfulness}) {
    opt.metric = metric;
    Gateway g(std::make_shared<MockBackend>());
    auto report = consistency_experiment(g, items, opt);
    bool zero = report.items.size() == items.size() * opt.temperatures.size();
    for (const auto& it : report.items) zero = zero && it.variance == 0.0;
    for (const auto& s : report.summary) zero = zero && s.mean_variance == 0.0;
    c.expect(zero, std::string("mock variances are 0 for ") + std::string(metric_name(metric)));
  }

  Gateway levels(std::make_shared<LevelBackend>());
  opt.metric = ScoreMetric::kReadability;
  opt.temperatures = {0.0};
  opt.repeats = 1;
  auto report = consistency_experiment(levels, items, opt);
  // Scores {1, 3, 5}: mean 3, squared deviations 4 + 0 + 4 over 3.
  const double oracle = (4.0 + 0.0 + 4.0) / 3.0;
  for (const auto& it : report.items) c.near(it.variance, oracle, 1e-12, "item variance");
  c.near(report.summary.at(0).mean_variance, oracle, 1e-12, "mean variance");
  auto csv = report.to_csv();
  c.expect(csv.substr(0, csv.find('\n')) == "temperature,item_id,n_scores,scores,variance",
           "CSV header");
  c.expect(csv.find("\n0,a,3,1;3;5,") != std::string::npos, "CSV row layout");
}

// ---- persistence -------------------------------------------------------------

void persistence(Checker& c) {
  auto dir = fs::temp_directory_path() / ("promptscope_accept_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  int v2 = 0;
  nlohmann::json before;
  {
    auto p = ps::workspace::Project::create(dir, ps::workspace::Dataset::load(corpus_path()));
    ps::llm::Gateway g(std::make_shared<ps::llm::MockBackend>());
    int v1 = p.add_version(blocks_with_k(1), std::nullopt);
    p.run_prompt(v1, ps::workspace::RunScope::kBaseline, g);
    p.set_config(ps::llm::recommend_features(g, "news for kids").config);
    auto rec = ps::workspace::recommend_examples(p);
    for (std::size_t i = 0; i < std::min<std::size_t>(2, rec.cards.size()); ++i) {
      p.star(rec.cards[i].doc_id);
    }
    v2 = p.add_version(blocks_with_k(3), v1);
    p.run_prompt(v2, ps::workspace::RunScope::kValidation, g);
    p.save();
    before = p.state_json();
  }
  {
    auto loaded = ps::workspace::Project::load(dir);
    c.expect(loaded.state_json() == before, "save/load round trip is deep-equal");
  }
  {
    auto p = ps::workspace::Project::open(dir);
    auto counting = std::make_shared<CountingBackend>();
    ps::llm::Gateway g(counting);
    auto rerun = p.run_prompt(v2, ps::workspace::RunScope::kValidation, g);
    c.expect(counting->calls == 0,
             "warm re-run made " + std::to_string(counting->calls.load()) + " backend calls");
    c.expect(rerun.status == ps::workspace::RunStatus::kCompleted, "warm re-run completed");
  }
  fs::remove_all(dir);
}

struct Criterion {
  const char* name;
  double seconds_limit;  // 0 means no runtime bound
  std::function<void(Checker&)> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"metric-formula-suite", kMetricSuiteSeconds, metric_formulas},
      {"categorization-suite", 0, categorization},
      {"naturalness-normalization", 0, naturalness},
      {"projection-suite", kProjectionSeconds, projection},
      {"clustering-suite", kClusteringSeconds, clustering},
      {"trajectory-suite", 0, trajectory},
      {"end-to-end-loop", kLoopSeconds, end_to_end},
      {"consistency-harness", 0, consistency},
      {"persistence", 0, persistence},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Checker c;
    auto start = std::chrono::steady_clock::now();
    try {
      cr.body(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.seconds_limit > 0) {
      std::ostringstream s;
      s << "runtime " << secs << " s exceeds " << cr.seconds_limit << " s";
      c.expect(secs < cr.seconds_limit, s.str());
    }
    std::printf("%s %s: %s (%.3f s%s)\n", c.ok() ? "PASS" : "FAIL", cr.name, c.summary().c_str(),
                secs,
                cr.seconds_limit > 0
                    ? (", limit " + std::to_string(static_cast<int>(cr.seconds_limit)) + " s").c_str()
                    : "");
    failed += !c.ok();
  }
  return failed;
}
