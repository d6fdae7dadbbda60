// Acceptance suite: runs every exit criterion at its pinned tolerance and
// prints one PASS/FAIL line per criterion. Exit status is nonzero when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/brute_matching.hpp"
#include "oracles/brute_persistence.hpp"
#include "oracles/random_inputs.hpp"
#include "test_util.hpp"
#include "ties/diagram_metric.hpp"
#include "ties/evalharness.hpp"
#include "ties/features.hpp"
#include "ties/geometry.hpp"
#include "ties/persistence.hpp"
#include "ties/pipeline.hpp"
#include "ties/signal.hpp"

namespace {

using namespace ties;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool same_diagram(const PersistenceDiagram& a, const PersistenceDiagram& b, double tol) {
  if (a.points.size() != b.points.size()) return false;
  for (std::size_t k = 0; k < a.points.size(); ++k) {
    const auto &p = a.points[k], &q = b.points[k];
    if (p.hdim != q.hdim || std::abs(p.birth - q.birth) > tol) return false;
    if (p.essential() != q.essential()) return false;
    if (!p.essential() && std::abs(p.death - q.death) > tol) return false;
  }
  return true;
}

// 1. Engine diagrams equal the brute-force boundary reduction.
Outcome persistence_oracle() {
  Outcome o;
  auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  std::size_t h1_points = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto phi = testing::random_distance_matrix(1 + static_cast<std::size_t>(trial % 7), rng);
    auto engine = rips_persistence(phi, 1);
    h1_points += engine.count(1);
    if (!same_diagram(engine, oracle::brute_force_persistence(phi), 1e-9)) o.fail(fmt("trial %d differs", trial));
  }
  double secs = seconds_since(t0);
  if (secs >= 10.0) o.fail(fmt("took %.2f s (limit 10 s)", secs));
  if (o.pass) o.detail = fmt("200 matrices, %zu h1 bars checked, %.2f s", h1_points, secs);
  return o;
}

// 2. Finite H0 deaths equal MST edge weights.
Outcome h0_equals_mst() {
  Outcome o;
  auto t0 = Clock::now();
  std::mt19937_64 rng(1002);
  for (int trial = 0; trial < 500; ++trial) {
    auto phi = testing::random_distance_matrix(2 + static_cast<std::size_t>(trial % 63), rng);
    auto dg = rips_persistence(phi, 0);
    std::vector<double> deaths;
    for (const auto& p : dg.finite(0)) deaths.push_back(p.death);
    if (deaths != mst_deaths(phi) || dg.count(0) != deaths.size() + 1) o.fail(fmt("trial %d differs", trial));
  }
  double secs = seconds_since(t0);
  if (secs >= 30.0) o.fail(fmt("took %.2f s (limit 30 s)", secs));
  if (o.pass) o.detail = fmt("500 matrices n<=64, exact, %.2f s", secs);
  return o;
}

// 3. Unit square: one loop born at 1, filled at sqrt(2).
Outcome square_loop() {
  Outcome o;
  const double s = std::sqrt(2.0);
  Matrix m(4, 4);
  const double v[4][4] = {{0, 1, s, 1}, {1, 0, 1, s}, {s, 1, 0, 1}, {1, s, 1, 0}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = v[i][j];
  auto dg = rips_persistence(DistanceMatrix(m), 1);
  auto h1 = dg.finite(1);
  if (dg.count(1) != 1 || h1.size() != 1 || h1[0].birth != 1.0 || h1[0].death != s) {
    o.fail(fmt("h1 has %zu points", dg.count(1)));
  } else {
    o.detail = "h1 = {(1, sqrt 2)}";
  }
  return o;
}

// 4. Assignment-based Wasserstein equals exhaustive matching; metric axioms.
Outcome wasserstein_oracle() {
  Outcome o;
  auto t0 = Clock::now();
  std::mt19937_64 rng(1004);
  std::uniform_int_distribution<std::size_t> size(0, 5);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    auto a = testing::random_bars(size(rng), rng), b = testing::random_bars(size(rng), rng),
         c = testing::random_bars(size(rng), rng);
    for (int q : {1, 2}) {
      const double ab = wasserstein(a, b, q);
      const double err = std::abs(ab - oracle::brute_wasserstein(a, b, q));
      worst = std::max(worst, err);
      if (err > 1e-9) o.fail(fmt("trial %d q=%d off by %.3g", trial, q, err));
      if (std::abs(ab - wasserstein(b, a, q)) > 1e-9) o.fail(fmt("trial %d asymmetric", trial));
      if (wasserstein(a, c, q) > ab + wasserstein(b, c, q) + 1e-9) o.fail(fmt("trial %d triangle violated", trial));
    }
  }
  double secs = seconds_since(t0);
  if (secs >= 30.0) o.fail(fmt("took %.2f s (limit 30 s)", secs));
  if (o.pass) o.detail = fmt("500 pairs, q in {1,2}, max err %.2g, %.2f s", worst, secs);
  return o;
}

// 5. Distance matrix invariants on random documents.
Outcome distance_suite() {
  Outcome o;
  std::mt19937_64 rng(1005);
  std::uniform_int_distribution<std::size_t> dims(2, 32), rows(1, 256);
  std::uniform_real_distribution<double> alpha(0.1, 10.0);
  double worst_homog = 0.0;
  for (int trial = 0; trial < 1000 && o.pass; ++trial) {
    const std::size_t d = dims(rng);
    SmoothedMatrix x{testing::random_matrix(rows(rng), d, rng)};
    auto phi = distance_matrix(x).matrix;
    for (std::size_t i = 0; i < d; ++i) {
      if (phi(i, i) != 0.0) o.fail(fmt("trial %d nonzero diagonal", trial));
      for (std::size_t j = 0; j < d; ++j) {
        if (phi(i, j) != phi(j, i)) o.fail(fmt("trial %d asymmetric", trial));
        if (!(phi(i, j) >= 0.0) || !std::isfinite(phi(i, j))) o.fail(fmt("trial %d negative entry", trial));
      }
    }

    const double a = alpha(rng);
    SmoothedMatrix scaled = x;
    for (double& v : scaled.values.data()) v *= a;
    auto phi_a = distance_matrix(scaled).matrix;
    // Relative to the matrix max-norm: entries that cancel to ~0 carry no relative precision.
    double diff = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        diff = std::max(diff, std::abs(phi_a(i, j) - a * a * phi(i, j)));
        norm = std::max(norm, a * a * phi(i, j));
      }
    const double rel = norm > 0 ? diff / norm : diff;
    worst_homog = std::max(worst_homog, rel);
    if (rel > 1e-12) o.fail(fmt("trial %d homogeneity rel err %.3g", trial, rel));

    std::vector<std::size_t> perm(d);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    SmoothedMatrix xp{Matrix(x.rows(), d)};
    for (std::size_t r = 0; r < x.rows(); ++r)
      for (std::size_t c = 0; c < d; ++c) xp.values(r, c) = x.values(r, perm[c]);
    auto phi_p = distance_matrix(xp).matrix;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        if (phi_p(i, j) != phi(perm[i], perm[j])) o.fail(fmt("trial %d not permutation equivariant", trial));
  }
  if (o.pass) o.detail = fmt("1000 documents, max homogeneity rel err %.2g", worst_homog);
  return o;
}

// 6. Lag-k cross-covariance coefficients of smoothed i.i.d. signals.
Outcome lag_coefficients() {
  Outcome o;
  constexpr std::size_t kLength = 100000;
  constexpr int kSeeds = 20;
  struct Case {
    std::size_t size;
    WindowKind kind;
    std::vector<double> weights;  // written out independently of WindowSpec
  };
  const std::vector<Case> cases = {
      {3, WindowKind::kArithmetic, {1, 1, 1}},
      {5, WindowKind::kArithmetic, {1, 1, 1, 1, 1}},
      {7, WindowKind::kArithmetic, {1, 1, 1, 1, 1, 1, 1}},
      {7, WindowKind::kExponential, {0.125, 0.25, 0.5, 1, 0.5, 0.25, 0.125}},
  };
  std::vector<std::string> misses;
  double worst = 0.0;
  for (const auto& cs : cases) {
    const long w = static_cast<long>(cs.size);
    const WindowSpec spec(cs.size, cs.kind);
    std::vector<double> sum(static_cast<std::size_t>(2 * w - 1), 0.0);
    double lag0_sum = 0.0;
    for (int seed = 0; seed < kSeeds; ++seed) {
      std::mt19937_64 rng(6000 + static_cast<std::uint64_t>(seed));
      std::normal_distribution<double> g(0.0, 1.0);
      std::vector<double> base(kLength + 2 * static_cast<std::size_t>(w)), other(kLength);
      for (auto& v : base) v = g(rng);
      for (auto& v : other) v = g(rng);
      for (long k = -(w - 1); k <= w - 1; ++k) {
        // Xj(t) = Xi(t - k): unit cross-covariance at lag k only.
        Matrix x(kLength, 2);
        for (std::size_t t = 0; t < kLength; ++t) {
          x(t, 0) = base[t + static_cast<std::size_t>(w)];
          x(t, 1) = base[static_cast<std::size_t>(static_cast<long>(t) + w - k)];
        }
        auto s = smooth(x, spec);
        double dot = 0.0;
        for (std::size_t t = 0; t < s.rows(); ++t) dot += s.values(t, 0) * s.values(t, 1);
        sum[static_cast<std::size_t>(k + w - 1)] += dot / static_cast<double>(s.rows());
      }
      if (cs.kind == WindowKind::kArithmetic) {
        // Correlated columns at lag 0 only: Cov = 0.6, expect w * 0.6.
        Matrix x(kLength, 2);
        for (std::size_t t = 0; t < kLength; ++t) {
          x(t, 0) = base[t];
          x(t, 1) = 0.6 * base[t] + 0.8 * other[t];
        }
        auto s = smooth(x, spec);
        double dot = 0.0;
        for (std::size_t t = 0; t < s.rows(); ++t) dot += s.values(t, 0) * s.values(t, 1);
        lag0_sum += dot / static_cast<double>(s.rows());
      }
    }
    for (long k = -(w - 1); k <= w - 1; ++k) {
      double expect = 0.0;
      for (long s = 0; s < w; ++s)
        if (s + k >= 0 && s + k < w) expect += cs.weights[static_cast<std::size_t>(s)] * cs.weights[static_cast<std::size_t>(s + k)];
      const double got = sum[static_cast<std::size_t>(k + w - 1)] / kSeeds;
      const double rel = std::abs(got - expect) / expect;
      worst = std::max(worst, rel);
      if (rel > 0.05) misses.push_back(fmt("%s k=%ld: %.5f vs %.5f (%.1f%%)", spec.label().c_str(), k, got, expect, 100 * rel));
    }
    if (cs.kind == WindowKind::kArithmetic) {
      const double expect = 0.6 * static_cast<double>(cs.size), got = lag0_sum / kSeeds;
      const double rel = std::abs(got - expect) / expect;
      if (rel > 0.05) misses.push_back(fmt("w=%zu cov 0.6: %.4f vs %.4f", cs.size, got, expect));
    }
  }
  if (!misses.empty()) {
    std::string d = "outside 5%:";
    for (const auto& m : misses) d += " [" + m + "]";
    o.fail(d);
  } else {
    o.detail = fmt("all lags |k|<w for 3,5,7,7-exponential within 5%% (worst %.1f%%)", 100 * worst);
  }
  return o;
}

// 7. Feature equivariances and the equal-distance closed form.
Outcome feature_equivariance() {
  Outcome o;
  std::mt19937_64 rng(1007);
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial % 14);
    auto phi = testing::random_distance_matrix(n, rng);
    auto base = ties_features(phi, {});
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix pm(n, n), sm = phi.values();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) pm(i, j) = phi(perm[i], perm[j]);
    const double alpha = 0.5 + static_cast<double>(trial) / 10.0;
    for (double& v : sm.data()) v *= alpha * alpha;
    auto p = ties_features(DistanceMatrix(pm), {});
    auto s = ties_features(DistanceMatrix(sm), {});
    for (std::size_t i = 0; i < n; ++i) {
      if (!close(p.v0[i], base.v0[perm[i]]) || !close(p.v1[i], base.v1[perm[i]])) o.fail(fmt("trial %d permutation", trial));
      if (!close(s.v0[i], alpha * alpha * base.v0[i]) || !close(s.v1[i], alpha * alpha * base.v1[i])) {
        o.fail(fmt("trial %d scaling", trial));
      }
    }
  }
  const double rho = 0.8;
  Matrix m(3, 3, rho);
  for (int i = 0; i < 3; ++i) m(i, i) = 0;
  auto f = ties_features(DistanceMatrix(m), {});
  if (f.v0 != std::vector<double>(3, rho / 2) || f.v1 != std::vector<double>(3, 0.0)) o.fail("equal-distance case");
  if (o.pass) o.detail = "30 random matrices D<=16; rho case gives v0 = rho/2 exactly";
  return o;
}

// Two-class synthetic corpus over a toy 10-d lexicon.
struct SyntheticCorpus {
  EmbeddingLexicon lexicon{10};
  std::vector<LabeledDocument> docs;
};

SyntheticCorpus make_corpus(std::size_t per_class, std::size_t tokens, std::size_t dims, std::uint64_t seed) {
  SyntheticCorpus c;
  c.lexicon = EmbeddingLexicon(dims);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  constexpr int kVocab = 60;
  for (int v = 0; v < kVocab; ++v) {
    std::vector<double> vec(dims);
    for (auto& x : vec) x = g(rng);
    c.lexicon.add("w" + std::to_string(v), vec);
  }
  // Class A draws from words 0..39, class B from 20..59.
  std::uniform_int_distribution<int> pick(0, 39);
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    const bool a = i % 2 == 0;
    std::string text;
    for (std::size_t t = 0; t < tokens; ++t) text += "w" + std::to_string(pick(rng) + (a ? 0 : 20)) + " ";
    c.docs.push_back({"doc" + std::to_string(i), text, {a ? "A" : "B"}});
  }
  return c;
}

// 8. Features separate two synthetic classes.
Outcome end_to_end_separability() {
  Outcome o;
  auto t0 = Clock::now();
  auto corpus = make_corpus(200, 300, 10, 8008);
  ExtractContext ctx;
  ctx.lexicon = corpus.lexicon;
  ctx.window = WindowSpec(3);
  std::vector<FeatureRow> rows;
  for (const auto& d : corpus.docs) {
    auto r = extract_document(d, ctx);
    rows.push_back({d.id, d.labels, r.record.features.concatenated()});
  }
  std::string accs;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto s = split(rows.size(), {2.0 / 3.0, seed});
    std::vector<FeatureRow> tr, te;
    for (auto i : s.train) tr.push_back(rows[i]);
    for (auto i : s.test) te.push_back(rows[i]);
    auto model = train(tr, {});
    const double acc = evaluate(model, te).accuracy();
    accs += fmt("%s%.3f", seed ? " " : "", acc);
    if (acc < 0.90) o.fail(fmt("seed %llu accuracy %.3f < 0.90", static_cast<unsigned long long>(seed), acc));
  }
  double secs = seconds_since(t0);
  if (secs >= 300.0) o.fail(fmt("took %.1f s (limit 300 s)", secs));
  if (o.pass) o.detail = "test accuracy per seed: " + accs + fmt(", %.1f s", secs);
  return o;
}

// 9. Extract output is byte-identical across reruns and worker counts.
Outcome determinism() {
  Outcome o;
  testing::TempDir dir;
  auto corpus = make_corpus(20, 120, 8, 9009);
  std::string jsonl;
  for (const auto& d : corpus.docs) {
    nlohmann::json j{{"id", d.id}, {"text", d.text}, {"labels", d.labels}};
    jsonl += j.dump() + "\n";
  }
  jsonl += R"({"id":"poison","text":"nothing in vocabulary"})" "\n";
  dump_lexicon(corpus.lexicon, dir / "lex.txt");

  RunConfig cfg;
  cfg.corpus = dir.write("corpus.jsonl", jsonl);
  cfg.lexicon = dir / "lex.txt";
  std::vector<std::string> outputs;
  for (std::size_t workers : {1u, 1u, 8u}) {
    for (const char* name : {"features.csv", "features.jsonl"}) {
      cfg.features_out = dir / name;
      cfg.report_out = dir / "report.json";
      cfg.workers = workers;
      run_extract(cfg);
      auto report = nlohmann::json::parse(testing::read_file(*cfg.report_out));
      report.erase("timing");
      outputs.push_back(testing::read_file(cfg.features_out) + report.dump());
    }
  }
  if (outputs[0] != outputs[2] || outputs[0] != outputs[4]) o.fail("CSV output differs");
  if (outputs[1] != outputs[3] || outputs[1] != outputs[5]) o.fail("JSONL output differs");
  if (o.pass) o.detail = "CSV and JSONL identical over reruns and workers {1, 8}";
  return o;
}

// 10. Full pipeline throughput.
Outcome throughput() {
  Outcome o;
  auto corpus = make_corpus(50, 200, 16, 1010);
  ExtractContext ctx;
  ctx.lexicon = corpus.lexicon;
  ctx.window = WindowSpec(3);
  auto t0 = Clock::now();
  for (const auto& d : corpus.docs) extract_document(d, ctx);
  double secs = seconds_since(t0);
  if (secs >= 60.0) o.fail(fmt("took %.1f s (limit 60 s)", secs));
  else o.detail = fmt("100 docs x 200 tokens x D=16 in %.2f s", secs);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1  persistence matches brute-force reduction", persistence_oracle},
      {"2  H0 deaths equal MST weights", h0_equals_mst},
      {"3  unit square has one loop (1, sqrt 2)", square_loop},
      {"4  Wasserstein matches exhaustive matching", wasserstein_oracle},
      {"5  distance matrix invariants", distance_suite},
      {"6  smoothed lag coefficients", lag_coefficients},
      {"7  feature equivariances", feature_equivariance},
      {"8  end-to-end separability", end_to_end_separability},
      {"9  extract determinism", determinism},
      {"10 throughput", throughput},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    failures += out.pass ? 0 : 1;
    std::printf("[%s] %s: %s\n", out.pass ? "PASS" : "FAIL", name.c_str(), out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
