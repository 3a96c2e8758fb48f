// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Pass criterion numbers as arguments to run
// a subset, e.g. `acceptance 1 3`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "ffm/baselines.hpp"
#include "ffm/benchmark.hpp"
#include "ffm/clustering.hpp"
#include "ffm/error.hpp"
#include "ffm/ingest.hpp"
#include "ffm/metadescriptor.hpp"
#include "ffm/metrics.hpp"
#include "ffm/parallel.hpp"
#include "ffm/serialize.hpp"
#include "ffm/signal.hpp"
#include "ffm/streamgen.hpp"
#include "support.hpp"

using namespace ffm;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

using Partition = std::set<std::set<std::size_t>>;

Partition partition_of(const std::vector<int>& labels) {
  std::map<int, std::set<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].insert(i);
  Partition out;
  for (auto& [_, g] : groups) out.insert(g);
  return out;
}

bool close_or_same_inf(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b));
}

// 1. DFT against the O(d^2) definition.
Verdict dft_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1);
  std::normal_distribution<double> N;
  double worst = 0.0;
  for (std::size_t d : {2, 3, 8, 16, 33, 64, 500}) {
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<double> x(d);
      for (double& v : x) v = N(rng);
      const auto got = dft_real_half(x).values;
      const auto ref = oracle::dft_real_half(x);
      for (std::size_t f = 0; f < ref.size(); ++f) worst = std::max(worst, std::fabs(got[f] - ref[f]));
    }
  }
  const double secs = seconds_since(start);
  return {worst < 1e-9 && secs < 5.0,
          fmt("max abs error %.3g over 700 vectors (limit 1e-9); %.2f s (limit 5 s)", worst, secs)};
}

// 2. Metrics against direct formulas, plus range and relabeling properties.
Verdict metric_oracles() {
  std::mt19937_64 rng(2);
  auto labels = [&](std::size_t n, int classes) {
    std::vector<int> v(n);
    for (int& x : v) x = static_cast<int>(rng() % static_cast<unsigned>(classes));
    return v;
  };
  // Renames labels through a random injection; accepts any label values.
  auto relabel = [&](const std::vector<int>& v) {
    std::vector<int> names(64);
    std::iota(names.begin(), names.end(), 100);
    std::shuffle(names.begin(), names.end(), rng);
    std::map<int, int> rename;
    for (int x : v) rename.try_emplace(x, names[rename.size()]);
    std::vector<int> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = rename[v[i]];
    return out;
  };

  double worst = 0.0;
  int oracle_cases = 0;
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t k = 2 + rng() % 11;  // k <= 12
    const auto t = labels(k, 1 + static_cast<int>(rng() % 4));
    const auto p = labels(k, 1 + static_cast<int>(rng() % 4));
    const auto s = external_clustering_scores(t, p);
    const auto ref = oracle::external(t, p);
    for (auto [a, b] : {std::pair{s.nmi, ref.nmi}, std::pair{s.adjusted_rand, ref.ari},
                        std::pair{s.homogeneity, ref.homogeneity},
                        std::pair{s.completeness, ref.completeness}}) {
      worst = std::max(worst, std::fabs(a - b));
    }

    const auto rows = oracle::random_rows(rng, std::max<std::size_t>(k, 3), 1 + rng() % 3);
    auto l = labels(rows.size(), 2 + static_cast<int>(rng() % std::min<std::size_t>(3, rows.size() - 2)));
    l[0] = 0;
    l[1] = 1;
    const auto in = internal_clustering_scores(testing::to_matrix(rows), l);
    const auto iref = oracle::internal(rows, l);
    worst = std::max(worst, std::fabs(in.silhouette - iref.silhouette));
    worst = std::max(worst, std::fabs(in.davies_bouldin - iref.db));
    if (!close_or_same_inf(in.calinski_harabasz, iref.ch, 1e-9)) worst = std::max(worst, 1.0);
    ++oracle_cases;
  }

  int property_cases = 0, violations = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = 2 + rng() % 30;
    const auto t = labels(n, 1 + static_cast<int>(rng() % 6));
    const auto p = rep % 7 == 0 ? relabel(t) : labels(n, 1 + static_cast<int>(rng() % 6));
    const auto s = external_clustering_scores(t, p);
    const auto r = external_clustering_scores(relabel(t), relabel(p));
    bool ok = true;
    for (double v : {s.nmi, s.homogeneity, s.completeness}) ok &= v >= 0.0 && v <= 1.0;
    ok &= s.adjusted_rand <= 1.0 + 1e-12;
    ok &= (s.adjusted_rand >= 1.0 - 1e-12) == (partition_of(t) == partition_of(p));
    ok &= std::fabs(r.nmi - s.nmi) < 1e-12 && std::fabs(r.adjusted_rand - s.adjusted_rand) < 1e-12 &&
          std::fabs(r.homogeneity - s.homogeneity) < 1e-12 &&
          std::fabs(r.completeness - s.completeness) < 1e-12;
    const auto sw = external_clustering_scores(p, t);
    ok &= std::fabs(sw.nmi - s.nmi) < 1e-12 && std::fabs(sw.completeness - s.homogeneity) < 1e-12;

    const auto X = testing::to_matrix(oracle::random_rows(rng, std::max<std::size_t>(n, 3), 2));
    auto l = labels(X.rows(), 2 + static_cast<int>(rng() % std::min<std::size_t>(3, X.rows() - 2)));
    l[0] = 0;
    l[1] = 1;
    const auto in = internal_clustering_scores(X, l);
    const auto rin = internal_clustering_scores(X, relabel(l));
    ok &= in.silhouette >= -1.0 && in.silhouette <= 1.0 && in.davies_bouldin >= 0.0 &&
          in.calinski_harabasz >= 0.0;
    ok &= std::fabs(rin.silhouette - in.silhouette) < 1e-12 &&
          std::fabs(rin.davies_bouldin - in.davies_bouldin) < 1e-12 &&
          close_or_same_inf(rin.calinski_harabasz, in.calinski_harabasz, 1e-12);
    violations += !ok;
    ++property_cases;
  }
  return {worst < 1e-9 && violations == 0,
          fmt("%d oracle cases, max deviation %.3g (limit 1e-9); %d property cases, %d violations",
              oracle_cases, worst, property_cases, violations)};
}

// 3. k-means on ten points against exhaustive enumeration.
Verdict kmeans_optimality() {
  std::mt19937_64 rng(3);
  int hits = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const auto rows = oracle::random_rows(rng, 10, 2);
    const auto r = kmeans(testing::to_matrix(rows), 2, derive_seed(3, rep), {10, 300});
    const double best = oracle::best_two_partition(rows);
    hits += std::fabs(r.inertia - best) <= 1e-9 * std::max(1.0, best);
  }
  return {hits >= 95, fmt("%d/100 instances at the exhaustive optimum (need >= 95)", hits)};
}

// 4. Experiment 2 analogue.
Verdict experiment2() {
  const auto start = Clock::now();
  bench::Settings settings;
  const bench::Experiment2Grid grid;
  const auto result = bench::run_experiment2(settings, grid);
  const double secs = seconds_since(start);

  bool ok = secs < 600.0;
  std::string detail;
  for (auto drift : grid.drift_types) {
    const auto ffm_nmi = bench::metric_series(result, drift, bench::Method::Ffm, &ExternalScores::nmi);
    const auto ced_nmi = bench::metric_series(result, drift, bench::Method::Ced, &ExternalScores::nmi);
    const double ffm_mean = std::accumulate(ffm_nmi.begin(), ffm_nmi.end(), 0.0) / ffm_nmi.size();
    const double ced_mean = std::accumulate(ced_nmi.begin(), ced_nmi.end(), 0.0) / ced_nmi.size();
    const auto test = paired_t_test(ffm_nmi, ced_nmi);
    const double floor = drift == DriftType::Sudden ? 0.90 : 0.75;
    ok &= ffm_mean >= floor && ffm_mean > ced_mean && test.significant;
    detail += fmt("%s FFM %.3f (>= %.2f) vs CED %.3f p=%.3g; ", std::string(to_string(drift)).c_str(),
                  ffm_mean, floor, ced_mean, test.p);
  }
  detail += fmt("%zu streams in %.0f s (limit 600 s)", result.streams.size(), secs);
  return {ok, detail};
}

// 5. Experiment 3 analogue at chunk size 400.
Verdict experiment3() {
  const auto start = Clock::now();
  bool ok = true;
  std::string detail;
  for (std::size_t drifts : {1, 3, 5}) {
    int correct = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      StreamConfig cfg;
      cfg.n_chunks = 500;
      cfg.chunk_size = 400;
      cfg.n_features = 500;
      cfg.n_drifts = drifts;
      cfg.drift_type = DriftType::Sudden;
      cfg.seed = derive_seed(5, drifts, seed);
      const auto features = bench::extract_features(cfg, false, false);
      const auto meta = assemble_metadescription(features.signatures, 16, features.d);
      const auto report = identify_concept_count(meta.R, 2, 11, derive_seed(cfg.seed, 7), 10);
      correct += report.best_c == static_cast<int>(drifts + 1);
    }
    ok &= correct >= 8;
    detail += fmt("%zu concepts: %d/10; ", drifts + 1, correct);
  }
  const double secs = seconds_since(start);
  ok &= secs < 900.0;
  detail += fmt("%.0f s (limit 900 s)", secs);
  return {ok, detail};
}

// 6. Scale and chunk-permutation invariance.
Verdict invariance() {
  std::mt19937_64 rng(6);
  int cases = 0, violations = 0;
  for (int rep = 0; rep < 70; ++rep) {
    StreamConfig cfg;
    cfg.n_chunks = 12 + rng() % 30;
    cfg.chunk_size = 4 + rng() % 30;
    cfg.n_features = 8 + rng() % 40;
    cfg.n_drifts = 1 + rng() % 3;
    cfg.drift_type = static_cast<DriftType>(rng() % 3);
    cfg.seed = rng();
    const auto s = make_stream(cfg).stream;
    const std::size_t n = 1 + rng() % (cfg.n_features / 2);
    const std::size_t c = cfg.n_drifts + 1;
    const auto base = metadescribe(s, n);
    const auto base_labels = kmeans(normalize_minmax(base.R), c, 11).labels;

    for (float alpha : {0.01f, 3.0f, 1000.0f}) {
      ChunkedStream scaled = s;
      for (auto& chunk : scaled.chunks)
        for (float& v : chunk.data()) v *= alpha;
      const auto meta = metadescribe(scaled, n);
      const auto labels = kmeans(normalize_minmax(meta.R), c, 11).labels;
      violations += meta.selected != base.selected || partition_of(labels) != partition_of(base_labels);
      ++cases;
    }

    std::vector<std::size_t> perm(s.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    ChunkedStream permuted = s;
    for (std::size_t t = 0; t < s.size(); ++t) permuted.chunks[t] = s.chunks[perm[t]];
    const auto meta = metadescribe(permuted, n);
    const auto labels = kmeans(normalize_minmax(meta.R), c, 11).labels;
    std::vector<int> mapped(s.size());
    for (std::size_t t = 0; t < s.size(); ++t) mapped[perm[t]] = labels[t];
    violations += meta.selected != base.selected || partition_of(mapped) != partition_of(base_labels);
    ++cases;
  }
  return {cases >= 200 && violations == 0, fmt("%d cases, %d violations", cases, violations)};
}

// 7. Visualization shape and pre/post drift separability.
Verdict visualization() {
  StreamConfig cfg;
  cfg.n_chunks = 200;
  cfg.chunk_size = 256;
  cfg.n_features = 64;
  cfg.n_drifts = 1;
  cfg.seed = 7;
  const auto s = make_stream(cfg);
  const auto meta = metadescribe(s.stream, 16);
  const auto& truth = s.ground_truth();

  bool shapes = true;
  std::vector<Matrix> images;
  for (std::size_t t = 0; t < s.stream.size(); ++t) {
    images.push_back(render_chunk_image(meta, t));
    shapes &= images.back().rows() == 16 && images.back().cols() == 16;
  }
  Matrix avg[2] = {Matrix(16, 16), Matrix(16, 16)};
  std::size_t count[2] = {0, 0};
  for (std::size_t t = 0; t < images.size(); ++t) {
    const auto g = static_cast<std::size_t>(truth[t]);
    for (std::size_t i = 0; i < 256; ++i) avg[g].data()[i] += images[t].data()[i];
    ++count[g];
  }
  for (int g = 0; g < 2; ++g)
    for (double& v : avg[g].data()) v /= static_cast<double>(count[g]);
  double between = 0.0, within = 0.0;
  for (std::size_t i = 0; i < 256; ++i) between += std::fabs(avg[0].data()[i] - avg[1].data()[i]) / 256.0;
  for (std::size_t t = 0; t < images.size(); ++t) {
    const auto g = static_cast<std::size_t>(truth[t]);
    double diff = 0.0;
    for (std::size_t i = 0; i < 256; ++i) diff += std::fabs(images[t].data()[i] - avg[g].data()[i]) / 256.0;
    within += diff / static_cast<double>(images.size());
  }
  return {shapes && between > 5.0 * within,
          fmt("16x16 images: %s; pre/post mean abs pixel difference %.4g vs within-segment %.4g "
              "(ratio %.1f, need > 5)",
              shapes ? "yes" : "no", between, within, between / within)};
}

bool first_line_numeric(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  const auto comma = line.find(',');
  const std::string cell = line.substr(0, comma);
  char* end = nullptr;
  std::strtod(cell.c_str(), &end);
  return end && end != cell.c_str() && *end == '\0';
}

// 8. Real-stream pipeline. Runs on the abrupt balanced INSECTS CSV when
// FFM_INSECTS_CSV points to it, otherwise on a synthetic CSV of the same
// shape written and read back through the same reader.
Verdict insects() {
  testing::TempDir dir;
  std::filesystem::path csv;
  std::string source;
  if (const char* env = std::getenv("FFM_INSECTS_CSV"); env && *env) {
    csv = env;
    source = "INSECTS " + csv.filename().string();
  } else {
    StreamConfig cfg;
    cfg.n_chunks = 1056;
    cfg.chunk_size = 50;
    cfg.n_features = 33;
    cfg.n_drifts = 5;
    cfg.seed = 8;
    const auto s = make_stream(cfg);
    csv = dir / "standin.csv";
    std::ofstream out(csv);
    out << "f0";
    for (int j = 1; j < 33; ++j) out << ",f" << j;
    out << ",class\n";
    for (std::size_t t = 0; t < s.stream.size(); ++t) {
      const auto& chunk = s.stream.chunks[t];
      for (std::size_t r = 0; r < chunk.rows(); ++r) {
        for (std::size_t c = 0; c < chunk.cols(); ++c) out << chunk(r, c) << ',';
        out << (s.class_labels[t][r] ? "male" : "female") << '\n';
      }
    }
    source = "synthetic stand-in, INSECTS CSV not supplied (set FFM_INSECTS_CSV)";
  }

  const auto start = Clock::now();
  const auto stream = read_chunked_csv(csv, {50, !first_line_numeric(csv), -1});
  const bool shape = stream.size() == 1056 && stream.chunk_size == 50 && stream.features == 33;
  const auto meta = metadescribe(stream, 5);
  const auto report = identify_concept_count(meta.R, 4, 10, 8, 10);
  const InternalReportRow row{"abrupt_balanced", report.best_c, report.best_internal};
  write_internal_report_csv(std::span(&row, 1), dir / "table.csv");
  const double secs = seconds_since(start);

  const std::string table = testing::slurp(dir / "table.csv");
  const bool schema = table.rfind("data_stream,concepts,sil_score,ch_score,db_score\n", 0) == 0 &&
                      std::count(table.begin(), table.end(), '\n') == 2;
  std::size_t same = 0;
  for (std::size_t t = 1; t < report.best_labels.size(); ++t) {
    same += report.best_labels[t] == report.best_labels[t - 1];
  }
  const double adjacency = static_cast<double>(same) / static_cast<double>(report.best_labels.size() - 1);
  return {shape && schema && secs < 300.0 && adjacency >= 0.70,
          fmt("[%s] %zu chunks of %zux%zu; best c=%d sil %.3f c-h %.1f d-b %.3f; adjacency %.1f%% "
              "(need >= 70%%); %.1f s (limit 300 s)",
              source.c_str(), stream.size(), stream.chunk_size, stream.features, report.best_c,
              report.best_internal.silhouette, report.best_internal.calinski_harabasz,
              report.best_internal.davies_bouldin, 100.0 * adjacency, secs)};
}

// 9. CLI determinism across repeated runs and worker counts.
Verdict determinism() {
  testing::TempDir dir;
  auto run = [](std::vector<std::string> args) {
    args.insert(args.begin(), "ffm");
    std::ostringstream out, err;
    const int status = cli::run(args, out, err);
    if (status != 0) throw std::runtime_error(err.str());
  };
  const std::vector<std::string> files{
      "s.f32", "s.json", "m.json", "ced.json", "pca.json", "c.csv", "c.json", "i.json", "t.csv", "v.pgm",
      "e1/streams.csv", "e1/aggregate.csv", "e1/manifest.json",
      "e2/streams.csv", "e2/aggregate.csv", "e2/table.csv", "e2/ttest.csv", "e2/manifest.json",
      "e3/heatmap.csv", "e3/identified.csv", "e3/gallery.pgm", "e3/manifest.json"};
  std::vector<std::string> reference;
  int runs = 0, mismatches = 0;
  for (const char* threads : {"1", "1", "2", "4", "0"}) {
    ::setenv("FFM_THREADS", threads, 1);
    const auto d = dir / ("run" + std::to_string(runs));
    std::filesystem::create_directories(d);
    auto at = [&](const char* name) { return (d / name).string(); };
    run({"generate", "--chunks", "80", "--chunk-size", "40", "--features", "32", "--drifts", "3",
         "--drift-type", "incremental", "--seed", "9", "--out", at("s.f32")});
    run({"describe", "--in", at("s.f32"), "--n", "8", "--out", at("m.json")});
    run({"describe", "--in", at("s.f32"), "--method", "ced", "--out", at("ced.json")});
    run({"describe", "--in", at("s.f32"), "--method", "pca", "--out", at("pca.json")});
    run({"cluster", "--meta", at("m.json"), "--concepts", "4", "--seed", "3", "--out", at("c")});
    run({"identify", "--meta", at("m.json"), "--c-min", "2", "--c-max", "11", "--seed", "3", "--out",
         at("i.json"), "--table", at("t.csv")});
    run({"visualize", "--meta", at("m.json"), "--chunks", "0-9,60-69", "--out", at("v.pgm")});
    for (const char* e : {"1", "2", "3"}) {
      run({"benchmark", "--experiment", e, "--replicas", "2", "--chunks", "24", "--seed", "5",
           "--kmeans-replications", "3", "--out-dir", (d / (std::string("e") + e)).string()});
    }
    std::vector<std::string> contents;
    for (const auto& f : files) contents.push_back(testing::slurp(d / f));
    if (reference.empty()) {
      reference = contents;
    } else {
      for (std::size_t i = 0; i < files.size(); ++i) mismatches += contents[i] != reference[i];
    }
    ++runs;
  }
  ::unsetenv("FFM_THREADS");
  bool nonempty = true;
  for (const auto& c : reference) nonempty &= !c.empty();
  return {mismatches == 0 && nonempty,
          fmt("%d runs (FFM_THREADS 1,1,2,4,0) x %zu output files from all 6 subcommands, "
              "%d byte mismatches",
              runs, files.size(), mismatches)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"DFT oracle equivalence", dft_oracle},
      {"metric oracle suite", metric_oracles},
      {"k-means small-instance optimality", kmeans_optimality},
      {"Experiment 2 analogue", experiment2},
      {"Experiment 3 analogue", experiment3},
      {"scale/permutation invariance", invariance},
      {"visualization contract", visualization},
      {"INSECTS pipeline", insects},
      {"determinism", determinism},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i + 1);
    if (!wanted.empty() && !wanted.count(number)) continue;
    Verdict v;
    const auto start = Clock::now();
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::cout << "criterion " << number << " [" << criteria[i].first << "]: "
              << (v.pass ? "PASS" : "FAIL") << " | " << v.detail
              << fmt(" | %.1f s", seconds_since(start)) << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
