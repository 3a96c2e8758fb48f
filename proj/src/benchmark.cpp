#include "ffm/benchmark.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <string>

#include <json.hpp>

#include "ffm/baselines.hpp"
#include "ffm/error.hpp"
#include "ffm/imaging.hpp"
#include "ffm/parallel.hpp"
#include "ffm/serialize.hpp"

namespace ffm::bench {
namespace {

using nlohmann::json;

constexpr Method kMethods[] = {Method::Ced, Method::Ffm, Method::Pca};

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::pair<double, double> mean_std(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return {m, std::sqrt(ss / static_cast<double>(v.size()))};
}

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  return out;
}

StreamConfig make_config(std::size_t chunks, std::size_t chunk_size, std::size_t features,
                         std::size_t drifts, DriftType type, std::uint64_t seed,
                         double center_spread) {
  StreamConfig c;
  c.n_chunks = chunks;
  c.chunk_size = chunk_size;
  c.n_features = features;
  c.n_drifts = drifts;
  c.drift_type = type;
  c.seed = seed;
  c.center_spread = center_spread;
  return c;
}

std::size_t chunks_for(const Settings& s, std::size_t table_value) {
  return s.chunks_override ? s.chunks_override : table_value;
}

json config_json(const StreamRecord& rec) {
  const StreamConfig& c = rec.config;
  return {{"n_chunks", c.n_chunks},       {"chunk_size", c.chunk_size},
          {"n_features", c.n_features},   {"n_drifts", c.n_drifts},
          {"drift_type", to_string(c.drift_type)}, {"recurring", c.recurring},
          {"seed", c.seed},               {"center_spread", c.center_spread},
          {"replica", rec.replica}};
}

json manifest_base(int experiment, const Settings& s, const std::vector<StreamRecord>& streams) {
  json streams_json = json::array();
  for (const auto& rec : streams) streams_json.push_back(config_json(rec));
  return {{"experiment", experiment},
          {"seed", s.seed},
          {"replicas", s.replicas},
          {"kmeans_replications", s.kmeans_replications},
          {"kmeans_max_iter", 300},
          {"kmeans_seed_rule", "derive_seed(stream_seed, 100 + method_index)"},
          {"normalization", to_string(s.normalization)},
          {"chunks_override", s.chunks_override},
          {"streams", streams_json}};
}

std::uint64_t method_seed(std::uint64_t stream_seed, Method m) {
  return derive_seed(stream_seed, 100 + static_cast<int>(m));
}

Matrix means_to_pca(const Matrix& means) { return pca_describe_means(means); }

Matrix assemble_R(const StreamFeatures& f, std::size_t n) {
  return assemble_metadescription(f.signatures, n, f.d).R;
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::Ced: return "CED";
    case Method::Ffm: return "FFM";
    case Method::Pca: return "PCA";
  }
  return "?";
}

StreamFeatures extract_features(const StreamConfig& config, bool with_ced, bool with_means) {
  const StreamGenerator generator(config);
  const std::size_t k = config.n_chunks;
  StreamFeatures f;
  f.d = config.n_features;
  f.signatures.resize(k);
  if (with_ced) f.ced = Matrix(k, CedVector::kSize);
  if (with_means) f.means = Matrix(k, config.n_features);
  parallel_for(k, [&](std::size_t t) {
    const ChunkMatrix chunk = generator.chunk(t);
    f.signatures[t] = chunk_frequency_signature(chunk);
    if (with_ced) {
      const auto v = ced_metafeatures(chunk);
      std::copy(v.values.begin(), v.values.end(), f.ced.row(t).begin());
    }
    if (with_means) {
      const auto m = chunk_mean(chunk);
      std::copy(m.begin(), m.end(), f.means.row(t).begin());
    }
  });
  f.truth = generator.ground_truth();
  return f;
}

ExternalScores score_description(const Matrix& R, const std::vector<int>& truth,
                                 std::size_t concepts, std::uint64_t seed,
                                 std::size_t kmeans_replications, Normalization norm) {
  const Matrix X = normalize(R, norm);
  const ClusteringResult clusters = kmeans(X, concepts, seed, {kmeans_replications, 300});
  return external_clustering_scores(truth, clusters.labels);
}

Experiment1Result run_experiment1(const Settings& s, const Experiment1Grid& g) {
  Experiment1Result result;
  result.ced_skipped = g.features >= 500 && !s.force_ced;
  const bool with_ced = !result.ced_skipped;
  std::size_t cell = 0;
  for (std::size_t chunk_size : g.chunk_sizes) {
    for (std::size_t drifts : g.drifts) {
      for (std::size_t r = 0; r < s.replicas; ++r) {
        const auto cfg = make_config(chunks_for(s, g.n_chunks), chunk_size, g.features, drifts,
                                     DriftType::Sudden, derive_seed(s.seed, 1, cell, r), s.center_spread);
        const std::size_t stream = result.streams.size();
        result.streams.push_back({cfg, r});
        const StreamFeatures f = extract_features(cfg, with_ced, true);
        const std::size_t concepts = drifts + 1;
        for (std::size_t n : g.components) {
          if (n > g.features / 2) continue;
          const auto sc = score_description(assemble_R(f, n), f.truth, concepts,
                                            method_seed(cfg.seed, Method::Ffm),
                                            s.kmeans_replications, s.normalization);
          result.rows.push_back({stream, Method::Ffm, n, sc.nmi});
        }
        const auto pca = score_description(means_to_pca(f.means), f.truth, concepts,
                                           method_seed(cfg.seed, Method::Pca),
                                           s.kmeans_replications, s.normalization);
        result.rows.push_back({stream, Method::Pca, 0, pca.nmi});
        if (with_ced) {
          const auto ced = score_description(f.ced, f.truth, concepts,
                                             method_seed(cfg.seed, Method::Ced),
                                             s.kmeans_replications, s.normalization);
          result.rows.push_back({stream, Method::Ced, 0, ced.nmi});
        }
      }
      ++cell;
    }
  }
  return result;
}

Experiment2Result run_experiment2(const Settings& s, const Experiment2Grid& g) {
  Experiment2Result result;
  for (std::size_t cell = 0; cell < g.drift_types.size(); ++cell) {
    for (std::size_t r = 0; r < s.replicas; ++r) {
      const auto cfg = make_config(chunks_for(s, g.n_chunks), g.chunk_size, g.features, g.drifts,
                                   g.drift_types[cell], derive_seed(s.seed, 2, cell, r), s.center_spread);
      const std::size_t stream = result.streams.size();
      result.streams.push_back({cfg, r});
      const StreamFeatures f = extract_features(cfg, true, true);
      const std::size_t concepts = g.drifts + 1;
      for (Method m : kMethods) {
        Matrix R;
        switch (m) {
          case Method::Ced: R = f.ced; break;
          case Method::Ffm: R = assemble_R(f, g.components); break;
          case Method::Pca: R = means_to_pca(f.means); break;
        }
        const auto sc = score_description(R, f.truth, concepts, method_seed(cfg.seed, m),
                                          s.kmeans_replications, s.normalization);
        result.rows.push_back({stream, m, sc});
      }
    }
  }
  return result;
}

Experiment3Result run_experiment3(const Settings& s, const Experiment3Grid& g) {
  Experiment3Result result;
  std::size_t cell = 0;
  const std::size_t largest = g.chunk_sizes.empty()
                                  ? 0
                                  : *std::max_element(g.chunk_sizes.begin(), g.chunk_sizes.end());
  for (std::size_t chunk_size : g.chunk_sizes) {
    for (std::size_t drifts : g.drifts) {
      for (std::size_t r = 0; r < s.replicas; ++r) {
        const auto cfg = make_config(chunks_for(s, g.n_chunks), chunk_size, g.features, drifts,
                                     DriftType::Sudden, derive_seed(s.seed, 3, cell, r), s.center_spread);
        const std::size_t stream = result.streams.size();
        result.streams.push_back({cfg, r});
        const StreamFeatures f = extract_features(cfg, false, false);
        const Metadescription meta = assemble_metadescription(f.signatures, g.components, f.d);
        const int c_max = std::min<int>(g.c_max, static_cast<int>(meta.R.rows()) - 1);
        auto report = identify_concept_count(meta.R, g.c_min, c_max,
                                             method_seed(cfg.seed, Method::Ffm),
                                             s.kmeans_replications, s.normalization);
        result.rows.push_back({stream, static_cast<int>(drifts + 1), std::move(report)});

        if (chunk_size == largest && r == 0) {
          // Up to ten chunks per true concept, one gallery row per concept.
          result.gallery.clear();
          const int concepts = static_cast<int>(drifts + 1);
          for (int c = 0; c < concepts; ++c) {
            std::size_t taken = 0;
            for (std::size_t t = 0; t < f.truth.size() && taken < result.gallery_columns; ++t) {
              if (f.truth[t] != c) continue;
              result.gallery.push_back(render_chunk_image(meta, t));
              ++taken;
            }
            while (taken++ < result.gallery_columns) {
              result.gallery.push_back(Matrix(g.components, g.components));
            }
          }
        }
      }
      ++cell;
    }
  }
  return result;
}

std::vector<double> metric_series(const Experiment2Result& r, DriftType drift, Method method,
                                  double ExternalScores::*metric) {
  std::vector<double> out;
  for (const auto& row : r.rows) {
    if (row.method == method && r.streams[row.stream].config.drift_type == drift) {
      out.push_back(row.scores.*metric);
    }
  }
  return out;
}

void write_outputs(const Experiment1Result& r, const Settings& s, const Experiment1Grid& g,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_csv(dir / "streams.csv");
    out << "chunk_size,drifts,replica,stream_seed,method,n,nmi\n";
    for (const auto& row : r.rows) {
      const auto& c = r.streams[row.stream].config;
      out << c.chunk_size << ',' << c.n_drifts << ',' << r.streams[row.stream].replica << ','
          << c.seed << ',' << to_string(row.method) << ',' << row.components << ','
          << num(row.nmi) << '\n';
    }
  }
  {
    std::map<std::tuple<std::size_t, std::size_t, int, std::size_t>, std::vector<double>> groups;
    for (const auto& row : r.rows) {
      const auto& c = r.streams[row.stream].config;
      groups[{c.chunk_size, c.n_drifts, static_cast<int>(row.method), row.components}].push_back(row.nmi);
    }
    auto out = open_csv(dir / "aggregate.csv");
    out << "chunk_size,drifts,method,n,mean_nmi,std_nmi,replicas\n";
    for (const auto& [key, values] : groups) {
      const auto [m, sd] = mean_std(values);
      out << std::get<0>(key) << ',' << std::get<1>(key) << ','
          << to_string(static_cast<Method>(std::get<2>(key))) << ',' << std::get<3>(key) << ','
          << num(m) << ',' << num(sd) << ',' << values.size() << '\n';
    }
  }
  json manifest = manifest_base(1, s, r.streams);
  manifest["grid"] = {{"n_chunks", g.n_chunks},
                      {"features", g.features},
                      {"chunk_sizes", g.chunk_sizes},
                      {"drifts", g.drifts},
                      {"components", g.components}};
  manifest["ced_skipped"] = r.ced_skipped;
  if (r.ced_skipped) {
    manifest["notes"] = json::array(
        {"CED skipped at 500 features (quadratic correlation cost); pass --force-ced to include it"});
  }
  write_json_file(manifest, dir / "manifest.json");
}

void write_outputs(const Experiment2Result& r, const Settings& s, const Experiment2Grid& g,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::pair<const char*, double ExternalScores::*> metrics[] = {
      {"nmi", &ExternalScores::nmi},
      {"adjusted_rand", &ExternalScores::adjusted_rand},
      {"completeness", &ExternalScores::completeness},
      {"homogeneity", &ExternalScores::homogeneity}};
  {
    auto out = open_csv(dir / "streams.csv");
    out << "drift_type,replica,stream_seed,method,nmi,adjusted_rand,completeness,homogeneity\n";
    for (const auto& row : r.rows) {
      const auto& rec = r.streams[row.stream];
      out << to_string(rec.config.drift_type) << ',' << rec.replica << ',' << rec.config.seed << ','
          << to_string(row.method) << ',' << num(row.scores.nmi) << ','
          << num(row.scores.adjusted_rand) << ',' << num(row.scores.completeness) << ','
          << num(row.scores.homogeneity) << '\n';
    }
  }
  auto aggregate = open_csv(dir / "aggregate.csv");
  aggregate << "metric,drift_type,method,mean,std\n";
  auto table = open_csv(dir / "table.csv");
  table << "metric,drift_type";
  for (std::size_t i = 0; i < std::size(kMethods); ++i) {
    table << ',' << to_string(kMethods[i]) << " (" << i << ')';
  }
  table << '\n';
  auto ttest = open_csv(dir / "ttest.csv");
  ttest << "metric,drift_type,method_a,method_b,mean_a,mean_b,t,p,significant\n";

  for (const auto& [name, field] : metrics) {
    for (DriftType drift : g.drift_types) {
      std::vector<std::vector<double>> series;
      for (Method m : kMethods) series.push_back(metric_series(r, drift, m, field));
      std::string cells, worse_cells;
      for (std::size_t i = 0; i < series.size(); ++i) {
        const auto [m, sd] = mean_std(series[i]);
        aggregate << name << ',' << to_string(drift) << ',' << to_string(kMethods[i]) << ','
                  << num(m) << ',' << num(sd) << '\n';
        char cell[64];
        std::snprintf(cell, sizeof cell, "%.3f (%.3f)", m, sd);
        cells += ",\"" + std::string(cell) + "\"";
        std::string worse;
        for (std::size_t j = 0; j < series.size(); ++j) {
          if (i == j || series[i].size() < 2) continue;
          const auto test = paired_t_test(series[i], series[j]);
          const double mj = mean_std(series[j]).first;
          if (i < j) {
            ttest << name << ',' << to_string(drift) << ',' << to_string(kMethods[i]) << ','
                  << to_string(kMethods[j]) << ',' << num(m) << ',' << num(mj) << ','
                  << num(test.t) << ',' << num(test.p) << ',' << (test.significant ? 1 : 0)
                  << '\n';
          }
          if (test.significant && m > mj) worse += (worse.empty() ? "" : " ") + std::to_string(j);
        }
        worse_cells += "," + (worse.empty() ? std::string("---") : worse);
      }
      table << name << ',' << to_string(drift) << cells << '\n';
      table << name << ',' << to_string(drift) << "_worse" << worse_cells << '\n';
    }
  }
  json manifest = manifest_base(2, s, r.streams);
  manifest["grid"] = {{"n_chunks", g.n_chunks},
                      {"chunk_size", g.chunk_size},
                      {"features", g.features},
                      {"drifts", g.drifts},
                      {"components", g.components}};
  manifest["methods"] = {"CED", "FFM", "PCA"};
  manifest["t_test"] = {{"kind", "paired"}, {"alpha", 0.05}};
  manifest["std"] = "population";
  write_json_file(manifest, dir / "manifest.json");
}

void write_outputs(const Experiment3Result& r, const Settings& s, const Experiment3Grid& g,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::map<std::tuple<std::size_t, int, int>, std::vector<double>> heat;
  std::map<std::pair<std::size_t, int>, std::pair<int, int>> hits;  // correct, total
  {
    auto out = open_csv(dir / "streams.csv");
    out << "chunk_size,true_concepts,replica,stream_seed,c,silhouette,selected\n";
    for (const auto& row : r.rows) {
      const auto& rec = r.streams[row.stream];
      for (const auto& [c, score] : row.report.scores) {
        out << rec.config.chunk_size << ',' << row.true_concepts << ',' << rec.replica << ','
            << rec.config.seed << ',' << c << ',' << num(score) << ','
            << (c == row.report.best_c ? 1 : 0) << '\n';
        heat[{rec.config.chunk_size, row.true_concepts, c}].push_back(score);
      }
      auto& h = hits[{rec.config.chunk_size, row.true_concepts}];
      h.first += row.report.best_c == row.true_concepts ? 1 : 0;
      h.second += 1;
    }
  }
  {
    auto out = open_csv(dir / "heatmap.csv");
    out << "chunk_size,true_concepts,c,mean_silhouette\n";
    for (const auto& [key, values] : heat) {
      out << std::get<0>(key) << ',' << std::get<1>(key) << ',' << std::get<2>(key) << ','
          << num(mean_std(values).first) << '\n';
    }
  }
  {
    // Argmax of the averaged silhouette per stream type, plus the per-stream hit rate.
    auto out = open_csv(dir / "identified.csv");
    out << "chunk_size,true_concepts,best_c_of_mean,correct_streams,streams\n";
    for (const auto& [key, h] : hits) {
      int best_c = 0;
      double best = -2.0;
      for (const auto& [hk, values] : heat) {
        if (std::get<0>(hk) != key.first || std::get<1>(hk) != key.second) continue;
        const double m = mean_std(values).first;
        if (m > best) {
          best = m;
          best_c = std::get<2>(hk);
        }
      }
      out << key.first << ',' << key.second << ',' << best_c << ',' << h.first << ',' << h.second
          << '\n';
    }
  }
  if (!r.gallery.empty()) write_strip(r.gallery, r.gallery_columns, dir / "gallery.pgm");
  json manifest = manifest_base(3, s, r.streams);
  manifest["grid"] = {{"n_chunks", g.n_chunks},   {"features", g.features},
                      {"chunk_sizes", g.chunk_sizes}, {"drifts", g.drifts},
                      {"components", g.components}, {"c_min", g.c_min},
                      {"c_max", g.c_max}};
  write_json_file(manifest, dir / "manifest.json");
}

}  // namespace ffm::bench
