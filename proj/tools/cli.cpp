#include "cli.hpp"

#include <charconv>
#include <filesystem>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "ffm/baselines.hpp"
#include "ffm/benchmark.hpp"
#include "ffm/clustering.hpp"
#include "ffm/error.hpp"
#include "ffm/imaging.hpp"
#include "ffm/ingest.hpp"
#include "ffm/metadescriptor.hpp"
#include "ffm/serialize.hpp"
#include "ffm/streamgen.hpp"

namespace ffm::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string quoted(const std::string& text) {
  // JSON string escaping keeps the diagnostic on one parsable line.
  return json(text).dump();
}

fs::path with_default_extension(fs::path p, const char* ext) {
  if (!p.has_extension()) p += ext;
  return p;
}

/// Parses "0-9,250,300-302" into chunk indices, in the order given.
std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  auto parse = [&](std::string_view s) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw Error(ErrorKind::Parse, "bad chunk index '" + std::string(s) + "'");
    }
    return v;
  };
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(parse(item));
    } else {
      const std::size_t lo = parse(std::string_view(item).substr(0, dash));
      const std::size_t hi = parse(std::string_view(item).substr(dash + 1));
      if (hi < lo) throw Error(ErrorKind::Parse, "descending range '" + item + "'");
      for (std::size_t i = lo; i <= hi; ++i) out.push_back(i);
    }
  }
  if (out.empty()) throw Error(ErrorKind::Parse, "empty chunk list");
  return out;
}

struct GenerateArgs {
  StreamConfig config;
  std::string drift_type = "sudden";
  std::string out;
};

struct DescribeArgs {
  std::string in;
  std::string sidecar;
  std::size_t chunk_size = 0;
  bool header = false;
  std::string label_column;
  std::size_t n = 8;
  std::string method = "ffm";
  std::string out;
};

struct ClusterArgs {
  std::string meta;
  std::size_t concepts = 2;
  std::uint64_t seed = 0;
  std::size_t replications = 10;
  std::size_t max_iter = 300;
  std::string normalization = "minmax";
  std::string sidecar;
  std::string out;
};

struct IdentifyArgs {
  std::string meta;
  int c_min = 2;
  int c_max = 11;
  std::uint64_t seed = 0;
  std::size_t replications = 10;
  std::string normalization = "minmax";
  std::string out;
  std::string labels_out;
  std::string table_out;
  std::string name;
};

struct VisualizeArgs {
  std::string meta;
  std::string chunks;
  std::size_t columns = 10;
  std::string out;
};

struct BenchmarkArgs {
  int experiment = 2;
  bench::Settings settings;
  std::string normalization = "minmax";
  std::string out_dir;
};

ChunkedStream load_stream(const DescribeArgs& a) {
  const fs::path in(a.in);
  if (in.extension() == ".csv") {
    CsvOptions opts;
    opts.chunk_size = a.chunk_size;
    opts.has_header = a.header;
    if (a.chunk_size == 0) throw Error(ErrorKind::Configuration, "--chunk-size is required for CSV input");
    if (!a.label_column.empty()) {
      if (a.label_column == "last") {
        opts.label_column = -1;
      } else {
        long v = 0;
        const auto [ptr, ec] = std::from_chars(a.label_column.data(),
                                               a.label_column.data() + a.label_column.size(), v);
        if (ec != std::errc() || ptr != a.label_column.data() + a.label_column.size()) {
          throw Error(ErrorKind::Parse, "bad --label-column '" + a.label_column + "'");
        }
        opts.label_column = v;
      }
    }
    return read_chunked_csv(in, opts);
  }
  return read_raw_f32(in, a.sidecar.empty() ? sidecar_for(in) : fs::path(a.sidecar));
}

void cmd_generate(GenerateArgs& a) {
  a.config.drift_type = parse_drift_type(a.drift_type);
  const fs::path data = with_default_extension(a.out, ".f32");
  write_raw_f32(make_stream(a.config), data, sidecar_for(data));
}

void cmd_describe(const DescribeArgs& a) {
  const ChunkedStream stream = load_stream(a);
  DescriptionDocument doc;
  if (a.method == "ffm") {
    doc = make_document(metadescribe(stream, a.n));
  } else if (a.method == "ced") {
    doc = make_baseline_document("ced", ced_describe(stream), stream.features);
  } else if (a.method == "pca") {
    doc = make_baseline_document("pca", pca_describe(stream), stream.features);
  } else {
    throw Error(ErrorKind::Configuration, "unknown method '" + a.method + "'");
  }
  doc.ground_truth = stream.ground_truth;
  write_json_file(to_json(doc), a.out);
}

void cmd_cluster(const ClusterArgs& a) {
  const DescriptionDocument doc = description_from_json(read_json_file(a.meta));
  const Matrix X = normalize(doc.R, parse_normalization(a.normalization));
  const ClusteringResult result = kmeans(X, a.concepts, a.seed, {a.replications, a.max_iter});

  std::optional<std::vector<int>> truth = doc.ground_truth;
  if (!a.sidecar.empty()) {
    const json side = read_json_file(a.sidecar);
    if (side.contains("ground_truth")) truth = side.at("ground_truth").get<std::vector<int>>();
  }
  json report = to_json(result);
  report["concepts"] = a.concepts;
  report["normalization"] = a.normalization;
  if (truth) report["external"] = to_json(external_clustering_scores(*truth, result.labels));

  const fs::path prefix(a.out);
  fs::path labels_path = prefix, json_path = prefix;
  labels_path += ".csv";
  json_path += ".json";
  write_labels_csv(result.labels, labels_path);
  write_json_file(report, json_path);
}

void cmd_identify(const IdentifyArgs& a) {
  const DescriptionDocument doc = description_from_json(read_json_file(a.meta));
  const auto report = identify_concept_count(doc.R, a.c_min, a.c_max, a.seed, a.replications,
                                             parse_normalization(a.normalization));
  json j = to_json(report);
  j["c_min"] = a.c_min;
  j["c_max"] = a.c_max;
  j["replications"] = a.replications;
  j["normalization"] = a.normalization;
  j["chunks"] = doc.R.rows();
  write_json_file(j, a.out);
  if (!a.labels_out.empty()) write_labels_csv(report.best_labels, a.labels_out);
  if (!a.table_out.empty()) {
    const InternalReportRow row{a.name.empty() ? fs::path(a.meta).stem().string() : a.name,
                                report.best_c, report.best_internal};
    write_internal_report_csv(std::span(&row, 1), a.table_out);
  }
}

void cmd_visualize(const VisualizeArgs& a) {
  const Metadescription meta = description_from_json(read_json_file(a.meta)).to_metadescription();
  std::vector<Matrix> images;
  for (std::size_t t : parse_index_list(a.chunks)) images.push_back(render_chunk_image(meta, t));
  write_strip(images, a.columns, a.out);
}

void cmd_benchmark(BenchmarkArgs& a, bool replicas_given) {
  a.settings.normalization = parse_normalization(a.normalization);
  const fs::path dir(a.out_dir);
  switch (a.experiment) {
    case 1: {
      if (!replicas_given) a.settings.replicas = 3;
      const bench::Experiment1Grid grid;
      bench::write_outputs(bench::run_experiment1(a.settings, grid), a.settings, grid, dir);
      break;
    }
    case 2: {
      const bench::Experiment2Grid grid;
      bench::write_outputs(bench::run_experiment2(a.settings, grid), a.settings, grid, dir);
      break;
    }
    case 3: {
      const bench::Experiment3Grid grid;
      bench::write_outputs(bench::run_experiment3(a.settings, grid), a.settings, grid, dir);
      break;
    }
    default:
      throw Error(ErrorKind::Configuration, "experiment must be 1, 2 or 3");
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frequency Filtering Metadescriptor toolchain"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate a synthetic drifting stream (raw f32 + sidecar)");
  g->add_option("--chunks", gen.config.n_chunks, "Number of chunks")->required();
  g->add_option("--chunk-size", gen.config.chunk_size, "Samples per chunk")->required();
  g->add_option("--features", gen.config.n_features, "Features per sample")->required();
  g->add_option("--drifts", gen.config.n_drifts, "Number of concept drifts")->required();
  g->add_option("--drift-type", gen.drift_type, "sudden | gradual | incremental")
      ->check(CLI::IsMember({"sudden", "gradual", "incremental"}));
  g->add_option("--seed", gen.config.seed, "Random seed");
  g->add_flag("--recurring", gen.config.recurring, "Final segment reuses the first concept");
  g->add_option("--center-spread", gen.config.center_spread, "Std of component centers");
  g->add_option("--out", gen.out, "Output data path (.f32); sidecar gets .json")->required();

  DescribeArgs desc;
  auto* d = app.add_subcommand("describe", "Compute a metadescription of a stream");
  d->add_option("--in", desc.in, "Raw .f32 stream or .csv file")->required();
  d->add_option("--sidecar", desc.sidecar, "Sidecar JSON (default: input with .json)");
  d->add_option("--chunk-size", desc.chunk_size, "Chunk size for CSV input");
  d->add_flag("--header", desc.header, "CSV has a header row");
  d->add_option("--label-column", desc.label_column, "CSV label column index or 'last'");
  d->add_option("--n", desc.n, "Number of frequency components (ffm)");
  d->add_option("--method", desc.method, "ffm | ced | pca")->check(CLI::IsMember({"ffm", "ced", "pca"}));
  d->add_option("--out", desc.out, "Output metadescription JSON")->required();

  ClusterArgs cl;
  auto* c = app.add_subcommand("cluster", "Cluster chunks into a fixed number of concepts");
  c->add_option("--meta", cl.meta, "Metadescription JSON")->required();
  c->add_option("--concepts", cl.concepts, "Number of concepts")->required();
  c->add_option("--seed", cl.seed, "Random seed");
  c->add_option("--replications", cl.replications, "k-means restarts");
  c->add_option("--max-iter", cl.max_iter, "Lloyd iteration cap");
  c->add_option("--normalization", cl.normalization, "minmax | zscore")
      ->check(CLI::IsMember({"minmax", "zscore"}));
  c->add_option("--sidecar", cl.sidecar, "Stream sidecar holding ground truth");
  c->add_option("--out", cl.out, "Output prefix (.csv labels, .json report)")->required();

  IdentifyArgs id;
  auto* i = app.add_subcommand("identify", "Pick the number of concepts by silhouette");
  i->add_option("--meta", id.meta, "Metadescription JSON")->required();
  i->add_option("--c-min", id.c_min, "Smallest candidate count");
  i->add_option("--c-max", id.c_max, "Largest candidate count");
  i->add_option("--seed", id.seed, "Random seed");
  i->add_option("--replications", id.replications, "k-means restarts");
  i->add_option("--normalization", id.normalization, "minmax | zscore")
      ->check(CLI::IsMember({"minmax", "zscore"}));
  i->add_option("--labels-out", id.labels_out, "Also write the best labeling as CSV");
  i->add_option("--table", id.table_out, "Also write a data_stream,concepts,sil,c-h,d-b CSV row");
  i->add_option("--name", id.name, "Stream name for --table (default: meta file stem)");
  i->add_option("--out", id.out, "Output report JSON")->required();

  VisualizeArgs vis;
  auto* v = app.add_subcommand("visualize", "Render chunk images into a PGM strip");
  v->add_option("--meta", vis.meta, "FFM metadescription JSON")->required();
  v->add_option("--chunks", vis.chunks, "Chunk indices, e.g. 0-9,250-259")->required();
  v->add_option("--columns", vis.columns, "Images per strip row");
  v->add_option("--out", vis.out, "Output PGM")->required();

  BenchmarkArgs bm;
  auto* b = app.add_subcommand("benchmark", "Reproduce one of the three experiments");
  b->add_option("--experiment", bm.experiment, "1, 2 or 3")->required()->check(CLI::Range(1, 3));
  auto* replicas = b->add_option("--replicas", bm.settings.replicas, "Streams per configuration");
  b->add_option("--seed", bm.settings.seed, "Master seed");
  b->add_option("--kmeans-replications", bm.settings.kmeans_replications, "k-means restarts");
  b->add_option("--normalization", bm.normalization, "minmax | zscore")
      ->check(CLI::IsMember({"minmax", "zscore"}));
  b->add_flag("--force-ced", bm.settings.force_ced, "Run CED even at 500 features");
  b->add_option("--center-spread", bm.settings.center_spread, "Generator center spread");
  b->add_option("--chunks", bm.settings.chunks_override, "Override the chunk count (smoke runs)");
  b->add_option("--out-dir", bm.out_dir, "Output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error kind=usage message=" << quoted(e.what()) << '\n';
    return 2;
  }

  try {
    if (*g) cmd_generate(gen);
    else if (*d) cmd_describe(desc);
    else if (*c) cmd_cluster(cl);
    else if (*i) cmd_identify(id);
    else if (*v) cmd_visualize(vis);
    else if (*b) cmd_benchmark(bm, replicas->count() > 0);
  } catch (const Error& e) {
    err << "error kind=" << to_string(e.kind()) << " message=" << quoted(e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error kind=internal message=" << quoted(e.what()) << '\n';
    return 1;
  }
  return 0;
}

}  // namespace ffm::cli
