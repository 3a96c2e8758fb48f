#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "ffm/error.hpp"
#include "ffm/serialize.hpp"
#include "support.hpp"

using nlohmann::json;
using testing::TempDir;

namespace {

struct Outcome {
  int status;
  std::string out, err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ffm");
  std::ostringstream out, err;
  const int status = ffm::cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

void require_ok(const std::vector<std::string>& args) {
  const auto r = run_cli(args);
  INFO(r.err);
  REQUIRE(r.status == 0);
}

std::string p(const std::filesystem::path& path) { return path.string(); }

}  // namespace

TEST_SUITE("serialize") {
  TEST_CASE("description document round trip") {
    ffm::Metadescription meta;
    meta.n = 2;
    meta.d = 6;
    meta.selected = {2, 0};
    meta.variances = {0.5, 0.1, 0.75};
    meta.R = ffm::Matrix(3, 2, std::vector<double>{1.25, -2, 3e-17, 4, 5, 6});
    auto doc = ffm::make_document(meta);
    doc.ground_truth = std::vector<int>{0, 0, 1};
    const auto back = ffm::description_from_json(json::parse(ffm::to_json(doc).dump()));
    CHECK(back.method == "ffm");
    CHECK(back.R == meta.R);
    CHECK(back.selected == meta.selected);
    CHECK(back.variances == meta.variances);
    CHECK(back.ground_truth == doc.ground_truth);
    const auto m = back.to_metadescription();
    CHECK(m.n == 2);
    CHECK(m.d == 6);
  }

  TEST_CASE("baseline documents omit the selection") {
    const auto doc = ffm::make_baseline_document("ced", ffm::Matrix(3, 10, 1.0), 64);
    const auto j = ffm::to_json(doc);
    CHECK_FALSE(j.contains("selected"));
    CHECK(j.at("method") == "ced");
    const auto back = ffm::description_from_json(j);
    CHECK_FALSE(back.has_selection());
    CHECK_THROWS_AS(back.to_metadescription(), ffm::Error);
  }

  TEST_CASE("schema errors") {
    for (const char* text : {R"({"n":1})", R"({"n":1,"d":4,"R":[[1],[2,3]]})", R"([1,2])",
                             R"({"n":1,"d":4,"R":"x"})"}) {
      CAPTURE(text);
      try {
        ffm::description_from_json(json::parse(text));
        FAIL("expected an error");
      } catch (const ffm::Error& e) {
        CHECK(e.kind() == ffm::ErrorKind::Schema);
      }
    }
  }

  TEST_CASE("labels and internal report CSV") {
    TempDir dir;
    const std::vector<int> labels{2, 0, 1};
    ffm::write_labels_csv(labels, dir / "l.csv");
    CHECK(testing::slurp(dir / "l.csv") == "chunk_index,concept_id\n0,2\n1,0\n2,1\n");
    const ffm::InternalReportRow row{"stream", 4, {0.4581, 123.4567, 0.9}};
    ffm::write_internal_report_csv(std::span(&row, 1), dir / "t.csv");
    CHECK(testing::slurp(dir / "t.csv") ==
          "data_stream,concepts,sil_score,ch_score,db_score\nstream,4,0.458,123.457,0.900\n");
  }
}

TEST_SUITE("cli") {
  TEST_CASE("usage errors are one machine-readable line") {
    auto r = run_cli({"frobnicate"});
    CHECK(r.status != 0);
    CHECK(r.err.rfind("error kind=", 0) == 0);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);

    r = run_cli({"describe", "--in", "/nonexistent/x.f32", "--out", "/tmp/x.json"});
    CHECK(r.status == 1);
    CHECK(r.err.rfind("error kind=io message=", 0) == 0);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);

    r = run_cli({"generate", "--chunks", "3", "--chunk-size", "2", "--features", "4", "--drifts", "3",
                 "--out", "/tmp/never.f32"});
    CHECK(r.status == 1);
    CHECK(r.err.rfind("error kind=configuration", 0) == 0);

    r = run_cli({"--help"});
    CHECK(r.status == 0);
    CHECK(r.out.find("benchmark") != std::string::npos);
  }

  TEST_CASE("end-to-end sudden drift pipeline") {
    TempDir dir;
    require_ok({"generate", "--chunks", "200", "--chunk-size", "64", "--features", "64", "--drifts",
                "3", "--drift-type", "sudden", "--seed", "5", "--out", p(dir / "s.f32")});
    CHECK(std::filesystem::exists(dir / "s.json"));
    require_ok({"describe", "--in", p(dir / "s.f32"), "--n", "8", "--method", "ffm", "--out",
                p(dir / "m.json")});
    require_ok({"cluster", "--meta", p(dir / "m.json"), "--concepts", "4", "--seed", "1", "--out",
                p(dir / "c")});
    const auto report = ffm::read_json_file(dir / "c.json");
    CHECK(report.at("external").at("nmi").get<double>() >= 0.9);
    CHECK(testing::slurp(dir / "c.csv").rfind("chunk_index,concept_id\n", 0) == 0);

    require_ok({"identify", "--meta", p(dir / "m.json"), "--c-min", "2", "--c-max", "11", "--out",
                p(dir / "i.json"), "--table", p(dir / "t.csv")});
    const auto id = ffm::read_json_file(dir / "i.json");
    CHECK(id.at("scores").size() == 10);
    CHECK(id.at("best_c").get<int>() == 4);
    CHECK(testing::slurp(dir / "t.csv").find("\nm,4,") != std::string::npos);

    require_ok({"visualize", "--meta", p(dir / "m.json"), "--chunks", "0-9,150-159", "--columns",
                "10", "--out", p(dir / "v.pgm")});
    CHECK(testing::slurp(dir / "v.pgm").rfind("P5\n89 17\n255\n", 0) == 0);

    for (const char* method : {"ced", "pca"}) {
      require_ok({"describe", "--in", p(dir / "s.f32"), "--method", method, "--out",
                  p(dir / (std::string(method) + ".json"))});
    }
    const auto ced = ffm::read_json_file(dir / "ced.json");
    CHECK(ced.at("R").at(0).size() == 10);
    // Baseline documents cannot be visualized.
    CHECK(run_cli({"visualize", "--meta", p(dir / "ced.json"), "--chunks", "0", "--out",
                   p(dir / "x.pgm")}).status == 1);
  }

  TEST_CASE("CSV input with a label column") {
    TempDir dir;
    std::string text = "a,b,c,d,label\n";
    for (int r = 0; r < 45; ++r) {
      for (int c = 0; c < 4; ++c) text += std::to_string((r * 7 + c * 3) % 11) + ",";
      text += "cls\n";
    }
    testing::spit(dir / "in.csv", text);
    require_ok({"describe", "--in", p(dir / "in.csv"), "--chunk-size", "10", "--header",
                "--label-column", "last", "--n", "2", "--out", p(dir / "m.json")});
    const auto m = ffm::read_json_file(dir / "m.json");
    CHECK(m.at("R").size() == 4);
    CHECK(m.at("d") == 4);
  }

  TEST_CASE("every subcommand is byte-identical across runs and thread counts") {
    TempDir dir;
    const std::vector<std::string> threads{"1", "2", "0"};
    std::vector<std::vector<std::string>> snapshots;
    for (const auto& t : threads) {
      ::setenv("FFM_THREADS", t.c_str(), 1);
      const auto sub = dir / ("run" + t);
      std::filesystem::create_directories(sub);
      require_ok({"generate", "--chunks", "60", "--chunk-size", "32", "--features", "24", "--drifts",
                  "2", "--drift-type", "gradual", "--seed", "9", "--out", p(sub / "s.f32")});
      require_ok({"describe", "--in", p(sub / "s.f32"), "--n", "6", "--out", p(sub / "m.json")});
      require_ok({"describe", "--in", p(sub / "s.f32"), "--method", "ced", "--out", p(sub / "ced.json")});
      require_ok({"describe", "--in", p(sub / "s.f32"), "--method", "pca", "--out", p(sub / "pca.json")});
      require_ok({"cluster", "--meta", p(sub / "m.json"), "--concepts", "3", "--seed", "2", "--out",
                  p(sub / "c")});
      require_ok({"identify", "--meta", p(sub / "m.json"), "--c-min", "2", "--c-max", "6", "--seed",
                  "3", "--out", p(sub / "i.json")});
      require_ok({"visualize", "--meta", p(sub / "m.json"), "--chunks", "0-4,40-44", "--columns", "5",
                  "--out", p(sub / "v.pgm")});
      require_ok({"benchmark", "--experiment", "2", "--replicas", "2", "--chunks", "40", "--seed", "4",
                  "--kmeans-replications", "2", "--out-dir", p(sub / "bench")});
      std::vector<std::string> files;
      for (const char* name : {"s.f32", "s.json", "m.json", "ced.json", "pca.json", "c.json", "c.csv",
                               "i.json", "v.pgm"}) {
        files.push_back(testing::slurp(sub / name));
      }
      for (const char* name : {"streams.csv", "aggregate.csv", "table.csv", "ttest.csv", "manifest.json"}) {
        REQUIRE(std::filesystem::exists(sub / "bench" / name));
        files.push_back(testing::slurp(sub / "bench" / name));
      }
      snapshots.push_back(std::move(files));
    }
    ::unsetenv("FFM_THREADS");
    for (std::size_t i = 1; i < snapshots.size(); ++i) {
      for (std::size_t f = 0; f < snapshots[0].size(); ++f) {
        CAPTURE(f);
        // Files embedding their own path would differ; none do.
        CHECK(snapshots[i][f] == snapshots[0][f]);
      }
    }
  }

  TEST_CASE("benchmark smoke runs for experiments 1 and 3") {
    TempDir dir;
    require_ok({"benchmark", "--experiment", "1", "--replicas", "1", "--chunks", "12", "--seed", "1",
                "--kmeans-replications", "1", "--out-dir", p(dir / "e1")});
    const auto manifest = ffm::read_json_file(dir / "e1" / "manifest.json");
    CHECK(manifest.contains("ced_skipped"));
    require_ok({"benchmark", "--experiment", "3", "--replicas", "1", "--chunks", "24", "--seed", "1",
                "--kmeans-replications", "1", "--out-dir", p(dir / "e3")});
    for (const char* name : {"heatmap.csv", "identified.csv", "gallery.pgm", "manifest.json"}) {
      CHECK(std::filesystem::exists(dir / "e3" / name));
    }
  }
}
