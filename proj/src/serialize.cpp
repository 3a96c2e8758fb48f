#include "ffm/serialize.hpp"

#include <cstdio>
#include <fstream>

#include "ffm/error.hpp"

namespace ffm {

using nlohmann::json;

Metadescription DescriptionDocument::to_metadescription() const {
  if (!has_selection()) {
    throw Error(ErrorKind::Schema, "'" + method + "' description has no frequency selection");
  }
  Metadescription meta;
  meta.R = R;
  meta.selected = selected;
  meta.variances = variances;
  meta.n = n;
  meta.d = d;
  return meta;
}

DescriptionDocument make_document(const Metadescription& meta) {
  DescriptionDocument doc;
  doc.method = "ffm";
  doc.n = meta.n;
  doc.d = meta.d;
  doc.R = meta.R;
  doc.selected = meta.selected;
  doc.variances = meta.variances;
  return doc;
}

DescriptionDocument make_baseline_document(std::string method, const Matrix& R, std::size_t d) {
  DescriptionDocument doc;
  doc.method = std::move(method);
  doc.n = R.cols();
  doc.d = d;
  doc.R = R;
  return doc;
}

json to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::Schema, "matrix must be an array of rows");
  if (j.empty()) return {};
  const std::size_t cols = j.front().size();
  Matrix m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != cols) {
      throw Error(ErrorKind::Schema, "matrix rows must be arrays of equal length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!row[c].is_number()) throw Error(ErrorKind::Schema, "matrix entries must be numbers");
      m(r, c) = row[c].get<double>();
    }
  }
  return m;
}

json to_json(const DescriptionDocument& doc) {
  json j;
  j["method"] = doc.method;
  j["n"] = doc.n;
  j["d"] = doc.d;
  if (doc.has_selection()) {
    j["selected"] = doc.selected;
    j["variances"] = doc.variances;
  }
  j["R"] = to_json(doc.R);
  if (doc.ground_truth) j["ground_truth"] = *doc.ground_truth;
  return j;
}

DescriptionDocument description_from_json(const json& j) {
  try {
    DescriptionDocument doc;
    doc.method = j.value("method", std::string("ffm"));
    doc.n = j.at("n").get<std::size_t>();
    doc.d = j.at("d").get<std::size_t>();
    doc.R = matrix_from_json(j.at("R"));
    if (j.contains("selected")) doc.selected = j.at("selected").get<std::vector<std::size_t>>();
    if (j.contains("variances")) doc.variances = j.at("variances").get<std::vector<double>>();
    if (j.contains("ground_truth")) doc.ground_truth = j.at("ground_truth").get<std::vector<int>>();
    if (doc.R.cols() != doc.n && doc.R.rows() > 0) {
      throw Error(ErrorKind::Schema, "R has " + std::to_string(doc.R.cols()) + " columns, n is " +
                                         std::to_string(doc.n));
    }
    if (doc.has_selection() && doc.selected.size() != doc.n) {
      throw Error(ErrorKind::Schema, "selected must hold n indices");
    }
    if (doc.has_selection() && doc.variances.size() != doc.d / 2) {
      throw Error(ErrorKind::Schema, "variances must hold d/2 values");
    }
    for (std::size_t f : doc.selected) {
      if (f >= doc.d / 2) throw Error(ErrorKind::Schema, "selected frequency out of range");
    }
    return doc;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("invalid metadescription: ") + e.what());
  }
}

json to_json(const ExternalScores& s) {
  return {{"nmi", s.nmi},
          {"adjusted_rand", s.adjusted_rand},
          {"completeness", s.completeness},
          {"homogeneity", s.homogeneity}};
}

json to_json(const InternalScores& s) {
  return {{"silhouette", s.silhouette},
          {"calinski_harabasz", s.calinski_harabasz},
          {"davies_bouldin", s.davies_bouldin}};
}

json to_json(const ClusteringResult& r) {
  return {{"labels", r.labels},
          {"centroids", to_json(r.centroids)},
          {"inertia", r.inertia},
          {"seed", r.seed},
          {"iterations", r.iterations}};
}

json to_json(const ConceptCountReport& r) {
  json scores = json::object();
  for (const auto& [c, s] : r.scores) scores[std::to_string(c)] = s;
  return {{"scores", scores},
          {"best_c", r.best_c},
          {"internal", to_json(r.best_internal)},
          {"labels", r.best_labels}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Schema, path.string() + " is not valid JSON: " + e.what());
  }
}

void write_json_file(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

void write_labels_csv(std::span<const int> labels, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << "chunk_index,concept_id\n";
  for (std::size_t t = 0; t < labels.size(); ++t) out << t << ',' << labels[t] << '\n';
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

void write_internal_report_csv(std::span<const InternalReportRow> rows,
                               const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << "data_stream,concepts,sil_score,ch_score,db_score\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.3f,%.3f,%.3f", r.scores.silhouette,
                  r.scores.calinski_harabasz, r.scores.davies_bouldin);
    out << r.stream << ',' << r.concepts << ',' << buf << '\n';
  }
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

}  // namespace ffm
