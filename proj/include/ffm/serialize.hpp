#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ffm/clustering.hpp"
#include "ffm/metadescriptor.hpp"
#include "ffm/metrics.hpp"

namespace ffm {

/// On-disk metadescription. FFM documents carry `selected` and `variances`;
/// baseline (ced, pca) documents omit them.
struct DescriptionDocument {
  std::string method = "ffm";
  std::size_t n = 0;
  std::size_t d = 0;
  Matrix R;
  std::vector<std::size_t> selected;
  std::vector<double> variances;
  std::optional<std::vector<int>> ground_truth;

  bool has_selection() const noexcept { return !selected.empty(); }
  /// Throws a schema error for non-FFM documents.
  Metadescription to_metadescription() const;
};

DescriptionDocument make_document(const Metadescription& meta);
DescriptionDocument make_baseline_document(std::string method, const Matrix& R, std::size_t d);

nlohmann::json to_json(const DescriptionDocument& doc);
DescriptionDocument description_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ExternalScores& s);
nlohmann::json to_json(const InternalScores& s);
nlohmann::json to_json(const ClusteringResult& r);
nlohmann::json to_json(const ConceptCountReport& r);

nlohmann::json read_json_file(const std::filesystem::path& path);
/// Writes `j.dump(2)` followed by a newline.
void write_json_file(const nlohmann::json& j, const std::filesystem::path& path);

/// `chunk_index,concept_id` rows.
void write_labels_csv(std::span<const int> labels, const std::filesystem::path& path);

/// One row of the internal-quality summary: stream, chosen concept count and
/// the silhouette / Calinski-Harabasz / Davies-Bouldin scores of that run.
struct InternalReportRow {
  std::string stream;
  int concepts = 0;
  InternalScores scores;
};

/// `data_stream,concepts,sil_score,ch_score,db_score` rows, three decimals.
void write_internal_report_csv(std::span<const InternalReportRow> rows,
                               const std::filesystem::path& path);

}  // namespace ffm
