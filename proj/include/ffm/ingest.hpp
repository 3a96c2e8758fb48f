#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>

#include "ffm/stream.hpp"
#include "ffm/streamgen.hpp"

namespace ffm {

struct CsvOptions {
  std::size_t chunk_size = 0;
  bool has_header = false;
  /// Column holding class labels; dropped from the features and never parsed.
  /// Negative values count from the end (-1 is the last column).
  std::optional<long> label_column;
};

/// Reads comma-separated rows into chunks of `chunk_size`; a trailing partial
/// chunk is discarded.
ChunkedStream read_chunked_csv(const std::filesystem::path& path, const CsvOptions& options);

/// Writes one row per sample, no header, full float precision.
void write_csv(const ChunkedStream& stream, const std::filesystem::path& path);

/// Raw row-major little-endian float32 data plus a JSON sidecar
/// {"rows", "features", "chunk_size", "ground_truth"?}.
ChunkedStream read_raw_f32(const std::filesystem::path& data_path,
                           const std::filesystem::path& sidecar_path);

void write_raw_f32(const ChunkedStream& stream, const std::filesystem::path& data_path,
                   const std::filesystem::path& sidecar_path);
void write_raw_f32(const SyntheticStream& stream, const std::filesystem::path& data_path,
                   const std::filesystem::path& sidecar_path);

/// Sidecar path convention used by the CLI: `data.f32` -> `data.json`.
std::filesystem::path sidecar_for(const std::filesystem::path& data_path);

}  // namespace ffm
