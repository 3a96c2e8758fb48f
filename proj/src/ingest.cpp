#include "ffm/ingest.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ffm/error.hpp"

namespace ffm {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

class ChunkAssembler {
 public:
  ChunkAssembler(ChunkedStream& stream) : stream_(stream) {}

  void push_row(std::span<const float> row) {
    if (!pending_) pending_.emplace(stream_.chunk_size, stream_.features);
    auto dst = pending_->row(filled_);
    std::copy(row.begin(), row.end(), dst.begin());
    if (++filled_ == stream_.chunk_size) {
      stream_.chunks.push_back(std::move(*pending_));
      pending_.reset();
      filled_ = 0;
    }
  }

 private:
  ChunkedStream& stream_;
  std::optional<ChunkMatrix> pending_;
  std::size_t filled_ = 0;
};

std::uint32_t to_little_endian(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    v = ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
  }
  return v;
}

std::size_t require_count(const json& doc, const char* key) {
  if (!doc.contains(key)) {
    throw Error(ErrorKind::Schema, std::string("sidecar is missing field '") + key + "'");
  }
  const json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    throw Error(ErrorKind::Schema, std::string("sidecar field '") + key + "' must be a positive integer");
  }
  return v.get<std::size_t>();
}

}  // namespace

void validate_shape(const ChunkedStream& stream) {
  for (std::size_t i = 0; i < stream.chunks.size(); ++i) {
    const auto& c = stream.chunks[i];
    if (c.rows() != stream.chunk_size || c.cols() != stream.features) {
      throw Error(ErrorKind::Dimension, "chunk " + std::to_string(i) + " has shape " +
                                            std::to_string(c.rows()) + "x" + std::to_string(c.cols()));
    }
  }
  if (stream.ground_truth && stream.ground_truth->size() != stream.chunks.size()) {
    throw Error(ErrorKind::Dimension, "ground truth length does not match chunk count");
  }
}

ChunkedStream read_chunked_csv(const std::filesystem::path& path, const CsvOptions& options) {
  if (options.chunk_size == 0) throw Error(ErrorKind::Configuration, "chunk size must be positive");
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());

  ChunkedStream stream;
  stream.chunk_size = options.chunk_size;
  stream.source_name = path.filename().string();
  ChunkAssembler assembler(stream);

  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  std::optional<std::size_t> label_col;
  bool skipped_header = !options.has_header;
  std::vector<float> row;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    const auto fields = split_fields(line);
    if (columns == 0) {
      columns = fields.size();
      if (options.label_column) {
        const long requested = *options.label_column;
        const long resolved = requested < 0 ? static_cast<long>(columns) + requested : requested;
        if (resolved < 0 || resolved >= static_cast<long>(columns)) {
          throw Error(ErrorKind::Format, "label column " + std::to_string(requested) +
                                             " out of range at row " + std::to_string(line_no));
        }
        label_col = static_cast<std::size_t>(resolved);
      }
      stream.features = columns - (label_col ? 1 : 0);
      if (stream.features == 0) throw Error(ErrorKind::Format, "no feature columns");
    } else if (fields.size() != columns) {
      throw Error(ErrorKind::Format, "row " + std::to_string(line_no) + " has " +
                                         std::to_string(fields.size()) + " columns, expected " +
                                         std::to_string(columns));
    }
    row.clear();
    for (std::size_t col = 0; col < fields.size(); ++col) {
      if (label_col && col == *label_col) continue;
      const std::string_view cell = fields[col];
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty() || !std::isfinite(value)) {
        throw Error(ErrorKind::Parse, "row " + std::to_string(line_no) + " column " +
                                          std::to_string(col + 1) + ": cannot parse '" +
                                          std::string(cell) + "' as a finite number");
      }
      row.push_back(static_cast<float>(value));
    }
    assembler.push_row(row);
  }
  if (stream.chunks.empty()) {
    throw Error(ErrorKind::EmptyStream, path.string() + " does not contain a full chunk");
  }
  return stream;
}

void write_csv(const ChunkedStream& stream, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  char buf[32];
  for (const auto& chunk : stream.chunks) {
    for (std::size_t r = 0; r < chunk.rows(); ++r) {
      const auto row = chunk.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out.put(',');
        const auto res = std::to_chars(buf, buf + sizeof buf, row[c]);
        out.write(buf, res.ptr - buf);
      }
      out.put('\n');
    }
  }
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

ChunkedStream read_raw_f32(const std::filesystem::path& data_path,
                           const std::filesystem::path& sidecar_path) {
  std::ifstream side(sidecar_path);
  if (!side) throw Error(ErrorKind::Io, "cannot open sidecar " + sidecar_path.string());
  json doc;
  try {
    doc = json::parse(side);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Schema, "sidecar is not valid JSON: " + std::string(e.what()));
  }
  const std::size_t rows = require_count(doc, "rows");
  const std::size_t features = require_count(doc, "features");
  const std::size_t chunk_size = require_count(doc, "chunk_size");

  std::error_code ec;
  const auto bytes = std::filesystem::file_size(data_path, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot stat " + data_path.string());
  if (bytes != rows * features * sizeof(float)) {
    throw Error(ErrorKind::Format, data_path.string() + " holds " + std::to_string(bytes) +
                                       " bytes, sidecar implies " +
                                       std::to_string(rows * features * sizeof(float)));
  }
  std::ifstream in(data_path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + data_path.string());

  ChunkedStream stream;
  stream.chunk_size = chunk_size;
  stream.features = features;
  stream.source_name = data_path.filename().string();
  const std::size_t full = rows / chunk_size;
  stream.chunks.reserve(full);
  std::vector<std::uint32_t> raw(chunk_size * features);
  for (std::size_t c = 0; c < full; ++c) {
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size() * 4));
    if (!in) throw Error(ErrorKind::Io, "short read from " + data_path.string());
    ChunkMatrix chunk(chunk_size, features);
    auto dst = chunk.data();
    for (std::size_t i = 0; i < raw.size(); ++i) dst[i] = std::bit_cast<float>(to_little_endian(raw[i]));
    stream.chunks.push_back(std::move(chunk));
  }
  if (stream.chunks.empty()) {
    throw Error(ErrorKind::EmptyStream, data_path.string() + " does not contain a full chunk");
  }
  if (doc.contains("ground_truth") && !doc.at("ground_truth").is_null()) {
    const json& gt = doc.at("ground_truth");
    if (!gt.is_array()) throw Error(ErrorKind::Schema, "ground_truth must be an integer array");
    std::vector<int> truth;
    for (const auto& v : gt) {
      if (!v.is_number_integer()) throw Error(ErrorKind::Schema, "ground_truth must be an integer array");
      truth.push_back(v.get<int>());
    }
    if (truth.size() != stream.chunks.size()) {
      throw Error(ErrorKind::Schema, "ground_truth has " + std::to_string(truth.size()) +
                                         " entries for " + std::to_string(stream.chunks.size()) +
                                         " chunks");
    }
    stream.ground_truth = std::move(truth);
  }
  return stream;
}

void write_raw_f32(const ChunkedStream& stream, const std::filesystem::path& data_path,
                   const std::filesystem::path& sidecar_path) {
  if (stream.chunks.empty()) throw Error(ErrorKind::EmptyStream, "nothing to write: stream has no chunks");
  validate_shape(stream);

  std::ofstream out(data_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + data_path.string());
  std::vector<std::uint32_t> raw;
  for (const auto& chunk : stream.chunks) {
    raw.resize(chunk.data().size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      raw[i] = to_little_endian(std::bit_cast<std::uint32_t>(chunk.data()[i]));
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size() * 4));
  }
  out.close();
  if (!out) throw Error(ErrorKind::Io, "failed writing " + data_path.string());

  json doc;
  doc["rows"] = stream.chunks.size() * stream.chunk_size;
  doc["features"] = stream.features;
  doc["chunk_size"] = stream.chunk_size;
  if (stream.ground_truth) doc["ground_truth"] = *stream.ground_truth;
  std::ofstream side(sidecar_path, std::ios::trunc);
  if (!side) throw Error(ErrorKind::Io, "cannot write " + sidecar_path.string());
  side << doc.dump() << '\n';
  if (!side) throw Error(ErrorKind::Io, "failed writing " + sidecar_path.string());
}

void write_raw_f32(const SyntheticStream& stream, const std::filesystem::path& data_path,
                   const std::filesystem::path& sidecar_path) {
  write_raw_f32(stream.stream, data_path, sidecar_path);
}

std::filesystem::path sidecar_for(const std::filesystem::path& data_path) {
  auto side = data_path;
  side.replace_extension(".json");
  return side;
}

}  // namespace ffm
