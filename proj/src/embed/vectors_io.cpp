#include <charconv>
#include <fstream>

#include <fmt/format.h>

#include "ambig/embed.hpp"
#include "ambig/error.hpp"

namespace ambig::embed {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view field, T& out) {
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc{} && ptr == field.data() + field.size();
}

// Consumes vector-file lines one at a time so files and in-memory text share
// the same parsing rules.
class VectorReader {
 public:
  VectorReader(VectorFormat format, std::string space_id, LoadStats* stats)
      : format_(format), space_id_(std::move(space_id)), stats_(stats) {}

  void feed(std::string_view line, std::size_t line_no) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto fields = split_fields(line);
    if (fields.empty()) return;

    if (format_ == VectorFormat::headered && !header_seen_) {
      if (fields.size() != 2 || !parse_number(fields[0], declared_) || !parse_number(fields[1], dim_) ||
          dim_ == 0) {
        throw ParseError("expected header 'vocab_size dim'", line_no);
      }
      header_seen_ = true;
      space_.emplace(space_id_, dim_);
      return;
    }
    if (!space_) {
      if (fields.size() < 2) throw ParseError("record has no vector components", line_no);
      dim_ = fields.size() - 1;
      space_.emplace(space_id_, dim_);
    }
    if (fields.size() - 1 != dim_) {
      throw DimensionMismatchError("record has " + std::to_string(fields.size() - 1) +
                                       " components, expected " + std::to_string(dim_),
                                   line_no);
    }
    buffer_.resize(dim_);
    bool nonzero = false;
    for (std::size_t d = 0; d < dim_; ++d) {
      if (!parse_number(fields[d + 1], buffer_[d])) {
        throw ParseError("non-numeric component '" + std::string(fields[d + 1]) + "'", line_no);
      }
      nonzero = nonzero || buffer_[d] != 0.0f;
    }
    ++records_;
    if (!nonzero) {
      ++zero_vectors_;
      return;
    }
    try {
      if (!space_->add(std::string(fields[0]), buffer_)) ++duplicates_;
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), line_no);
    }
  }

  EmbeddingSpace finish(std::size_t last_line) {
    if (!space_) throw EmptyInputError("vector file is empty: " + space_id_);
    if (format_ == VectorFormat::headered && records_ != declared_) {
      throw ParseError("header declares " + std::to_string(declared_) + " records but " +
                           std::to_string(records_) + " were read",
                       last_line);
    }
    if (space_->size() == 0) throw EmptyInputError("vector file has no usable records: " + space_id_);
    if (stats_) {
      stats_->records = records_;
      stats_->duplicates = duplicates_;
      stats_->zero_vectors = zero_vectors_;
    }
    return std::move(*space_);
  }

 private:
  VectorFormat format_;
  std::string space_id_;
  LoadStats* stats_;
  std::optional<EmbeddingSpace> space_;
  bool header_seen_ = false;
  std::size_t declared_ = 0;
  std::size_t dim_ = 0;
  std::size_t records_ = 0;
  std::size_t duplicates_ = 0;
  std::size_t zero_vectors_ = 0;
  std::vector<float> buffer_;
};

}  // namespace

VectorFormat sniff_vector_format(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open vector file: " + path.string());
  std::string line;
  std::getline(in, line);
  const auto fields = split_fields(line);
  std::size_t a = 0, b = 0;
  if (fields.size() == 2 && parse_number(fields[0], a) && parse_number(fields[1], b)) {
    return VectorFormat::headered;
  }
  return VectorFormat::plain;
}

EmbeddingSpace parse_vectors(std::string_view text, VectorFormat format, std::string space_id,
                             LoadStats* stats) {
  VectorReader reader(format, std::move(space_id), stats);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    reader.feed(text.substr(pos, nl - pos), ++line_no);
    pos = nl + 1;
  }
  return reader.finish(line_no);
}

EmbeddingSpace load_vectors(const std::filesystem::path& path, VectorFormat format,
                            std::string space_id, LoadStats* stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open vector file: " + path.string());
  VectorReader reader(format, std::move(space_id), stats);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) reader.feed(line, ++line_no);
  return reader.finish(line_no);
}

std::string format_vectors(const EmbeddingSpace& space) {
  fmt::memory_buffer out;
  fmt::format_to(std::back_inserter(out), "{} {}\n", space.size(), space.dim());
  for (std::size_t i = 0; i < space.size(); ++i) {
    out.append(space.word(i));
    for (const float v : space.vector(i)) {
      // Six significant digits when they read back exactly, else the
      // shortest exact form, so save-then-load is lossless.
      auto text = fmt::format("{:.6g}", v);
      float back = 0.0f;
      if (!parse_number(std::string_view(text), back) || back != v) text = fmt::format("{}", v);
      out.push_back(' ');
      out.append(text);
    }
    out.push_back('\n');
  }
  return fmt::to_string(out);
}

void save_vectors(const EmbeddingSpace& space, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write vector file: " + path.string());
  out << format_vectors(space);
}

}  // namespace ambig::embed
