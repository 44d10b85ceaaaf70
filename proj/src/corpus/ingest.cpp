#include <fstream>
#include <sstream>

#include "ambig/corpus.hpp"
#include "ambig/error.hpp"

namespace ambig::corpus {
namespace {

constexpr std::string_view kReplacement = "\xEF\xBF\xBD";
constexpr std::string_view kStartMarker = "*** START OF";
constexpr std::string_view kEndMarker = "*** END OF";

// Length of the valid UTF-8 sequence starting at s[i], or 0 if invalid. For
// an invalid sequence `consumed` receives the length of its maximal subpart,
// which is replaced by a single U+FFFD.
std::size_t valid_sequence_length(std::string_view s, std::size_t i, std::size_t& consumed) {
  consumed = 1;
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return 1;
  std::size_t len = 0;
  unsigned lo = 0x80, hi = 0xBF;  // bounds for the second byte
  if (b0 >= 0xC2 && b0 <= 0xDF) {
    len = 2;
  } else if (b0 >= 0xE0 && b0 <= 0xEF) {
    len = 3;
    if (b0 == 0xE0) lo = 0xA0;
    if (b0 == 0xED) hi = 0x9F;  // surrogates
  } else if (b0 >= 0xF0 && b0 <= 0xF4) {
    len = 4;
    if (b0 == 0xF0) lo = 0x90;
    if (b0 == 0xF4) hi = 0x8F;
  } else {
    return 0;
  }
  for (std::size_t k = 1; k < len; ++k) {
    if (i + k >= s.size()) return 0;
    const auto b = static_cast<unsigned char>(s[i + k]);
    if (k == 1 ? (b < lo || b > hi) : (b < 0x80 || b > 0xBF)) return 0;
    consumed = k + 1;
  }
  return len;
}

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Byte position of the first line starting with `marker` at or after `from`.
std::size_t find_marker_line(std::string_view text, std::string_view marker, std::size_t from) {
  std::size_t pos = from;
  while (pos < text.size()) {
    if (text.substr(pos).starts_with(marker)) return pos;
    const auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return std::string_view::npos;
}

}  // namespace

std::string decode_utf8_lossy(std::string_view bytes) {
  std::string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  while (i < bytes.size()) {
    std::size_t consumed = 1;
    const auto len = valid_sequence_length(bytes, i, consumed);
    if (len == 0) {
      out.append(kReplacement);
      i += consumed;
    } else {
      out.append(bytes.substr(i, len));
      i += len;
    }
  }
  return out;
}

RawText ingest(std::string_view bytes, std::string source_id, bool strip_boilerplate) {
  std::string decoded = decode_utf8_lossy(bytes);
  if (decoded.starts_with("\xEF\xBB\xBF")) decoded.erase(0, 3);

  std::string text;
  text.reserve(decoded.size());
  for (std::size_t i = 0; i < decoded.size(); ++i) {
    if (decoded[i] == '\r' && i + 1 < decoded.size() && decoded[i + 1] == '\n') continue;
    text.push_back(decoded[i]);
  }

  std::string_view body = text;
  if (strip_boilerplate) {
    const auto start = find_marker_line(body, kStartMarker, 0);
    std::size_t begin = 0;
    if (start != std::string_view::npos) {
      const auto nl = body.find('\n', start);
      begin = nl == std::string_view::npos ? body.size() : nl + 1;
    }
    auto end = find_marker_line(body, kEndMarker, begin);
    if (end == std::string_view::npos) end = body.size();
    if (start != std::string_view::npos || end != body.size()) {
      body = trim(body.substr(begin, end - begin));
    }
  }

  if (trim(body).empty()) {
    throw EmptyInputError("empty body after ingestion: " + source_id);
  }
  return RawText{std::string(body), std::move(source_id)};
}

RawText ingest_file(const std::filesystem::path& path, bool strip_boilerplate) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open text file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ingest(buf.str(), path.filename().string(), strip_boilerplate);
}

}  // namespace ambig::corpus
