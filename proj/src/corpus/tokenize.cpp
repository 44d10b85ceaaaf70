#include <fstream>

#include "ambig/corpus.hpp"
#include "ambig/error.hpp"

namespace ambig::corpus {
namespace {

struct CodePoint {
  char32_t value;
  std::size_t length;  // bytes consumed; invalid bytes decode as U+FFFD, length 1
};

CodePoint decode_at(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = b0 >= 0xF0 ? 4 : b0 >= 0xE0 ? 3 : b0 >= 0xC0 ? 2 : 0;
  if (len == 0 || i + len > s.size()) return {0xFFFD, 1};
  char32_t cp = b0 & (0xFF >> (len + 1));
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return {0xFFFD, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_letter(char32_t cp) {
  if ((cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z')) return true;
  if (cp == 0xAA || cp == 0xB5 || cp == 0xBA) return true;
  if (cp >= 0xC0 && cp <= 0x24F) return cp != 0xD7 && cp != 0xF7;
  return false;
}

bool is_apostrophe(char32_t cp) { return cp == U'\'' || cp == 0x2019; }

char32_t to_lower(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  if ((cp >= 0x100 && cp <= 0x137) || (cp >= 0x14A && cp <= 0x177)) return cp | 1;
  if ((cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E)) {
    return (cp & 1) ? cp + 1 : cp;
  }
  if (cp == 0x178) return 0xFF;
  return cp;
}

}  // namespace

TokenStream TokenStream::slice(std::size_t begin, std::size_t end) const {
  TokenStream out;
  out.tokens.assign(tokens.begin() + static_cast<std::ptrdiff_t>(begin),
                    tokens.begin() + static_cast<std::ptrdiff_t>(end));
  out.offsets.assign(offsets.begin() + static_cast<std::ptrdiff_t>(begin),
                     offsets.begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

TokenStream tokenize(std::string_view text) {
  TokenStream ts;
  std::string current;
  std::size_t start = 0;
  std::size_t i = 0;

  const auto flush = [&](std::size_t end) {
    if (!current.empty()) {
      ts.tokens.push_back(std::move(current));
      ts.offsets.push_back({start, end});
      current.clear();
    }
  };

  while (i < text.size()) {
    const auto cp = decode_at(text, i);
    if (is_letter(cp.value)) {
      if (current.empty()) start = i;
      append_utf8(current, to_lower(cp.value));
      i += cp.length;
      continue;
    }
    if (!current.empty() && is_apostrophe(cp.value)) {
      const auto next_pos = i + cp.length;
      if (next_pos < text.size() && is_letter(decode_at(text, next_pos).value)) {
        current.push_back('\'');
        i = next_pos;
        continue;
      }
    }
    flush(i);
    i += cp.length;
  }
  flush(text.size());
  return ts;
}

std::string fold_case(std::string_view word) {
  std::string out;
  out.reserve(word.size());
  std::size_t i = 0;
  while (i < word.size()) {
    const auto cp = decode_at(word, i);
    if (cp.value == 0xFFFD && cp.length == 1 && static_cast<unsigned char>(word[i]) >= 0x80) {
      out.push_back(word[i]);
    } else {
      append_utf8(out, to_lower(cp.value));
    }
    i += cp.length;
  }
  return out;
}

TokenStream remove_stopwords(const TokenStream& ts, const Stoplist& stoplist) {
  TokenStream out;
  out.tokens.reserve(ts.size());
  out.offsets.reserve(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (stoplist.contains(ts.tokens[i])) continue;
    out.tokens.push_back(ts.tokens[i]);
    out.offsets.push_back(ts.offsets[i]);
  }
  return out;
}

Stoplist load_word_set(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open word list: " + path.string());
  Stoplist words;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
      line.pop_back();
    }
    std::size_t b = 0;
    while (b < line.size() && (line[b] == ' ' || line[b] == '\t')) ++b;
    if (b < line.size()) words.insert(line.substr(b));
  }
  return words;
}

}  // namespace ambig::corpus
