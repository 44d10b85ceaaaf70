#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "ambig/corpus.hpp"
#include "ambig/error.hpp"

namespace ambig::corpus {
namespace {

constexpr std::string_view kDefaultHeading = R"([ \t]*([IVXLC]+)\.?[ \t]*)";

std::string to_roman(int value) {
  static constexpr std::array<std::pair<int, std::string_view>, 13> kTable{{
      {1000, "M"}, {900, "CM"}, {500, "D"}, {400, "CD"}, {100, "C"}, {90, "XC"},
      {50, "L"}, {40, "XL"}, {10, "X"}, {9, "IX"}, {5, "V"}, {4, "IV"}, {1, "I"}}};
  std::string out;
  for (const auto& [v, s] : kTable) {
    while (value >= v) {
      out += s;
      value -= v;
    }
  }
  return out;
}

int roman_digit(char c) {
  switch (c) {
    case 'I': return 1;
    case 'V': return 5;
    case 'X': return 10;
    case 'L': return 50;
    case 'C': return 100;
    case 'D': return 500;
    case 'M': return 1000;
    default: return 0;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

struct Heading {
  std::size_t line_start;
  int value;
};

std::vector<Heading> find_headings(std::string_view body, const SegmentationConfig& cfg) {
  std::vector<Heading> headings;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    auto nl = body.find('\n', pos);
    if (nl == std::string_view::npos) nl = body.size();
    std::string_view line = body.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::match_results<std::string_view::const_iterator> m;
    if (!line.empty() && std::regex_match(line.begin(), line.end(), m, cfg.heading)) {
      const auto numeral = m.size() > 1 ? m[1].str() : m[0].str();
      const auto value = parse_roman(trim(numeral));
      if (!value) {
        throw SegmentationError("heading is not a Roman numeral: '" + numeral + "'");
      }
      if (*value <= cfg.max_numeral) headings.push_back({pos, *value});
    }
    if (nl == body.size()) break;
    pos = nl + 1;
  }
  return headings;
}

std::size_t first_token_at_or_after(const TokenStream& ts, std::size_t byte) {
  const auto it = std::lower_bound(ts.offsets.begin(), ts.offsets.end(), byte,
                                   [](const Offset& o, std::size_t b) { return o.begin < b; });
  return static_cast<std::size_t>(it - ts.offsets.begin());
}

}  // namespace

std::string_view to_string(SegmentKind kind) {
  return kind == SegmentKind::chapters ? "chapters" : "installments";
}

SegmentKind parse_segment_kind(std::string_view name) {
  if (name == "chapters") return SegmentKind::chapters;
  if (name == "installments") return SegmentKind::installments;
  throw ConfigError("unknown segmentation kind: '" + std::string(name) + "'");
}

std::optional<int> parse_roman(std::string_view numeral) {
  if (numeral.empty() || numeral.size() > 15) return std::nullopt;
  int total = 0;
  for (std::size_t i = 0; i < numeral.size(); ++i) {
    const int d = roman_digit(numeral[i]);
    if (d == 0) return std::nullopt;
    const int next = i + 1 < numeral.size() ? roman_digit(numeral[i + 1]) : 0;
    total += d < next ? -d : d;
  }
  // Reject non-canonical spellings such as "IIII" or "IC".
  if (total <= 0 || total > 3999 || to_roman(total) != numeral) return std::nullopt;
  return total;
}

SegmentationConfig SegmentationConfig::defaults() {
  SegmentationConfig cfg;
  cfg.heading_source = std::string(kDefaultHeading);
  cfg.heading = std::regex(cfg.heading_source);
  return cfg;
}

SegmentationConfig parse_segmentation_config(std::string_view text) {
  auto cfg = SegmentationConfig::defaults();
  std::map<std::string, int> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;

    const auto key_end = line.find('=');
    const bool is_pattern = trim(line.substr(0, key_end)) == "heading_pattern";
    // Regexes may legitimately contain '#', so comments are only stripped elsewhere.
    if (!is_pattern) {
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (key_end == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);

    const auto key = std::string(trim(line.substr(0, line.find('='))));
    const auto value = trim(line.substr(line.find('=') + 1));
    if (key.empty() || value.empty()) throw ParseError("expected 'key = value'", line_no);

    if (key == "heading_pattern") {
      try {
        cfg.heading = std::regex(std::string(value));
      } catch (const std::regex_error& e) {
        throw ParseError(std::string("invalid heading_pattern: ") + e.what(), line_no);
      }
      cfg.heading_source = std::string(value);
      continue;
    }

    int number = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), number);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
      throw ParseError("expected an integer value for '" + key + "'", line_no);
    }
    if (key == "max_numeral") {
      if (number < 1) throw ParseError("max_numeral must be positive", line_no);
      cfg.max_numeral = number;
      continue;
    }
    if (number < 1) throw ParseError("installment index must be >= 1", line_no);
    if (!seen.emplace(key, number).second) {
      throw ParseError("duplicate chapter label '" + key + "'", line_no);
    }
    cfg.installment_of.emplace_back(key, number);
  }
  return cfg;
}

SegmentationConfig load_segmentation_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open segmentation config: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_segmentation_config(buf.str());
}

SegmentedText segment_chapters(const RawText& raw, const TokenStream& ts,
                               const SegmentationConfig& cfg) {
  const auto headings = find_headings(raw.body, cfg);
  if (headings.empty()) throw SegmentationError("no chapter heading matched in " + raw.source_id);
  for (std::size_t i = 1; i < headings.size(); ++i) {
    if (headings[i].value <= headings[i - 1].value) {
      throw SegmentationError("chapter numerals are not strictly increasing: " +
                              to_roman(headings[i - 1].value) + " then " +
                              to_roman(headings[i].value));
    }
  }

  SegmentedText st;
  st.kind = SegmentKind::chapters;
  std::vector<std::size_t> char_starts{0};
  std::vector<std::string> labels{"0"};
  for (const auto& h : headings) {
    char_starts.push_back(h.line_start);
    labels.push_back(std::to_string(h.value));
  }
  char_starts.push_back(raw.body.size());

  for (std::size_t i = 0; i + 1 < char_starts.size(); ++i) {
    Segment seg;
    seg.label = labels[i];
    seg.char_begin = char_starts[i];
    seg.char_end = char_starts[i + 1];
    seg.token_begin = i == 0 ? 0 : first_token_at_or_after(ts, seg.char_begin);
    seg.token_end = i + 2 == char_starts.size() ? ts.size() : first_token_at_or_after(ts, seg.char_end);
    st.segments.push_back(std::move(seg));
  }
  return st;
}

SegmentedText map_installments(const SegmentedText& chapters,
                               const std::vector<std::pair<std::string, int>>& mapping) {
  if (chapters.kind != SegmentKind::chapters) {
    throw SegmentationError("installment mapping needs a chapter segmentation");
  }
  const std::map<std::string, int> table(mapping.begin(), mapping.end());

  SegmentedText out;
  out.kind = SegmentKind::installments;
  int current = 0;
  for (const auto& chapter : chapters.segments) {
    const auto it = table.find(chapter.label);
    if (it == table.end()) {
      throw SegmentationError("chapter '" + chapter.label + "' has no installment mapping");
    }
    const int index = it->second;
    if (index == current) {
      auto& seg = out.segments.back();
      seg.token_end = chapter.token_end;
      seg.char_end = chapter.char_end;
      continue;
    }
    if (index != current + 1) {
      throw SegmentationError("installment spans are not contiguous at chapter '" +
                              chapter.label + "' (installment " + std::to_string(index) +
                              " after " + std::to_string(current) + ")");
    }
    current = index;
    Segment seg = chapter;
    seg.label = std::to_string(index);
    out.segments.push_back(std::move(seg));
  }
  return out;
}

}  // namespace ambig::corpus
