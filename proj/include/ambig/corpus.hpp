#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ambig::corpus {

/// Book text after decoding and (optionally) Gutenberg boilerplate removal.
/// The body is UTF-8 with LF line endings and is never empty.
struct RawText {
  std::string body;
  std::string source_id;
};

/// Replaces every invalid UTF-8 sequence with U+FFFD.
std::string decode_utf8_lossy(std::string_view bytes);

/// Decodes `bytes`, normalizes CRLF to LF and, when `strip_boilerplate` is
/// set and both a "*** START OF" and a "*** END OF" marker line are present,
/// keeps only the text between them (trimmed of surrounding blank space).
/// Throws EmptyInputError when nothing remains.
RawText ingest(std::string_view bytes, std::string source_id, bool strip_boilerplate);
RawText ingest_file(const std::filesystem::path& path, bool strip_boilerplate);

/// Byte range [begin, end) of a token inside RawText::body.
struct Offset {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const Offset&) const = default;
};

/// Lowercased word tokens in document order. tokens[i] was read from
/// body[offsets[i].begin, offsets[i].end).
struct TokenStream {
  std::vector<std::string> tokens;
  std::vector<Offset> offsets;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  TokenStream slice(std::size_t begin, std::size_t end) const;
};

/// A token is a maximal run of letters, optionally joined by apostrophes that
/// sit between two letters ("grose's"). Everything else separates tokens, so
/// hyphenated words split. Letters are ASCII plus the Latin-1 and Latin
/// Extended-A/B blocks; U+2019 is accepted as an apostrophe and folded to '.
TokenStream tokenize(std::string_view text);
inline TokenStream tokenize(const RawText& raw) { return tokenize(raw.body); }

/// Lowercases the letters the tokenizer recognizes; other bytes pass through.
std::string fold_case(std::string_view word);

using Stoplist = std::set<std::string, std::less<>>;

TokenStream remove_stopwords(const TokenStream& ts, const Stoplist& stoplist);

/// Reads one lowercase word per line; blank lines and '#' comments ignored.
Stoplist load_word_set(const std::filesystem::path& path);

enum class SegmentKind { chapters, installments };
std::string_view to_string(SegmentKind kind);
SegmentKind parse_segment_kind(std::string_view name);

struct Segment {
  std::string label;
  std::size_t token_begin = 0;  // half-open token range
  std::size_t token_end = 0;
  std::size_t char_begin = 0;   // half-open byte range in the body
  std::size_t char_end = 0;

  std::size_t token_count() const { return token_end - token_begin; }
};

/// Ordered segments whose token ranges partition a TokenStream and whose
/// byte ranges partition the RawText body.
struct SegmentedText {
  SegmentKind kind = SegmentKind::chapters;
  std::vector<Segment> segments;

  std::size_t size() const { return segments.size(); }
};

/// Chapter heading rule plus the chapter -> installment table.
struct SegmentationConfig {
  std::string heading_source;     // regex text, kept for provenance
  std::regex heading;             // must match a whole line; group 1 = numeral
  int max_numeral = 24;
  std::vector<std::pair<std::string, int>> installment_of;  // file order

  static SegmentationConfig defaults();
};

/// Parses a key-value file: "heading_pattern = <regex>", "max_numeral = N"
/// and "<chapter label> = <installment index>" lines; '#' starts a comment.
SegmentationConfig load_segmentation_config(const std::filesystem::path& path);
SegmentationConfig parse_segmentation_config(std::string_view text);

/// Value of a canonical Roman numeral (I..MMMCMXCIX), or nullopt.
std::optional<int> parse_roman(std::string_view numeral);

SegmentedText segment_chapters(const RawText& raw, const TokenStream& ts,
                               const SegmentationConfig& cfg);

SegmentedText map_installments(const SegmentedText& chapters,
                               const std::vector<std::pair<std::string, int>>& mapping);

/// Word counts. Zero counts are never stored.
struct Histogram {
  std::map<std::string, std::int64_t> counts;
  std::int64_t total = 0;

  void add(const std::string& word, std::int64_t n = 1);
  std::int64_t count(const std::string& word) const;
  std::size_t distinct() const { return counts.size(); }
};

Histogram term_frequencies(const TokenStream& ts);

struct PunctuationPoint {
  std::string label;
  std::int64_t commas_cumulative = 0;
  std::int64_t periods_cumulative = 0;
  std::optional<double> ratio;  // unset while no period has been seen
};

using PunctuationSeries = std::vector<PunctuationPoint>;

/// Cumulative "," and "." counts at the end of each segment's byte range.
/// U+2026 counts as three periods.
PunctuationSeries punctuation_series(const RawText& raw, const SegmentedText& st);

}  // namespace ambig::corpus
