#include "ambig/corpus.hpp"
#include "ambig/error.hpp"

namespace ambig::corpus {
namespace {

constexpr std::string_view kEllipsis = "\xE2\x80\xA6";

}  // namespace

PunctuationSeries punctuation_series(const RawText& raw, const SegmentedText& st) {
  PunctuationSeries series;
  series.reserve(st.size());
  std::int64_t commas = 0;
  std::int64_t periods = 0;
  std::size_t cursor = 0;

  for (const auto& seg : st.segments) {
    if (seg.char_end < cursor || seg.char_end > raw.body.size()) {
      throw SegmentationError("segment '" + seg.label + "' has an invalid byte range");
    }
    const std::string_view chunk = std::string_view(raw.body).substr(cursor, seg.char_end - cursor);
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      if (chunk[i] == ',') {
        ++commas;
      } else if (chunk[i] == '.') {
        ++periods;
      } else if (chunk.substr(i).starts_with(kEllipsis)) {
        periods += 3;
        i += kEllipsis.size() - 1;
      }
    }
    cursor = seg.char_end;

    PunctuationPoint p;
    p.label = seg.label;
    p.commas_cumulative = commas;
    p.periods_cumulative = periods;
    if (periods > 0) p.ratio = static_cast<double>(commas) / static_cast<double>(periods);
    series.push_back(std::move(p));
  }
  return series;
}

}  // namespace ambig::corpus
