#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "ambig/app.hpp"

namespace ambig::app {
namespace {

constexpr double kWidth = 820, kHeight = 460;
constexpr double kLeft = 80, kRight = 170, kTop = 50, kBottom = 70;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string render_line_chart(std::string_view title, std::string_view x_label, std::string_view y_label,
                              const std::vector<std::string>& x_ticks, const std::vector<ChartLine>& lines,
                              std::optional<std::string> timestamp) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::size_t points = x_ticks.size();
  for (const auto& line : lines) {
    points = std::max(points, line.values.size());
    for (const auto& v : line.values) {
      if (!v) continue;
      lo = std::min(lo, *v);
      hi = std::max(hi, *v);
    }
  }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
  const double pad = (hi - lo) * 0.05;
  lo -= pad;
  hi += pad;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const auto x_at = [&](std::size_t i) {
    return points <= 1 ? kLeft + plot_w / 2 : kLeft + plot_w * static_cast<double>(i) / static_cast<double>(points - 1);
  };
  const auto y_at = [&](double v) { return kTop + plot_h * (hi - v) / (hi - lo); };

  std::string svg;
  auto out = std::back_inserter(svg);
  fmt::format_to(out,
                 "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
                 "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n",
                 kWidth, kHeight);
  if (timestamp) fmt::format_to(out, "<!-- generated {} -->\n", escape(*timestamp));
  fmt::format_to(out, "<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth, kHeight);
  fmt::format_to(out, "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                 kLeft + plot_w / 2, escape(title));

  // Axes.
  fmt::format_to(out, "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", kLeft, kTop,
                 kTop + plot_h);
  fmt::format_to(out, "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", kLeft,
                 kTop + plot_h, kLeft + plot_w);
  for (int t = 0; t <= 4; ++t) {
    const double v = lo + (hi - lo) * t / 4.0;
    const double y = y_at(v);
    fmt::format_to(out, "<line x1=\"{}\" y1=\"{:.2f}\" x2=\"{}\" y2=\"{:.2f}\" stroke=\"#ccc\"/>\n", kLeft, y,
                   kLeft + plot_w, y);
    fmt::format_to(out, "<text x=\"{}\" y=\"{:.2f}\" text-anchor=\"end\">{:.3f}</text>\n", kLeft - 6, y + 4, v);
  }
  for (std::size_t i = 0; i < x_ticks.size(); ++i) {
    fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", x_at(i),
                   kTop + plot_h + 18, escape(x_ticks[i]));
  }
  fmt::format_to(out, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", kLeft + plot_w / 2,
                 kHeight - 20, escape(x_label));
  fmt::format_to(out,
                 "<text x=\"20\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {0})\">{1}</text>\n",
                 kTop + plot_h / 2, escape(y_label));

  for (std::size_t li = 0; li < lines.size(); ++li) {
    const char* color = kColors[li % std::size(kColors)];
    std::string pts;
    const auto flush = [&] {
      if (!pts.empty()) {
        fmt::format_to(out, "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n", color,
                       pts);
      }
      pts.clear();
    };
    for (std::size_t i = 0; i < lines[li].values.size(); ++i) {
      const auto& v = lines[li].values[i];
      if (!v) {
        flush();
        continue;
      }
      if (!pts.empty()) pts.push_back(' ');
      pts += fmt::format("{:.2f},{:.2f}", x_at(i), y_at(*v));
      fmt::format_to(out, "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", x_at(i), y_at(*v), color);
    }
    flush();

    const double ly = kTop + 10 + 20 * static_cast<double>(li);
    fmt::format_to(out, "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>\n",
                   kLeft + plot_w + 15, ly, kLeft + plot_w + 40, color);
    fmt::format_to(out, "<text x=\"{}\" y=\"{}\">{}</text>\n", kLeft + plot_w + 46, ly + 4, escape(lines[li].name));
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace ambig::app
