#include "fwsindy/plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "csv.hpp"

namespace fwsindy {

namespace {

constexpr double kWidth = 760, kHeight = 480;
constexpr double kLeft = 80, kRight = 560, kTop = 40, kBottom = 420;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string fmt(double v) { return detail::format_short(v); }

struct Series {
  std::string method;
  std::vector<double> x, median, lo, hi;
};

}  // namespace

std::string plot_summary_svg(const std::vector<SummaryRow>& summary,
                             PlotMetric metric) {
  if (summary.empty())
    throw std::invalid_argument("plot_summary_svg: empty summary");

  const bool is_error = metric == PlotMetric::CoefficientError;

  // Zero noise levels cannot sit on a log axis; park them one decade left of
  // the smallest positive level.
  double min_positive = std::numeric_limits<double>::infinity();
  for (const auto& s : summary)
    if (s.sigma_nr > 0.0) min_positive = std::min(min_positive, s.sigma_nr);
  if (!std::isfinite(min_positive)) min_positive = 1.0;
  const double zero_slot = min_positive / 10.0;

  std::vector<Series> series;
  for (const auto& s : summary) {
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const Series& g) { return g.method == s.method; });
    if (it == series.end()) {
      series.push_back(Series{s.method, {}, {}, {}, {}});
      it = series.end() - 1;
    }
    const double median = is_error ? s.e2_median : s.tpr_median;
    const double lo = is_error ? s.e2_q25 : s.tpr_q25;
    const double hi = is_error ? s.e2_q75 : s.tpr_q75;
    if (!std::isfinite(median) || !std::isfinite(lo) || !std::isfinite(hi))
      continue;
    it->x.push_back(s.sigma_nr > 0.0 ? s.sigma_nr : zero_slot);
    it->median.push_back(median);
    it->lo.push_back(lo);
    it->hi.push_back(hi);
  }
  series.erase(std::remove_if(series.begin(), series.end(),
                              [](const Series& g) { return g.x.empty(); }),
               series.end());
  if (series.empty())
    throw std::invalid_argument("plot_summary_svg: no finite data points");

  double x_min = std::numeric_limits<double>::infinity(), x_max = 0.0;
  double y_min = std::numeric_limits<double>::infinity(), y_max = 0.0;
  for (const auto& g : series) {
    for (size_t i = 0; i < g.x.size(); ++i) {
      x_min = std::min(x_min, g.x[i]);
      x_max = std::max(x_max, g.x[i]);
      y_min = std::min({y_min, g.lo[i], g.median[i]});
      y_max = std::max({y_max, g.hi[i], g.median[i]});
    }
  }
  const double lx_min = std::log10(x_min), lx_max = std::log10(x_max);
  const double lx_span = std::max(lx_max - lx_min, 1e-9);

  double ly_min, ly_max;
  if (is_error) {
    const double floor_value = 1e-10;
    ly_min = std::log10(std::max(y_min, floor_value));
    ly_max = std::log10(std::max(y_max, floor_value * 10));
    if (ly_max - ly_min < 1e-9) {
      ly_min -= 0.5;
      ly_max += 0.5;
    }
  } else {
    ly_min = 0.0;
    ly_max = 1.05;
  }

  auto map_x = [&](double v) {
    return kLeft +
           (std::log10(v) - lx_min) / lx_span * (kRight - kLeft);
  };
  auto map_y = [&](double v) {
    double t;
    if (is_error) {
      const double lv = std::log10(std::max(v, 1e-10));
      t = (lv - ly_min) / (ly_max - ly_min);
    } else {
      t = (v - ly_min) / (ly_max - ly_min);
    }
    t = std::clamp(t, 0.0, 1.0);
    return kBottom - t * (kBottom - kTop);
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" fill=\"white\"/>\n";

  // Axes.
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\""
      << kRight << "\" y2=\"" << kBottom
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kBottom << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

  // X ticks at decades.
  for (int d = static_cast<int>(std::ceil(lx_min - 1e-9));
       d <= static_cast<int>(std::floor(lx_max + 1e-9)); ++d) {
    const double x = map_x(std::pow(10.0, d));
    svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << kBottom << "\" x2=\""
        << fmt(x) << "\" y2=\"" << kBottom + 5
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << fmt(x) << "\" y=\"" << kBottom + 20
        << "\" font-size=\"12\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }
  // Y ticks.
  if (is_error) {
    for (int d = static_cast<int>(std::ceil(ly_min - 1e-9));
         d <= static_cast<int>(std::floor(ly_max + 1e-9)); ++d) {
      const double y = kBottom - (d - ly_min) / (ly_max - ly_min) *
                                     (kBottom - kTop);
      svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << fmt(y) << "\" x2=\""
          << kLeft << "\" y2=\"" << fmt(y)
          << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
      svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt(y + 4)
          << "\" font-size=\"12\" text-anchor=\"end\">1e" << d << "</text>\n";
    }
  } else {
    for (double v = 0.0; v <= 1.0001; v += 0.25) {
      const double y = map_y(v);
      svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << fmt(y) << "\" x2=\""
          << kLeft << "\" y2=\"" << fmt(y)
          << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
      svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt(y + 4)
          << "\" font-size=\"12\" text-anchor=\"end\">" << fmt(v)
          << "</text>\n";
    }
  }

  svg << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kBottom + 40
      << "\" font-size=\"14\" text-anchor=\"middle\">noise ratio</text>\n";
  svg << "<text x=\"20\" y=\"" << (kTop + kBottom) / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 "
         "20 "
      << (kTop + kBottom) / 2 << ")\">"
      << (is_error ? "relative coefficient error" : "true positive ratio")
      << "</text>\n";

  for (size_t gi = 0; gi < series.size(); ++gi) {
    const Series& g = series[gi];
    const char* color = kPalette[gi % (sizeof(kPalette) / sizeof(*kPalette))];

    // Interquartile band: forward along q75, back along q25.
    std::ostringstream band;
    for (size_t i = 0; i < g.x.size(); ++i)
      band << (i == 0 ? 'M' : 'L') << fmt(map_x(g.x[i])) << ' '
           << fmt(map_y(g.hi[i]));
    for (size_t i = g.x.size(); i-- > 0;)
      band << 'L' << fmt(map_x(g.x[i])) << ' ' << fmt(map_y(g.lo[i]));
    band << 'Z';
    svg << "<path class=\"band\" d=\"" << band.str() << "\" fill=\"" << color
        << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";

    std::ostringstream line;
    for (size_t i = 0; i < g.x.size(); ++i)
      line << (i == 0 ? 'M' : 'L') << fmt(map_x(g.x[i])) << ' '
           << fmt(map_y(g.median[i]));
    svg << "<path class=\"median\" d=\"" << line.str() << "\" fill=\"none\""
        << " stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    for (size_t i = 0; i < g.x.size(); ++i)
      svg << "<circle cx=\"" << fmt(map_x(g.x[i])) << "\" cy=\""
          << fmt(map_y(g.median[i])) << "\" r=\"3\" fill=\"" << color
          << "\"/>\n";

    // Legend entry.
    const double ly = kTop + 18.0 * gi;
    svg << "<line x1=\"" << kRight + 12 << "\" y1=\"" << fmt(ly) << "\" x2=\""
        << kRight + 34 << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kRight + 40 << "\" y=\"" << fmt(ly + 4)
        << "\" font-size=\"11\">" << g.method << "</text>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace fwsindy
