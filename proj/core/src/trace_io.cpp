#include "compopt/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace compopt {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_trace_csv(const Trace& trace, std::ostream& os) {
  os << "iter,queries,objective,gap,grad_est_sq,ms\n";
  for (const auto& r : trace.rows) {
    os << r.iter << ',' << r.queries << ',' << fmt17(r.objective) << ','
       << fmt17(r.gap) << ',' << fmt17(r.grad_est_sq) << ',' << fmt17(r.ms)
       << '\n';
  }
}

std::vector<TraceRow> read_trace_csv(std::istream& is) {
  std::vector<TraceRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    TraceRow r;
    std::istringstream ss(line);
    std::string field;
    auto next = [&]() -> std::string {
      if (!std::getline(ss, field, ',')) throw std::runtime_error("trace csv: short row");
      return field;
    };
    r.iter = std::stol(next());
    r.queries = std::stoull(next());
    r.objective = std::stod(next());
    r.gap = std::stod(next());
    r.grad_est_sq = std::stod(next());
    r.ms = std::stod(next());
    rows.push_back(r);
  }
  return rows;
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

std::string render_convergence_svg(const std::string& title,
                                   const std::vector<PlotSeries>& series) {
  constexpr int width = 720, height = 480;
  constexpr int ml = 70, mr = 170, mt = 40, mb = 50;
  const double px0 = ml, px1 = width - mr, py0 = height - mb, py1 = mt;

  double qmax = 1.0;
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -std::numeric_limits<double>::infinity();
  for (const auto& s : series) {
    for (const auto& r : s.rows) {
      if (!(r.gap > 0.0) || !std::isfinite(r.gap)) continue;
      qmax = std::max(qmax, static_cast<double>(r.queries));
      const double ly = std::log10(r.gap);
      ymin = std::min(ymin, ly);
      ymax = std::max(ymax, ly);
    }
  }
  if (!std::isfinite(ymin)) {
    ymin = -1.0;
    ymax = 1.0;
  }
  if (ymax - ymin < 1.0) ymax = ymin + 1.0;

  auto sx = [&](double q) { return px0 + (px1 - px0) * (q / qmax); };
  auto sy = [&](double ly) { return py0 + (py1 - py0) * ((ly - ymin) / (ymax - ymin)); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
      << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << (px0 + px1) / 2 << "\" y=\"20\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"14\">"
      << title << "</text>\n";
  svg << "<line x1=\"" << px0 << "\" y1=\"" << py0 << "\" x2=\"" << px1
      << "\" y2=\"" << py0 << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << px0 << "\" y1=\"" << py0 << "\" x2=\"" << px0
      << "\" y2=\"" << py1 << "\" stroke=\"black\"/>\n";

  // y ticks at integer decades
  for (int e = static_cast<int>(std::ceil(ymin)); e <= static_cast<int>(std::floor(ymax)); ++e) {
    const double y = sy(e);
    svg << "<line x1=\"" << px0 - 4 << "\" y1=\"" << y << "\" x2=\"" << px1
        << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << px0 - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e"
        << e << "</text>\n";
  }
  // x ticks
  for (int t = 0; t <= 4; ++t) {
    const double q = qmax * t / 4.0;
    svg << "<text x=\"" << sx(q) << "\" y=\"" << py0 + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << static_cast<long long>(q) << "</text>\n";
  }
  svg << "<text x=\"" << (px0 + px1) / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
         "oracle queries</text>\n";
  svg << "<text x=\"16\" y=\"" << (py0 + py1) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 16 "
      << (py0 + py1) / 2 << ")\">log10 gap</text>\n";

  int color = 0;
  for (const auto& s : series) {
    const char* stroke = kPalette[color % 8];
    std::ostringstream pts;
    for (const auto& r : s.rows) {
      if (!(r.gap > 0.0) || !std::isfinite(r.gap)) continue;
      pts << sx(static_cast<double>(r.queries)) << ',' << sy(std::log10(r.gap)) << ' ';
    }
    svg << "<polyline fill=\"none\" stroke=\"" << stroke
        << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
    const double ly = mt + 16 + 18 * color;
    svg << "<line x1=\"" << px1 + 10 << "\" y1=\"" << ly << "\" x2=\"" << px1 + 34
        << "\" y2=\"" << ly << "\" stroke=\"" << stroke << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << px1 + 40 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label
        << "</text>\n";
    ++color;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace compopt
