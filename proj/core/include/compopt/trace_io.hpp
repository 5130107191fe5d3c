#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "compopt/problem.hpp"

namespace compopt {

// CSV schema: header `iter,queries,objective,gap,grad_est_sq,ms`, numbers
// with 17 significant digits (round-trip exact for doubles).
void write_trace_csv(const Trace& trace, std::ostream& os);
std::vector<TraceRow> read_trace_csv(std::istream& is);

struct PlotSeries {
  std::string label;
  std::vector<TraceRow> rows;
};

// Self-contained SVG: log10(gap) against cumulative queries, one polyline
// per series. A pure function of the CSV rows, so plots can be regenerated
// offline from the emitted files.
std::string render_convergence_svg(const std::string& title,
                                   const std::vector<PlotSeries>& series);

}  // namespace compopt
