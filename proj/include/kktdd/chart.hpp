#pragma once

#include <stdexcept>
#include <string>

namespace kktdd {

/// CSV row did not parse; carries the 1-based line number in the message.
class ChartParseError : public std::runtime_error {
 public:
  ChartParseError(const std::string& what, int line)
      : std::runtime_error(what), line(line) {}
  int line;
};

/// Renders the iteration-count study in a CSV produced by this tool as a
/// static SVG line chart: iterations against Nt when the data spans several
/// time-step counts, otherwise against 1/omega. Marker shape encodes the
/// preconditioner (circles one-level, triangles two-level), dash style the
/// regularization. Non-converged rows are left off the chart. Output bytes
/// are deterministic for identical input.
std::string render_chart_svg(const std::string& csv_text);

}  // namespace kktdd
