#include "kktdd/chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "kktdd/experiments.hpp"

namespace kktdd {

namespace {

struct Row {
  int nt = 0;
  double omega = 0.0;
  std::string precond;
  int iters = 0;
  bool converged = false;
};

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, int line, const char* field) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ChartParseError("line " + std::to_string(line) + ": bad " + field + " value '" + s +
                              "'",
                          line);
  }
}

int parse_int(const std::string& s, int line, const char* field) {
  const double v = parse_double(s, line, field);
  return static_cast<int>(v);
}

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string gnum(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

const char* dash_for_omega(double omega) {
  if (omega == 1e-2) return "";
  if (omega == 1e-3) return "8 4";
  if (omega == 1e-4) return "2 3";
  return "6 2 2 2";
}

std::string marker_svg(const std::string& precond, double x, double y,
                       const std::string& color) {
  if (precond == "one-level") {
    return "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"4\" fill=\"" + color +
           "\"/>";
  }
  if (precond == "two-level") {
    return "<path d=\"M " + num(x) + " " + num(y - 5) + " L " + num(x - 4.5) + " " +
           num(y + 4) + " L " + num(x + 4.5) + " " + num(y + 4) + " Z\" fill=\"" + color +
           "\"/>";
  }
  return "<rect x=\"" + num(x - 3.5) + "\" y=\"" + num(y - 3.5) +
         "\" width=\"7\" height=\"7\" fill=\"" + color + "\"/>";
}

const char* color_for(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  return palette[i % (sizeof(palette) / sizeof(palette[0]))];
}

}  // namespace

std::string render_chart_svg(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  int lineno = 0;
  std::vector<Row> rows;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != csv_header()) {
        throw ChartParseError("line " + std::to_string(lineno) + ": unexpected CSV header",
                              lineno);
      }
      header_seen = true;
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != 14) {
      throw ChartParseError("line " + std::to_string(lineno) + ": expected 14 fields, got " +
                                std::to_string(fields.size()),
                            lineno);
    }
    Row row;
    row.nt = parse_int(fields[0], lineno, "nt");
    row.omega = parse_double(fields[3], lineno, "omega");
    row.precond = fields[4];
    row.iters = parse_int(fields[8], lineno, "iters");
    if (fields[9] != "true" && fields[9] != "false") {
      throw ChartParseError("line " + std::to_string(lineno) + ": bad converged flag '" +
                                fields[9] + "'",
                            lineno);
    }
    row.converged = fields[9] == "true";
    rows.push_back(row);
  }
  if (!header_seen) throw ChartParseError("line 1: missing CSV header", 1);

  // Non-converged points are omitted, matching how the studies are reported.
  std::vector<Row> plot;
  for (const Row& r : rows) {
    if (r.converged) plot.push_back(r);
  }

  std::set<int> nts;
  for (const Row& r : plot) nts.insert(r.nt);
  const bool x_is_nt = nts.size() > 1;

  // Series: (precond, omega) when sweeping Nt, precond alone otherwise.
  std::map<std::pair<std::string, double>, std::vector<std::pair<double, double>>> series;
  for (const Row& r : plot) {
    const double x = x_is_nt ? static_cast<double>(r.nt) : 1.0 / r.omega;
    const auto key = x_is_nt ? std::make_pair(r.precond, r.omega)
                             : std::make_pair(r.precond, 0.0);
    series[key].push_back({x, static_cast<double>(r.iters)});
  }
  for (auto& [key, pts] : series) std::sort(pts.begin(), pts.end());

  const double width = 640, height = 480;
  const double ml = 64, mr = 180, mt = 32, mb = 56;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double xmin = 1, xmax = 10, ymax = 10;
  std::set<double> xticks;
  for (const auto& [key, pts] : series) {
    for (const auto& [x, y] : pts) {
      xticks.insert(x);
      ymax = std::max(ymax, y);
    }
  }
  if (!xticks.empty()) {
    xmin = *xticks.begin();
    xmax = *xticks.rbegin();
    if (xmin == xmax) {
      xmin *= 0.5;
      xmax *= 2.0;
    }
  }
  ymax *= 1.1;

  const auto xpos = [&](double x) {
    return ml + pw * (std::log10(x) - std::log10(xmin)) /
                    (std::log10(xmax) - std::log10(xmin));
  };
  const auto ypos = [&](double y) { return mt + ph * (1.0 - y / ymax); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + gnum(width) +
         "\" height=\"" + gnum(height) + "\" viewBox=\"0 0 " + gnum(width) + " " +
         gnum(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Axes frame.
  svg += "<rect x=\"" + num(ml) + "\" y=\"" + num(mt) + "\" width=\"" + num(pw) +
         "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  // X ticks at the data values.
  for (double x : xticks) {
    const double px = xpos(x);
    svg += "<line x1=\"" + num(px) + "\" y1=\"" + num(mt + ph) + "\" x2=\"" + num(px) +
           "\" y2=\"" + num(mt + ph + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(px) + "\" y=\"" + num(mt + ph + 20) +
           "\" font-size=\"11\" text-anchor=\"middle\">" + gnum(x) + "</text>\n";
  }
  // Y ticks.
  for (int k = 0; k <= 5; ++k) {
    const double y = ymax * k / 5.0;
    const double py = ypos(y);
    svg += "<line x1=\"" + num(ml - 5) + "\" y1=\"" + num(py) + "\" x2=\"" + num(ml) +
           "\" y2=\"" + num(py) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(ml - 8) + "\" y=\"" + num(py + 4) +
           "\" font-size=\"11\" text-anchor=\"end\">" + gnum(std::round(y)) + "</text>\n";
  }
  svg += "<text x=\"" + num(ml + pw / 2) + "\" y=\"" + num(height - 12) +
         "\" font-size=\"13\" text-anchor=\"middle\">" +
         (x_is_nt ? std::string("time steps") : std::string("1/omega")) + "</text>\n";
  svg += "<text x=\"16\" y=\"" + num(mt + ph / 2) +
         "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         num(mt + ph / 2) + ")\">iterations</text>\n";

  std::size_t si = 0;
  for (const auto& [key, pts] : series) {
    const std::string color = color_for(si);
    const char* dash = x_is_nt ? dash_for_omega(key.second) : "";
    std::string poly = "<polyline fill=\"none\" stroke=\"" + color + "\"";
    if (dash[0] != '\0') poly += " stroke-dasharray=\"" + std::string(dash) + "\"";
    poly += " stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : pts) poly += num(xpos(x)) + "," + num(ypos(y)) + " ";
    poly += "\"/>\n";
    svg += poly;
    for (const auto& [x, y] : pts) svg += marker_svg(key.first, xpos(x), ypos(y), color) + "\n";
    std::string label = key.first;
    if (x_is_nt) label += " omega=" + gnum(key.second);
    const double ly = mt + 16 + 18 * static_cast<double>(si);
    svg += marker_svg(key.first, width - mr + 14, ly - 4, color) + "\n";
    svg += "<text x=\"" + num(width - mr + 26) + "\" y=\"" + num(ly) +
           "\" font-size=\"11\">" + label + "</text>\n";
    ++si;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace kktdd
