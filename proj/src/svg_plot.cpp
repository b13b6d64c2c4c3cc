#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "adprox/experiment.hpp"

namespace adprox {
namespace {

namespace fs = std::filesystem;

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 80, kRight = 190, kTop = 40, kBottom = 60;
constexpr double kGapFloor = 1e-16;

const char* kPalette[] = {"#d62728", "#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(const char* f, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

EssentialMetric parse_metric(const std::string& name) {
  for (auto m : {EssentialMetric::GradientsAndValues, EssentialMetric::Projections, EssentialMetric::Eigendecompositions,
                 EssentialMetric::Svds, EssentialMetric::MatMulUnits, EssentialMetric::MatVecUnits})
    if (metric_name(m) == name) return m;
  throw ContractError("unknown metric '" + name + "' in summary");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ContractError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string render_svg(const std::string& title, const std::string& x_label, const std::vector<PlotSeries>& series) {
  double xmax = 1.0;
  double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      xmax = std::max(xmax, s.x[i]);
      const double ly = std::log10(std::max(s.y[i], kGapFloor));
      ymin = std::min(ymin, ly);
      ymax = std::max(ymax, ly);
    }
  }
  if (!std::isfinite(ymin)) ymin = -1, ymax = 1;
  ymin = std::floor(ymin);
  ymax = std::ceil(ymax);
  if (ymax <= ymin) ymax = ymin + 1;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + pw * x / xmax; };
  auto py = [&](double ly) { return kTop + ph * (ymax - ly) / (ymax - ymin); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
     << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  const int ystep = std::max(1, static_cast<int>((ymax - ymin) / 8));
  for (int e = static_cast<int>(ymin); e <= static_cast<int>(ymax); e += ystep) {
    const double y = py(e);
    os << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + pw << "\" y1=\"" << y << "\" y2=\"" << y
       << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmax * i / 5.0;
    os << "<text x=\"" << px(xv) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">" << fmt("%.3g", xv)
       << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">" << escape(x_label)
     << "</text>\n";
  os << "<text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">F - F_ref</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << (k == 0 ? 2.5 : 1.2)
       << "\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      os << fmt("%.2f", px(s.x[i])) << ',' << fmt("%.2f", py(std::log10(std::max(s.y[i], kGapFloor)))) << ' ';
    }
    os << "\"/>\n";
    const double ly = kTop + 14 + 18 * static_cast<double>(k);
    os << "<line x1=\"" << kLeft + pw + 12 << "\" x2=\"" << kLeft + pw + 36 << "\" y1=\"" << ly << "\" y2=\"" << ly
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << kLeft + pw + 42 << "\" y=\"" << ly + 4 << "\">" << escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<fs::path> plot_directory(const fs::path& out_dir) {
  std::istringstream in(slurp(out_dir / "summary.csv"));
  std::string line;
  std::getline(in, line);  // header

  struct Entry {
    std::string rule;
    double F_ref;
    EssentialMetric metric;
  };
  std::map<std::string, std::vector<Entry>> by_problem;
  std::vector<std::string> order;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() < 9) throw ContractError("summary.csv: short row");
    if (!by_problem.contains(f[0])) order.push_back(f[0]);
    by_problem[f[0]].push_back({f[1], std::stod(f[5]), parse_metric(f[7])});
  }

  std::vector<fs::path> written;
  for (const auto& problem : order) {
    std::vector<PlotSeries> series;
    EssentialMetric metric = EssentialMetric::GradientsAndValues;
    for (const auto& e : by_problem[problem]) {
      metric = e.metric;
      const CostModel cost = CostModel::for_metric(e.metric, ProxKind::Identity);
      PlotSeries s;
      s.label = e.rule;
      for (const auto& r : parse_trace_csv(slurp(out_dir / problem / (e.rule + ".csv")))) {
        s.x.push_back(essential_operations(r.counters, cost));
        s.y.push_back(r.F - e.F_ref);
      }
      series.push_back(std::move(s));
    }
    const fs::path file = out_dir / (problem + ".svg");
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw ContractError("cannot write " + file.string());
    out << render_svg(problem, metric_name(metric), series);
    written.push_back(file);
  }
  return written;
}

}  // namespace adprox
