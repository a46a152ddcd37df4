#include "mgrid/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "mgrid/errors.hpp"

namespace mgrid {

namespace {

constexpr int kWidth = 900;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 130;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

struct Series {
  std::string label;
  std::vector<double> y;
  bool dashed = false;  // guide lines
  std::string color;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

double nice_tick(double span) {
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double f : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= f * mag) return f * mag;
  }
  return 10.0 * mag;
}

void write_chart(const std::string& path, const std::string& title,
                 const std::string& ylabel, const std::vector<double>& t,
                 const std::vector<Series>& series) {
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -ymin;
  for (const Series& s : series) {
    for (double v : s.y) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (!(ymax > ymin)) {
    ymax = ymin + 1.0;
    ymin -= 1.0;
  }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  const double xmin = t.front(), xmax = t.back();

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto px = [&](double x) {
    return kMarginLeft + plot_w * (x - xmin) / (xmax - xmin);
  };
  const auto py = [&](double y) {
    return kMarginTop + plot_h * (1.0 - (y - ymin) / (ymax - ymin));
  };

  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open plot file for writing: " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth
      << "' height='" << kHeight << "' viewBox='0 0 " << kWidth << ' '
      << kHeight << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << kWidth / 2 << "' y='24' text-anchor='middle' "
      << "font-family='sans-serif' font-size='16'>" << title << "</text>\n";

  // axes box
  out << "<rect x='" << kMarginLeft << "' y='" << kMarginTop << "' width='"
      << plot_w << "' height='" << plot_h
      << "' fill='none' stroke='#333' stroke-width='1'/>\n";

  // y ticks and grid
  const double ytick = nice_tick(ymax - ymin);
  for (double y = std::ceil(ymin / ytick) * ytick; y <= ymax; y += ytick) {
    out << "<line x1='" << kMarginLeft << "' y1='" << fmt(py(y)) << "' x2='"
        << kMarginLeft + plot_w << "' y2='" << fmt(py(y))
        << "' stroke='#ddd' stroke-width='0.5'/>\n";
    out << "<text x='" << kMarginLeft - 8 << "' y='" << fmt(py(y) + 4)
        << "' text-anchor='end' font-family='sans-serif' font-size='11'>"
        << fmt(y) << "</text>\n";
  }
  // x ticks
  const double xtick = nice_tick(xmax - xmin);
  for (double x = std::ceil(xmin / xtick) * xtick; x <= xmax; x += xtick) {
    out << "<line x1='" << fmt(px(x)) << "' y1='" << kMarginTop + plot_h
        << "' x2='" << fmt(px(x)) << "' y2='" << kMarginTop + plot_h + 5
        << "' stroke='#333' stroke-width='1'/>\n";
    out << "<text x='" << fmt(px(x)) << "' y='" << kMarginTop + plot_h + 20
        << "' text-anchor='middle' font-family='sans-serif' font-size='11'>"
        << fmt(x) << "</text>\n";
  }
  out << "<text x='" << kMarginLeft + plot_w / 2 << "' y='" << kHeight - 10
      << "' text-anchor='middle' font-family='sans-serif' font-size='13'>"
      << "t (s)</text>\n";
  out << "<text x='18' y='" << kMarginTop + plot_h / 2
      << "' text-anchor='middle' font-family='sans-serif' font-size='13' "
      << "transform='rotate(-90 18 " << kMarginTop + plot_h / 2 << ")'>"
      << ylabel << "</text>\n";

  // Thin traces out to at most ~2000 points per curve; SVG viewers choke on
  // 50k-point polylines.
  const std::size_t stride = std::max<std::size_t>(1, t.size() / 2000);

  int legend_row = 0;
  for (const Series& s : series) {
    out << "<polyline fill='none' stroke='" << s.color << "' stroke-width='"
        << (s.dashed ? "1" : "1.5") << "'";
    if (s.dashed) out << " stroke-dasharray='6,4'";
    out << " points='";
    for (std::size_t k = 0; k < t.size(); k += stride) {
      out << fmt(px(t[k])) << ',' << fmt(py(s.y[k])) << ' ';
    }
    if ((t.size() - 1) % stride != 0) {
      out << fmt(px(t.back())) << ',' << fmt(py(s.y.back()));
    }
    out << "'/>\n";

    const int ly = kMarginTop + 14 + 18 * legend_row++;
    out << "<line x1='" << kMarginLeft + plot_w + 10 << "' y1='" << ly
        << "' x2='" << kMarginLeft + plot_w + 34 << "' y2='" << ly
        << "' stroke='" << s.color << "' stroke-width='2'";
    if (s.dashed) out << " stroke-dasharray='6,4'";
    out << "/>\n";
    out << "<text x='" << kMarginLeft + plot_w + 40 << "' y='" << ly + 4
        << "' font-family='sans-serif' font-size='11'>" << s.label
        << "</text>\n";
  }

  out << "</svg>\n";
}

}  // namespace

void emit_plots(const TraceTable& tab, const GridParameters& params,
                const std::string& out_dir) {
  if (tab.rows() == 0) throw ConfigError("emit_plots: trace is empty");
  if (tab.n != params.num_nodes()) {
    throw DimensionError("emit_plots: trace and parameters disagree on n");
  }
  std::filesystem::create_directories(out_dir);
  const int n = tab.n;

  auto node_series = [&](const std::vector<Eigen::VectorXd>& sig,
                         const char* prefix) {
    std::vector<Series> out;
    for (int i = 0; i < n; ++i) {
      Series s;
      s.label = std::string(prefix) + " " + std::to_string(i + 1);
      s.color = kPalette[i % 8];
      s.y.reserve(tab.rows());
      for (std::size_t k = 0; k < tab.rows(); ++k) s.y.push_back(sig[k][i]);
      out.push_back(std::move(s));
    }
    return out;
  };
  auto guide = [&](double value, const std::string& label) {
    Series s;
    s.label = label;
    s.color = "#555";
    s.dashed = true;
    s.y.assign(tab.rows(), value);
    return s;
  };

  {
    auto series = node_series(tab.V, "DGU");
    // One guide per distinct bound value keeps the legend small.
    std::vector<double> seen;
    for (int i = 0; i < n; ++i) {
      for (double b : {params.v_l[i], params.v_h[i]}) {
        if (std::find(seen.begin(), seen.end(), b) == seen.end()) {
          seen.push_back(b);
          series.push_back(guide(b, "bound " + fmt(b)));
        }
      }
    }
    write_chart(out_dir + "/voltage.svg", "Load voltage per DGU", "V (V)",
                tab.t, series);
  }
  {
    auto series = node_series(tab.I, "DGU");
    for (int i = 0; i < n; ++i) {
      Series lo = guide(params.I_l[i], "I_l " + std::to_string(i + 1));
      Series hi = guide(params.I_h[i], "I_h " + std::to_string(i + 1));
      lo.color = hi.color = kPalette[i % 8];
      series.push_back(std::move(lo));
      series.push_back(std::move(hi));
    }
    write_chart(out_dir + "/current.svg", "Generated current per DGU", "I (A)",
                tab.t, series);
  }
  {
    write_chart(out_dir + "/duty.svg", "Duty ratio per DGU", "u", tab.t,
                node_series(tab.u, "DGU"));
  }
}

}  // namespace mgrid
