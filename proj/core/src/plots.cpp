#include "rac/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace rac {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Series {
  std::string label;
  std::string color;
  bool dashed = false;
  std::vector<double> x, y;
};

struct Range {
  double lo = 0.0, hi = 1.0;
  void expand(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad(double frac) {
    const double w = (hi - lo) * frac;
    lo -= w;
    hi += w;
  }
};

double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  if (frac < 1.5) return mag;
  if (frac < 3.5) return 2.0 * mag;
  if (frac < 7.5) return 5.0 * mag;
  return 10.0 * mag;
}

void write_chart(const std::filesystem::path& path, const std::string& title,
                 const std::string& xlabel, const std::string& ylabel,
                 const std::vector<Series>& series, Range xr, Range yr) {
  // Degenerate spans (constant traces, single-record logs) get a unit window.
  if (xr.hi - xr.lo < 1e-12) {
    xr.lo -= 0.5;
    xr.hi += 0.5;
  }
  if (yr.hi - yr.lo < 1e-12) {
    yr.lo -= 0.5;
    yr.hi += 0.5;
  }
  const double width = 880, height = 520;
  const double ml = 72, mr = 160, mt = 48, mb = 56;
  const double pw = width - ml - mr, ph = height - mt - mb;
  const auto sx = [&](double v) { return ml + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
  const auto sy = [&](double v) { return mt + ph - (v - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

  // Axis frame with the plotted data ranges recorded as attributes.
  out << "<g data-x-min=\"" << num(xr.lo) << "\" data-x-max=\"" << num(xr.hi)
      << "\" data-y-min=\"" << num(yr.lo) << "\" data-y-max=\"" << num(yr.hi) << "\">\n";
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"#333\"/>\n";
  const double xstep = nice_step(xr.hi - xr.lo);
  for (double v = std::ceil(xr.lo / xstep) * xstep; v <= xr.hi + 1e-12; v += xstep) {
    out << "<line x1=\"" << sx(v) << "\" y1=\"" << mt << "\" x2=\"" << sx(v) << "\" y2=\""
        << mt + ph << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << sx(v) << "\" y=\"" << mt + ph + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << num(v)
        << "</text>\n";
  }
  const double ystep = nice_step(yr.hi - yr.lo);
  for (double v = std::ceil(yr.lo / ystep) * ystep; v <= yr.hi + 1e-12; v += ystep) {
    out << "<line x1=\"" << ml << "\" y1=\"" << sy(v) << "\" x2=\"" << ml + pw << "\" y2=\""
        << sy(v) << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << sy(v) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(v)
        << "</text>\n";
  }
  out << "</g>\n";
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xlabel
      << "</text>\n";
  out << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">" << ylabel << "</text>\n";

  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.4\"";
    if (s.dashed) out << " stroke-dasharray=\"6 4\"";
    out << " points=\"";
    const size_t stride = std::max<size_t>(1, s.x.size() / 4000);
    for (size_t i = 0; i < s.x.size(); i += stride)
      out << num(sx(s.x[i])) << "," << num(sy(s.y[i])) << " ";
    if (!s.x.empty() && (s.x.size() - 1) % stride != 0)
      out << num(sx(s.x.back())) << "," << num(sy(s.y.back()));
    out << "\"/>\n";
  }

  double ly = mt + 10;
  for (const auto& s : series) {
    out << "<line x1=\"" << ml + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw + 36
        << "\" y2=\"" << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"";
    if (s.dashed) out << " stroke-dasharray=\"6 4\"";
    out << "/>\n";
    out << "<text x=\"" << ml + pw + 42 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
    ly += 20;
  }
  out << "</svg>\n";
}

}  // namespace

std::vector<std::filesystem::path> emit_plots(const std::vector<TrajectoryLog>& logs,
                                              const std::filesystem::path& out_dir,
                                              double extent_x, double extent_y) {
  std::vector<std::filesystem::path> written;
  if (logs.empty()) return written;

  std::vector<Series> error_series;
  Range tx{0.0, 0.0}, ty{0.0, 0.0};
  for (size_t i = 0; i < logs.size(); ++i) {
    Series s;
    s.label = logs[i].tag;
    s.color = kPalette[i % std::size(kPalette)];
    s.x.reserve(logs[i].records.size());
    s.y.reserve(logs[i].records.size());
    for (const auto& rec : logs[i].records) {
      s.x.push_back(rec.t);
      s.y.push_back(rec.e_norm);
      tx.expand(rec.t);
      ty.expand(rec.e_norm);
    }
    error_series.push_back(std::move(s));
  }
  ty.pad(0.05);
  const auto error_path = out_dir / "tracking_error.svg";
  write_chart(error_path, "Tracking error", "t [s]", "||e||", error_series, tx, ty);
  written.push_back(error_path);

  std::vector<Series> traj_series;
  Range px{-extent_x, extent_x}, py{-extent_y, extent_y};
  Series ref;
  ref.label = "reference";
  ref.color = "#555555";
  ref.dashed = true;
  for (const auto& rec : logs[0].records) {
    ref.x.push_back(rec.q_d[0]);
    ref.y.push_back(rec.q_d.size() > 1 ? rec.q_d[1] : 0.0);
    px.expand(ref.x.back());
    py.expand(ref.y.back());
  }
  traj_series.push_back(std::move(ref));
  for (size_t i = 0; i < logs.size(); ++i) {
    Series s;
    s.label = logs[i].tag;
    s.color = kPalette[i % std::size(kPalette)];
    for (const auto& rec : logs[i].records) {
      s.x.push_back(rec.q[0]);
      s.y.push_back(rec.q.size() > 1 ? rec.q[1] : 0.0);
      px.expand(s.x.back());
      py.expand(s.y.back());
    }
    traj_series.push_back(std::move(s));
  }
  px.pad(0.04);
  py.pad(0.04);
  const auto traj_path = out_dir / "trajectories.svg";
  write_chart(traj_path, "Trajectories", "q1 [m]", "q2 [m]", traj_series, px, py);
  written.push_back(traj_path);
  return written;
}

}  // namespace rac
