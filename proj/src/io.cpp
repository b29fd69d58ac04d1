#include "rmpp/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rmpp {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << kTrajectoryHeader << '\n';
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    os << format_number(traj.times[i]) << ',' << format_number(traj.states[i].n) << ','
       << format_number(traj.states[i].p) << '\n';
  }
}

void write_vector_field_csv(std::ostream& os, std::span<const FieldSample> field) {
  os << kVectorFieldHeader << '\n';
  for (const FieldSample& s : field) {
    os << format_number(s.at.n) << ',' << format_number(s.at.p) << ',' << format_number(s.v.dn) << ','
       << format_number(s.v.dp) << '\n';
  }
}

void write_ensemble_csv(std::ostream& os, const EnsembleStats& st) {
  os << kEnsembleHeader << '\n';
  for (std::size_t i = 0; i < st.times.size(); ++i) {
    os << format_number(st.times[i]) << ',' << format_number(st.mean_n[i]) << ','
       << format_number(st.var_n[i]) << ',' << format_number(st.band_lower_n[i]) << ','
       << format_number(st.band_upper_n[i]) << ',' << format_number(st.mean_p[i]) << ','
       << format_number(st.var_p[i]) << ',' << format_number(st.band_lower_p[i]) << ','
       << format_number(st.band_upper_p[i]) << '\n';
  }
}

void write_paths_csv(std::ostream& os, std::span<const SamplePath> paths) {
  os << kPathsHeader << '\n';
  for (const SamplePath& path : paths) {
    const std::string id = std::to_string(path.stream_index);
    for (std::size_t i = 0; i < path.states.size(); ++i) {
      os << id << ',' << format_number(path.times[i]) << ',' << format_number(path.states[i].n) << ','
         << format_number(path.states[i].p) << '\n';
    }
  }
}

nlohmann::json to_json(const ModelParams& params) {
  return {{"m", params.m}, {"c", params.c}, {"k", params.k}};
}

nlohmann::json to_json(const State& x) { return nlohmann::json::array({x.n, x.p}); }

nlohmann::json to_json(const Equilibrium& e) {
  auto eig = [](const std::complex<double>& z) { return nlohmann::json{{"re", z.real()}, {"im", z.imag()}}; };
  return {{"kind", to_string(e.kind)},
          {"point", to_json(e.point)},
          {"classification", to_string(e.classification)},
          {"eigenvalues", nlohmann::json::array({eig(e.eigenvalues.first), eig(e.eigenvalues.second)})}};
}

nlohmann::json to_json(const GridSpec& g) {
  return {{"n_min", g.n_min}, {"n_max", g.n_max}, {"p_min", g.p_min}, {"p_max", g.p_max},
          {"resolution", g.resolution}};
}

nlohmann::json to_json(const VerificationReport& rep) {
  return {{"inequality", rep.inequality_name}, {"grid", to_json(rep.grid)},
          {"worst_point", to_json(rep.worst_point)}, {"worst_slack", rep.worst_slack},
          {"worst_time", rep.worst_time}, {"evaluated", rep.evaluated}, {"pass", rep.pass}};
}

nlohmann::json RunManifest::to_json() const {
  return {{"subcommand", subcommand}, {"params", rmpp::to_json(params)}, {"config", config},
          {"seed", seed}, {"tool_version", tool_version}, {"timestamp", timestamp}};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// ---------------------------------------------------------------------------
// SVG

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += ch;
    }
  }
  return out;
}

// Viewport of a set of series with 5% padding.
Viewport fit(std::span<const double> xs, std::span<const std::vector<double>*> ys) {
  Viewport v{xs.front(), xs.back(), 0.0, 0.0};
  bool first = true;
  for (const auto* series : ys) {
    for (double y : *series) {
      if (!std::isfinite(y)) continue;
      if (first) { v.y_min = v.y_max = y; first = false; }
      v.y_min = std::min(v.y_min, y);
      v.y_max = std::max(v.y_max, y);
    }
  }
  const double pad = std::max(1e-9, 0.05 * (v.y_max - v.y_min));
  v.y_min -= pad;
  v.y_max += pad;
  if (v.x_max <= v.x_min) v.x_max = v.x_min + 1.0;
  return v;
}

}  // namespace

SvgCanvas::SvgCanvas(double width, double height) : width_(width), height_(height) {}

double SvgCanvas::px(double x) const { return left_ + (x - view_.x_min) / (view_.x_max - view_.x_min) * pw_; }
double SvgCanvas::py(double y) const { return top_ + (view_.y_max - y) / (view_.y_max - view_.y_min) * ph_; }

void SvgCanvas::panel(double left, double top, double width, double height, const Viewport& view,
                      const std::string& title, const std::string& x_label, const std::string& y_label) {
  left_ = left;
  top_ = top;
  pw_ = width;
  ph_ = height;
  view_ = view;
  body_ += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(width) + "\" height=\"" +
           fmt(height) + "\" fill=\"none\" stroke=\"#333\"/>\n";
  body_ += "<text x=\"" + fmt(left + width / 2) + "\" y=\"" + fmt(top - 8) +
           "\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) + "</text>\n";
  body_ += "<text x=\"" + fmt(left + width / 2) + "\" y=\"" + fmt(top + height + 34) +
           "\" text-anchor=\"middle\" font-size=\"12\">" + escape(x_label) + "</text>\n";
  body_ += "<text x=\"" + fmt(left - 42) + "\" y=\"" + fmt(top + height / 2) +
           "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 " + fmt(left - 42) + " " +
           fmt(top + height / 2) + ")\">" + escape(y_label) + "</text>\n";
  // Four ticks per axis.
  for (int i = 0; i <= 4; ++i) {
    const double fx = view.x_min + (view.x_max - view.x_min) * i / 4.0;
    const double fy = view.y_min + (view.y_max - view.y_min) * i / 4.0;
    char lx[32];
    char ly[32];
    std::snprintf(lx, sizeof lx, "%.3g", fx);
    std::snprintf(ly, sizeof ly, "%.3g", fy);
    body_ += "<text x=\"" + fmt(px(fx)) + "\" y=\"" + fmt(top + height + 16) +
             "\" text-anchor=\"middle\" font-size=\"10\">" + lx + "</text>\n";
    body_ += "<text x=\"" + fmt(left - 6) + "\" y=\"" + fmt(py(fy) + 3) +
             "\" text-anchor=\"end\" font-size=\"10\">" + ly + "</text>\n";
  }
}

void SvgCanvas::polyline(std::span<const double> xs, std::span<const double> ys, const std::string& color,
                         double stroke_width, const std::string& dash) {
  if (xs.size() != ys.size()) throw std::invalid_argument("polyline: coordinate length mismatch");
  // Thin long series to at most ~2000 vertices.
  const std::size_t stride = std::max<std::size_t>(1, xs.size() / 2000);
  std::string pts;
  for (std::size_t i = 0; i < xs.size(); i += stride) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
    pts += fmt(px(xs[i])) + "," + fmt(py(ys[i])) + " ";
  }
  if (!xs.empty() && (xs.size() - 1) % stride != 0) pts += fmt(px(xs.back())) + "," + fmt(py(ys.back()));
  body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" + fmt(stroke_width) + "\"" +
           (dash.empty() ? "" : " stroke-dasharray=\"" + dash + "\"") + " points=\"" + pts + "\"/>\n";
}

void SvgCanvas::arrow(double x, double y, double dx, double dy, const std::string& color) {
  const double x0 = px(x);
  const double y0 = py(y);
  const double x1 = px(x + dx);
  const double y1 = py(y + dy);
  const double ang = std::atan2(y1 - y0, x1 - x0);
  const double head = 4.0;
  body_ += "<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x1) + "\" y2=\"" + fmt(y1) +
           "\" stroke=\"" + color + "\" stroke-width=\"0.8\"/>\n";
  body_ += "<polygon fill=\"" + color + "\" points=\"" + fmt(x1) + "," + fmt(y1) + " " +
           fmt(x1 - head * std::cos(ang - 0.4)) + "," + fmt(y1 - head * std::sin(ang - 0.4)) + " " +
           fmt(x1 - head * std::cos(ang + 0.4)) + "," + fmt(y1 - head * std::sin(ang + 0.4)) + "\"/>\n";
}

void SvgCanvas::marker(double x, double y, const std::string& color, const std::string& label) {
  body_ += "<circle cx=\"" + fmt(px(x)) + "\" cy=\"" + fmt(py(y)) + "\" r=\"4\" fill=\"" + color + "\"/>\n";
  if (!label.empty()) {
    // Labels in the right half of the panel extend leftwards so they stay inside.
    const bool right_half = px(x) > left_ + 0.5 * pw_;
    body_ += "<text x=\"" + fmt(right_half ? px(x) - 6 : px(x) + 6) + "\" y=\"" + fmt(py(y) - 6) +
             "\" font-size=\"11\" text-anchor=\"" + (right_half ? "end" : "start") + "\">" +
             escape(label) + "</text>\n";
  }
}

void SvgCanvas::legend(const std::vector<std::pair<std::string, std::string>>& entries) {
  double y = top_ + 14;
  for (const auto& [label, color] : entries) {
    body_ += "<line x1=\"" + fmt(left_ + pw_ - 130) + "\" y1=\"" + fmt(y - 4) + "\" x2=\"" +
             fmt(left_ + pw_ - 110) + "\" y2=\"" + fmt(y - 4) + "\" stroke=\"" + color +
             "\" stroke-width=\"2\"/>\n";
    body_ += "<text x=\"" + fmt(left_ + pw_ - 105) + "\" y=\"" + fmt(y) + "\" font-size=\"10\">" +
             escape(label) + "</text>\n";
    y += 14;
  }
}

std::string SvgCanvas::str() const {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width_) + "\" height=\"" + fmt(height_) +
         "\" viewBox=\"0 0 " + fmt(width_) + " " + fmt(height_) + "\">\n<rect width=\"100%\" height=\"100%\" " +
         "fill=\"white\"/>\n" + body_ + "</svg>\n";
}

std::string phase_portrait_svg(const ModelParams& params, std::span<const FieldSample> field,
                               std::span<const Trajectory> trajectories,
                               std::span<const Equilibrium> equilibria, const Viewport& view) {
  SvgCanvas svg(640, 560);
  std::ostringstream title;
  title << "phase portrait m=" << params.m << " c=" << params.c << " k=" << params.k;
  svg.panel(70, 40, 540, 460, view, title.str(), "N (prey)", "P (predator)");

  // Arrows share one on-screen length; direction is taken in viewport units.
  const double xr = view.x_max - view.x_min;
  const double yr = view.y_max - view.y_min;
  constexpr double kArrowFraction = 0.03;
  for (const FieldSample& s : field) {
    const double sx = s.v.dn / xr;
    const double sy = s.v.dp / yr;
    const double norm = std::hypot(sx, sy);
    if (norm == 0.0) continue;
    svg.arrow(s.at.n, s.at.p, kArrowFraction * sx / norm * xr, kArrowFraction * sy / norm * yr, "#888");
  }
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::size_t ci = 0;
  for (const Trajectory& t : trajectories) {
    std::vector<double> xs(t.states.size());
    std::vector<double> ys(t.states.size());
    for (std::size_t i = 0; i < t.states.size(); ++i) {
      xs[i] = t.states[i].n;
      ys[i] = t.states[i].p;
    }
    svg.polyline(xs, ys, colors[ci++ % 4], 1.2);
  }
  for (const Equilibrium& e : equilibria) {
    svg.marker(e.point.n, e.point.p, "black",
               std::string(to_string(e.kind)) + " (" + std::string(to_string(e.classification)) + ")");
  }
  return svg.str();
}

std::string ensemble_svg(const EnsembleStats& st, const Trajectory* deterministic) {
  SvgCanvas svg(1500, 480);
  std::vector<double> det_t, det_n, det_p;
  if (deterministic != nullptr) {
    for (std::size_t i = 0; i < deterministic->states.size(); ++i) {
      det_t.push_back(deterministic->times[i]);
      det_n.push_back(deterministic->states[i].n);
      det_p.push_back(deterministic->states[i].p);
    }
  }

  const auto series_panel = [&](double left, const std::string& name, const std::vector<double>& mean,
                                const std::vector<double>& lo, const std::vector<double>& hi,
                                const std::vector<double>& det) {
    std::vector<const std::vector<double>*> all{&mean, &lo, &hi};
    if (!det.empty()) all.push_back(&det);
    svg.panel(left, 40, 400, 360, fit(st.times, all), "E[" + name + "(t)] +- sqrt(Var)/2", "t",
              name);
    svg.polyline(st.times, lo, "#ff7f0e", 1.0, "4 2");
    svg.polyline(st.times, hi, "#ff7f0e", 1.0, "4 2");
    svg.polyline(st.times, mean, "#1f77b4", 1.6);
    std::vector<std::pair<std::string, std::string>> legend{{"mean", "#1f77b4"}, {"mean +- sd/2", "#ff7f0e"}};
    if (!det.empty()) {
      svg.polyline(det_t, det, "#2ca02c", 1.0);
      legend.push_back({"deterministic", "#2ca02c"});
    }
    svg.legend(legend);
  };
  series_panel(70, "N", st.mean_n, st.band_lower_n, st.band_upper_n, det_n);
  series_panel(570, "P", st.mean_p, st.band_lower_p, st.band_upper_p, det_p);

  Viewport phase{*std::min_element(st.mean_n.begin(), st.mean_n.end()),
                 *std::max_element(st.mean_n.begin(), st.mean_n.end()),
                 *std::min_element(st.mean_p.begin(), st.mean_p.end()),
                 *std::max_element(st.mean_p.begin(), st.mean_p.end())};
  for (std::size_t i = 0; i < det_n.size(); ++i) {
    phase.x_min = std::min(phase.x_min, det_n[i]);
    phase.x_max = std::max(phase.x_max, det_n[i]);
    phase.y_min = std::min(phase.y_min, det_p[i]);
    phase.y_max = std::max(phase.y_max, det_p[i]);
  }
  const double padx = std::max(1e-9, 0.05 * (phase.x_max - phase.x_min));
  const double pady = std::max(1e-9, 0.05 * (phase.y_max - phase.y_min));
  phase = {phase.x_min - padx, phase.x_max + padx, phase.y_min - pady, phase.y_max + pady};
  svg.panel(1070, 40, 400, 360, phase, "(E[N(t)], E[P(t)])", "E[N]", "E[P]");
  svg.polyline(st.mean_n, st.mean_p, "#1f77b4", 1.6);
  if (!det_n.empty()) svg.polyline(det_n, det_p, "#2ca02c", 1.0);
  svg.marker(st.mean_n.back(), st.mean_p.back(), "#1f77b4", "t = " + format_number(st.times.back()));
  return svg.str();
}

}  // namespace rmpp
