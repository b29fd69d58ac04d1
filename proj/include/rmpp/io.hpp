#pragma once

// CSV, JSON and SVG serialization of model outputs. CSV is the stable
// contract: fixed headers, fixed column order, 17 significant digits.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmpp/ensemble.hpp"
#include "rmpp/equilibrium.hpp"
#include "rmpp/ode.hpp"
#include "rmpp/sde.hpp"
#include "rmpp/verification.hpp"

namespace rmpp {

inline constexpr const char* kToolVersion = "0.1.0";

inline constexpr const char* kTrajectoryHeader = "t,N,P";
inline constexpr const char* kVectorFieldHeader = "N,P,dN,dP";
inline constexpr const char* kEnsembleHeader =
    "t,mean_N,var_N,band_lo_N,band_hi_N,mean_P,var_P,band_lo_P,band_hi_P";
inline constexpr const char* kPathsHeader = "path,t,N,P";

/// Shortest round-trippable form: "%.17g".
std::string format_number(double v);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_vector_field_csv(std::ostream& os, std::span<const FieldSample> field);
void write_ensemble_csv(std::ostream& os, const EnsembleStats& stats);
void write_paths_csv(std::ostream& os, std::span<const SamplePath> paths);

nlohmann::json to_json(const ModelParams& params);
nlohmann::json to_json(const State& x);
nlohmann::json to_json(const Equilibrium& e);
nlohmann::json to_json(const GridSpec& grid);
nlohmann::json to_json(const VerificationReport& rep);

/// Provenance record written next to every output artifact.
struct RunManifest {
  std::string subcommand;
  ModelParams params{};
  nlohmann::json config = nlohmann::json::object();  ///< echo of every flag
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
  std::string timestamp;  ///< ISO 8601 UTC

  nlohmann::json to_json() const;
};

std::string utc_timestamp();

/// Axis-aligned box in data coordinates.
struct Viewport {
  double x_min, x_max, y_min, y_max;
};

/// Minimal SVG writer with a fixed data-to-pixel mapping per panel.
class SvgCanvas {
 public:
  SvgCanvas(double width, double height);

  /// Starts a new panel occupying the given pixel rectangle; subsequent
  /// drawing calls use `view` for coordinates.
  void panel(double left, double top, double width, double height, const Viewport& view,
             const std::string& title, const std::string& x_label, const std::string& y_label);

  void polyline(std::span<const double> xs, std::span<const double> ys, const std::string& color,
                double stroke_width = 1.5, const std::string& dash = "");
  void arrow(double x, double y, double dx, double dy, const std::string& color);
  void marker(double x, double y, const std::string& color, const std::string& label = "");
  void legend(const std::vector<std::pair<std::string, std::string>>& entries);

  std::string str() const;

 private:
  double px(double x) const;
  double py(double y) const;

  double width_, height_;
  double left_ = 0, top_ = 0, pw_ = 0, ph_ = 0;
  Viewport view_{0, 1, 0, 1};
  std::string body_;
};

/// Vector-field arrows, trajectories and equilibrium markers.
std::string phase_portrait_svg(const ModelParams& params, std::span<const FieldSample> field,
                               std::span<const Trajectory> trajectories,
                               std::span<const Equilibrium> equilibria, const Viewport& view);

/// Mean curves with +-half-standard-deviation bands for N and P, plus the
/// mean phase trajectory; the deterministic path is overlaid when given.
std::string ensemble_svg(const EnsembleStats& stats, const Trajectory* deterministic = nullptr);

}  // namespace rmpp
