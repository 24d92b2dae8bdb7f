#pragma once

#include <map>
#include <optional>
#include <string>

#include "lagflow/flow.hpp"

namespace lagflow {

enum class RunMode { Flow, Steady, LegendreCheck, MonitorReplay };

RunMode parse_mode(const std::string& name);
std::string mode_name(RunMode mode);

/// Run configuration parsed from a line-based `key = value` file with dotted
/// section prefixes (see README for the schema).  Unknown keys and malformed
/// values are reported with file/line diagnostics.
struct RunConfig {
  RunMode mode = RunMode::Flow;

  // domains
  std::string omega_kind = "interval";
  double omega_a = 0.0, omega_b = 1.0;
  double omega_radius = 1.0;
  Eigen::Vector2d omega_center = Eigen::Vector2d::Zero();
  Eigen::Vector3d omega_matrix = {1.0, 0.0, 1.0};  // m11 m12 m22

  bool tilde_pushforward = true;
  std::string tilde_kind = "disc";
  double tilde_a = 0.0, tilde_b = 1.0;
  double tilde_radius = 1.0;
  Eigen::Vector2d tilde_center = Eigen::Vector2d::Zero();
  Eigen::Vector3d tilde_matrix = {1.0, 0.0, 1.0};

  // generator
  Generator generator;
  bool bump_auto = false;
  unsigned seed = 0;

  // grid
  int grid_n = 100;
  int grid_ns = 16, grid_nphi = 32;

  StepControl control;

  // outputs
  std::string output_dir;
  long cadence = 100;
  bool write_svg = true;
  bool write_dumps = true;

  // steady
  double steady_tol = 1e-10;
  int steady_max_iter = 50;
  std::string steady_warm_start;

  // legendre-check
  long legendre_steps = 10;

  // monitor-replay
  std::string replay_csv;

  static RunConfig load(const std::string& path);
  void apply_override(const std::string& key_equals_value);
  void validate() const;

  int dim() const { return omega_kind == "interval" ? 1 : 2; }
  ConvexDomain make_omega() const;
  std::optional<ConvexDomain> make_omega_tilde() const;  // nullopt: pushforward of u0
  std::shared_ptr<const Grid> make_grid() const;
  /// Generator with the bump placed from the seed when bump_center = auto.
  Generator make_generator(const ConvexDomain& omega) const;
};

}  // namespace lagflow
