#include "lagflow/config.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <vector>

namespace lagflow {

RunMode parse_mode(const std::string& name) {
  if (name == "flow") return RunMode::Flow;
  if (name == "steady") return RunMode::Steady;
  if (name == "legendre-check") return RunMode::LegendreCheck;
  if (name == "monitor-replay") return RunMode::MonitorReplay;
  throw std::invalid_argument("unknown mode '" + name + "'");
}

std::string mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::Flow: return "flow";
    case RunMode::Steady: return "steady";
    case RunMode::LegendreCheck: return "legendre-check";
    case RunMode::MonitorReplay: return "monitor-replay";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<double> numbers(const std::string& v, const std::string& where, size_t lo, size_t hi) {
  std::string cleaned = v;
  for (auto& ch : cleaned) {
    if (ch == ',') ch = ' ';
  }
  std::istringstream ss(cleaned);
  std::vector<double> out;
  double x;
  while (ss >> x) out.push_back(x);
  if (out.size() < lo || out.size() > hi) {
    throw std::invalid_argument(where + ": expected between " + std::to_string(lo) + " and " +
                                std::to_string(hi) + " numbers, got '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument(where + ": expected a boolean, got '" + v + "'");
}

struct KeySetter {
  RunConfig& cfg;

  void domain_key(const std::string& which, const std::string& sub, const std::string& value,
                  const std::string& where) {
    const bool tilde = which == "omega_tilde";
    if (sub == "kind") {
      if (value != "interval" && value != "disc" && value != "ellipse" &&
          !(tilde && value == "pushforward")) {
        throw std::invalid_argument(where + ": unknown domain kind '" + value + "'");
      }
      if (tilde) {
        cfg.tilde_pushforward = (value == "pushforward");
        if (!cfg.tilde_pushforward) cfg.tilde_kind = value;
      } else {
        cfg.omega_kind = value;
      }
      return;
    }
    auto set2 = [&](Eigen::Vector2d& dst) {
      const auto v = numbers(value, where, 1, 2);
      dst.x() = v[0];
      dst.y() = v.size() > 1 ? v[1] : 0.0;
    };
    if (sub == "interval") {
      const auto v = numbers(value, where, 2, 2);
      (tilde ? cfg.tilde_a : cfg.omega_a) = v[0];
      (tilde ? cfg.tilde_b : cfg.omega_b) = v[1];
    } else if (sub == "radius") {
      (tilde ? cfg.tilde_radius : cfg.omega_radius) = numbers(value, where, 1, 1)[0];
    } else if (sub == "center") {
      set2(tilde ? cfg.tilde_center : cfg.omega_center);
    } else if (sub == "matrix") {
      const auto v = numbers(value, where, 3, 3);
      (tilde ? cfg.tilde_matrix : cfg.omega_matrix) = Eigen::Vector3d(v[0], v[1], v[2]);
    } else {
      throw std::invalid_argument(where + ": unknown key");
    }
  }

  void set(const std::string& key, const std::string& value, const std::string& where) {
    const auto dot = key.find('.');
    const std::string section = dot == std::string::npos ? "" : key.substr(0, dot);
    const std::string sub = dot == std::string::npos ? key : key.substr(dot + 1);

    if (key == "mode") {
      cfg.mode = parse_mode(value);
    } else if (key == "seed") {
      cfg.seed = unsigned(numbers(value, where, 1, 1)[0]);
    } else if (section == "omega" || section == "omega_tilde") {
      domain_key(section, sub, value, where);
    } else if (section == "generator") {
      if (sub == "kind") {
        if (value == "quadratic") cfg.generator.kind = Generator::Kind::Quadratic;
        else if (value == "perturbed") cfg.generator.kind = Generator::Kind::Perturbed;
        else throw std::invalid_argument(where + ": unknown generator kind '" + value + "'");
      } else if (sub == "a") {
        const auto v = numbers(value, where, 1, 3);
        cfg.generator.A.setIdentity();
        cfg.generator.A(0, 0) = v[0];
        if (v.size() == 3) {
          cfg.generator.A(0, 1) = cfg.generator.A(1, 0) = v[1];
          cfg.generator.A(1, 1) = v[2];
        }
      } else if (sub == "b") {
        const auto v = numbers(value, where, 1, 2);
        cfg.generator.b = {v[0], v.size() > 1 ? v[1] : 0.0};
      } else if (sub == "xc") {
        const auto v = numbers(value, where, 1, 2);
        cfg.generator.xc = {v[0], v.size() > 1 ? v[1] : 0.0};
      } else if (sub == "eps") {
        cfg.generator.eps = numbers(value, where, 1, 1)[0];
      } else if (sub == "bump_center") {
        if (value == "auto") {
          cfg.bump_auto = true;
        } else {
          const auto v = numbers(value, where, 1, 2);
          cfg.generator.bump_center = {v[0], v.size() > 1 ? v[1] : 0.0};
          cfg.bump_auto = false;
        }
      } else if (sub == "bump_width") {
        cfg.generator.bump_width = numbers(value, where, 1, 1)[0];
      } else {
        throw std::invalid_argument(where + ": unknown key");
      }
    } else if (section == "grid") {
      const double v = numbers(value, where, 1, 1)[0];
      if (sub == "n") cfg.grid_n = int(v);
      else if (sub == "ns") cfg.grid_ns = int(v);
      else if (sub == "nphi") cfg.grid_nphi = int(v);
      else throw std::invalid_argument(where + ": unknown key");
    } else if (section == "control") {
      if (sub == "sigma") cfg.control.sigma = numbers(value, where, 1, 1)[0];
      else if (sub == "tol_c") cfg.control.tol_c = numbers(value, where, 1, 1)[0];
      else if (sub == "tol_b") cfg.control.tol_b = numbers(value, where, 1, 1)[0];
      else if (sub == "boundary_max_iter") cfg.control.boundary_max_iter = int(numbers(value, where, 1, 1)[0]);
      else if (sub == "max_steps") cfg.control.max_steps = long(numbers(value, where, 1, 1)[0]);
      else throw std::invalid_argument(where + ": unknown key");
    } else if (section == "output") {
      if (sub == "dir") cfg.output_dir = value;
      else if (sub == "cadence") cfg.cadence = long(numbers(value, where, 1, 1)[0]);
      else if (sub == "svg") cfg.write_svg = parse_bool(value, where);
      else if (sub == "dumps") cfg.write_dumps = parse_bool(value, where);
      else throw std::invalid_argument(where + ": unknown key");
    } else if (section == "steady") {
      if (sub == "tol") cfg.steady_tol = numbers(value, where, 1, 1)[0];
      else if (sub == "max_iter") cfg.steady_max_iter = int(numbers(value, where, 1, 1)[0]);
      else if (sub == "warm_start") cfg.steady_warm_start = value;
      else throw std::invalid_argument(where + ": unknown key");
    } else if (section == "legendre") {
      if (sub == "steps") cfg.legendre_steps = long(numbers(value, where, 1, 1)[0]);
      else throw std::invalid_argument(where + ": unknown key");
    } else if (section == "replay") {
      if (sub == "csv") cfg.replay_csv = value;
      else throw std::invalid_argument(where + ": unknown key");
    } else {
      throw std::invalid_argument(where + ": unknown key '" + key + "'");
    }
  }
};

}  // namespace

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config file: " + path);
  RunConfig cfg;
  KeySetter setter{cfg};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = path + ":" + std::to_string(lineno);
    if (eq == std::string::npos) {
      throw std::invalid_argument(where + ": expected 'key = value'");
    }
    setter.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), where);
  }
  return cfg;
}

void RunConfig::apply_override(const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("override '" + kv + "': expected key=value");
  }
  KeySetter setter{*this};
  setter.set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)), "--set " + kv);
}

void RunConfig::validate() const {
  control.validate();
  if (dim() == 1) {
    if (!(omega_a < omega_b)) throw std::invalid_argument("config: omega interval degenerate");
    if (grid_n < Grid::kMin1D) throw std::invalid_argument("config: grid.n below minimum (8)");
  } else {
    if (grid_ns < Grid::kMinRadial) throw std::invalid_argument("config: grid.ns below minimum (8)");
    if (grid_nphi < Grid::kMinAngular || grid_nphi % 2 != 0) {
      throw std::invalid_argument("config: grid.nphi must be even and >= 16");
    }
  }
  if (cadence < 1) throw std::invalid_argument("config: output.cadence must be >= 1");
  if (!(steady_tol > 0.0)) throw std::invalid_argument("config: steady.tol must be positive");
  if (legendre_steps < 1) throw std::invalid_argument("config: legendre.steps must be >= 1");
  if (mode == RunMode::MonitorReplay && replay_csv.empty()) {
    throw std::invalid_argument("config: monitor-replay needs replay.csv");
  }
}

namespace {

ConvexDomain build_domain(const std::string& kind, double a, double b, double radius,
                          const Eigen::Vector2d& center, const Eigen::Vector3d& mat) {
  if (kind == "interval") return ConvexDomain::interval(a, b);
  if (kind == "disc") return ConvexDomain::disc(radius, center);
  Eigen::Matrix2d m;
  m << mat(0), mat(1), mat(1), mat(2);
  return ConvexDomain::ellipse(m, center);
}

}  // namespace

ConvexDomain RunConfig::make_omega() const {
  return build_domain(omega_kind, omega_a, omega_b, omega_radius, omega_center, omega_matrix);
}

std::optional<ConvexDomain> RunConfig::make_omega_tilde() const {
  if (tilde_pushforward) return std::nullopt;
  return build_domain(tilde_kind, tilde_a, tilde_b, tilde_radius, tilde_center, tilde_matrix);
}

std::shared_ptr<const Grid> RunConfig::make_grid() const {
  const ConvexDomain omega = make_omega();
  if (omega.dim() == 1) return Grid::make_1d(omega, grid_n);
  return Grid::make_2d(omega, grid_ns, grid_nphi);
}

Generator RunConfig::make_generator(const ConvexDomain& omega) const {
  Generator gen = generator;
  if (gen.kind == Generator::Kind::Perturbed && bump_auto) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (omega.dim() == 1) {
      const double a = omega.interval_a(), b = omega.interval_b();
      const double margin = gen.bump_width + 0.05 * (b - a);
      gen.bump_center = {a + margin + (b - a - 2.0 * margin) * unit(rng), 0.0};
    } else {
      // place the bump center uniformly in a safe inner region
      const double angle = 2.0 * M_PI * unit(rng);
      const double rho = omega.rho(angle);
      const double rmax = std::max(0.0, 0.7 * rho - gen.bump_width);
      const double r = rmax * std::sqrt(unit(rng));
      gen.bump_center = omega.center() + r * Eigen::Vector2d(std::cos(angle), std::sin(angle));
    }
  }
  return gen;
}

}  // namespace lagflow
