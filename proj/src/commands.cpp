#include "hypstab/commands.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "hypstab/boundary.hpp"
#include "hypstab/errors.hpp"
#include "hypstab/sim.hpp"

namespace hypstab {

namespace {

std::string format_vector(const Vector& v) {
  std::ostringstream os;
  os << std::setprecision(10) << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ']';
  return os.str();
}

// Centre and corners of the configured box; exact for constant coefficients.
std::vector<Vector> sample_points(const ScenarioConfig& c, std::size_t d) {
  const double L[3] = {c.grid.L1, c.grid.L2, c.grid.L2};
  std::vector<Vector> pts;
  Vector centre(d);
  for (std::size_t k = 0; k < d; ++k) centre[k] = 0.5 * L[k];
  pts.push_back(centre);
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    Vector x(d);
    for (std::size_t k = 0; k < d; ++k) x[k] = (mask >> k & 1U) ? L[k] : 0.0;
    pts.push_back(x);
  }
  return pts;
}

void print_search(const PotentialReport& rep, std::ostream& out) {
  out << std::setprecision(10);
  if (rep.search.feasible()) {
    const auto& p = *rep.search.potential;
    out << "result: feasible\n";
    out << "m = " << format_vector(p.m) << '\n';
    out << "C_A = " << p.C_A << '\n';
    out << "C_B = " << p.C_B << '\n';
    out << "C_L = " << p.C_L << '\n';
  } else {
    out << "result: infeasible\n";
    out << "C_B = " << rep.C_B << '\n';
    out << "best direction = " << format_vector(rep.search.best_direction) << '\n';
    out << "best value = " << rep.search.best_value << '\n';
  }
}

}  // namespace

PotentialReport resolve_potential(const ScenarioConfig& config, const HyperbolicSystem& system) {
  PotentialReport rep;
  if (config.lmi.mode == LmiMode::plain) {
    rep.C_B = estimate_source_bound(system, sample_points(config, system.dimension()));
    rep.search = find_potential(system, rep.C_B, config.lmi.C_A_override);
  } else {
    rep.search = find_potential_with_remainder(system, config.lmi.C_A_override);
  }
  return rep;
}

int cmd_check(const ScenarioConfig& config, std::ostream& out) {
  const HyperbolicSystem system = build_system(config);
  const std::size_t d = system.dimension();
  const std::size_t n = system.state_size();
  out << "system: " << to_string(config.kind) << " (d=" << d << ", n=" << n << ")\n";
  out << "lmi mode: " << to_string(config.lmi.mode) << '\n';
  const PotentialReport rep = resolve_potential(config, system);
  print_search(rep, out);

  if (d <= 2) {
    const Grid grid = build_grid(config, d);
    const BoundaryPartition part = partition_boundary(system, grid.boundary_faces());
    out << "boundary faces: " << part.faces.size() << '\n';
    for (std::size_t i = 0; i < n; ++i) {
      out << "Gamma_" << (i + 1) << ": minus=" << part.gamma_minus[i].size()
          << " plus=" << part.gamma_plus[i].size() << '\n';
    }
  } else {
    out << "boundary partition: skipped (grids cover d = 1 and d = 2)\n";
  }
  return rep.search.feasible() ? exit_ok : exit_infeasible;
}

int cmd_run(const ScenarioConfig& config, std::ostream& out) {
  const HyperbolicSystem system = build_system(config);
  const std::size_t d = system.dimension();
  const Grid grid = build_grid(config, d);
  const PotentialReport rep = resolve_potential(config, system);
  if (!rep.search.feasible()) {
    out << "no feasible Lyapunov potential; best value " << std::setprecision(10) << rep.search.best_value << '\n';
    return exit_infeasible;
  }

  // open outputs first so an unwritable path fails before the simulation
  std::ofstream csv;
  std::ofstream snap;
  if (!config.output.csv_path.empty()) {
    csv.open(config.output.csv_path);
    if (!csv) throw ConfigError("output.csv_path: cannot write '" + config.output.csv_path + "'");
    if (!config.output.snapshot_times.empty()) {
      snap.open(config.output.csv_path + ".snapshots.txt");
      if (!snap) throw ConfigError("cannot write snapshot file next to '" + config.output.csv_path + "'");
    }
  }

  SimOptions opts;
  opts.cfl = config.time.cfl;
  opts.snapshot_times = config.output.snapshot_times;
  RunRecord rec;
  try {
    const Simulator sim(system, grid, *rep.search.potential, build_control(config), opts);
    rec = sim.run(initial_bump(grid, system.state_size(), config.init_amplitude), config.time.t_end);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    out << "simulation failed: " << e.what() << '\n';
    return exit_simulation_error;
  }

  if (csv.is_open()) {
    write_csv(csv, rec);
    for (const auto& s : rec.snapshots) write_snapshot(snap, grid, s, system.state_size());
  }
  out << std::setprecision(10) << "C_L=" << rec.C_L << " c_fit=";
  if (rec.c_fit) {
    out << *rec.c_fit;
  } else {
    out << "n/a";
  }
  out << " L0=" << rec.L.front() << " LT=" << rec.L.back() << " steps=" << rec.steps << '\n';
  return exit_ok;
}

int cmd_oracle(const ScenarioConfig& config, std::ostream& out) {
  const HyperbolicSystem system = build_system(config);
  if (system.dimension() != 2) throw ConfigError("oracle needs a system with d = 2");
  const OracleComparison cmp = compare_with_grid_oracle(system);
  out << std::setprecision(10);
  out << "grid scan: " << (cmp.grid.feasible ? "feasible" : "infeasible") << " (" << cmp.grid.points_checked
      << " points";
  if (cmp.grid.feasible) out << ", witness " << format_vector(cmp.grid.witness);
  out << ")\n";
  out << "solver: " << (cmp.search.feasible() ? "feasible" : "infeasible");
  if (cmp.search.feasible()) {
    out << " m = " << format_vector(cmp.search.potential->m) << (cmp.solver_certified ? " (certified)" : " (NOT certified)");
  } else {
    out << " best value " << cmp.search.best_value;
  }
  out << '\n' << (cmp.agree() ? "agree" : "disagree") << '\n';
  return cmp.agree() ? exit_ok : exit_oracle_disagreement;
}

int run_command(const std::string& name, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  std::ostringstream sink;
  std::ostream& report = options.quiet ? static_cast<std::ostream&>(sink) : out;
  try {
    ScenarioConfig config = load_config(options.config_path);
    if (options.csv_path) config.output.csv_path = *options.csv_path;
    if (name == "check") return cmd_check(config, report);
    if (name == "run") return cmd_run(config, report);
    if (name == "oracle") return cmd_oracle(config, report);
    err << "unknown command '" << name << "'\n";
    return exit_config_error;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_simulation_error;
  }
}

}  // namespace hypstab
