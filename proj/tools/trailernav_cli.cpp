// Command-line front end: map generation, planning, single simulations,
// batch experiments, and cover inspection.
//
// Exit codes: 0 success, 1 domain failure (no path, target not reached),
// 2 usage error (bad flags, malformed files, out-of-range parameters).

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trailernav/trailernav.hpp"

namespace {

using namespace trailernav;

/// Failure of the task itself (as opposed to bad usage); mapped to exit 1.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Pose2D parse_pose(const std::string& text) {
  std::string s = text;
  for (char& c : s)
    if (c == ',') c = ' ';
  const std::vector<std::string> f = split_ws(s);
  if (f.size() != 3)
    throw std::runtime_error("pose must be x,y,theta (got '" + text + "')");
  return {parse_double(f[0], "x"), parse_double(f[1], "y"), parse_double(f[2], "theta")};
}

std::string waypoints_text(const std::vector<Pose2D>& wps) {
  std::string s = "waypoints v1\n";
  for (const Pose2D& p : wps)
    s += "pose " + format_double(p.x) + " " + format_double(p.y) + " " +
         format_double(p.theta) + "\n";
  return s;
}

int resolve_parallel(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("TRAILERNAV_THREADS")) {
    try {
      const long long n = parse_int(env, "TRAILERNAV_THREADS");
      if (n >= 1) return static_cast<int>(n);
    } catch (const std::exception&) {
      throw std::runtime_error("TRAILERNAV_THREADS is not a positive integer");
    }
  }
  return 1;
}

/// Lattice resolution must match the grid; derive it so `plan` works on maps
/// of any resolution.
LatticeConfig lattice_for(const OccupancyGrid& grid) {
  LatticeConfig cfg;
  cfg.xy_resolution = grid.resolution();
  return cfg;
}

int cmd_gen_map(const std::string& layout, double width, double length,
                const std::string& out) {
  const Course course =
      layout == "loop" ? make_loop_course(width, length) : make_single_corner(width);
  write_file(out, save_grid(course.grid));
  write_file(out + ".waypoints", waypoints_text(course.waypoints));
  std::cout << "map " << out << " (" << course.grid.width() << "x" << course.grid.height()
            << " cells), " << course.waypoints.size() << " waypoints\n";
  return 0;
}

int cmd_plan(const std::string& map_path, const std::string& start_s, const std::string& goal_s,
             const std::string& out) {
  const OccupancyGrid grid = load_grid(read_file(map_path));
  const Pose2D start = parse_pose(start_s), goal = parse_pose(goal_s);
  const VehicleParams params;
  const Planner planner(params.planning_footprint(), lattice_for(grid));
  const PlanResult res = planner.plan(grid, start, goal, GoalTolerance{});
  if (res.outcome == PlanOutcome::invalid_start)
    throw DomainError("start pose is in collision or outside the map");
  if (res.outcome == PlanOutcome::no_path)
    throw DomainError("no path from start to goal (frontier exhausted after " +
                      std::to_string(res.expansions) + " expansions)");
  double length = 0.0;
  for (std::size_t i = 1; i < res.path.poses.size(); ++i)
    length += distance(res.path.poses[i - 1].position(), res.path.poses[i].position());
  std::cout << "cost " << format_double(res.path.total_cost) << "\n"
            << "length " << format_double(length) << "\n"
            << "poses " << res.path.poses.size() << "\n";
  if (!out.empty()) {
    std::string csv = "x,y,theta\n";
    for (const Pose2D& p : res.path.poses)
      csv += format_double(p.x) + "," + format_double(p.y) + "," + format_double(p.theta) + "\n";
    write_file(out, csv);
  }
  return 0;
}

int cmd_simulate(const std::string& map_path, const std::string& start_s,
                 const std::string& goal_s, double timeout, double dt,
                 const std::string& traj_out) {
  const OccupancyGrid grid = load_grid(read_file(map_path));
  SimWorld world = make_world(grid, dt);
  TrailerState state;
  state.trailer_pose = parse_pose(start_s);
  const Pose2D goal = parse_pose(goal_s);
  VehicleParams params;
  SimConfigs cfgs;
  cfgs.lattice = lattice_for(grid);
  auto [result, final_state] = run_to_target(world, state, goal, params, cfgs, timeout);
  std::cout << "reached " << (result.reached ? 1 : 0) << "\n"
            << "abort_reason " << to_string(result.abort_reason) << "\n"
            << "duration " << format_double(result.duration) << "\n"
            << "replans " << result.replans << "\n";
  if (!traj_out.empty()) write_file(traj_out, trajectory_csv(result.trajectory));
  if (!result.reached) throw DomainError("target not reached");
  return 0;
}

int cmd_experiment(const std::string& scenario_path, const std::string& out_dir, int parallel) {
  const Scenario sc = parse_scenario(read_file(scenario_path));
  const int threads = resolve_parallel(parallel);
  const BatchResult batch = run_batch(sc, threads);
  write_batch(batch, sc, out_dir);
  std::cout << metrics_csv(batch.per_width);
  return 0;
}

int cmd_cover(const std::string& map_path, const std::string& out) {
  const OccupancyGrid grid = load_grid(read_file(map_path));
  const MapCover cover = build_cover(grid);
  write_file(out, export_cover(cover));
  std::cout << "rects " << cover.rects().size() << "\n"
            << "covered_cells " << cover.covered_cell_count() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trailer-robot navigation toolkit"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-map", "generate an experiment map and its waypoints");
  std::string gen_layout = "loop", gen_out;
  double gen_width = 1.6, gen_length = 10.0;
  gen->add_option("--layout", gen_layout, "course layout")
      ->check(CLI::IsMember({"loop", "corner"}));
  gen->add_option("--width", gen_width, "corridor width in meters")->required();
  gen->add_option("--length", gen_length, "loop interior side length in meters");
  gen->add_option("--out", gen_out, "output map path")->required();

  auto* plan = app.add_subcommand("plan", "plan a single path on a map");
  std::string plan_map, plan_start, plan_goal, plan_out;
  plan->add_option("--map", plan_map, "gridmap file")->required();
  plan->add_option("--start", plan_start, "start pose x,y,theta")->required();
  plan->add_option("--goal", plan_goal, "goal pose x,y,theta")->required();
  plan->add_option("--out", plan_out, "write the dense path as CSV");

  auto* sim = app.add_subcommand("simulate", "run one closed-loop approach to a target");
  std::string sim_map, sim_start, sim_goal, sim_traj;
  double sim_timeout = 120.0, sim_dt = 0.02;
  sim->add_option("--map", sim_map, "gridmap file")->required();
  sim->add_option("--start", sim_start, "start pose x,y,theta")->required();
  sim->add_option("--goal", sim_goal, "goal pose x,y,theta")->required();
  sim->add_option("--timeout", sim_timeout, "simulated seconds before giving up");
  sim->add_option("--dt", sim_dt, "integration step in seconds");
  sim->add_option("--traj", sim_traj, "write the trajectory as CSV");

  auto* exp = app.add_subcommand("experiment", "run a batch scenario");
  std::string exp_scenario, exp_out;
  int exp_parallel = 0;
  exp->add_option("--scenario", exp_scenario, "scenario file")->required();
  exp->add_option("--out", exp_out, "results directory")->required();
  exp->add_option("--parallel", exp_parallel,
                  "worker threads (default: TRAILERNAV_THREADS or 1)");

  auto* cov = app.add_subcommand("cover", "build the free-space rectangle cover of a map");
  std::string cov_map, cov_out;
  cov->add_option("--map", cov_map, "gridmap file")->required();
  cov->add_option("--out", cov_out, "output cover path")->required();

  auto* ver = app.add_subcommand("version", "print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(gen)) return cmd_gen_map(gen_layout, gen_width, gen_length, gen_out);
    if (app.got_subcommand(plan)) return cmd_plan(plan_map, plan_start, plan_goal, plan_out);
    if (app.got_subcommand(sim))
      return cmd_simulate(sim_map, sim_start, sim_goal, sim_timeout, sim_dt, sim_traj);
    if (app.got_subcommand(exp)) return cmd_experiment(exp_scenario, exp_out, exp_parallel);
    if (app.got_subcommand(cov)) return cmd_cover(cov_map, cov_out);
    if (app.got_subcommand(ver)) {
      std::cout << "trailernav " << kVersion << "\n";
      return 0;
    }
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
