#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "leadsel/dynamics.hpp"
#include "leadsel/experiments.hpp"
#include "leadsel/selection.hpp"

namespace leadsel::cli {

namespace {

// Default output directory for sweep reports when --out is not given.
constexpr const char* kOutDirEnv = "LEADSEL_OUT_DIR";

std::vector<Index> parse_k_list(const std::string& text) {
  std::vector<Index> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dash = item.find('-');
    try {
      if (dash == std::string::npos) {
        out.push_back(std::stol(item));
      } else {
        const Index lo = std::stol(item.substr(0, dash));
        const Index hi = std::stol(item.substr(dash + 1));
        if (hi < lo) throw ParameterError("empty k range: " + item);
        for (Index k = lo; k <= hi; ++k) out.push_back(k);
      }
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const ParameterError*>(&e)) throw;
      throw ParameterError("bad k list entry: " + item);
    }
  }
  if (out.empty()) throw ParameterError("k list is empty");
  return out;
}

Algorithm require_algorithm(const std::string& name) {
  if (auto a = parse_algorithm(name)) return *a;
  throw ParameterError("unknown algorithm '" + name + "'; valid: " + algorithm_names());
}

CapMode parse_cap_mode(const std::string& s) {
  if (s == "vector") return CapMode::Vector;
  if (s == "axis") return CapMode::Axis;
  throw ParameterError("cap mode must be vector or axis");
}

struct SimFlags {
  double step = 1e-3;
  double error = 5e-8;
  long max_steps = 2'000'000;
  std::string cap_mode = "vector";

  void add(CLI::App* cmd) {
    cmd->add_option("--step", step, "Euler step t_s in seconds")->capture_default_str();
    cmd->add_option("--error", error, "convergence error e in cm")->capture_default_str();
    cmd->add_option("--max-steps", max_steps, "iteration cap N")->capture_default_str();
    cmd->add_option("--cap-mode", cap_mode, "speed cap on the 2D velocity (vector) or per axis")
        ->check(CLI::IsMember({"vector", "axis"}))
        ->capture_default_str();
  }

  SimulationConfig config() const {
    SimulationConfig c;
    c.step = step;
    c.error = error;
    c.max_steps = max_steps;
    c.cap_mode = parse_cap_mode(cap_mode);
    return c;
  }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Leader selection for linear consensus multi-agent systems"};
  app.set_config("--config", "", "key=value config file with one [section] per subcommand");
  app.require_subcommand(1);

  // generate
  GeometricParams gp;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  bool gen_connected = false;
  auto* generate = app.add_subcommand("generate", "Draw a random geometric graph");
  generate->add_option("--n", gp.n, "agent count")->capture_default_str();
  generate->add_option("--side", gp.side, "square side in meters")->capture_default_str();
  generate->add_option("--radius", gp.radius, "connection radius in meters")->capture_default_str();
  generate->add_option("--wmax", gp.weight_max, "upper edge weight bound")->capture_default_str();
  generate->add_option("--seed", gen_seed, "PRNG seed")->capture_default_str();
  generate->add_option("-o,--output", gen_out, "graph file (stdout when omitted)");
  generate->add_flag("--connected", gen_connected, "redraw from derived seeds until connected");

  // select
  std::string sel_graph, sel_algo;
  Index sel_k = 1;
  SelectionOptions sel_opts;
  auto* select = app.add_subcommand("select", "Choose k leaders with one algorithm");
  select->add_option("-g,--graph", sel_graph, "graph file")->required();
  select->add_option("--algo", sel_algo, "algorithm")->required();
  select->add_option("--k", sel_k, "leader count")->capture_default_str();
  select->add_option("--seed", sel_opts.seed, "seed for stochastic selectors")->capture_default_str();
  select->add_option("--samples", sel_opts.huge_random_samples, "huge-random sample count")->capture_default_str();

  // rate
  std::string rate_graph;
  std::vector<Index> rate_leaders;
  auto* rate = app.add_subcommand("rate", "Smallest eigenvalue of the grounded Laplacian");
  rate->add_option("-g,--graph", rate_graph, "graph file")->required();
  rate->add_option("--leaders", rate_leaders, "comma-separated leader ids")->required()->delimiter(',');

  // simulate
  std::string sim_graph, sim_algo, sim_trajectory;
  std::vector<Index> sim_leaders;
  Index sim_k = 1;
  std::uint64_t sim_seed = 0;
  std::optional<double> sim_vmax;
  SimFlags sim_flags;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run the consensus dynamics to convergence");
  simulate_cmd->add_option("-g,--graph", sim_graph, "graph file")->required();
  auto* leaders_opt = simulate_cmd->add_option("--leaders", sim_leaders, "comma-separated leader ids")->delimiter(',');
  auto* algo_opt = simulate_cmd->add_option("--algo", sim_algo, "select leaders with this algorithm instead");
  leaders_opt->excludes(algo_opt);
  simulate_cmd->add_option("--k", sim_k, "leader count with --algo")->capture_default_str();
  simulate_cmd->add_option("--seed", sim_seed, "selector seed with --algo")->capture_default_str();
  simulate_cmd->add_option("--vmax", sim_vmax, "speed cap in cm/s (free dynamics when omitted)");
  simulate_cmd->add_option("--trajectory", sim_trajectory, "write step,t,agent,axis,value CSV here");
  sim_flags.add(simulate_cmd);

  // sweep
  std::string preset = "desk", k_list, algo_list, sweep_out;
  int repeats = 0, jobs = 1;
  SweepConfig sc;
  SimFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "Repeated paired trials for every (algorithm, k)");
  sweep->add_option("--preset", preset, "desk or paper")->check(CLI::IsMember({"desk", "paper"}))->capture_default_str();
  auto* o_n = sweep->add_option("--n", sc.scenario.n, "agent count");
  auto* o_side = sweep->add_option("--side", sc.scenario.side, "square side in meters");
  auto* o_radius = sweep->add_option("--radius", sc.scenario.radius, "connection radius in meters");
  auto* o_wmax = sweep->add_option("--wmax", sc.scenario.weight_max, "upper edge weight bound");
  auto* o_k = sweep->add_option("--k", k_list, "leader counts, e.g. 1-9 or 1,2,5");
  auto* o_rep = sweep->add_option("--repeats", repeats, "trials per (algorithm, k)");
  auto* o_algos = sweep->add_option("--algorithms", algo_list, "comma-separated algorithm names");
  auto* o_samples = sweep->add_option("--samples", sc.huge_random_samples, "huge-random sample count");
  auto* o_seed = sweep->add_option("--seed", sc.master_seed, "master seed");
  auto* o_vmax = sweep->add_option("--vmax", sc.speed_cap, "speed cap for the capped mode, cm/s");
  sweep->add_option("--jobs", jobs, "worker threads")->capture_default_str();
  sweep->add_option("--out", sweep_out, "report directory (default $LEADSEL_OUT_DIR or ./sweep_out)");
  sweep_flags.add(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*generate) {
      Graph g;
      if (gen_connected)
        g = generate_connected(gp, gen_seed).graph;
      else
        g = generate_geometric(gp, gen_seed);
      const bool connected = is_connected(g);
      if (gen_out.empty()) {
        write_graph(out, g);
        err << "connected=" << (connected ? "true" : "false") << '\n';
      } else {
        save_graph(gen_out, g);
        out << "wrote " << gen_out << " n=" << g.size() << " edges=" << g.edge_count()
            << " connected=" << (connected ? "true" : "false") << '\n';
      }
    } else if (*select) {
      const Algorithm a = require_algorithm(sel_algo);
      const Graph g = load_graph(sel_graph);
      out << to_csv_row(make_selection_record(a, g, sel_k, sel_opts)) << '\n';
    } else if (*rate) {
      const Graph g = load_graph(rate_graph);
      const LeaderSet leaders(rate_leaders, g.size());
      out << format_double(grounded_rate(laplacian(g), leaders)) << '\n';
    } else if (*simulate_cmd) {
      const Graph g = load_graph(sim_graph);
      LeaderSet leaders;
      if (!sim_algo.empty()) {
        SelectionOptions o;
        o.seed = sim_seed;
        leaders = select_leaders(require_algorithm(sim_algo), g, sim_k, o);
      } else if (!sim_leaders.empty()) {
        leaders = LeaderSet(sim_leaders, g.size());
      } else {
        throw ParameterError("simulate needs --leaders or --algo");
      }
      SimulationConfig cfg = sim_flags.config();
      cfg.speed_cap = sim_vmax;

      std::ofstream traj;
      StepObserver observer;
      if (!sim_trajectory.empty()) {
        traj.open(sim_trajectory);
        if (!traj) throw IoError("cannot open for writing: " + sim_trajectory);
        traj << "step,t,agent,axis,value\n";
        auto dump = [&traj](long step, const SystemState<double>& s) {
          for (Index i = 0; i < s.positions.rows(); ++i)
            for (int axis = 0; axis < 2; ++axis)
              traj << step << ',' << format_double(s.time) << ',' << i << ',' << (axis ? 'y' : 'x') << ','
                   << format_double(s.positions(i, axis)) << '\n';
        };
        dump(0, initial_state(g));
        observer = [dump](long step, const SystemState<double>& s, const Points<double>&) { dump(step, s); };
      }

      const SimulationOutcome r = simulate(g, leaders, cfg, observer);
      if (!r.euler_stable)
        err << "warning: step * lambda_max(L_FF) = " << cfg.step * r.lambda_max
            << " >= 2; explicit Euler is unstable for this graph\n";
      out << "status=" << status_name(r.status) << '\n'
          << "t_e=" << format_double(r.t_e) << '\n'
          << "steps=" << r.steps << '\n'
          << "deviation_x=" << format_double(r.final_deviation(0)) << '\n'
          << "deviation_y=" << format_double(r.final_deviation(1)) << '\n';
      if (traj.is_open() && !traj) throw IoError("write failed: " + sim_trajectory);
    } else if (*sweep) {
      SweepConfig cfg = preset == "paper" ? paper_preset() : desk_preset();
      if (o_n->count()) cfg.scenario.n = sc.scenario.n;
      if (o_side->count()) cfg.scenario.side = sc.scenario.side;
      if (o_radius->count()) cfg.scenario.radius = sc.scenario.radius;
      if (o_wmax->count()) cfg.scenario.weight_max = sc.scenario.weight_max;
      if (o_k->count()) cfg.k_values = parse_k_list(k_list);
      if (o_rep->count()) cfg.repeats = repeats;
      if (o_samples->count()) cfg.huge_random_samples = sc.huge_random_samples;
      if (o_seed->count()) cfg.master_seed = sc.master_seed;
      if (o_vmax->count()) cfg.speed_cap = sc.speed_cap;
      if (o_algos->count()) {
        cfg.algorithms.clear();
        std::stringstream ss(algo_list);
        for (std::string name; std::getline(ss, name, ',');) cfg.algorithms.push_back(require_algorithm(name));
      }
      cfg.sim = sweep_flags.config();

      std::string dir = sweep_out;
      if (dir.empty()) {
        const char* env = std::getenv(kOutDirEnv);
        dir = env && *env ? env : "sweep_out";
      }

      const SweepResult result = run_sweep(cfg, jobs);
      emit_report(dir, result.report);
      int failed = 0;
      for (const auto& t : result.trials) failed += t.failed;
      out << "trials=" << result.trials.size() << " failed=" << failed << " report=" << dir << '\n';
      out << "ranking by mean lambda_min:\n";
      int place = 1;
      for (const auto& [a, v] : rank_by_rate(result.report))
        out << "  " << place++ << ". " << algorithm_name(a) << ' ' << format_double(v) << '\n';
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const GroundingError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace leadsel::cli
