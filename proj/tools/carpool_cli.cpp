// Copyright 2026 The carpool-qoe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: generate, validate, sequence, shapley, run, sweep.
// Failures print one line "error: <kind>: <message>" to stderr and exit 1.

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "carpool/allocation.hpp"
#include "carpool/coalition.hpp"
#include "carpool/impatience.hpp"
#include "carpool/harness/report.hpp"
#include "carpool/harness/scenario.hpp"
#include "carpool/harness/sweep.hpp"

namespace {

using namespace carpool;
using namespace carpool::harness;

struct run_flags {
  std::string split = "shapley";
  std::string shapley = "exact";
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  std::string coalition = "grand";
  bool baseline = false;

  void attach(CLI::App& cmd) {
    cmd.add_option("--split", split, "Pool split rule")
        ->check(CLI::IsMember({"shapley", "equal"}));
    cmd.add_option("--shapley", shapley, "Shapley method")
        ->check(CLI::IsMember({"exact", "mc"}));
    cmd.add_option("--samples", samples, "Monte-Carlo samples")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--seed", seed, "Monte-Carlo seed");
    cmd.add_option("--coalition", coalition, "Coalition mode")
        ->check(CLI::IsMember({"grand", "select"}));
    cmd.add_flag("--baseline", baseline,
                 "Zero-compensation reference instead of the PCA split");
  }

  run_options options() const {
    run_options o;
    o.split = split == "equal" ? split_rule::equal : split_rule::shapley;
    o.method = shapley == "mc" ? shapley_method::monte_carlo : shapley_method::exact;
    o.samples = samples;
    o.seed = seed;
    o.mode = coalition == "select" ? coalition_mode::select : coalition_mode::grand;
    o.baseline = baseline;
    return o;
  }
};

void emit(std::string const& text, std::string const& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Carpool fare engine: impatience-minimizing service orders, "
               "Shapley compensation and allocation audits"};
  app.require_subcommand(1);

  std::string scenario_path, out_path;

  // generate
  auto* gen = app.add_subcommand("generate", "Draw a random scenario");
  std::uint64_t gen_seed = 0;
  std::size_t gen_n = 0;
  std::string gen_label;
  auto const dp = default_params();
  double pr_l = dp.pr_l(), pr_t = dp.pr_t(), rho = dp.rho(), alpha = dp.alpha(),
         beta = dp.beta(), epsilon = dp.epsilon();
  scenario_ranges ranges;
  gen->add_option("--seed", gen_seed, "Generator seed")->required();
  gen->add_option("--passengers", gen_n, "Number of riders")->required();
  gen->add_option("--label", gen_label, "Scenario label");
  gen->add_option("--out", out_path, "Output file (stdout if omitted)");
  gen->add_option("--pr-l", pr_l, "Price per kilometer");
  gen->add_option("--pr-t", pr_t, "Price per minute");
  gen->add_option("--rho", rho, "Surge coefficient");
  gen->add_option("--alpha", alpha, "Willingness-to-pay coefficient");
  gen->add_option("--beta", beta, "Least expected revenue coefficient");
  gen->add_option("--epsilon", epsilon, "Driver incentive coefficient");
  std::vector<double> dist, time, theta, omega;
  gen->add_option("--distance-range", dist, "lo hi (km)")->expected(2);
  gen->add_option("--time-range", time, "lo hi (min)")->expected(2);
  gen->add_option("--theta-range", theta, "lo hi (min)")->expected(2);
  gen->add_option("--omega-range", omega, "lo hi (money/min)")->expected(2);

  // validate
  auto* val = app.add_subcommand("validate", "Check a scenario file");
  val->add_option("--scenario", scenario_path, "Scenario file")->required();

  // sequence
  auto* seq = app.add_subcommand("sequence", "Print the optimal service order");
  std::string seq_method = "smith";
  seq->add_option("--scenario", scenario_path, "Scenario file")->required();
  seq->add_option("--method", seq_method, "Sequence solver")
      ->check(CLI::IsMember({"smith", "exhaustive"}));

  // shapley
  auto* shp = app.add_subcommand("shapley", "Print Shapley values");
  std::string shp_method = "exact";
  std::size_t shp_samples = 10000;
  std::uint64_t shp_seed = 1;
  shp->add_option("--scenario", scenario_path, "Scenario file")->required();
  shp->add_option("--shapley", shp_method, "Shapley method")
      ->check(CLI::IsMember({"exact", "mc"}));
  shp->add_option("--samples", shp_samples, "Monte-Carlo samples")
      ->check(CLI::PositiveNumber);
  shp->add_option("--seed", shp_seed, "Monte-Carlo seed");

  // run
  auto* rn = app.add_subcommand("run", "Allocate one scenario and write the report");
  run_flags run_f;
  rn->add_option("--scenario", scenario_path, "Scenario file")->required();
  rn->add_option("--out", out_path, "Results table (stdout if omitted)");
  run_f.attach(*rn);

  // sweep
  auto* sw = app.add_subcommand("sweep", "Run a parameter grid");
  run_flags sweep_f;
  std::vector<std::string> grid_specs;
  sw->add_option("--scenario", scenario_path, "Base scenario file")->required();
  sw->add_option("--out", out_path, "Sweep table")->required();
  sw->add_option("--grid", grid_specs,
                 "Axis name=v1,v2,... or name=lo:hi:count; repeatable. Names: "
                 "rho, epsilon, alpha, beta, n_passengers, seed");
  sweep_f.attach(*sw);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      auto set = [](range& r, std::vector<double> const& v) {
        if (v.size() == 2) r = {v[0], v[1]};
      };
      set(ranges.distance_km, dist);
      set(ranges.expected_time_min, time);
      set(ranges.theta, theta);
      set(ranges.omega, omega);
      pricing_params const params(pr_l, pr_t, rho, alpha, beta, epsilon);
      auto const sc = generate_scenario(gen_seed, gen_n, ranges, params, gen_label);
      emit(format_scenario(sc), out_path);
    } else if (*val) {
      auto const sc = load_scenario(scenario_path);
      std::cout << "ok: " << sc.label() << " (" << sc.passengers().size()
                << " passengers)\n";
    } else if (*seq) {
      auto const sc = load_scenario(scenario_path);
      auto const& riders = sc.passengers();
      auto const order = seq_method == "exhaustive"
                             ? optimal_sequence_exhaustive(riders).first
                             : optimal_sequence_smith(riders);
      auto const breakdown = total_impatience(riders, order);
      std::cout << "sequence: " << join(order.order()) << "\n"
                << "total_impatience: " << format_number(breakdown.total) << "\n"
                << "passenger_id,impatience\n";
      for (auto const& id : order.order()) {
        std::cout << id << "," << format_number(breakdown.per_passenger.at(id))
                  << "\n";
      }
    } else if (*shp) {
      auto const sc = load_scenario(scenario_path);
      impatience_game game(sc.passengers());
      auto const r = shp_method == "mc"
                         ? shapley_montecarlo(game, shp_samples, shp_seed)
                         : shapley_exact(game);
      std::cout << "method: " << (shp_method == "mc" ? "monte_carlo" : "exact")
                << "\nsamples: " << r.samples << "\n";
      if (r.seed) std::cout << "seed: " << *r.seed << "\n";
      std::cout << "passenger_id,phi,standard_error\n";
      for (std::size_t k = 0; k < r.ids.size(); ++k) {
        std::cout << r.ids[k] << "," << format_number(r.phi[k]) << ","
                  << format_number(r.standard_error[k]) << "\n";
      }
    } else if (*rn) {
      auto const sc = load_scenario(scenario_path);
      std::vector<report> reps{run(sc, run_f.options())};
      emit(format_reports(reps), out_path);
    } else if (*sw) {
      auto const sc = load_scenario(scenario_path);
      std::vector<grid_axis> grid;
      for (auto const& axis : grid_specs) grid.push_back(parse_axis(axis));
      auto const rows = sweep(grid, sc, sweep_f.options(), out_path);
      std::size_t failed = 0;
      for (auto const& r : rows) failed += r.ok ? 0 : 1;
      std::cout << "points: " << rows.size() << ", failed: " << failed << "\n";
    }
  } catch (carpool::error const& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
    return 1;
  } catch (std::exception const& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
