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

#ifndef CARPOOL_HARNESS_SWEEP_HPP
#define CARPOOL_HARNESS_SWEEP_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "carpool/error.hpp"
#include "carpool/harness/report.hpp"
#include "carpool/harness/scenario.hpp"
#include "carpool/harness/table.hpp"

namespace carpool::harness {

enum class sweep_parameter { rho, epsilon, alpha, beta, n_passengers, seed };

inline constexpr std::array<std::string_view, 6> sweep_parameter_names{
    "rho", "epsilon", "alpha", "beta", "n_passengers", "seed"};

struct grid_axis {
  sweep_parameter parameter;
  std::vector<double> values;
};

/// Parses `name=v1,v2,...` or `name=lo:hi:count` (count evenly spaced values,
/// both ends included).
inline grid_axis parse_axis(std::string_view text) {
  auto const eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw parse_error("grid: expected name=values, got '" + std::string(text) + "'");
  }
  auto const name = text.substr(0, eq);
  auto const body = text.substr(eq + 1);
  grid_axis axis{};
  bool known = false;
  for (std::size_t k = 0; k < sweep_parameter_names.size(); ++k) {
    if (sweep_parameter_names[k] == name) {
      axis.parameter = static_cast<sweep_parameter>(k);
      known = true;
    }
  }
  if (!known) throw parse_error("grid: unknown parameter '" + std::string(name) + "'");

  auto split = [](std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t k = 0; k <= s.size(); ++k) {
      if (k == s.size() || s[k] == sep) {
        parts.push_back(s.substr(start, k - start));
        start = k + 1;
      }
    }
    return parts;
  };

  if (body.find(':') != std::string_view::npos) {
    auto const parts = split(body, ':');
    if (parts.size() != 3) throw parse_error("grid: range must be lo:hi:count");
    double const lo = parse_number(parts[0]);
    double const hi = parse_number(parts[1]);
    double const count = parse_number(parts[2]);
    if (!(count >= 1) || count != std::floor(count)) {
      throw parse_error("grid: count must be a positive integer");
    }
    auto const n = static_cast<std::size_t>(count);
    for (std::size_t k = 0; k < n; ++k) {
      axis.values.push_back(n == 1 ? lo
                                   : k + 1 == n ? hi
                                                : lo + (hi - lo) * double(k) / double(n - 1));
    }
  } else {
    for (auto part : split(body, ',')) axis.values.push_back(parse_number(part));
  }
  if (axis.values.empty()) throw parse_error("grid: axis has no values");
  return axis;
}

struct sweep_row {
  std::size_t point = 0;
  std::string label;
  /// Axis values of this grid point, in axis order.
  std::vector<double> coordinates;
  double rho = 0, epsilon = 0, alpha = 0, beta = 0;
  std::optional<double> n_passengers;
  std::optional<double> seed;
  bool ok = false;
  std::string error;

  money x_d = 0;
  money baseline_revenue = 0;
  double revenue_loss_pct = 0;
  money driver_surplus = 0;
  double mean_payment_reduction_pct = 0;
  money total_impatience = 0;
  double objective = 0;
  double objective_equal = 0;
  bool audits_passed = false;
};

inline constexpr std::array<std::string_view, 19> sweep_columns{
    "point",          "scenario",         "rho",
    "epsilon",        "alpha",            "beta",
    "n_passengers",   "seed",             "status",
    "x_d",            "baseline_revenue", "revenue_loss_pct",
    "driver_surplus", "mean_payment_reduction_pct",
    "total_impatience",                   "objective",
    "objective_equal",                    "audits_passed",
    "error"};

namespace detail {

inline std::size_t as_count(double v, std::string_view what) {
  if (!(v >= 0) || v != std::floor(v) || v > 1e15) {
    throw invariant_error(std::string(what) + " must be a nonnegative integer");
  }
  return static_cast<std::size_t>(v);
}

struct point_values {
  double rho, epsilon, alpha, beta;
  std::optional<double> n, seed;
};

inline point_values resolve_point(scenario const& base, std::span<grid_axis const> grid,
                                  std::span<double const> coords) {
  auto const& bp = base.params();
  point_values v{bp.rho(), bp.epsilon(), bp.alpha(), bp.beta(), {}, {}};
  for (std::size_t a = 0; a < grid.size(); ++a) {
    switch (grid[a].parameter) {
      case sweep_parameter::rho: v.rho = coords[a]; break;
      case sweep_parameter::epsilon: v.epsilon = coords[a]; break;
      case sweep_parameter::alpha: v.alpha = coords[a]; break;
      case sweep_parameter::beta: v.beta = coords[a]; break;
      case sweep_parameter::n_passengers: v.n = coords[a]; break;
      case sweep_parameter::seed: v.seed = coords[a]; break;
    }
  }
  return v;
}

/// Scenario for one grid point. Parameters override the base tariff; a seed
/// regenerates the riders (keeping the count unless n_passengers is also
/// swept); n_passengers alone keeps the first n riders of the base.
inline scenario point_scenario(scenario const& base, point_values const& v,
                               std::string label) {
  auto const& bp = base.params();
  pricing_params params(bp.pr_l(), bp.pr_t(), v.rho, v.alpha, v.beta, v.epsilon);
  std::optional<std::size_t> n;
  if (v.n) n = as_count(*v.n, "n_passengers");

  if (v.seed) {
    auto const seed = as_count(*v.seed, "seed");
    auto gen = generate_scenario(seed, n.value_or(base.passengers().size()), {},
                                 params, label);
    return {std::move(label), params, gen.passengers(), seed, base.driver()};
  }
  auto riders = base.passengers();
  if (n) {
    if (*n == 0 || *n > riders.size()) {
      throw invariant_error("n_passengers must lie in [1, " +
                            std::to_string(riders.size()) + "]");
    }
    riders.erase(riders.begin() + static_cast<std::ptrdiff_t>(*n), riders.end());
  }
  return {std::move(label), params, std::move(riders), base.seed(), base.driver()};
}

inline void write_sweep_row(std::ostream& out, sweep_row const& r) {
  std::vector<std::string> cells;
  cells.push_back(std::to_string(r.point));
  cells.push_back(r.label);
  for (double v : {r.rho, r.epsilon, r.alpha, r.beta}) cells.push_back(format_number(v));
  cells.push_back(r.n_passengers ? format_number(*r.n_passengers) : "");
  cells.push_back(r.seed ? format_number(*r.seed) : "");
  cells.push_back(r.ok ? "ok" : "error");
  if (r.ok) {
    for (double v : {r.x_d, r.baseline_revenue, r.revenue_loss_pct, r.driver_surplus,
                     r.mean_payment_reduction_pct, r.total_impatience, r.objective,
                     r.objective_equal}) {
      cells.push_back(format_number(v));
    }
    cells.push_back(r.audits_passed ? "true" : "false");
  } else {
    cells.resize(cells.size() + 9);
  }
  cells.push_back(r.error);
  write_csv_row(out, cells);
}

}  // namespace detail

inline void write_sweep_header(std::ostream& out) {
  std::vector<std::string> cells(sweep_columns.begin(), sweep_columns.end());
  write_csv_row(out, cells);
}

/// Runs the cartesian product of `grid` (first axis outermost) against
/// `base`. A failing point becomes an error row; the sweep carries on.
inline std::vector<sweep_row> sweep(std::span<grid_axis const> grid,
                                    scenario const& base, run_options const& opt,
                                    std::ostream& out) {
  std::size_t total = 1;
  for (auto const& axis : grid) total *= axis.values.size();

  write_sweep_header(out);
  std::vector<sweep_row> rows;
  std::vector<double> coords(grid.size());
  for (std::size_t point = 0; point < total; ++point) {
    std::size_t rest = point;
    for (std::size_t a = grid.size(); a-- > 0;) {
      coords[a] = grid[a].values[rest % grid[a].values.size()];
      rest /= grid[a].values.size();
    }

    sweep_row row;
    row.point = point;
    row.coordinates = coords;
    row.label = base.label() + "#" + std::to_string(point);
    auto const values = detail::resolve_point(base, grid, coords);
    row.rho = values.rho;
    row.epsilon = values.epsilon;
    row.alpha = values.alpha;
    row.beta = values.beta;
    row.n_passengers = values.n;
    row.seed = values.seed;
    try {
      auto const sc = detail::point_scenario(base, values, row.label);
      row.n_passengers = double(sc.passengers().size());
      if (sc.seed()) row.seed = double(*sc.seed());

      auto const rep = run(sc, opt);
      row.x_d = rep.driver.x_d;
      row.baseline_revenue = rep.driver.baseline_revenue;
      row.revenue_loss_pct = rep.driver.revenue_loss_pct;
      row.driver_surplus = rep.driver.driver_surplus;
      double reduction = 0;
      for (auto const& pr : rep.passengers) reduction += pr.payment_reduction_pct;
      row.mean_payment_reduction_pct = reduction / double(rep.passengers.size());
      row.total_impatience = rep.coalition.total_impatience;
      row.objective = rep.coalition.objective;
      row.objective_equal = rep.coalition.objective_equal;
      row.audits_passed = rep.coalition.audits_passed;
      row.ok = true;
    } catch (error const& e) {
      row.ok = false;
      row.error = std::string(e.kind()) + ": " + e.what();
    }
    detail::write_sweep_row(out, row);
    out.flush();
    rows.push_back(std::move(row));
  }
  return rows;
}

/// File variant. The output is opened before any point runs, so an
/// unwritable path fails fast with io_error.
inline std::vector<sweep_row> sweep(std::span<grid_axis const> grid,
                                    scenario const& base, run_options const& opt,
                                    std::string const& output_path) {
  std::ofstream out(output_path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot write " + output_path);
  auto rows = sweep(grid, base, opt, out);
  if (!out) throw io_error("failed writing " + output_path);
  return rows;
}

}  // namespace carpool::harness

#endif  // CARPOOL_HARNESS_SWEEP_HPP
