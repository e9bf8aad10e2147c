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

#ifndef CARPOOL_HARNESS_REPORT_HPP
#define CARPOOL_HARNESS_REPORT_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "carpool/allocation.hpp"
#include "carpool/coalition.hpp"
#include "carpool/error.hpp"
#include "carpool/impatience.hpp"
#include "carpool/model.hpp"
#include "carpool/harness/scenario.hpp"
#include "carpool/harness/table.hpp"

namespace carpool::harness {

enum class coalition_mode { grand, select };

struct run_options {
  split_rule split = split_rule::shapley;
  shapley_method method = shapley_method::exact;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  coalition_mode mode = coalition_mode::grand;
  /// Produce the zero-compensation reference instead of the PCA split.
  bool baseline = false;
};

struct passenger_row {
  std::string id;
  money fare = 0;
  money surge = 0;
  money phi = 0;
  money x = 0;
  money net_payment = 0;
  money impatience = 0;
  double payment_reduction_pct = 0;
};

struct driver_row {
  std::string id;
  money x_d = 0;
  money baseline_revenue = 0;
  double revenue_loss_pct = 0;
  money driver_surplus = 0;
};

struct coalition_row {
  std::vector<std::string> members;
  std::vector<std::string> sequence;
  money total_impatience = 0;
  double objective = 0;
  /// Objective the same pool would reach under an equal split.
  double objective_equal = 0;
  bool audits_passed = false;
};

struct report {
  std::string label;
  std::vector<passenger_row> passengers;
  driver_row driver;
  coalition_row coalition;

  allocation alloc;
  shapley_result shapley;
  constraint_audit audit;
  rationality_report rationality;
  /// Present for exact Shapley results.
  std::optional<axiom_report> axioms;
  /// The coalition search was skipped because there were too many riders.
  bool selection_fallback = false;
};

/// Sequence optimization, Shapley values, allocation, audits and the
/// comparison against the zero-compensation baseline, for one scenario.
inline report run(scenario const& sc, run_options const& opt = {}) {
  auto const& params = sc.params();
  report rep;
  rep.label = sc.label();

  std::vector<passenger> members;
  if (opt.mode == coalition_mode::select) {
    auto sel = select_coalition(sc.passengers(), params, opt.split);
    members = std::move(sel.coalition);
    rep.selection_fallback = sel.fallback;
  } else {
    members = sc.passengers();
  }

  impatience_game game(members);
  rep.shapley = opt.method == shapley_method::exact
                    ? shapley_exact(game)
                    : shapley_montecarlo(game, opt.samples, opt.seed);
  if (opt.method == shapley_method::exact) {
    rep.axioms = verify_axioms(game, rep.shapley);
  }

  rep.alloc = opt.baseline ? baseline_allocate(members, params)
                           : pca_allocate(members, params, rep.shapley, opt.split);
  rep.audit = audit_constraints(members, rep.alloc, params);
  rep.rationality =
      individual_rationality_check(members, rep.alloc, params, sc.driver().id);

  auto const breakdown = total_impatience(members, rep.alloc.sequence);
  for (auto const& q : members) {
    passenger_row row;
    row.id = q.id();
    row.fare = base_fare(q.trip(), params);
    row.surge = surge_fare(q.trip(), params);
    row.phi = rep.shapley.phi_of(q.id());
    row.x = rep.alloc.x.at(q.id());
    row.net_payment = row.surge - row.x;
    row.impatience = breakdown.per_passenger.at(q.id());
    row.payment_reduction_pct = row.x / row.surge * 100;
    rep.passengers.push_back(std::move(row));
  }

  std::vector<money> fares;
  for (auto const& q : members) fares.push_back(base_fare(q.trip(), params));
  rep.driver.id = sc.driver().id;
  rep.driver.x_d = rep.alloc.x_d;
  rep.driver.baseline_revenue = total_collected(members, params);
  rep.driver.revenue_loss_pct = (rep.driver.baseline_revenue - rep.alloc.x_d) /
                                rep.driver.baseline_revenue * 100;
  rep.driver.driver_surplus = driver_surplus(rep.alloc.x_d, fares, params);

  rep.coalition.members = rep.alloc.coalition;
  rep.coalition.sequence = rep.alloc.sequence.order();
  rep.coalition.total_impatience = breakdown.total;
  rep.coalition.objective = rep.alloc.objective;
  rep.coalition.objective_equal =
      opt.baseline ? 0.0
                   : pca_allocate(members, params, rep.shapley, split_rule::equal)
                         .objective;
  rep.coalition.audits_passed = rep.audit.all_passed();
  return rep;
}

/// Column order of the results table. Passenger, driver and coalition rows
/// share it; cells that do not apply to a row type are empty.
inline constexpr std::array<std::string_view, 20> report_columns{
    "scenario",       "row_type",         "passenger_id",
    "F",              "G",                "phi",
    "x_i",            "net_payment",      "impatience",
    "payment_reduction_pct",              "x_d",
    "baseline_revenue",                   "revenue_loss_pct",
    "driver_surplus", "members",          "sequence",
    "total_impatience",                   "objective",
    "objective_equal",                    "audits_passed"};

namespace detail {

inline std::size_t column(std::string_view name) {
  for (std::size_t k = 0; k < report_columns.size(); ++k) {
    if (report_columns[k] == name) return k;
  }
  throw lookup_error("report: unknown column " + std::string(name));
}

}  // namespace detail

inline void write_report_header(std::ostream& out) {
  std::vector<std::string> cells(report_columns.begin(), report_columns.end());
  write_csv_row(out, cells);
}

inline void write_report_rows(std::ostream& out, report const& rep) {
  auto blank = [&](std::string_view type) {
    std::vector<std::string> cells(report_columns.size());
    cells[0] = rep.label;
    cells[1] = type;
    return cells;
  };
  auto set = [](std::vector<std::string>& cells, std::string_view col,
                std::string v) { cells[detail::column(col)] = std::move(v); };

  for (auto const& p : rep.passengers) {
    auto cells = blank("passenger");
    set(cells, "passenger_id", p.id);
    set(cells, "F", format_number(p.fare));
    set(cells, "G", format_number(p.surge));
    set(cells, "phi", format_number(p.phi));
    set(cells, "x_i", format_number(p.x));
    set(cells, "net_payment", format_number(p.net_payment));
    set(cells, "impatience", format_number(p.impatience));
    set(cells, "payment_reduction_pct", format_number(p.payment_reduction_pct));
    write_csv_row(out, cells);
  }
  {
    auto cells = blank("driver");
    set(cells, "x_d", format_number(rep.driver.x_d));
    set(cells, "baseline_revenue", format_number(rep.driver.baseline_revenue));
    set(cells, "revenue_loss_pct", format_number(rep.driver.revenue_loss_pct));
    set(cells, "driver_surplus", format_number(rep.driver.driver_surplus));
    write_csv_row(out, cells);
  }
  {
    auto cells = blank("coalition");
    set(cells, "members", join(rep.coalition.members));
    set(cells, "sequence", join(rep.coalition.sequence));
    set(cells, "total_impatience", format_number(rep.coalition.total_impatience));
    set(cells, "objective", format_number(rep.coalition.objective));
    set(cells, "objective_equal", format_number(rep.coalition.objective_equal));
    set(cells, "audits_passed", rep.coalition.audits_passed ? "true" : "false");
    write_csv_row(out, cells);
  }
}

inline std::string format_reports(std::span<report const> reports) {
  std::ostringstream out;
  write_report_header(out);
  for (auto const& r : reports) write_report_rows(out, r);
  return out.str();
}

inline void write_text_file(std::string const& path, std::string const& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw io_error("failed writing " + path);
}

/// Largest |x_d + sum x_i - sum G| over the scenarios in a parsed results
/// table. Recomputes the budget identity from the serialized cells only.
inline double budget_residual(std::span<table_row const> rows) {
  struct totals {
    double paid = 0, collected = 0;
    bool has_driver = false;
  };
  std::map<std::string, totals> by_scenario;
  for (auto const& row : rows) {
    auto& t = by_scenario[row.at("scenario")];
    auto const& type = row.at("row_type");
    if (type == "passenger") {
      t.paid += parse_number(row.at("x_i"));
      t.collected += parse_number(row.at("G"));
    } else if (type == "driver") {
      t.paid += parse_number(row.at("x_d"));
      t.has_driver = true;
    }
  }
  double worst = 0;
  for (auto const& [label, t] : by_scenario) {
    if (!t.has_driver) {
      throw parse_error("table: scenario " + label + " has no driver row");
    }
    worst = std::max(worst, std::abs(t.paid - t.collected));
  }
  return worst;
}

}  // namespace carpool::harness

#endif  // CARPOOL_HARNESS_REPORT_HPP
