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

#ifndef CARPOOL_HARNESS_SCENARIO_HPP
#define CARPOOL_HARNESS_SCENARIO_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "carpool/error.hpp"
#include "carpool/model.hpp"
#include "carpool/random.hpp"

namespace carpool::harness {

inline constexpr std::size_t max_scenario_passengers = 64;

/// One experiment instance: a tariff, a driver and the requesting riders.
class scenario {
public:
  scenario(std::string label, pricing_params params,
           std::vector<passenger> passengers,
           std::optional<std::uint64_t> seed = {}, driver drv = {})
      : label_(std::move(label)), params_(params),
        passengers_(std::move(passengers)), seed_(seed), driver_(std::move(drv)) {
    if (passengers_.empty()) {
      throw invariant_error("scenario: at least one passenger is required");
    }
    if (passengers_.size() > max_scenario_passengers) {
      throw invariant_error("scenario: more than " +
                            std::to_string(max_scenario_passengers) +
                            " passengers");
    }
    std::set<std::string> ids;
    for (auto const& p : passengers_) {
      check_token("passenger id", p.id());
      if (!ids.insert(p.id()).second) {
        throw invariant_error("scenario: duplicate passenger id " + p.id());
      }
    }
    check_token("driver id", driver_.id);
  }

  std::string const& label() const noexcept { return label_; }
  pricing_params const& params() const noexcept { return params_; }
  std::vector<passenger> const& passengers() const noexcept { return passengers_; }
  std::optional<std::uint64_t> seed() const noexcept { return seed_; }
  struct driver const& driver() const noexcept { return driver_; }

  friend bool operator==(scenario const&, scenario const&) = default;

private:
  // Ids end up space-joined inside table cells.
  static void check_token(std::string_view what, std::string const& id) {
    if (id.empty()) throw invariant_error("scenario: empty " + std::string(what));
    for (char ch : id) {
      auto const u = static_cast<unsigned char>(ch);
      if (u <= 0x20 || ch == ',' || ch == '"' || u == 0x7f) {
        throw invariant_error("scenario: " + std::string(what) + " '" + id +
                              "' contains whitespace, ',' or '\"'");
      }
    }
  }

  std::string label_;
  pricing_params params_;
  std::vector<passenger> passengers_;
  std::optional<std::uint64_t> seed_;
  struct driver driver_;
};

namespace detail {

using json = nlohmann::ordered_json;

inline json const& field(json const& obj, char const* key, std::string_view where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw schema_error(std::string(where) + ": missing field '" + key + "'");
  }
  return *it;
}

inline double number(json const& obj, char const* key, std::string_view where) {
  auto const& v = field(obj, key, where);
  if (!v.is_number()) {
    throw schema_error(std::string(where) + "." + key + ": expected a number");
  }
  return v.get<double>();
}

inline std::string text(json const& obj, char const* key, std::string_view where) {
  auto const& v = field(obj, key, where);
  if (!v.is_string()) {
    throw schema_error(std::string(where) + "." + key + ": expected a string");
  }
  return v.get<std::string>();
}

inline void only_keys(json const& obj, std::initializer_list<std::string_view> keys,
                      std::string_view where) {
  if (!obj.is_object()) {
    throw schema_error(std::string(where) + ": expected an object");
  }
  for (auto const& [k, _] : obj.items()) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      throw schema_error(std::string(where) + ": unknown field '" + k + "'");
    }
  }
}

}  // namespace detail

/// Parses a scenario document. Errors are distinguishable by type:
/// parse_error (not JSON), schema_error (wrong shape) and invariant_error
/// (values outside their domain, e.g. "C4 violated: rho > alpha").
inline scenario parse_scenario(std::string_view text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (json::parse_error const& e) {
    throw parse_error(std::string("scenario: ") + e.what());
  }
  detail::only_keys(doc, {"label", "seed", "driver", "params", "passengers"},
                    "scenario");

  auto label = detail::text(doc, "label", "scenario");

  std::optional<std::uint64_t> seed;
  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_unsigned()) {
      throw schema_error("scenario.seed: expected a nonnegative integer");
    }
    seed = it->get<std::uint64_t>();
  }

  driver drv;
  if (auto it = doc.find("driver"); it != doc.end()) {
    if (!it->is_string()) throw schema_error("scenario.driver: expected a string");
    drv.id = it->get<std::string>();
  }

  auto const& pj = detail::field(doc, "params", "scenario");
  detail::only_keys(pj, {"pr_l", "pr_t", "rho", "alpha", "beta", "epsilon"},
                    "params");
  pricing_params params(
      detail::number(pj, "pr_l", "params"), detail::number(pj, "pr_t", "params"),
      detail::number(pj, "rho", "params"), detail::number(pj, "alpha", "params"),
      detail::number(pj, "beta", "params"),
      detail::number(pj, "epsilon", "params"));

  auto const& list = detail::field(doc, "passengers", "scenario");
  if (!list.is_array()) throw schema_error("scenario.passengers: expected a list");
  std::vector<passenger> riders;
  for (std::size_t k = 0; k < list.size(); ++k) {
    auto const where = "passengers[" + std::to_string(k) + "]";
    auto const& r = list[k];
    detail::only_keys(r, {"id", "distance_km", "expected_time_min", "theta", "omega"},
                      where);
    riders.emplace_back(detail::text(r, "id", where),
                        travel(detail::number(r, "distance_km", where),
                               detail::number(r, "expected_time_min", where)),
                        detail::number(r, "theta", where),
                        detail::number(r, "omega", where));
  }
  return {std::move(label), params, std::move(riders), seed, std::move(drv)};
}

inline scenario load_scenario(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open scenario file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

/// Canonical text form: fixed key order, two-space indent, shortest
/// round-trip numbers, trailing newline.
inline std::string format_scenario(scenario const& s) {
  using detail::json;
  json doc;
  doc["label"] = s.label();
  if (s.seed()) doc["seed"] = *s.seed();
  if (s.driver().id != driver{}.id) doc["driver"] = s.driver().id;
  auto const& p = s.params();
  doc["params"] = json{{"pr_l", p.pr_l()},   {"pr_t", p.pr_t()},
                       {"rho", p.rho()},     {"alpha", p.alpha()},
                       {"beta", p.beta()},   {"epsilon", p.epsilon()}};
  json riders = json::array();
  for (auto const& r : s.passengers()) {
    riders.push_back(json{{"id", r.id()},
                          {"distance_km", r.trip().distance_km()},
                          {"expected_time_min", r.trip().expected_time_min()},
                          {"theta", r.theta()},
                          {"omega", r.omega()}});
  }
  doc["passengers"] = std::move(riders);
  return doc.dump(2) + "\n";
}

inline void save_scenario(scenario const& s, std::string const& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot write scenario file " + path);
  out << format_scenario(s);
  if (!out) throw io_error("failed writing scenario file " + path);
}

struct range {
  double lo, hi;
};

/// Sampling box for generated riders. The defaults are arbitrary choices for
/// a plausible city trip, not calibrated values.
struct scenario_ranges {
  range distance_km{1, 20};
  range expected_time_min{5, 40};
  range theta{5, 30};
  range omega{0.1, 2.0};
};

/// The tariff used by `generate` when none is given.
inline pricing_params default_params() { return {2.0, 0.5, 1.5, 1.8, 0.8, 1.3}; }

/// Draws `n` riders p1..pn. Per rider, in order: distance, time, theta,
/// omega, each `uniform(lo, hi)` from one carpool::rng seeded with `seed`.
inline scenario generate_scenario(std::uint64_t seed, std::size_t n,
                                  scenario_ranges const& ranges = {},
                                  pricing_params const& params = default_params(),
                                  std::string label = {}) {
  if (n == 0) throw invariant_error("generate: n_passengers must be >= 1");
  if (n > max_scenario_passengers) {
    throw invariant_error("generate: n_passengers exceeds " +
                          std::to_string(max_scenario_passengers));
  }
  auto check = [](range const& r, char const* name, bool strictly_positive) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi) {
      throw invariant_error(std::string("generate: invalid range for ") + name);
    }
    if (strictly_positive ? !(r.lo > 0) : r.lo < 0) {
      throw invariant_error(std::string("generate: range for ") + name +
                            (strictly_positive ? " must be > 0" : " must be >= 0"));
    }
  };
  check(ranges.distance_km, "distance_km", false);
  check(ranges.expected_time_min, "expected_time_min", false);
  check(ranges.theta, "theta", true);
  check(ranges.omega, "omega", true);
  if (ranges.distance_km.lo == 0 && ranges.expected_time_min.lo == 0) {
    throw invariant_error(
        "generate: distance_km and expected_time_min ranges both reach zero");
  }

  rng gen(seed);
  std::vector<passenger> riders;
  riders.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) {
    double const l = gen.uniform(ranges.distance_km.lo, ranges.distance_km.hi);
    double const t =
        gen.uniform(ranges.expected_time_min.lo, ranges.expected_time_min.hi);
    double const theta = gen.uniform(ranges.theta.lo, ranges.theta.hi);
    double const omega = gen.uniform(ranges.omega.lo, ranges.omega.hi);
    riders.emplace_back("p" + std::to_string(i), travel(l, t), theta, omega);
  }
  if (label.empty()) {
    label = "generated-s" + std::to_string(seed) + "-n" + std::to_string(n);
  }
  return {std::move(label), params, std::move(riders), seed};
}

}  // namespace carpool::harness

#endif  // CARPOOL_HARNESS_SCENARIO_HPP
