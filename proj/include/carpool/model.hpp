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

#ifndef CARPOOL_MODEL_HPP
#define CARPOOL_MODEL_HPP

#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <utility>

#include "carpool/error.hpp"

namespace carpool {

/// Currency amount. Fares, compensations and impatience all share this unit.
using money = double;

/// Absolute tolerance for money equalities.
inline constexpr double money_tolerance = 1e-9;

/// Tariff and coefficient bundle.
///
/// `rho` scales the base fare into the surge fare actually collected,
/// `alpha` bounds what a passenger is willing to pay, `beta` is the
/// least revenue the driver accepts and `epsilon` fixes the driver's share.
/// Construction enforces `alpha >= rho >= beta > 0` and
/// `beta < epsilon <= rho`.
class pricing_params {
public:
  pricing_params(double pr_l, double pr_t, double rho, double alpha,
                 double beta, double epsilon)
      : pr_l_(pr_l), pr_t_(pr_t), rho_(rho), alpha_(alpha), beta_(beta),
        epsilon_(epsilon) {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(pr_l) || !finite(pr_t) || !finite(rho) || !finite(alpha) ||
        !finite(beta) || !finite(epsilon)) {
      throw invariant_error("params: all coefficients must be finite");
    }
    if (pr_l < 0) throw invariant_error("params: pr_l must be >= 0");
    if (pr_t < 0) throw invariant_error("params: pr_t must be >= 0");
    if (pr_l == 0 && pr_t == 0) {
      throw invariant_error("params: pr_l and pr_t cannot both be zero");
    }
    if (beta <= 0) throw invariant_error("C4 violated: beta <= 0");
    if (beta > rho) throw invariant_error("C4 violated: beta > rho");
    if (rho > alpha) throw invariant_error("C4 violated: rho > alpha");
    if (!(epsilon > beta)) {
      throw invariant_error("params: epsilon must exceed beta");
    }
    if (epsilon > rho) {
      throw invariant_error("params: epsilon must not exceed rho");
    }
  }

  double pr_l() const noexcept { return pr_l_; }
  double pr_t() const noexcept { return pr_t_; }
  double rho() const noexcept { return rho_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double epsilon() const noexcept { return epsilon_; }

  friend bool operator==(pricing_params const&,
                         pricing_params const&) = default;

private:
  double pr_l_, pr_t_, rho_, alpha_, beta_, epsilon_;
};

/// A requested trip: distance in km and expected travel time in minutes.
class travel {
public:
  travel(double distance_km, double expected_time_min)
      : distance_km_(distance_km), expected_time_min_(expected_time_min) {
    if (!std::isfinite(distance_km) || distance_km < 0) {
      throw invariant_error("travel: distance_km must be finite and >= 0");
    }
    if (!std::isfinite(expected_time_min) || expected_time_min < 0) {
      throw invariant_error(
          "travel: expected_time_min must be finite and >= 0");
    }
    if (distance_km == 0 && expected_time_min == 0) {
      throw invariant_error(
          "travel: distance_km and expected_time_min cannot both be zero");
    }
  }

  double distance_km() const noexcept { return distance_km_; }
  double expected_time_min() const noexcept { return expected_time_min_; }

  friend bool operator==(travel const&, travel const&) = default;

private:
  double distance_km_, expected_time_min_;
};

/// A rider. `theta` is the expected sojourn time in minutes and `omega` the
/// compensation the rider expects per minute of delay.
class passenger {
public:
  passenger(std::string id, travel trip, double theta, double omega)
      : id_(std::move(id)), travel_(trip), theta_(theta), omega_(omega) {
    if (id_.empty()) throw invariant_error("passenger: id must not be empty");
    if (!std::isfinite(theta) || theta <= 0) {
      throw invariant_error("passenger " + id_ + ": theta must be > 0");
    }
    if (!std::isfinite(omega) || omega <= 0) {
      throw invariant_error("passenger " + id_ + ": omega must be > 0");
    }
  }

  std::string const& id() const noexcept { return id_; }
  travel const& trip() const noexcept { return travel_; }
  double theta() const noexcept { return theta_; }
  double omega() const noexcept { return omega_; }

  friend bool operator==(passenger const&, passenger const&) = default;

private:
  std::string id_;
  travel travel_;
  double theta_, omega_;
};

struct driver {
  std::string id = "d";
  friend bool operator==(driver const&, driver const&) = default;
};

/// Tariff applied to raw distance and time. Works on any inputs, including
/// the zero trip that `travel` refuses to represent.
inline money base_fare(double distance_km, double time_min,
                       pricing_params const& p) noexcept {
  return p.pr_l() * distance_km + p.pr_t() * time_min;
}

inline money base_fare(travel const& t, pricing_params const& p) noexcept {
  return base_fare(t.distance_km(), t.expected_time_min(), p);
}

/// Fare actually charged during surge pricing.
inline money surge_fare(travel const& t, pricing_params const& p) noexcept {
  return p.rho() * base_fare(t, p);
}

/// Willingness to pay minus the surge fare.
inline money passenger_surplus(travel const& t,
                               pricing_params const& p) noexcept {
  return (p.alpha() - p.rho()) * base_fare(t, p);
}

/// Driver revenue above the least expected revenue over all served fares.
/// A single-element `fares` gives the one-passenger form.
inline money driver_surplus(money x_d, std::span<money const> fares,
                            pricing_params const& p) {
  if (!(x_d > 0)) throw invariant_error("driver_surplus: x_d must be > 0");
  money total = std::accumulate(fares.begin(), fares.end(), money{0});
  return x_d - p.beta() * total;
}

}  // namespace carpool

#endif  // CARPOOL_MODEL_HPP
