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

#ifndef CARPOOL_ERROR_HPP
#define CARPOOL_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace carpool {

/// Base of every error raised by the library. `kind()` is a stable,
/// machine-readable tag used by the CLI error line.
class error : public std::runtime_error {
public:
  error(std::string_view kind, std::string const& what)
      : std::runtime_error(what), kind_(kind) {}

  std::string_view kind() const noexcept { return kind_; }

private:
  std::string_view kind_;
};

/// A domain type was constructed with values that break its invariants.
struct invariant_error : error {
  explicit invariant_error(std::string const& what) : error("invariant", what) {}
};

/// Unknown passenger id or a sequence that does not match its coalition.
struct lookup_error : error {
  explicit lookup_error(std::string const& what) : error("lookup", what) {}
};

/// An exact routine was asked for more players than it can enumerate.
struct size_error : error {
  explicit size_error(std::string const& what) : error("size", what) {}
};

/// Allocation cannot satisfy the strict positivity of compensations.
struct infeasible_error : error {
  explicit infeasible_error(std::string const& what) : error("infeasible", what) {}
};

/// Input text is not well-formed.
struct parse_error : error {
  explicit parse_error(std::string const& what) : error("parse", what) {}
};

/// Input is well-formed but has missing, extra or mistyped fields.
struct schema_error : error {
  explicit schema_error(std::string const& what) : error("schema", what) {}
};

struct io_error : error {
  explicit io_error(std::string const& what) : error("io", what) {}
};

}  // namespace carpool

#endif  // CARPOOL_ERROR_HPP
