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

#ifndef CARPOOL_CARPOOL_HPP
#define CARPOOL_CARPOOL_HPP

#include "carpool/allocation.hpp"
#include "carpool/coalition.hpp"
#include "carpool/error.hpp"
#include "carpool/impatience.hpp"
#include "carpool/model.hpp"
#include "carpool/random.hpp"

#endif  // CARPOOL_CARPOOL_HPP
