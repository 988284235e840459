// irspm - IRS reflection design from user power measurements
// Copyright (C) 2026 irspm contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IRSPM_ORACLE_SUITE_HPP
#define IRSPM_ORACLE_SUITE_HPP

#include <iosfwd>
#include <string>

#include "optimizer.hpp"

namespace irspm {

/// Exhaustive scan over all 2^(alpha*N) discrete reflections; the reference
/// the optimizers are compared against. Intentionally brute force.
ReflectionSolution exhaustive_best_reflection(const std::vector<MatC>& g_hats,
                                              std::uint32_t alpha);

/// Brute-force cross-checks of the optimizers ("small" is the only suite).
/// Prints one PASS/FAIL line per check; returns the number of failures.
int run_oracle_suite(const std::string& suite, std::ostream& os);

}  // namespace irspm

#endif
