// Copyright 2026 The gbsopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GBSOPT_ERRORS_HPP
#define GBSOPT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gbsopt {

/// Bad input: wrong shape, out-of-domain parameter, malformed config.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A combinatorial or numeric guard was exceeded (enumeration size,
/// recursion depth, working precision). Never silently truncated.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every weight of a conditional distribution is zero.
class DegenerateDistribution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// GBS tweak exhausted its redraw budget.
class TweakFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gbsopt

#endif  // GBSOPT_ERRORS_HPP
