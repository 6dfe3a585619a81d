// Copyright 2026 The MWPC Harness Authors.
// SPDX-License-Identifier: Apache-2.0
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

#ifndef MWPC_ERRORS_H_
#define MWPC_ERRORS_H_

#include <stdexcept>
#include <string>

namespace mwpc {

// Malformed or invariant-violating input data (datasets, fixtures, records).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration detected before any work starts.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A model request that could not be completed. Carries the number of
// attempts made and the last underlying cause.
class BackendError : public std::runtime_error {
 public:
  BackendError(const std::string& cause, int attempts)
      : std::runtime_error(cause), attempts_(attempts) {}

  int attempts() const { return attempts_; }

 private:
  int attempts_;
};

}  // namespace mwpc

#endif  // MWPC_ERRORS_H_
