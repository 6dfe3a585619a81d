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

#ifndef MWPC_HASHING_H_
#define MWPC_HASHING_H_

#include <string>
#include <string_view>

namespace mwpc {

// Name recorded in manifests for the digest used everywhere below.
inline constexpr std::string_view kHashFunction = "sha256";

// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

}  // namespace mwpc

#endif  // MWPC_HASHING_H_
