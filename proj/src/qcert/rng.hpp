// Copyright 2026 The qcert Authors
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

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace qcert {

std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t splitmix64(std::uint64_t x);
std::string hex64(std::uint64_t v);

/// Independent generator for (master seed, key). Streams depend only on the
/// key text, never on execution order.
std::mt19937_64 stream_for(std::uint64_t master_seed, std::string_view key);

/// Poisson draw; a zero or negative mean returns 0.
std::int64_t draw_poisson(std::mt19937_64& gen, double mean);

}  // namespace qcert
