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

// Setting names used in count tables:
//   "<S>/<j>-<k>/<a><b>"  pair setting, signal axis a, idler axis b (S = X|K)
//   "<S>/full"            full single-mode basis of space S on both sides
//   "bell/d<d>/S<s>I<i>"  CGLMP setting pair for dimension d

#include <cstddef>
#include <string>
#include <vector>

#include "qcert/bases.hpp"
#include "qcert/counting.hpp"

namespace qcert {

std::string pair_setting_name(Space space, std::size_t j, std::size_t k, Axis signal_axis, Axis idler_axis);
std::string full_setting_name(Space space);
std::string bell_setting_name(std::size_t d, int signal_setting, int idler_setting);

SettingSpec pair_setting(Space space, std::size_t j, std::size_t k, Axis signal_axis, Axis idler_axis, std::size_t D);

/// xx, yy, zz for every pair j<k: 3 * D(D-1)/2 settings, 12 cells per pair.
std::vector<SettingSpec> witness_plan(Space space, std::size_t D);
SettingSpec full_basis_setting(Space space, std::size_t D);
/// Four (S_s, I_i) settings over the first d modes of D.
std::vector<SettingSpec> cglmp_plan(std::size_t d, std::size_t D);

/// Appends specs whose names are not yet present.
void append_unique(std::vector<SettingSpec>& plan, std::vector<SettingSpec> more);

}  // namespace qcert
