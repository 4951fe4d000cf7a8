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

#include "qcert/settings.hpp"

#include <set>

#include "qcert/error.hpp"

namespace qcert {

std::string pair_setting_name(Space space, std::size_t j, std::size_t k, Axis signal_axis, Axis idler_axis) {
  return std::string(1, to_char(space)) + "/" + std::to_string(j) + "-" + std::to_string(k) + "/" +
         to_char(signal_axis) + to_char(idler_axis);
}

std::string full_setting_name(Space space) { return std::string(1, to_char(space)) + "/full"; }

std::string bell_setting_name(std::size_t d, int signal_setting, int idler_setting) {
  return "bell/d" + std::to_string(d) + "/S" + std::to_string(signal_setting) + "I" + std::to_string(idler_setting);
}

SettingSpec pair_setting(Space space, std::size_t j, std::size_t k, Axis signal_axis, Axis idler_axis, std::size_t D) {
  return SettingSpec{pair_setting_name(space, j, k, signal_axis, idler_axis),
                     mub_pair_basis(j, k, signal_axis, D, space, Side::Signal),
                     mub_pair_basis(j, k, idler_axis, D, space, Side::Idler)};
}

std::vector<SettingSpec> witness_plan(Space space, std::size_t D) {
  std::vector<SettingSpec> plan;
  plan.reserve(3 * D * (D - 1) / 2);
  for (std::size_t j = 0; j < D; ++j)
    for (std::size_t k = j + 1; k < D; ++k)
      for (Axis a : {Axis::X, Axis::Y, Axis::Z}) plan.push_back(pair_setting(space, j, k, a, a, D));
  return plan;
}

SettingSpec full_basis_setting(Space space, std::size_t D) {
  return SettingSpec{full_setting_name(space), space_basis(space, Side::Signal, D), space_basis(space, Side::Idler, D)};
}

std::vector<SettingSpec> cglmp_plan(std::size_t d, std::size_t D) {
  if (d < 2 || d > D) throw ValidationError("cglmp_plan: d must lie in 2..D");
  std::vector<SettingSpec> plan;
  for (int s = 0; s < 2; ++s)
    for (int i = 0; i < 2; ++i)
      plan.push_back(SettingSpec{bell_setting_name(d, s, i), cglmp_basis(Side::Signal, s, d, D),
                                 cglmp_basis(Side::Idler, i, d, D)});
  return plan;
}

void append_unique(std::vector<SettingSpec>& plan, std::vector<SettingSpec> more) {
  std::set<std::string> seen;
  for (const auto& s : plan) seen.insert(s.name);
  for (auto& s : more) {
    if (seen.insert(s.name).second) plan.push_back(std::move(s));
  }
}

}  // namespace qcert
