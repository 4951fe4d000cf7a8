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

// JSON and CSV emitters for command outputs.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcert/certify.hpp"
#include "qcert/tomo.hpp"

namespace qcert {

inline constexpr int kReportSchemaVersion = 1;

struct Provenance {
  std::string input_hash;
  std::uint64_t seed = 0;
  std::string manifest_hash;
  std::optional<std::string> generated_at;
};

std::string toolkit_version();

// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string content_hash(const std::string& bytes);
std::string file_hash(const std::string& path);

nlohmann::json provenance_json(const Provenance& p);

nlohmann::json witness_json(const WitnessResult& w);
nlohmann::json eof_json(const EofResult& e, double margin);
nlohmann::json violation_json(const std::vector<ViolationRow>& rows);

nlohmann::json certification_report(const WitnessResult& w, const EofResult& e, const std::vector<ViolationRow>& cglmp,
                                    bool subtracted, const Provenance& p);

nlohmann::json tomo_json(const TomoResult& t);
nlohmann::json tomo_report(const std::vector<TomoResult>& variants, const Provenance& p);

std::string violation_csv(const std::vector<ViolationRow>& rows);

nlohmann::json bases_json(std::size_t D, std::size_t d_min, std::size_t d_max);

// Pretty-printed JSON with a trailing newline.
std::string dump(const nlohmann::json& j);

}  // namespace qcert
