// Copyright 2026 The qment Authors
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

// JSON form of a MeasureReport:
//
//   {
//     "measure": "separability" | "physical",
//     "mode": "bound" | "roof" | "both",          (physical only)
//     "subsets": [
//       {"subset": [1, 2], "value": 2.0, "kind": "exact",
//        "lower": ..., "upper": ..., "p_lower": ..., "p_upper": ...},
//       ...
//     ],
//     "total": 2.0,
//     "partition": [[1, 2], [3]],                 (when determined)
//     "notes": [...]
//   }
//
// Subsets are 1-based. Optional fields are omitted when not computed.

#pragma once

#include "qment/measures.hpp"

#include <json.hpp>

namespace qment {

inline nlohmann::ordered_json to_json(const MeasureEntry& e) {
  nlohmann::ordered_json j;
  j["subset"] = e.subset.one_based();
  j["value"] = e.value;
  j["kind"] = to_string(e.kind);
  if (e.lower) j["lower"] = *e.lower;
  if (e.upper) j["upper"] = *e.upper;
  if (e.p_lower) j["p_lower"] = *e.p_lower;
  if (e.p_upper) j["p_upper"] = *e.p_upper;
  return j;
}

inline nlohmann::ordered_json to_json(const Partition& p) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& b : p.blocks) j.push_back(b.one_based());
  return j;
}

inline nlohmann::ordered_json to_json(const MeasureReport& r) {
  nlohmann::ordered_json j;
  j["measure"] = r.measure;
  if (r.mode) j["mode"] = to_string(*r.mode);
  j["subsets"] = nlohmann::ordered_json::array();
  for (const auto& e : r.entries) j["subsets"].push_back(to_json(e));
  j["total"] = r.total;
  if (r.partition) {
    j["partition"] = to_json(*r.partition);
    j["partition_label"] = r.partition->label();
  }
  j["notes"] = r.notes;
  return j;
}

}  // namespace qment
