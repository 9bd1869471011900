// Copyright 2026 The primalkit Authors
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

// Exact round-trip JSON encoding of MilpInstance:
//
//   {
//     "name": "...",
//     "negated_from_max": false,
//     "objective": {"offset": 0.0, "terms": [[var, coef], ...]},
//     "variables": [{"name": "x", "lower": 0.0, "upper": null,
//                    "type": "continuous|integer|binary"}, ...],
//     "constraints": [{"name": "c", "sense": "<=|>=|=", "rhs": 1.0,
//                      "terms": [[var, coef], ...], "sos1_group": "g"}, ...]
//   }
//
// A null bound is infinite in the bound's direction. "sos1_group" is omitted
// for ordinary rows.

#ifndef PRIMALKIT_CORE_JSON_FORMAT_H_
#define PRIMALKIT_CORE_JSON_FORMAT_H_

#include <string>
#include <string_view>

#include "primalkit/core/milp.h"

namespace primalkit {

std::string WriteInstanceJson(const MilpInstance& inst);

// Throws StructuralError on schema violations.
MilpInstance ParseInstanceJson(std::string_view text);

// Dispatches on extension: ".json" is JSON, anything else is LP format.
MilpInstance ReadInstanceFile(const std::string& path);
void WriteInstanceFile(const MilpInstance& inst, const std::string& path);

}  // namespace primalkit

#endif  // PRIMALKIT_CORE_JSON_FORMAT_H_
