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

// Reader and writer for a subset of the CPLEX LP file format.
//
// Supported sections (keywords are case-insensitive):
//
//   Minimize | Maximize      objective, optional "name:" and constant term
//   Subject To | st | s.t.   linear rows "[name:] expr (<=|>=|=|<|>|=<|=>) rhs"
//   Bounds                   "lo <= x <= up", "x >= lo", "x <= up", "x = v",
//                            "x free"; "-inf"/"+inf"/"infinity" accepted
//   Generals | Binaries      whitespace-separated variable lists
//   SOS                      "[name:] S1:: x1:w1 x2:w2 ..." (type 1 only)
//   End
//
// Section keywords normally start a line; the long forms (Subject To, Bounds,
// Binaries, End, ...) are also recognized mid-line, so they cannot be used as
// variable names. Comments start with a backslash and run to end of line.
// Variables are numbered in order of first appearance. Unnamed rows are
// named "R<k>" (1-based row position), unnamed SOS sets "sos<k>". Quadratic
// terms, semi-continuous variables and SOS2 are rejected.

#ifndef PRIMALKIT_CORE_LP_FORMAT_H_
#define PRIMALKIT_CORE_LP_FORMAT_H_

#include <stdexcept>
#include <string>
#include <string_view>

#include "primalkit/core/milp.h"

namespace primalkit {

class LpParseError : public std::runtime_error {
 public:
  LpParseError(const std::string& message, int line, int column,
               std::string token);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& token() const { return token_; }

 private:
  int line_;
  int column_;
  std::string token_;
};

MilpInstance ParseLpFile(std::string_view text);

std::string WriteLpFile(const MilpInstance& inst);

MilpInstance ReadLpFileFromPath(const std::string& path);

}  // namespace primalkit

#endif  // PRIMALKIT_CORE_LP_FORMAT_H_
