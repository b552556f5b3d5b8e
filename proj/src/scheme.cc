// Copyright 2026 The mscc Authors.
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


#include "mscc/scheme.h"

#include <stdexcept>

namespace mscc {

std::string SchemeName(Scheme s) {
  switch (s) {
    case Scheme::kMn:
      return "mn";
    case Scheme::kLap:
      return "lap";
    case Scheme::kImproved:
      return "improved";
    case Scheme::kAuto:
      return "auto";
  }
  return "?";
}

Scheme ParseScheme(const std::string& s) {
  if (s == "mn") return Scheme::kMn;
  if (s == "lap") return Scheme::kLap;
  if (s == "improved") return Scheme::kImproved;
  if (s == "auto") return Scheme::kAuto;
  throw std::invalid_argument("unknown scheme '" + s +
                              "' (expected mn, lap, improved or auto)");
}

}  // namespace mscc
