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

#ifndef MSCC_SCHEME_H_
#define MSCC_SCHEME_H_

#include <string>

namespace mscc {

enum class Scheme {
  kMn,        // single-server MN delivery, no pairing
  kLap,       // baseline pairing: whole middle layers
  kImproved,  // class-refined pairing chosen by the lambda regime
  kAuto,      // whichever of kLap / kImproved leaves fewer unpaired messages
};

std::string SchemeName(Scheme s);
// Accepts "mn", "lap", "improved", "auto". Throws std::invalid_argument.
Scheme ParseScheme(const std::string& s);

}  // namespace mscc

#endif  // MSCC_SCHEME_H_
