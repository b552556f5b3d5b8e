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

// Closed-form rate and unpaired-ratio calculators. Everything reported is an
// exact rational; doubles appear only as convenience columns.

#ifndef MSCC_ANALYSIS_H_
#define MSCC_ANALYSIS_H_

#include <optional>
#include <string>
#include <vector>

#include "mscc/combinatorics.h"
#include "mscc/scheme.h"

namespace mscc {

// R_MN = C(K, t+1) / C(K, t) = (K - t) / (t + 1).
Rational MnRate(int K, int t);

// Baseline unpaired count for odd t, symmetric split:
// |C(K/2,(t+1)/2)^2 - 2 C(K/2,(t-1)/2) C(K/2,(t+3)/2)|.
BigInt LapUnpairedExact(int K, int t);
// LapUnpairedExact / C(K, t+1). Throws std::invalid_argument for even t or
// odd K.
Rational DeltaLapExact(int K, int t);

// Per-regime formulas for the improved pairing.
class RegimeFormulas {
 public:
  explicit RegimeFormulas(int regime);
  int regime() const { return regime_; }

  // Sum of class-cardinality differences of the regime's graphs.
  BigInt ExactUnpaired(int K, int t) const;
  // The single-fraction simplification times C(K/2-1, (t+1)/2)^2. Empty
  // when t = K - 1 (the fractions divide by K - t - 1).
  std::optional<Rational> SimplifiedUnpaired(int K, int t) const;
  // Large-K limit of n_i / n at fixed lambda.
  Rational AsymptoticRatio(const Rational& lambda) const;
  // Large-K limit of Delta' (= AsymptoticRatio / 3).
  Rational AsymptoticDelta(const Rational& lambda) const;

 private:
  int regime_;
};

struct ImprovedDelta {
  int regime = 0;
  BigInt n_i;
  Rational delta;                         // n_i / C(K, t+1)
  std::optional<Rational> n_simplified;   // redundant check of n_i
};

// Regime from lambda = t/K, then exact n_i and Delta'. Throws
// std::invalid_argument for even t or odd K.
ImprovedDelta DeltaImprovedExact(int K, int t);

// Rate of the three-server system: R_MN for kMn; R_MN / 2 for even t;
// (1/2 + Delta/6) R_MN for odd t with Delta of the scheme (kAuto takes the
// smaller of the two). Requires even K for kLap / kImproved / kAuto.
Rational RateTheorem(int K, int t, Scheme scheme);

enum class GridMode {
  kExact,       // t = K * lambda must be an odd integer, else skipped
  kNearestOdd,  // snap to the odd t in [1, K-1] nearest K * lambda
};

struct CurveRow {
  Rational lambda;  // t / K actually used
  int K = 0;
  int t = 0;
  int regime = 0;
  BigInt n_exact;
  BigInt ni_exact;
  std::optional<Rational> ni_over_n;  // empty when n = 0
  Rational asymptote;                 // large-K limit of n_i / n
  Rational delta;
  Rational delta_prime;
  std::optional<Rational> delta_ratio;  // Delta' / Delta
};

struct SkippedPoint {
  int K = 0;
  Rational lambda;
  std::string reason;
};

struct CurveTable {
  std::vector<CurveRow> rows;  // K-major, then lambda grid order
  std::vector<SkippedPoint> skipped;
};

CurveTable RatioCurves(const std::vector<int>& ks,
                       const std::vector<Rational>& lambdas, GridMode mode,
                       int jobs = 0);

struct AsymmetricRate {
  Rational rate;
  int terms_used = 0;
  int terms_skipped = 0;  // nonzero binomial but t - l outside [0, 2 K_B]
};

// sum_{l=0}^{t+1} C(K_A - K_B, l) R_T(2 K_B, t - l), evaluated as written,
// with R_T from RateTheorem(.., kImproved). Throws std::invalid_argument
// unless K_A > K_B >= 1.
AsymmetricRate AsymmetricPeakRate(int ka, int kb, int t);

// Normalized load of a server receiving m of the K requests:
// (C(K, t+1) - C(K - m, t+1)) / C(K, t).
Rational ServerLoad(int K, int t, int m);

// L data servers plus one parity: (L-1)(K-t) / (L(1+t)).
// Plus two MDS parities: (1/2 + (L-2)/(2L+4) Delta') (K-t)/(t+1), with
// Delta' = 0 for even t. Throws std::invalid_argument for L < 2.
Rational MultiServerRate(int L, int K, int t, bool two_parities);

}  // namespace mscc

#endif  // MSCC_ANALYSIS_H_
