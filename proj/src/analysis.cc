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

#include "mscc/analysis.h"

#include <stdexcept>

#include "mscc/pair_engine.h"
#include "mscc/parallel.h"

namespace mscc {

namespace {

Rational Abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }
BigInt Abs(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

void RequireOddT(int K, int t) {
  if (K % 2 != 0) throw std::invalid_argument("symmetric split needs even K");
  if (t % 2 == 0) throw std::invalid_argument("t must be odd");
  if (t < 1 || t > K - 1) throw std::invalid_argument("t outside [1, K-1]");
}

}  // namespace

Rational MnRate(int K, int t) { return Rational(K - t, t + 1); }

BigInt LapUnpairedExact(int K, int t) {
  RequireOddT(K, t);
  const int h = K / 2;
  const BigInt mid = BigBinomial(h, (t + 1) / 2);
  return Abs(BigInt(mid * mid -
                    2 * BigBinomial(h, (t - 1) / 2) * BigBinomial(h, (t + 3) / 2)));
}

Rational DeltaLapExact(int K, int t) {
  return Rational(LapUnpairedExact(K, t), BigBinomial(K, t + 1));
}

RegimeFormulas::RegimeFormulas(int regime) : regime_(regime) {
  if (regime < 1 || regime > 3) {
    throw std::invalid_argument("regime must be 1, 2 or 3");
  }
}

BigInt RegimeFormulas::ExactUnpaired(int K, int t) const {
  RequireOddT(K, t);
  return LayoutUnpaired(K / 2, K / 2, t,
                        MiddleLayout(Scheme::kImproved, t, regime_));
}

std::optional<Rational> RegimeFormulas::SimplifiedUnpaired(int K, int t) const {
  RequireOddT(K, t);
  if (K - t - 1 == 0) return std::nullopt;
  const BigInt c = BigBinomial(K / 2 - 1, (t + 1) / 2);
  const Rational scale(c * c);
  const BigInt k = K;
  const BigInt tt = t;
  const BigInt u = k - tt - 1;  // K - t - 1
  switch (regime_) {
    case 1: {
      const Rational first(Abs(BigInt(k - 3 * tt - 3)), u);
      const Rational second(
          (tt + 1) * (tt + 1) * (k - tt + 1) * (tt + 3) +
              8 * k * (tt + 1) * u,
          u * u * (tt + 3) * (k - tt + 1));
      return (first + second) * scale;
    }
    case 2: {
      const Rational first(k * Abs(BigInt(2 * tt + 2 - k)), u * u);
      const Rational second =
          Rational(tt + 1, u) * Rational(8 * k, (tt + 3) * (k - tt + 1));
      return (first + second) * scale;
    }
    default: {
      // The intermediate form; the fully expanded one does not reduce to
      // the class sums.
      const Rational x(tt + 1, u);
      const Rational y((tt + 1) * (tt - 1) * (k - tt - 3),
                       (tt + 3) * (k - tt + 1) * u);
      return (Rational(1) + x * Abs(Rational(x - 2)) + 2 * Abs(Rational(x - y))) *
             scale;
    }
  }
}

Rational RegimeFormulas::AsymptoticRatio(const Rational& lambda) const {
  const Rational one(1);
  switch (regime_) {
    case 1:
      return Abs(Rational(one - 3 * lambda)) * (one - lambda) + lambda * lambda;
    case 2:
      return Abs(Rational(2 * lambda - one));
    default:
      return (one - lambda) * (one - lambda) +
             lambda * Abs(Rational(3 * lambda - 2));
  }
}

Rational RegimeFormulas::AsymptoticDelta(const Rational& lambda) const {
  return AsymptoticRatio(lambda) / 3;
}

ImprovedDelta DeltaImprovedExact(int K, int t) {
  RequireOddT(K, t);
  ImprovedDelta out;
  out.regime = SelectRegime(Rational(t, K));
  const RegimeFormulas formulas(out.regime);
  out.n_i = formulas.ExactUnpaired(K, t);
  out.delta = Rational(out.n_i, BigBinomial(K, t + 1));
  out.n_simplified = formulas.SimplifiedUnpaired(K, t);
  return out;
}

Rational RateTheorem(int K, int t, Scheme scheme) {
  const Rational r_mn = MnRate(K, t);
  if (scheme == Scheme::kMn) return r_mn;
  if (K % 2 != 0) throw std::invalid_argument("symmetric split needs even K");
  if (t % 2 == 0) return r_mn / 2;
  Rational delta;
  switch (scheme) {
    case Scheme::kLap:
      delta = DeltaLapExact(K, t);
      break;
    case Scheme::kImproved:
      delta = DeltaImprovedExact(K, t).delta;
      break;
    default: {
      const Rational lap = DeltaLapExact(K, t);
      const Rational improved = DeltaImprovedExact(K, t).delta;
      delta = improved < lap ? improved : lap;
    }
  }
  return (Rational(1, 2) + delta / 6) * r_mn;
}

CurveTable RatioCurves(const std::vector<int>& ks,
                       const std::vector<Rational>& lambdas, GridMode mode,
                       int jobs) {
  struct Point {
    int K;
    Rational lambda;
    int t = 0;
    std::string reason;
  };
  std::vector<Point> points;
  for (int K : ks) {
    for (const Rational& lambda : lambdas) {
      Point p{K, lambda, 0, {}};
      if (K < 2 || K % 2 != 0 || K > kMaxUsers) {
        p.reason = "K must be even and in [2, 64]";
      } else if (lambda <= 0 || lambda >= 1) {
        p.reason = "lambda outside (0, 1)";
      } else if (mode == GridMode::kExact) {
        const Rational t = lambda * K;
        if (boost::multiprecision::denominator(t) != 1) {
          p.reason = "t = K*lambda = " + ToString(t) + " is not an integer";
        } else {
          p.t = static_cast<int>(boost::multiprecision::numerator(t));
          if (p.t % 2 == 0) p.reason = "t = " + std::to_string(p.t) + " is even";
        }
      } else {
        int best = -1;
        for (int t = 1; t <= K - 1; t += 2) {
          if (best < 0 || Abs(Rational(Rational(t, K) - lambda)) <
                              Abs(Rational(Rational(best, K) - lambda))) {
            best = t;
          }
        }
        p.t = best;
      }
      points.push_back(std::move(p));
    }
  }

  std::vector<std::optional<CurveRow>> rows(points.size());
  ParallelFor(points.size(), jobs, [&](std::size_t i) {
    const Point& p = points[i];
    if (!p.reason.empty()) return;
    CurveRow row;
    row.K = p.K;
    row.t = p.t;
    row.lambda = Rational(p.t, p.K);
    const ImprovedDelta improved = DeltaImprovedExact(p.K, p.t);
    row.regime = improved.regime;
    row.n_exact = LapUnpairedExact(p.K, p.t);
    row.ni_exact = improved.n_i;
    row.asymptote = RegimeFormulas(row.regime).AsymptoticRatio(row.lambda);
    row.delta = DeltaLapExact(p.K, p.t);
    row.delta_prime = improved.delta;
    if (row.n_exact != 0) {
      row.ni_over_n = Rational(row.ni_exact, row.n_exact);
      row.delta_ratio = row.delta_prime / row.delta;
    }
    rows[i] = std::move(row);
  });

  CurveTable table;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (rows[i]) {
      table.rows.push_back(std::move(*rows[i]));
    } else {
      table.skipped.push_back({points[i].K, points[i].lambda, points[i].reason});
    }
  }
  return table;
}

AsymmetricRate AsymmetricPeakRate(int ka, int kb, int t) {
  if (kb < 1 || ka <= kb) {
    throw std::invalid_argument(
        "asymmetric rate needs K_A > K_B >= 1; use the symmetric path");
  }
  AsymmetricRate out;
  const int k2 = 2 * kb;
  for (int l = 0; l <= t + 1; ++l) {
    const BigInt coeff = BigBinomial(ka - kb, l);
    if (coeff == 0) continue;
    const int tl = t - l;
    if (tl < 0 || tl > k2) {
      ++out.terms_skipped;
      continue;
    }
    Rational r;
    if (tl == k2) {
      r = 0;
    } else if (tl == 0) {
      r = MnRate(k2, 0) / 2;
    } else {
      r = RateTheorem(k2, tl, Scheme::kImproved);
    }
    out.rate += Rational(coeff) * r;
    ++out.terms_used;
  }
  return out;
}

Rational ServerLoad(int K, int t, int m) {
  return Rational(BigBinomial(K, t + 1) - BigBinomial(K - m, t + 1),
                  BigBinomial(K, t));
}

Rational MultiServerRate(int L, int K, int t, bool two_parities) {
  if (L < 2) throw std::invalid_argument("need at least two data servers");
  if (!two_parities) return Rational((L - 1) * (K - t), L * (1 + t));
  Rational delta = 0;
  if (t % 2 == 1) delta = DeltaImprovedExact(K, t).delta;
  return (Rational(1, 2) + Rational(L - 2, 2 * L + 4) * delta) *
         Rational(K - t, t + 1);
}

}  // namespace mscc
