// Copyright 2026 The lergm-stein Authors.
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

#ifndef LERGM_LINK_HPP_
#define LERGM_LINK_HPP_

#include <algorithm>
#include <cmath>

namespace lergm {

// sigma(t) = 1 / (1 + e^{-t}), evaluated without overflow.
inline double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// Sigma(t) = log(1 + e^t) = max(t, 0) + log1p(e^{-|t|}).
inline double softplus(double t) {
  return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t)));
}

struct LinkValues {
  double sigma;       // sigma(t)
  double softplus;    // Sigma(t), the primitive of sigma
  double dsigma;      // sigma'(t) = sigma (1 - sigma), at most 1/4
  double d2sigma;     // sigma''(t) = sigma (1 - sigma) (1 - 2 sigma)
};

inline LinkValues link_functions(double t) {
  const double s = sigmoid(t);
  // 1 - sigma(t) = sigma(-t) keeps precision in the upper tail.
  const double one_minus = sigmoid(-t);
  const double ds = s * one_minus;
  return {s, softplus(t), ds, ds * (one_minus - s)};
}

}  // namespace lergm

#endif  // LERGM_LINK_HPP_
