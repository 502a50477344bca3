// wordrec/common/log-math.h

// Copyright 2026 The Wordrec Authors.
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

#ifndef WORDREC_COMMON_LOG_MATH_H_
#define WORDREC_COMMON_LOG_MATH_H_

#include <cmath>
#include <limits>

namespace wordrec {

// Log-space zero; exp(kLogZero) == 0.
constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)), stable for large negative magnitudes.
inline double LogSumExp(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

}  // namespace wordrec

#endif  // WORDREC_COMMON_LOG_MATH_H_
