// src/optimizer.h

// Copyright 2026  fhkit authors
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

#ifndef FHKIT_OPTIMIZER_H_
#define FHKIT_OPTIMIZER_H_

#include "net.h"

namespace fhkit {

// Adam with Nesterov-style lookahead on the first moment.
class NadamOptimizer {
 public:
  NadamOptimizer(const ParamSet& shape, double beta1 = 0.9,
                 double beta2 = 0.999, double epsilon = 1e-8)
      : beta1_(beta1),
        beta2_(beta2),
        epsilon_(epsilon),
        m_(shape.ZerosLike()),
        v_(shape.ZerosLike()) {}

  void Step(ParamSet& params, const ParamSet& grads, double lr);
  void Reset();

 private:
  double beta1_, beta2_, epsilon_;
  int64_t step_ = 0;
  ParamSet m_, v_;
};

// Zero-mean Gaussian noise of the given variance on every gradient entry.
void AddGradientNoise(ParamSet& grads, double variance, Rng& rng);

}  // namespace fhkit

#endif  // FHKIT_OPTIMIZER_H_
