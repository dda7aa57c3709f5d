// src/lattice.h

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

#ifndef FHKIT_LATTICE_H_
#define FHKIT_LATTICE_H_

#include <Eigen/Dense>

#include "graph.h"

namespace fhkit {

// All lattice arithmetic runs in double-precision log space.

struct ForwardBackwardResult {
  Eigen::MatrixXd occupancy;  // T x nodes, rows sum to 1
  double log_likelihood = kLogZero;
};

// Posterior state occupancies over all valid start->final paths of length T.
// emissions: T x nodes log scores. Throws NumericalError when no path of
// length T carries probability mass (infeasible T or underflow).
ForwardBackwardResult ForwardBackward(const StateGraphCore& core,
                                      const Eigen::MatrixXd& emissions);

struct ViterbiResult {
  std::vector<int> path;  // node id per frame
  double score = kLogZero;
};

// Best-scoring path; arc weight = am + lm_scale * lm, terminal weights
// scaled the same way. Exact ties resolve to the lower node id, scanning
// from the last frame backwards.
ViterbiResult ViterbiPath(const StateGraphCore& core,
                          const Eigen::MatrixXd& emissions,
                          double lm_scale = 1.0, double beam = 0.0);

}  // namespace fhkit

#endif  // FHKIT_LATTICE_H_
