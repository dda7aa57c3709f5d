// src/decode.h

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

#ifndef FHKIT_DECODE_H_
#define FHKIT_DECODE_H_

#include <string>
#include <vector>

#include "lattice.h"
#include "net.h"
#include "prior.h"

namespace fhkit {

// Factored decision rule: acoustic scale fixed at one, separate prior
// scales per factor.
struct DecisionRuleConfig {
  ContextOrder order = ContextOrder::kMono;
  double beta_left = 0.3;
  double beta_center = 0.7;
  double beta_right = 0.4;
  double lm_scale = 1.0;
  double beam = 0.0;  // 0: exact search

  void Validate() const;
};

// The rule must match the head wiring: mono needs an unconditioned center
// head, di a left-conditioned center head, tri additionally the
// context-conditioned right head. Throws DataError otherwise.
void CheckRuleAgainstModel(const DecisionRuleConfig& cfg,
                           const FactoredModel& model);

// Log score of one state class under the decision rule, given head
// posteriors evaluated with the matching context wiring.
double DecisionRuleScore(const PosteriorBatch& heads, int frame,
                         const PriorState& priors,
                         const DecisionRuleConfig& cfg,
                         const FactoredIndices& fi);

// Per-frame per-node decision-rule scores over a graph. Dependent heads are
// evaluated once per context value present in the graph.
Eigen::MatrixXd ScoreFrames(const FactoredModel& model,
                            const PriorState& priors,
                            const DecisionRuleConfig& cfg,
                            const Eigen::MatrixXd& features,
                            const StateGraphCore& core);

struct DecodeResult {
  std::vector<std::string> words;
  double score = kLogZero;
  std::vector<int> node_path;  // frame-level backtrace
};

DecodeResult Decode(const FactoredModel& model, const PriorState& priors,
                    const DecodingGraph& graph, const DecisionRuleConfig& cfg,
                    const Eigen::MatrixXd& features);

// Recognition priors: frame average of the head posteriors over a corpus
// subset, dependent heads teacher-forced with aligned contexts.
PriorState EstimatePriorsByAveraging(
    const FactoredModel& model,
    const std::vector<const Eigen::MatrixXd*>& features,
    const std::vector<const std::vector<uint32_t>*>& alignments);

}  // namespace fhkit

#endif  // FHKIT_DECODE_H_
