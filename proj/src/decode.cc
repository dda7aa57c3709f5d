// src/decode.cc

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

#include "decode.h"

#include <cmath>
#include <map>

#include "fullsum.h"

namespace fhkit {

void DecisionRuleConfig::Validate() const {
  if (beta_left < 0 || beta_center < 0 || beta_right < 0)
    throw DataError("prior scales must be non-negative");
  if (lm_scale < 0) throw DataError("lm scale must be non-negative");
  if (beam < 0) throw DataError("beam must be non-negative");
}

void CheckRuleAgainstModel(const DecisionRuleConfig& cfg,
                           const FactoredModel& model) {
  cfg.Validate();
  switch (cfg.order) {
    case ContextOrder::kMono:
      if (model.CenterUsesLeft())
        throw DataError(
            "monophone decision rule needs an unconditioned center head; "
            "model is context dependent");
      return;
    case ContextOrder::kDi:
      if (!model.CenterUsesLeft())
        throw DataError("diphone decision rule needs a left-conditioned "
                        "center head (context-order mismatch)");
      return;
    case ContextOrder::kTri:
      if (!model.RightUsesContexts())
        throw DataError("triphone decision rule needs context-conditioned "
                        "heads (context-order mismatch)");
      return;
  }
  throw DataError("bad decision rule order");
}

namespace {

inline double FlooredLog(double p) {
  return std::log(std::max(p, kPosteriorFloor));
}

}  // namespace

double DecisionRuleScore(const PosteriorBatch& heads, int frame,
                         const PriorState& priors,
                         const DecisionRuleConfig& cfg,
                         const FactoredIndices& fi) {
  double score = FlooredLog(heads.center(frame, fi.center_state)) -
                 cfg.beta_center * std::log(priors.center(fi.center_state));
  if (cfg.order >= ContextOrder::kDi) {
    score += FlooredLog(heads.left(frame, fi.left)) -
             cfg.beta_left * std::log(priors.left(fi.left));
  }
  if (cfg.order == ContextOrder::kTri) {
    score += FlooredLog(heads.right(frame, fi.right)) -
             cfg.beta_right * std::log(priors.right(fi.right));
  }
  return score;
}

Eigen::MatrixXd ScoreFrames(const FactoredModel& model,
                            const PriorState& priors,
                            const DecisionRuleConfig& cfg,
                            const Eigen::MatrixXd& features,
                            const StateGraphCore& core) {
  CheckRuleAgainstModel(cfg, model);
  const int T = static_cast<int>(features.rows());
  const Eigen::MatrixXd encoded = model.Encode(features);

  Eigen::MatrixXd left_post;
  if (cfg.order >= ContextOrder::kDi)
    left_post = model.LeftPosteriorsFromEncoded(encoded);

  // Dependent heads once per context value present in the graph.
  std::map<int, Eigen::MatrixXd> center_by_left;
  std::map<std::pair<int, int>, Eigen::MatrixXd> right_by_ctx;
  for (const auto& node : core.nodes) {
    const FactoredIndices& fi = node.factored;
    if (!center_by_left.count(fi.left))
      center_by_left.emplace(fi.left,
                             model.CenterPosteriorsFromEncoded(encoded, fi.left));
    if (cfg.order == ContextOrder::kTri) {
      const auto key = std::make_pair(fi.left, fi.center_state);
      if (!right_by_ctx.count(key))
        right_by_ctx.emplace(key, model.RightPosteriorsFromEncoded(
                                      encoded, fi.left, fi.center_state));
    }
  }

  Eigen::MatrixXd scores(T, core.NumNodes());
  for (int q = 0; q < core.NumNodes(); ++q) {
    const FactoredIndices& fi = core.nodes[q].factored;
    const Eigen::MatrixXd& center = center_by_left.at(fi.left);
    const double center_prior =
        cfg.beta_center * std::log(priors.center(fi.center_state));
    for (int t = 0; t < T; ++t)
      scores(t, q) = FlooredLog(center(t, fi.center_state)) - center_prior;
    if (cfg.order >= ContextOrder::kDi) {
      const double left_prior = cfg.beta_left * std::log(priors.left(fi.left));
      for (int t = 0; t < T; ++t)
        scores(t, q) += FlooredLog(left_post(t, fi.left)) - left_prior;
    }
    if (cfg.order == ContextOrder::kTri) {
      const Eigen::MatrixXd& right =
          right_by_ctx.at(std::make_pair(fi.left, fi.center_state));
      const double right_prior =
          cfg.beta_right * std::log(priors.right(fi.right));
      for (int t = 0; t < T; ++t)
        scores(t, q) += FlooredLog(right(t, fi.right)) - right_prior;
    }
  }
  return scores;
}

DecodeResult Decode(const FactoredModel& model, const PriorState& priors,
                    const DecodingGraph& graph, const DecisionRuleConfig& cfg,
                    const Eigen::MatrixXd& features) {
  Eigen::MatrixXd scores = ScoreFrames(model, priors, cfg, features, graph.core);
  ViterbiResult vit = ViterbiPath(graph.core, scores, cfg.lm_scale, cfg.beam);

  DecodeResult result;
  result.score = vit.score;
  result.node_path = std::move(vit.path);
  for (size_t t = 0; t < result.node_path.size(); ++t) {
    const GraphNode& node = graph.core.nodes[result.node_path[t]];
    if (node.word < 0 || node.word_pos != 0) continue;
    if (t > 0 && result.node_path[t - 1] == result.node_path[t]) continue;
    result.words.push_back(graph.vocab[node.word]);
  }
  return result;
}

PriorState EstimatePriorsByAveraging(
    const FactoredModel& model,
    const std::vector<const Eigen::MatrixXd*>& features,
    const std::vector<const std::vector<uint32_t>*>& alignments) {
  if (features.empty()) throw DataError("prior estimation needs a non-empty subset");
  const PhonemeInventory& inv = model.inventory();
  const bool conditioned = model.CenterUsesLeft() || model.RightUsesContexts();
  if (conditioned && alignments.size() != features.size())
    throw DataError("context-dependent heads need aligned contexts for priors");

  Eigen::VectorXd sum_left = Eigen::VectorXd::Zero(inv.ContextCount());
  Eigen::VectorXd sum_center = Eigen::VectorXd::Zero(inv.CenterStateCount());
  Eigen::VectorXd sum_right = Eigen::VectorXd::Zero(inv.ContextCount());
  int64_t frames = 0;
  for (size_t i = 0; i < features.size(); ++i) {
    ContextInputs ctx;
    if (conditioned) {
      const std::vector<uint32_t>& labels = *alignments[i];
      if (labels.size() != static_cast<size_t>(features[i]->rows()))
        throw DataError("alignment length mismatch in prior estimation");
      ctx.left.resize(labels.size());
      ctx.center_state.resize(labels.size());
      for (size_t t = 0; t < labels.size(); ++t) {
        const FactoredIndices fi = inv.ToFactored(inv.Unpack(labels[t]));
        ctx.left[t] = fi.left;
        ctx.center_state[t] = fi.center_state;
      }
    }
    PosteriorBatch post =
        model.Posteriors(*features[i], conditioned ? &ctx : nullptr);
    sum_left += post.left.colwise().sum().transpose();
    sum_center += post.center.colwise().sum().transpose();
    sum_right += post.right.colwise().sum().transpose();
    frames += post.left.rows();
  }
  PriorState priors;
  priors.left = NormalizeFloored(sum_left / static_cast<double>(frames));
  priors.center = NormalizeFloored(sum_center / static_cast<double>(frames));
  priors.right = NormalizeFloored(sum_right / static_cast<double>(frames));
  return priors;
}

}  // namespace fhkit
