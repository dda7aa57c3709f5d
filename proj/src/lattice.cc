// src/lattice.cc

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

#include "lattice.h"

#include <cmath>

namespace fhkit {

namespace {

void CheckEmissions(const StateGraphCore& core, const Eigen::MatrixXd& emissions) {
  if (emissions.rows() < 1)
    throw DataError("emission matrix needs at least one frame");
  if (emissions.cols() != core.NumNodes())
    throw DataError(StrCat("emission matrix has ", emissions.cols(),
                           " columns for ", core.NumNodes(), " graph nodes"));
  // -inf emissions are legal (hard zeros); NaN/+inf are not.
  for (Eigen::Index i = 0; i < emissions.size(); ++i) {
    const double v = emissions.data()[i];
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
      throw NumericalError("non-finite emission score");
  }
}

}  // namespace

ForwardBackwardResult ForwardBackward(const StateGraphCore& core,
                                      const Eigen::MatrixXd& emissions) {
  CheckEmissions(core, emissions);
  const int T = static_cast<int>(emissions.rows());
  const int n = core.NumNodes();

  Eigen::MatrixXd alpha(T, n), beta(T, n);
  alpha.setConstant(kLogZero);
  beta.setConstant(kLogZero);

  for (const auto& s : core.start)
    alpha(0, s.node) = s.lm_logprob + emissions(0, s.node);
  for (int t = 1; t < T; ++t) {
    for (const auto& arc : core.arcs) {
      const double a = alpha(t - 1, arc.from);
      if (a == kLogZero) continue;
      alpha(t, arc.to) =
          LogAdd(alpha(t, arc.to), a + arc.am_logprob + arc.lm_logprob);
    }
    for (int q = 0; q < n; ++q)
      if (alpha(t, q) != kLogZero) alpha(t, q) += emissions(t, q);
  }

  double log_likelihood = kLogZero;
  for (const auto& f : core.finals)
    log_likelihood = LogAdd(log_likelihood, alpha(T - 1, f.node) + f.lm_logprob);
  if (log_likelihood == kLogZero)
    throw NumericalError(
        StrCat("no probability mass over paths of length ", T,
               " (infeasible frame count or underflow)"));

  for (const auto& f : core.finals)
    beta(T - 1, f.node) = LogAdd(beta(T - 1, f.node), f.lm_logprob);
  for (int t = T - 2; t >= 0; --t) {
    for (const auto& arc : core.arcs) {
      const double b = beta(t + 1, arc.to);
      if (b == kLogZero) continue;
      beta(t, arc.from) =
          LogAdd(beta(t, arc.from),
                 b + arc.am_logprob + arc.lm_logprob + emissions(t + 1, arc.to));
    }
  }

  ForwardBackwardResult result;
  result.log_likelihood = log_likelihood;
  result.occupancy.resize(T, n);
  for (int t = 0; t < T; ++t) {
    for (int q = 0; q < n; ++q) {
      const double lg = alpha(t, q) + beta(t, q) - log_likelihood;
      result.occupancy(t, q) = lg == kLogZero ? 0.0 : std::exp(lg);
    }
  }
  return result;
}

ViterbiResult ViterbiPath(const StateGraphCore& core,
                          const Eigen::MatrixXd& emissions, double lm_scale,
                          double beam) {
  CheckEmissions(core, emissions);
  const int T = static_cast<int>(emissions.rows());
  const int n = core.NumNodes();

  Eigen::MatrixXd score(T, n);
  Eigen::MatrixXi backpointer(T, n);
  score.setConstant(kLogZero);
  backpointer.setConstant(-1);

  for (const auto& s : core.start)
    score(0, s.node) = lm_scale * s.lm_logprob + emissions(0, s.node);
  for (int t = 1; t < T; ++t) {
    for (const auto& arc : core.arcs) {
      const double prev = score(t - 1, arc.from);
      if (prev == kLogZero) continue;
      const double cand = prev + arc.am_logprob + lm_scale * arc.lm_logprob;
      double& best = score(t, arc.to);
      int& bp = backpointer(t, arc.to);
      if (cand > best || (cand == best && arc.from < bp)) {
        best = cand;
        bp = arc.from;
      }
    }
    double frame_best = kLogZero;
    for (int q = 0; q < n; ++q) {
      if (score(t, q) != kLogZero) score(t, q) += emissions(t, q);
      frame_best = std::max(frame_best, score(t, q));
    }
    if (beam > 0 && frame_best != kLogZero) {
      for (int q = 0; q < n; ++q)
        if (score(t, q) < frame_best - beam) score(t, q) = kLogZero;
    }
  }

  int best_final = -1;
  double best_score = kLogZero;
  for (const auto& f : core.finals) {
    const double cand = score(T - 1, f.node) + lm_scale * f.lm_logprob;
    if (cand == kLogZero) continue;
    if (cand > best_score || (cand == best_score && f.node < best_final)) {
      best_score = cand;
      best_final = f.node;
    }
  }
  if (best_final < 0)
    throw NumericalError(
        StrCat("no feasible path of length ", T, " through the graph"));

  ViterbiResult result;
  result.score = best_score;
  result.path.resize(T);
  result.path[T - 1] = best_final;
  for (int t = T - 1; t > 0; --t)
    result.path[t - 1] = backpointer(t, result.path[t]);
  return result;
}

}  // namespace fhkit
