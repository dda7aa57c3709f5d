// src/net.h

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

#ifndef FHKIT_NET_H_
#define FHKIT_NET_H_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "inventory.h"

namespace fhkit {

enum class ContextOrder { kMono = 1, kDi = 2, kTri = 3 };

std::string ToString(ContextOrder order);
ContextOrder ContextOrderFromString(const std::string& s);

// Windowed feedforward front end standing in for a recurrent encoder; the
// factored heads only see its per-frame output, so the encoder is swappable.
struct EncoderConfig {
  int input_dim = 0;
  int context_window = 4;  // frames on each side
  std::vector<int> hidden = {256, 256};
  std::string nonlinearity = "relu";
  double dropout = 0.1;

  void Validate() const;
  int WindowedDim() const { return input_dim * (2 * context_window + 1); }
  int OutputDim() const { return hidden.empty() ? WindowedDim() : hidden.back(); }
};

// One row per frame; every row is a normalized distribution.
struct PosteriorBatch {
  Eigen::MatrixXd left;    // T x (|P|+1)
  Eigen::MatrixXd center;  // T x (3|P|+1)
  Eigen::MatrixXd right;   // T x (|P|+1)
};

// Loss gradients w.r.t. pre-softmax logits, same shapes as PosteriorBatch.
struct HeadGrads {
  Eigen::MatrixXd left;
  Eigen::MatrixXd center;
  Eigen::MatrixXd right;
};

// Teacher-forced context labels for the dependent heads.
struct ContextInputs {
  std::vector<int> left;          // label per frame, in [0, |P|+1)
  std::vector<int> center_state;  // label per frame, in [0, 3|P|+1)
};

struct Tensor {
  std::string name;
  Eigen::MatrixXd value;
};

// Flat named-parameter container; doubles as the gradient holder.
struct ParamSet {
  std::vector<Tensor> tensors;

  Eigen::MatrixXd& Get(const std::string& name);
  const Eigen::MatrixXd& Get(const std::string& name) const;
  bool Has(const std::string& name) const;
  ParamSet ZerosLike() const;
  void SetZero();
  void Add(const ParamSet& other, double scale = 1.0);
  void Scale(double factor);
  int64_t NumParameters() const;
};

struct ForwardCache {
  Eigen::MatrixXd windowed;                 // T x WindowedDim
  std::vector<Eigen::MatrixXd> layer_pre;   // z per hidden layer
  std::vector<Eigen::MatrixXd> layer_act;   // after nonlinearity (+ dropout)
  std::vector<Eigen::MatrixXd> dropout;     // keep-scale masks; empty when off
  Eigen::MatrixXd encoded;                  // T x H
  Eigen::MatrixXd center_in;                // only when center head conditioned
  Eigen::MatrixXd right_in;                 // only when right head conditioned
  ContextInputs contexts;
  PosteriorBatch posteriors;
};

class FactoredModel {
 public:
  static constexpr int kLeftEmbedDim = 10;
  static constexpr int kCenterEmbedDim = 30;

  FactoredModel(const PhonemeInventory& inv, const EncoderConfig& config,
                ContextOrder order, bool simplified_heads, uint64_t seed);

  const PhonemeInventory& inventory() const { return inventory_; }
  const EncoderConfig& encoder_config() const { return config_; }
  ContextOrder order() const { return order_; }
  bool simplified_heads() const { return simplified_; }
  // Effective context wiring of the heads.
  bool CenterUsesLeft() const { return !simplified_ && order_ >= ContextOrder::kDi; }
  bool RightUsesContexts() const {
    return !simplified_ && order_ == ContextOrder::kTri;
  }

  ParamSet& params() { return params_; }
  const ParamSet& params() const { return params_; }

  // context may be null for unconditioned wirings. dropout_seed selects the
  // per-call mask stream; unused when train is false or dropout is 0.
  ForwardCache Forward(const Eigen::MatrixXd& features,
                       const ContextInputs* context, bool train,
                       uint64_t dropout_seed = 0) const;
  PosteriorBatch Posteriors(const Eigen::MatrixXd& features,
                            const ContextInputs* context = nullptr) const;
  // Exact reverse-mode gradients for the given logit gradients.
  ParamSet Backward(const ForwardCache& cache, const HeadGrads& dlogits) const;

  // Decode-side entry points: one encoder pass, then head evaluations for
  // explicit context values.
  Eigen::MatrixXd Encode(const Eigen::MatrixXd& features) const;
  Eigen::MatrixXd LeftPosteriorsFromEncoded(const Eigen::MatrixXd& encoded) const;
  Eigen::MatrixXd CenterPosteriorsFromEncoded(const Eigen::MatrixXd& encoded,
                                              int left_label) const;
  Eigen::MatrixXd RightPosteriorsFromEncoded(const Eigen::MatrixXd& encoded,
                                             int left_label,
                                             int center_state) const;

  int ContextCount() const { return inventory_.ContextCount(); }
  int CenterStateCount() const { return inventory_.CenterStateCount(); }

 private:
  Eigen::MatrixXd Window(const Eigen::MatrixXd& features) const;
  Eigen::MatrixXd EmbedRows(const std::string& prefix,
                            const std::vector<int>& labels) const;

  PhonemeInventory inventory_;
  EncoderConfig config_;
  ContextOrder order_;
  bool simplified_;
  ParamSet params_;
};

// Parameters of the (n-1)-phone model seed the n-phone model: shared tensors
// are copied bit-exactly, newly introduced inputs and heads are freshly
// initialized. Only adjacent order steps are allowed.
FactoredModel InitFromPreviousStage(const FactoredModel& prev,
                                    ContextOrder new_order, uint64_t seed);

Eigen::MatrixXd RowSoftmax(const Eigen::MatrixXd& logits);

}  // namespace fhkit

#endif  // FHKIT_NET_H_
