// src/net.cc

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

#include "net.h"

#include <cmath>

namespace fhkit {

std::string ToString(ContextOrder order) {
  switch (order) {
    case ContextOrder::kMono: return "mono";
    case ContextOrder::kDi: return "di";
    case ContextOrder::kTri: return "tri";
  }
  throw DataError("bad context order");
}

ContextOrder ContextOrderFromString(const std::string& s) {
  if (s == "mono") return ContextOrder::kMono;
  if (s == "di") return ContextOrder::kDi;
  if (s == "tri") return ContextOrder::kTri;
  throw DataError("unknown context order: " + s);
}

void EncoderConfig::Validate() const {
  if (input_dim < 1) throw DataError("encoder input_dim must be >= 1");
  if (context_window < 0) throw DataError("negative context window");
  for (int h : hidden)
    if (h < 1) throw DataError("encoder hidden widths must be >= 1");
  if (dropout < 0 || dropout >= 1)
    throw DataError("dropout must lie in [0, 1)");
  if (nonlinearity != "relu" && nonlinearity != "tanh")
    throw DataError("unsupported nonlinearity: " + nonlinearity);
}

Eigen::MatrixXd& ParamSet::Get(const std::string& name) {
  for (auto& t : tensors)
    if (t.name == name) return t.value;
  throw DataError("no such parameter tensor: " + name);
}

const Eigen::MatrixXd& ParamSet::Get(const std::string& name) const {
  for (const auto& t : tensors)
    if (t.name == name) return t.value;
  throw DataError("no such parameter tensor: " + name);
}

bool ParamSet::Has(const std::string& name) const {
  for (const auto& t : tensors)
    if (t.name == name) return true;
  return false;
}

ParamSet ParamSet::ZerosLike() const {
  ParamSet out;
  out.tensors.reserve(tensors.size());
  for (const auto& t : tensors)
    out.tensors.push_back(
        {t.name, Eigen::MatrixXd::Zero(t.value.rows(), t.value.cols())});
  return out;
}

void ParamSet::SetZero() {
  for (auto& t : tensors) t.value.setZero();
}

void ParamSet::Add(const ParamSet& other, double scale) {
  if (other.tensors.size() != tensors.size())
    throw DataError("parameter set shape mismatch");
  for (size_t i = 0; i < tensors.size(); ++i)
    tensors[i].value += scale * other.tensors[i].value;
}

void ParamSet::Scale(double factor) {
  for (auto& t : tensors) t.value *= factor;
}

int64_t ParamSet::NumParameters() const {
  int64_t n = 0;
  for (const auto& t : tensors) n += t.value.size();
  return n;
}

Eigen::MatrixXd RowSoftmax(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double max = logits.row(r).maxCoeff();
    Eigen::ArrayXd e = (logits.row(r).array() - max).exp();
    out.row(r) = (e / e.sum()).matrix();
  }
  return out;
}

namespace {

void GlorotInit(Eigen::MatrixXd& w, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (Eigen::Index c = 0; c < w.cols(); ++c)
    for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = dist(rng);
}

Eigen::MatrixXd Affine(const Eigen::MatrixXd& input, const Eigen::MatrixXd& w,
                       const Eigen::MatrixXd& b) {
  return (input * w.transpose()).rowwise() + b.col(0).transpose();
}

}  // namespace

FactoredModel::FactoredModel(const PhonemeInventory& inv,
                             const EncoderConfig& config, ContextOrder order,
                             bool simplified_heads, uint64_t seed)
    : inventory_(inv), config_(config), order_(order), simplified_(simplified_heads) {
  config_.Validate();
  const int contexts = inventory_.ContextCount();
  const int states = inventory_.CenterStateCount();
  const int enc_out = config_.OutputDim();

  auto add = [&](const std::string& name, int rows, int cols) {
    params_.tensors.push_back({name, Eigen::MatrixXd::Zero(rows, cols)});
  };
  int in = config_.WindowedDim();
  for (size_t l = 0; l < config_.hidden.size(); ++l) {
    add(StrCat("enc.", l, ".w"), config_.hidden[l], in);
    add(StrCat("enc.", l, ".b"), config_.hidden[l], 1);
    in = config_.hidden[l];
  }
  add("head_left.w", contexts, enc_out);
  add("head_left.b", contexts, 1);
  const int center_in = enc_out + (CenterUsesLeft() ? kLeftEmbedDim : 0);
  add("head_center.w", states, center_in);
  add("head_center.b", states, 1);
  const int right_in =
      enc_out + (RightUsesContexts() ? kLeftEmbedDim + kCenterEmbedDim : 0);
  add("head_right.w", contexts, right_in);
  add("head_right.b", contexts, 1);
  if (CenterUsesLeft() || RightUsesContexts()) {
    add("embed_left.w", kLeftEmbedDim, contexts);
    add("embed_left.b", kLeftEmbedDim, 1);
  }
  if (RightUsesContexts()) {
    add("embed_center.w", kCenterEmbedDim, states);
    add("embed_center.b", kCenterEmbedDim, 1);
  }

  Rng rng(seed);
  for (auto& t : params_.tensors) {
    if (t.value.cols() > 1) GlorotInit(t.value, rng);  // biases stay zero
  }
}

Eigen::MatrixXd FactoredModel::Window(const Eigen::MatrixXd& features) const {
  if (features.cols() != config_.input_dim)
    throw DataError(StrCat("feature dim ", features.cols(), " != configured ",
                           config_.input_dim));
  const int T = static_cast<int>(features.rows());
  const int w = config_.context_window;
  const int d = config_.input_dim;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(T, config_.WindowedDim());
  for (int t = 0; t < T; ++t) {
    for (int k = -w; k <= w; ++k) {
      const int src = t + k;
      if (src < 0 || src >= T) continue;  // zero padding at the edges
      out.block(t, (k + w) * d, 1, d) = features.row(src);
    }
  }
  return out;
}

Eigen::MatrixXd FactoredModel::EmbedRows(const std::string& prefix,
                                         const std::vector<int>& labels) const {
  const Eigen::MatrixXd& w = params_.Get(prefix + ".w");
  const Eigen::MatrixXd& b = params_.Get(prefix + ".b");
  Eigen::MatrixXd out(labels.size(), w.rows());
  for (size_t t = 0; t < labels.size(); ++t) {
    if (labels[t] < 0 || labels[t] >= w.cols())
      throw DataError(StrCat("context label out of range: ", labels[t]));
    out.row(t) = (w.col(labels[t]) + b.col(0)).transpose();
  }
  return out;
}

ForwardCache FactoredModel::Forward(const Eigen::MatrixXd& features,
                                    const ContextInputs* context, bool train,
                                    uint64_t dropout_seed) const {
  const bool needs_context = CenterUsesLeft() || RightUsesContexts();
  if (needs_context) {
    if (context == nullptr)
      throw DataError("context inputs required for context-dependent heads");
    if (context->left.size() != static_cast<size_t>(features.rows()))
      throw DataError("context input length mismatch");
    if (RightUsesContexts() &&
        context->center_state.size() != static_cast<size_t>(features.rows()))
      throw DataError("center-state context length mismatch");
  }

  ForwardCache cache;
  cache.windowed = Window(features);
  const int layers = static_cast<int>(config_.hidden.size());
  cache.layer_pre.resize(layers);
  cache.layer_act.resize(layers);
  cache.dropout.resize(layers);
  const bool use_dropout = train && config_.dropout > 0.0;
  Rng rng(MixSeed(dropout_seed, 0x9d0fu));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const Eigen::MatrixXd* prev = &cache.windowed;
  for (int l = 0; l < layers; ++l) {
    cache.layer_pre[l] = Affine(*prev, params_.Get(StrCat("enc.", l, ".w")),
                                params_.Get(StrCat("enc.", l, ".b")));
    if (config_.nonlinearity == "relu")
      cache.layer_act[l] = cache.layer_pre[l].cwiseMax(0.0);
    else
      cache.layer_act[l] = cache.layer_pre[l].array().tanh().matrix();
    if (use_dropout) {
      const double keep = 1.0 - config_.dropout;
      cache.dropout[l].resize(cache.layer_act[l].rows(), cache.layer_act[l].cols());
      for (Eigen::Index r = 0; r < cache.dropout[l].rows(); ++r)
        for (Eigen::Index c = 0; c < cache.dropout[l].cols(); ++c)
          cache.dropout[l](r, c) = unit(rng) < keep ? 1.0 / keep : 0.0;
      cache.layer_act[l] = cache.layer_act[l].cwiseProduct(cache.dropout[l]);
    }
    prev = &cache.layer_act[l];
  }
  cache.encoded = *prev;

  cache.posteriors.left = RowSoftmax(Affine(cache.encoded, params_.Get("head_left.w"),
                                            params_.Get("head_left.b")));
  if (CenterUsesLeft()) {
    cache.contexts = *context;
    Eigen::MatrixXd emb = EmbedRows("embed_left", context->left);
    cache.center_in.resize(cache.encoded.rows(), cache.encoded.cols() + emb.cols());
    cache.center_in << cache.encoded, emb;
    cache.posteriors.center = RowSoftmax(Affine(
        cache.center_in, params_.Get("head_center.w"), params_.Get("head_center.b")));
  } else {
    cache.posteriors.center = RowSoftmax(Affine(
        cache.encoded, params_.Get("head_center.w"), params_.Get("head_center.b")));
  }
  if (RightUsesContexts()) {
    Eigen::MatrixXd emb_left = EmbedRows("embed_left", context->left);
    Eigen::MatrixXd emb_center = EmbedRows("embed_center", context->center_state);
    cache.right_in.resize(cache.encoded.rows(),
                          cache.encoded.cols() + emb_left.cols() + emb_center.cols());
    cache.right_in << cache.encoded, emb_left, emb_center;
    cache.posteriors.right = RowSoftmax(Affine(
        cache.right_in, params_.Get("head_right.w"), params_.Get("head_right.b")));
  } else {
    cache.posteriors.right = RowSoftmax(Affine(
        cache.encoded, params_.Get("head_right.w"), params_.Get("head_right.b")));
  }
  return cache;
}

PosteriorBatch FactoredModel::Posteriors(const Eigen::MatrixXd& features,
                                         const ContextInputs* context) const {
  return Forward(features, context, /*train=*/false).posteriors;
}

ParamSet FactoredModel::Backward(const ForwardCache& cache,
                                 const HeadGrads& dlogits) const {
  const int T = static_cast<int>(cache.windowed.rows());
  if (dlogits.left.rows() != T || dlogits.center.rows() != T ||
      dlogits.right.rows() != T ||
      dlogits.left.cols() != inventory_.ContextCount() ||
      dlogits.center.cols() != inventory_.CenterStateCount() ||
      dlogits.right.cols() != inventory_.ContextCount())
    throw DataError("head gradient shape mismatch");

  ParamSet grads = params_.ZerosLike();
  const int enc_dim = static_cast<int>(cache.encoded.cols());
  Eigen::MatrixXd denc = Eigen::MatrixXd::Zero(T, enc_dim);

  auto head_backward = [&](const std::string& head, const Eigen::MatrixXd& dlog,
                           const Eigen::MatrixXd& input) -> Eigen::MatrixXd {
    grads.Get(head + ".w") += dlog.transpose() * input;
    grads.Get(head + ".b").col(0) += dlog.colwise().sum().transpose();
    return dlog * params_.Get(head + ".w");
  };
  auto embed_backward = [&](const std::string& embed,
                            const std::vector<int>& labels,
                            const Eigen::MatrixXd& dout) {
    Eigen::MatrixXd& dw = grads.Get(embed + ".w");
    Eigen::MatrixXd& db = grads.Get(embed + ".b");
    for (int t = 0; t < T; ++t) {
      dw.col(labels[t]) += dout.row(t).transpose();
      db.col(0) += dout.row(t).transpose();
    }
  };

  denc += head_backward("head_left", dlogits.left, cache.encoded);

  if (CenterUsesLeft()) {
    Eigen::MatrixXd din = head_backward("head_center", dlogits.center, cache.center_in);
    denc += din.leftCols(enc_dim);
    embed_backward("embed_left", cache.contexts.left, din.rightCols(kLeftEmbedDim));
  } else {
    denc += head_backward("head_center", dlogits.center, cache.encoded);
  }

  if (RightUsesContexts()) {
    Eigen::MatrixXd din = head_backward("head_right", dlogits.right, cache.right_in);
    denc += din.leftCols(enc_dim);
    embed_backward("embed_left", cache.contexts.left,
                   din.middleCols(enc_dim, kLeftEmbedDim));
    embed_backward("embed_center", cache.contexts.center_state,
                   din.rightCols(kCenterEmbedDim));
  } else {
    denc += head_backward("head_right", dlogits.right, cache.encoded);
  }

  Eigen::MatrixXd d = denc;
  for (int l = static_cast<int>(config_.hidden.size()) - 1; l >= 0; --l) {
    if (cache.dropout[l].size() > 0) d = d.cwiseProduct(cache.dropout[l]);
    Eigen::MatrixXd dz;
    if (config_.nonlinearity == "relu") {
      dz = d.cwiseProduct(
          (cache.layer_pre[l].array() > 0.0).cast<double>().matrix());
    } else {
      Eigen::MatrixXd tanh_out = cache.layer_pre[l].array().tanh().matrix();
      dz = d.cwiseProduct(
          (1.0 - tanh_out.array().square()).matrix());
    }
    const Eigen::MatrixXd& input = l == 0 ? cache.windowed : cache.layer_act[l - 1];
    grads.Get(StrCat("enc.", l, ".w")) += dz.transpose() * input;
    grads.Get(StrCat("enc.", l, ".b")).col(0) += dz.colwise().sum().transpose();
    d = dz * params_.Get(StrCat("enc.", l, ".w"));
  }
  return grads;
}

Eigen::MatrixXd FactoredModel::Encode(const Eigen::MatrixXd& features) const {
  Eigen::MatrixXd act = Window(features);
  for (size_t l = 0; l < config_.hidden.size(); ++l) {
    act = Affine(act, params_.Get(StrCat("enc.", l, ".w")),
                 params_.Get(StrCat("enc.", l, ".b")));
    if (config_.nonlinearity == "relu")
      act = act.cwiseMax(0.0);
    else
      act = act.array().tanh().matrix();
  }
  return act;
}

Eigen::MatrixXd FactoredModel::LeftPosteriorsFromEncoded(
    const Eigen::MatrixXd& encoded) const {
  return RowSoftmax(
      Affine(encoded, params_.Get("head_left.w"), params_.Get("head_left.b")));
}

Eigen::MatrixXd FactoredModel::CenterPosteriorsFromEncoded(
    const Eigen::MatrixXd& encoded, int left_label) const {
  if (!CenterUsesLeft())
    return RowSoftmax(Affine(encoded, params_.Get("head_center.w"),
                             params_.Get("head_center.b")));
  std::vector<int> labels(encoded.rows(), left_label);
  Eigen::MatrixXd emb = EmbedRows("embed_left", labels);
  Eigen::MatrixXd input(encoded.rows(), encoded.cols() + emb.cols());
  input << encoded, emb;
  return RowSoftmax(
      Affine(input, params_.Get("head_center.w"), params_.Get("head_center.b")));
}

Eigen::MatrixXd FactoredModel::RightPosteriorsFromEncoded(
    const Eigen::MatrixXd& encoded, int left_label, int center_state) const {
  if (!RightUsesContexts())
    return RowSoftmax(Affine(encoded, params_.Get("head_right.w"),
                             params_.Get("head_right.b")));
  std::vector<int> left(encoded.rows(), left_label);
  std::vector<int> center(encoded.rows(), center_state);
  Eigen::MatrixXd emb_left = EmbedRows("embed_left", left);
  Eigen::MatrixXd emb_center = EmbedRows("embed_center", center);
  Eigen::MatrixXd input(encoded.rows(),
                        encoded.cols() + emb_left.cols() + emb_center.cols());
  input << encoded, emb_left, emb_center;
  return RowSoftmax(
      Affine(input, params_.Get("head_right.w"), params_.Get("head_right.b")));
}

FactoredModel InitFromPreviousStage(const FactoredModel& prev,
                                    ContextOrder new_order, uint64_t seed) {
  const int prev_order = static_cast<int>(prev.order());
  const int next_order = static_cast<int>(new_order);
  if (next_order != prev_order + 1)
    throw DataError(StrCat("multi-stage init requires adjacent orders, got ",
                           ToString(prev.order()), " -> ", ToString(new_order)));
  if (prev.simplified_heads() && prev.order() != ContextOrder::kMono)
    throw DataError("simplified source model must be monophone");

  FactoredModel next(prev.inventory(), prev.encoder_config(), new_order,
                     /*simplified_heads=*/false, seed);
  const int enc_dim = prev.encoder_config().OutputDim();
  for (const auto& t : prev.params().tensors) {
    Eigen::MatrixXd& dst = next.params().Get(t.name);
    if (dst.rows() == t.value.rows() && dst.cols() == t.value.cols()) {
      dst = t.value;
    } else {
      // Head gaining embedding inputs: encoder columns carry over, the new
      // embedding columns keep their fresh initialization.
      dst.leftCols(enc_dim) = t.value.leftCols(enc_dim);
    }
  }
  return next;
}

}  // namespace fhkit
