// src/config.cc

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

#include "config.h"

#include <fstream>

#include <nlohmann/json.hpp>

namespace fhkit {

using nlohmann::json;

namespace {

json ToJsonTree(const TrainConfig& c) {
  json j;
  j["ce"] = {{"lr", c.ce.lr},
             {"newbob_decay", c.ce.newbob_decay},
             {"lr_min", c.ce.lr_min},
             {"grad_noise", c.ce.grad_noise},
             {"batch_size", c.ce.batch_size}};
  j["fs"] = {{"lr", c.fs.lr},
             {"newbob_decay", c.fs.newbob_decay},
             {"lr_min", c.fs.lr_min},
             {"grad_noise", c.fs.grad_noise},
             {"batch_size", c.fs.batch_size},
             {"prior_decay", c.fs.prior_decay},
             {"am_scale_start", c.fs.schedule.am_start},
             {"am_scale_max", c.fs.schedule.am_max},
             {"prior_scale_start", c.fs.schedule.prior_start},
             {"prior_left_max", c.fs.schedule.prior_left_max},
             {"prior_center_max", c.fs.schedule.prior_center_max},
             {"prior_right_max", c.fs.schedule.prior_right_max},
             {"scale_ramp_epochs", c.fs.schedule.ramp_epochs}};
  j["l2"] = c.l2;
  j["focal"] = c.focal;
  j["chunk"] = c.chunk;
  j["overlap"] = c.overlap;
  j["dropout"] = c.dropout;
  j["holdout_fraction"] = c.holdout_fraction;
  j["optimizer"] = {{"beta1", c.optimizer.beta1},
                    {"beta2", c.optimizer.beta2},
                    {"epsilon", c.optimizer.epsilon}};
  j["encoder"] = {{"context_window", c.encoder.context_window},
                  {"hidden", c.encoder.hidden},
                  {"nonlinearity", c.encoder.nonlinearity}};
  j["topology"] = {{"loop_prob", c.topology.loop_prob},
                   {"silence_loop_prob", c.topology.silence_loop_prob},
                   {"optional_silence", c.topology.optional_silence}};
  j["decode"] = {{"beta_left", c.decode.beta_left},
                 {"beta_center", c.decode.beta_center},
                 {"beta_right", c.decode.beta_right},
                 {"lm_scale", c.decode.lm_scale}};
  j["seed"] = c.seed;
  return j;
}

template <typename T>
void Assign(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

}  // namespace

std::string TrainConfig::ToJson(int indent) const {
  return ToJsonTree(*this).dump(indent);
}

TrainConfig TrainConfig::FromJson(const std::string& json_text) {
  json j = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object())
    throw DataError("malformed config JSON");
  TrainConfig c;
  if (j.contains("ce")) {
    const json& s = j.at("ce");
    Assign(s, "lr", c.ce.lr);
    Assign(s, "newbob_decay", c.ce.newbob_decay);
    Assign(s, "lr_min", c.ce.lr_min);
    Assign(s, "grad_noise", c.ce.grad_noise);
    Assign(s, "batch_size", c.ce.batch_size);
  }
  if (j.contains("fs")) {
    const json& s = j.at("fs");
    Assign(s, "lr", c.fs.lr);
    Assign(s, "newbob_decay", c.fs.newbob_decay);
    Assign(s, "lr_min", c.fs.lr_min);
    Assign(s, "grad_noise", c.fs.grad_noise);
    Assign(s, "batch_size", c.fs.batch_size);
    Assign(s, "prior_decay", c.fs.prior_decay);
    Assign(s, "am_scale_start", c.fs.schedule.am_start);
    Assign(s, "am_scale_max", c.fs.schedule.am_max);
    Assign(s, "prior_scale_start", c.fs.schedule.prior_start);
    Assign(s, "prior_left_max", c.fs.schedule.prior_left_max);
    Assign(s, "prior_center_max", c.fs.schedule.prior_center_max);
    Assign(s, "prior_right_max", c.fs.schedule.prior_right_max);
    Assign(s, "scale_ramp_epochs", c.fs.schedule.ramp_epochs);
  }
  Assign(j, "l2", c.l2);
  Assign(j, "focal", c.focal);
  Assign(j, "chunk", c.chunk);
  Assign(j, "overlap", c.overlap);
  Assign(j, "dropout", c.dropout);
  Assign(j, "holdout_fraction", c.holdout_fraction);
  if (j.contains("optimizer")) {
    const json& s = j.at("optimizer");
    Assign(s, "beta1", c.optimizer.beta1);
    Assign(s, "beta2", c.optimizer.beta2);
    Assign(s, "epsilon", c.optimizer.epsilon);
  }
  if (j.contains("encoder")) {
    const json& s = j.at("encoder");
    Assign(s, "context_window", c.encoder.context_window);
    Assign(s, "hidden", c.encoder.hidden);
    Assign(s, "nonlinearity", c.encoder.nonlinearity);
  }
  if (j.contains("topology")) {
    const json& s = j.at("topology");
    Assign(s, "loop_prob", c.topology.loop_prob);
    Assign(s, "silence_loop_prob", c.topology.silence_loop_prob);
    Assign(s, "optional_silence", c.topology.optional_silence);
  }
  if (j.contains("decode")) {
    const json& s = j.at("decode");
    Assign(s, "beta_left", c.decode.beta_left);
    Assign(s, "beta_center", c.decode.beta_center);
    Assign(s, "beta_right", c.decode.beta_right);
    Assign(s, "lm_scale", c.decode.lm_scale);
  }
  Assign(j, "seed", c.seed);
  return c;
}

TrainConfig TrainConfig::Load(const std::string& path) {
  if (path.empty()) return TrainConfig();
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return FromJson(text);
}

std::string TrainConfig::Hash() const { return HashHex(Fnv1a(ToJson())); }

}  // namespace fhkit
