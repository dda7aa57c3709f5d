// src/io.cc

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

#include "io.h"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fhkit {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian");

namespace {

constexpr uint32_t kFeatureVersion = 1;
constexpr uint32_t kCheckpointVersion = 1;

void AppendU32(std::string& out, uint32_t v) {
  out.append(reinterpret_cast<const char*>(&v), sizeof(v));
}

uint32_t TakeU32(const std::string& data, size_t& offset, const std::string& what) {
  if (offset + 4 > data.size()) throw DataError("truncated file while reading " + what);
  uint32_t v;
  std::memcpy(&v, data.data() + offset, 4);
  offset += 4;
  return v;
}

void AppendF32Matrix(std::string& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const float f = static_cast<float>(m(r, c));
      out.append(reinterpret_cast<const char*>(&f), sizeof(f));
    }
  }
}

Eigen::MatrixXd TakeF32Matrix(const std::string& data, size_t& offset, int rows,
                              int cols, const std::string& what) {
  const size_t bytes = static_cast<size_t>(rows) * cols * 4;
  if (offset + bytes > data.size())
    throw DataError("truncated file while reading " + what);
  Eigen::MatrixXd m(rows, cols);
  const char* p = data.data() + offset;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      float f;
      std::memcpy(&f, p, 4);
      p += 4;
      m(r, c) = static_cast<double>(f);
    }
  }
  offset += bytes;
  return m;
}

json HeaderJson(const ReproHeader& header) {
  return json{{"seed", header.seed},
              {"config_hash", header.config_hash},
              {"inventory_hash", header.inventory_hash}};
}

std::string JoinWords(const std::vector<std::string>& words) {
  std::string out;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += words[i];
  }
  return out;
}

std::vector<std::string> SplitWords(const std::string& text) {
  std::vector<std::string> words;
  std::istringstream in(text);
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

}  // namespace

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write file: " + path);
  out << text;
  if (!out) throw DataError("write failed: " + path);
}

void WriteFeatures(const std::string& path, const Eigen::MatrixXd& features) {
  std::string out = "FHF1";
  AppendU32(out, kFeatureVersion);
  AppendU32(out, static_cast<uint32_t>(features.rows()));
  AppendU32(out, static_cast<uint32_t>(features.cols()));
  AppendF32Matrix(out, features);
  WriteTextFile(path, out);
}

Eigen::MatrixXd ReadFeatures(const std::string& path) {
  const std::string data = ReadTextFile(path);
  if (data.size() < 16 || data.compare(0, 4, "FHF1") != 0)
    throw DataError("bad feature file magic: " + path);
  size_t offset = 4;
  const uint32_t version = TakeU32(data, offset, "feature version");
  if (version != kFeatureVersion)
    throw DataError(StrCat("unsupported feature file version ", version));
  const uint32_t rows = TakeU32(data, offset, "frame count");
  const uint32_t cols = TakeU32(data, offset, "feature dim");
  Eigen::MatrixXd m = TakeF32Matrix(data, offset, rows, cols, path);
  if (offset != data.size()) throw DataError("trailing bytes in " + path);
  return m;
}

void WriteAlignmentCache(const std::string& path,
                         const std::vector<AlignmentEntry>& entries,
                         const ReproHeader& header) {
  std::string out = HeaderJson(header).dump() + "\n";
  for (const auto& e : entries) {
    json j;
    j["id"] = e.id;
    j["labels"] = e.labels;
    j["provenance"] = e.provenance;
    out += j.dump() + "\n";
  }
  WriteTextFile(path, out);
}

std::vector<AlignmentEntry> ReadAlignmentCache(const std::string& path,
                                               std::string* inventory_hash) {
  std::istringstream in(ReadTextFile(path));
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty alignment cache: " + path);
  json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.contains("inventory_hash"))
    throw DataError("alignment cache missing header line: " + path);
  if (inventory_hash) *inventory_hash = header.at("inventory_hash");
  std::vector<AlignmentEntry> entries;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw DataError("malformed alignment line: " + line);
    AlignmentEntry e;
    e.id = j.at("id");
    e.labels = j.at("labels").get<std::vector<uint32_t>>();
    e.provenance = j.value("provenance", "external");
    entries.push_back(std::move(e));
  }
  return entries;
}

void WriteCheckpoint(const std::string& path, const FactoredModel& model,
                     const PriorState& priors, const CheckpointMeta& meta) {
  json m;
  m["format"] = "FHCK";
  m["version"] = kCheckpointVersion;
  m["inventory"] = json::parse(model.inventory().ToJson());
  m["inventory_hash"] = model.inventory().Hash();
  m["context_order"] = ToString(model.order());
  m["simplified_heads"] = model.simplified_heads();
  const EncoderConfig& enc = model.encoder_config();
  m["encoder"] = {{"input_dim", enc.input_dim},
                  {"context_window", enc.context_window},
                  {"hidden", enc.hidden},
                  {"nonlinearity", enc.nonlinearity},
                  {"dropout", enc.dropout}};
  m["trained_with"] = meta.trained_with;
  m["epoch"] = meta.epoch;
  m["lr"] = meta.lr;
  m["seed"] = meta.seed;
  m["config_hash"] = meta.config_hash;
  m["prior_decay"] = priors.decay;
  json tensors = json::array();
  for (const auto& t : model.params().tensors)
    tensors.push_back({{"name", t.name},
                       {"rows", t.value.rows()},
                       {"cols", t.value.cols()}});
  for (const char* name : {"prior.left", "prior.center", "prior.right"}) {
    const Eigen::VectorXd& v = std::string(name) == "prior.left" ? priors.left
                               : std::string(name) == "prior.center"
                                   ? priors.center
                                   : priors.right;
    tensors.push_back({{"name", name}, {"rows", v.size()}, {"cols", 1}});
  }
  m["tensors"] = tensors;

  const std::string meta_text = m.dump();
  std::string out = "FHCK";
  AppendU32(out, kCheckpointVersion);
  AppendU32(out, static_cast<uint32_t>(meta_text.size()));
  out += meta_text;
  for (const auto& t : model.params().tensors) AppendF32Matrix(out, t.value);
  AppendF32Matrix(out, priors.left);
  AppendF32Matrix(out, priors.center);
  AppendF32Matrix(out, priors.right);
  WriteTextFile(path, out);
}

LoadedCheckpoint ReadCheckpoint(const std::string& path) {
  const std::string data = ReadTextFile(path);
  if (data.size() < 12 || data.compare(0, 4, "FHCK") != 0)
    throw DataError("bad checkpoint magic: " + path);
  size_t offset = 4;
  const uint32_t version = TakeU32(data, offset, "checkpoint version");
  if (version != kCheckpointVersion)
    throw DataError(StrCat("unsupported checkpoint version ", version));
  const uint32_t meta_len = TakeU32(data, offset, "metadata length");
  if (offset + meta_len > data.size())
    throw DataError("truncated checkpoint metadata: " + path);
  json m = json::parse(data.substr(offset, meta_len), nullptr, false);
  if (m.is_discarded()) throw DataError("malformed checkpoint metadata: " + path);
  offset += meta_len;

  PhonemeInventory inv = PhonemeInventory::FromJson(m.at("inventory").dump());
  EncoderConfig enc;
  enc.input_dim = m.at("encoder").at("input_dim");
  enc.context_window = m.at("encoder").at("context_window");
  enc.hidden = m.at("encoder").at("hidden").get<std::vector<int>>();
  enc.nonlinearity = m.at("encoder").at("nonlinearity");
  enc.dropout = m.at("encoder").at("dropout");
  FactoredModel model(inv, enc, ContextOrderFromString(m.at("context_order")),
                      m.at("simplified_heads"), /*seed=*/0);

  PriorState priors = PriorState::Uniform(inv, m.value("prior_decay", 0.001));
  const json& tensors = m.at("tensors");
  size_t expected = model.params().tensors.size() + 3;
  if (tensors.size() != expected)
    throw DataError("checkpoint tensor list does not match architecture");
  for (size_t i = 0; i < tensors.size(); ++i) {
    const std::string name = tensors[i].at("name");
    const int rows = tensors[i].at("rows");
    const int cols = tensors[i].at("cols");
    Eigen::MatrixXd value = TakeF32Matrix(data, offset, rows, cols, name);
    if (name == "prior.left")
      priors.left = value.col(0);
    else if (name == "prior.center")
      priors.center = value.col(0);
    else if (name == "prior.right")
      priors.right = value.col(0);
    else {
      Eigen::MatrixXd& dst = model.params().Get(name);
      if (dst.rows() != rows || dst.cols() != cols)
        throw DataError("checkpoint tensor shape mismatch: " + name);
      dst = value;
    }
  }
  if (offset != data.size()) throw DataError("trailing bytes in " + path);

  CheckpointMeta meta;
  meta.trained_with = m.value("trained_with", "init");
  meta.epoch = m.value("epoch", 0);
  meta.lr = m.value("lr", 0.0);
  meta.seed = m.value("seed", uint64_t{0});
  meta.config_hash = m.value("config_hash", "");
  return LoadedCheckpoint{std::move(model), std::move(priors), std::move(meta)};
}

void WriteManifest(const std::string& path,
                   const std::vector<ManifestEntry>& entries,
                   const ReproHeader& header) {
  std::string out = HeaderJson(header).dump() + "\n";
  for (const auto& e : entries) {
    json j;
    j["id"] = e.id;
    j["feature_file"] = e.feature_file;
    j["transcript"] = JoinWords(e.transcript);
    out += j.dump() + "\n";
  }
  WriteTextFile(path, out);
}

std::vector<ManifestEntry> ReadManifest(const std::string& path,
                                        ReproHeader* header) {
  std::istringstream in(ReadTextFile(path));
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty manifest: " + path);
  json h = json::parse(line, nullptr, false);
  if (h.is_discarded() || !h.contains("seed"))
    throw DataError("manifest missing header line: " + path);
  if (header) {
    header->seed = h.at("seed");
    header->config_hash = h.value("config_hash", "");
    header->inventory_hash = h.value("inventory_hash", "");
  }
  std::vector<ManifestEntry> entries;
  std::unordered_map<std::string, int> seen;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw DataError("malformed manifest line: " + line);
    ManifestEntry e;
    e.id = j.at("id");
    e.feature_file = j.at("feature_file");
    e.transcript = SplitWords(j.at("transcript"));
    if (!seen.emplace(e.id, 1).second)
      throw DataError("duplicate utterance id in manifest: " + e.id);
    entries.push_back(std::move(e));
  }
  return entries;
}

void WriteHypotheses(const std::string& path,
                     const std::vector<HypothesisEntry>& entries,
                     const ReproHeader& header) {
  std::string out = "# " + HeaderJson(header).dump() + "\n";
  char buf[64];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof(buf), "%.6f", e.score);
    out += e.id;
    out += '\t';
    out += buf;
    out += '\t';
    out += JoinWords(e.words);
    out += '\n';
  }
  WriteTextFile(path, out);
}

std::vector<HypothesisEntry> ReadHypotheses(const std::string& path) {
  std::istringstream in(ReadTextFile(path));
  std::vector<HypothesisEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? std::string::npos
                                                : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos)
      throw DataError("malformed hypothesis line: " + line);
    HypothesisEntry e;
    e.id = line.substr(0, tab1);
    e.score = std::stod(line.substr(tab1 + 1, tab2 - tab1 - 1));
    e.words = SplitWords(line.substr(tab2 + 1));
    entries.push_back(std::move(e));
  }
  return entries;
}

Dataset LoadDataset(const std::string& corpus_dir,
                    const std::string& manifest_name, const Topology& topo) {
  namespace fs = std::filesystem;
  const fs::path dir(corpus_dir);
  Dataset data;
  data.inventory =
      PhonemeInventory::FromJson(ReadTextFile((dir / "inventory.json").string()));
  data.lexicon = Lexicon::FromJson(ReadTextFile((dir / "lexicon.json").string()),
                                   data.inventory);
  data.topology = topo;
  auto manifest = ReadManifest((dir / manifest_name).string());
  data.utterances.reserve(manifest.size());
  for (const auto& entry : manifest) {
    Utterance utt;
    utt.id = entry.id;
    utt.features = ReadFeatures((dir / entry.feature_file).string());
    utt.transcript = entry.transcript;
    utt.graph = BuildTrainingGraph(data.lexicon, data.inventory, entry.transcript, topo);
    data.utterances.push_back(std::move(utt));
  }
  return data;
}

void AttachAlignments(Dataset& dataset,
                      const std::vector<AlignmentEntry>& entries) {
  std::unordered_map<std::string, const AlignmentEntry*> by_id;
  for (const auto& e : entries) by_id.emplace(e.id, &e);
  for (auto& utt : dataset.utterances) {
    auto it = by_id.find(utt.id);
    if (it == by_id.end())
      throw DataError("alignment cache missing utterance: " + utt.id);
    if (it->second->labels.size() != static_cast<size_t>(utt.features.rows()))
      throw DataError("alignment length mismatch for utterance: " + utt.id);
    utt.alignment = it->second->labels;
  }
}

}  // namespace fhkit
