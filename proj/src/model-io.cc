// src/model-io.cc

// Copyright 2026  The nmmhmm Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "nmmhmm/model-io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nmmhmm/diag-gmm.h"
#include "nmmhmm/nmm.h"

namespace nmmhmm {

namespace {

constexpr uint16_t kModelVersion = 1;
constexpr uint16_t kCacheVersion = 1;

void PutU16(std::string* out, uint16_t v) {
  out->push_back(static_cast<char>(v & 0xff));
  out->push_back(static_cast<char>((v >> 8) & 0xff));
}

void PutU32(std::string* out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutU64(std::string* out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutF64(std::string* out, double v) { PutU64(out, std::bit_cast<uint64_t>(v)); }

void PutF32(std::string* out, float v) { PutU32(out, std::bit_cast<uint32_t>(v)); }

void PutMatrixRowMajor(std::string* out, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) PutF64(out, m(r, c));
}

void PutVector(std::string* out, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) PutF64(out, v[i]);
}

struct Cursor {
  const std::string& data;
  std::size_t pos = 0;

  void Need(std::size_t n) const {
    if (pos + n > data.size()) throw std::runtime_error("model file: truncated section");
  }
  uint16_t U16() {
    Need(2);
    uint16_t v = static_cast<uint16_t>(static_cast<unsigned char>(data[pos]) |
                                       (static_cast<unsigned char>(data[pos + 1]) << 8));
    pos += 2;
    return v;
  }
  uint32_t U32() {
    Need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<uint32_t>(static_cast<unsigned char>(data[pos + i])) << (8 * i);
    pos += 4;
    return v;
  }
  uint64_t U64() {
    Need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<uint64_t>(static_cast<unsigned char>(data[pos + i])) << (8 * i);
    pos += 8;
    return v;
  }
  double F64() { return std::bit_cast<double>(U64()); }
  float F32() { return std::bit_cast<float>(U32()); }
  std::string Bytes(std::size_t n) {
    Need(n);
    std::string s = data.substr(pos, n);
    pos += n;
    return s;
  }
  Vector Vec(Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = F64();
    return v;
  }
  Matrix Mat(Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = F64();
    return m;
  }
};

void AppendSection(std::string* out, const char tag[4], const std::string& payload) {
  out->append(tag, 4);
  PutU64(out, payload.size());
  out->append(payload);
}

std::string SerializeGmm(const GmmEmission& gmm) {
  std::string s;
  PutU32(&s, static_cast<uint32_t>(gmm.NumStates()));
  PutU32(&s, static_cast<uint32_t>(gmm.NumComponents()));
  PutU32(&s, static_cast<uint32_t>(gmm.Dim()));
  PutF64(&s, gmm.var_floor());
  for (const auto& st : gmm.states()) {
    PutVector(&s, st.log_weights);
    PutMatrixRowMajor(&s, st.means);
    PutMatrixRowMajor(&s, st.log_vars);
  }
  return s;
}

std::unique_ptr<GmmEmission> DeserializeGmm(Cursor* c) {
  const auto num_states = static_cast<Eigen::Index>(c->U32());
  const auto num_comps = static_cast<Eigen::Index>(c->U32());
  const auto dim = static_cast<Eigen::Index>(c->U32());
  const double var_floor = c->F64();
  std::vector<GmmEmission::State> states;
  states.reserve(static_cast<std::size_t>(num_states));
  for (Eigen::Index s = 0; s < num_states; ++s) {
    GmmEmission::State st;
    st.log_weights = c->Vec(num_comps);
    st.means = c->Mat(num_comps, dim);
    st.log_vars = c->Mat(num_comps, dim);
    states.push_back(std::move(st));
  }
  return std::make_unique<GmmEmission>(std::move(states), var_floor);
}

std::string SerializeNmm(const NmmEmission& nmm) {
  std::string s;
  PutU32(&s, static_cast<uint32_t>(nmm.NumStates()));
  PutU32(&s, static_cast<uint32_t>(nmm.NumComponents()));
  PutU32(&s, static_cast<uint32_t>(nmm.Dim()));
  for (const auto& lw : nmm.log_weights()) PutVector(&s, lw);
  for (int st = 0; st < nmm.NumStates(); ++st) {
    for (int k = 0; k < nmm.NumComponents(); ++k) {
      const FlowGenerator& flow = nmm.flow(st, k);
      PutU32(&s, static_cast<uint32_t>(flow.NumLayers()));
      for (const auto& layer : flow.layers()) {
        PutU32(&s, static_cast<uint32_t>(layer.split));
        s.push_back(layer.swap_halves ? 1 : 0);
        PutU32(&s, static_cast<uint32_t>(layer.scale.w1.rows()));  // hidden width
        for (const CouplingNet* net : {&layer.scale, &layer.translate}) {
          PutMatrixRowMajor(&s, net->w1);
          PutVector(&s, net->b1);
          PutMatrixRowMajor(&s, net->w2);
          PutVector(&s, net->b2);
        }
      }
    }
  }
  return s;
}

std::unique_ptr<NmmEmission> DeserializeNmm(Cursor* c) {
  const int num_states = static_cast<int>(c->U32());
  const int num_comps = static_cast<int>(c->U32());
  const int dim = static_cast<int>(c->U32());
  std::vector<Vector> weights;
  weights.reserve(static_cast<std::size_t>(num_states));
  for (int s = 0; s < num_states; ++s) weights.push_back(c->Vec(num_comps));
  std::vector<std::vector<FlowGenerator>> flows;
  flows.reserve(static_cast<std::size_t>(num_states));
  for (int s = 0; s < num_states; ++s) {
    std::vector<FlowGenerator> state_flows;
    for (int k = 0; k < num_comps; ++k) {
      const int num_layers = static_cast<int>(c->U32());
      std::vector<CouplingLayer> layers;
      layers.reserve(static_cast<std::size_t>(num_layers));
      for (int l = 0; l < num_layers; ++l) {
        CouplingLayer layer;
        layer.dim = dim;
        layer.split = static_cast<int>(c->U32());
        layer.swap_halves = c->Bytes(1)[0] != 0;
        const auto hidden = static_cast<Eigen::Index>(c->U32());
        const Eigen::Index pass_n = layer.PassSize(), trans_n = layer.TransSize();
        for (CouplingNet* net : {&layer.scale, &layer.translate}) {
          net->w1 = c->Mat(hidden, pass_n);
          net->b1 = c->Vec(hidden);
          net->w2 = c->Mat(trans_n, hidden);
          net->b2 = c->Vec(trans_n);
        }
        layer.scale.tanh_output = true;
        layers.push_back(std::move(layer));
      }
      state_flows.emplace_back(dim, std::move(layers));
    }
    flows.push_back(std::move(state_flows));
  }
  return std::make_unique<NmmEmission>(std::move(weights), std::move(flows));
}

}  // namespace

void WriteFeatureCache(const std::string& path, const FeatureSequence& seq) {
  std::string out;
  out.append("NMMF", 4);
  PutU16(&out, kCacheVersion);
  PutU32(&out, static_cast<uint32_t>(seq.NumFrames()));
  PutU32(&out, static_cast<uint32_t>(seq.Dim()));
  for (Eigen::Index t = 0; t < seq.NumFrames(); ++t)
    for (Eigen::Index d = 0; d < seq.Dim(); ++d)
      PutF32(&out, static_cast<float>(seq.frames(t, d)));
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot write feature cache: " + path);
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw std::runtime_error("short write: " + path);
}

FeatureSequence ReadFeatureCache(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open feature cache: " + path);
  std::stringstream buf;
  buf << file.rdbuf();
  const std::string data = buf.str();
  Cursor c{data};
  if (c.Bytes(4) != "NMMF") throw std::runtime_error("bad feature cache magic: " + path);
  if (c.U16() != kCacheVersion) throw std::runtime_error("unsupported cache version: " + path);
  const auto t_max = static_cast<Eigen::Index>(c.U32());
  const auto dim = static_cast<Eigen::Index>(c.U32());
  if (data.size() != 14 + static_cast<std::size_t>(t_max) * static_cast<std::size_t>(dim) * 4)
    throw std::runtime_error("feature cache payload length mismatch: " + path);
  FeatureSequence seq;
  seq.frames.resize(t_max, dim);
  for (Eigen::Index t = 0; t < t_max; ++t)
    for (Eigen::Index d = 0; d < dim; ++d) seq.frames(t, d) = static_cast<double>(c.F32());
  seq.source_id = path;
  return seq;
}

std::string ModelToBytes(const HmmModel& model) {
  std::string out;
  out.append("NMMM", 4);
  PutU16(&out, kModelVersion);

  std::string head;
  PutU32(&head, static_cast<uint32_t>(model.NumStates()));
  PutU32(&head, static_cast<uint32_t>(model.Dim()));
  head.push_back(model.emission->Kind() == "nmm" ? 1 : 0);
  PutU32(&head, static_cast<uint32_t>(model.label.size()));
  head.append(model.label);
  PutU64(&head, model.config_fingerprint);
  AppendSection(&out, "HEAD", head);

  std::string init;
  PutVector(&init, model.log_init);
  AppendSection(&out, "INIT", init);

  std::string trans;
  PutMatrixRowMajor(&trans, model.log_trans);
  AppendSection(&out, "TRAN", trans);

  std::string stdz;
  stdz.push_back(model.standardizer.enabled ? 1 : 0);
  if (model.standardizer.enabled) {
    PutVector(&stdz, model.standardizer.mean);
    PutVector(&stdz, model.standardizer.stddev);
  }
  AppendSection(&out, "STDZ", stdz);

  if (const auto* gmm = dynamic_cast<const GmmEmission*>(model.emission.get())) {
    AppendSection(&out, "GMME", SerializeGmm(*gmm));
  } else if (const auto* nmm = dynamic_cast<const NmmEmission*>(model.emission.get())) {
    AppendSection(&out, "NMME", SerializeNmm(*nmm));
  } else {
    throw std::runtime_error("ModelToBytes: unknown emission kind");
  }
  AppendSection(&out, "END ", "");
  return out;
}

void SaveModel(const std::string& path, const HmmModel& model) {
  const std::string bytes = ModelToBytes(model);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot write model file: " + path);
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!file) throw std::runtime_error("short write: " + path);
}

HmmModel LoadModel(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open model file: " + path);
  std::stringstream buf;
  buf << file.rdbuf();
  const std::string data = buf.str();
  Cursor c{data};
  if (c.Bytes(4) != "NMMM") throw std::runtime_error("bad model magic: " + path);
  if (c.U16() != kModelVersion) throw std::runtime_error("unsupported model version: " + path);

  HmmModel model;
  uint32_t num_states = 0, dim = 0;
  bool is_nmm = false;
  bool done = false;
  while (!done && c.pos < data.size()) {
    const std::string tag = c.Bytes(4);
    const auto length = static_cast<std::size_t>(c.U64());
    const std::string payload = c.Bytes(length);
    Cursor section{payload};
    if (tag == "HEAD") {
      num_states = section.U32();
      dim = section.U32();
      is_nmm = section.Bytes(1)[0] != 0;
      const auto label_len = static_cast<std::size_t>(section.U32());
      model.label = section.Bytes(label_len);
      model.config_fingerprint = section.U64();
    } else if (tag == "INIT") {
      model.log_init = section.Vec(static_cast<Eigen::Index>(num_states));
    } else if (tag == "TRAN") {
      model.log_trans =
          section.Mat(static_cast<Eigen::Index>(num_states), static_cast<Eigen::Index>(num_states));
    } else if (tag == "STDZ") {
      model.standardizer.enabled = section.Bytes(1)[0] != 0;
      if (model.standardizer.enabled) {
        model.standardizer.mean = section.Vec(static_cast<Eigen::Index>(dim));
        model.standardizer.stddev = section.Vec(static_cast<Eigen::Index>(dim));
      }
    } else if (tag == "GMME") {
      model.emission = DeserializeGmm(&section);
    } else if (tag == "NMME") {
      model.emission = DeserializeNmm(&section);
    } else if (tag == "END ") {
      done = true;
    } else {
      throw std::runtime_error("model file: unknown section '" + tag + "' in " + path);
    }
  }
  if (!done) throw std::runtime_error("model file: missing END section: " + path);
  if (!model.emission) throw std::runtime_error("model file: missing emission section: " + path);
  if (is_nmm != (model.emission->Kind() == "nmm"))
    throw std::runtime_error("model file: header/emission kind mismatch: " + path);
  model.Validate();
  return model;
}

}  // namespace nmmhmm
