// src/flow.cc

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

#include "nmmhmm/flow.h"

#include <cmath>
#include <stdexcept>

namespace nmmhmm {

Vector CouplingNet::Forward(const Vector& in) const {
  Vector hidden;
  return Forward(in, &hidden);
}

Vector CouplingNet::Forward(const Vector& in, Vector* hidden) const {
  *hidden = (w1 * in + b1).array().tanh();
  Vector out = w2 * *hidden + b2;
  if (tanh_output) out = out.array().tanh();
  return out;
}

Vector CouplingNet::Backward(const Vector& in, const Vector& hidden, const Vector& out,
                             const Vector& dout, std::span<double> grad) const {
  const Eigen::Index n_in = w1.cols(), n_hidden = w1.rows(), n_out = w2.rows();
  Vector da2 = tanh_output ? (dout.array() * (1.0 - out.array().square())).matrix() : dout;
  Vector dh1 = w2.transpose() * da2;
  Vector da1 = (dh1.array() * (1.0 - hidden.array().square())).matrix();

  std::size_t off = 0;
  for (Eigen::Index r = 0; r < n_hidden; ++r)
    for (Eigen::Index c = 0; c < n_in; ++c) grad[off++] += da1[r] * in[c];
  for (Eigen::Index r = 0; r < n_hidden; ++r) grad[off++] += da1[r];
  for (Eigen::Index r = 0; r < n_out; ++r)
    for (Eigen::Index c = 0; c < n_hidden; ++c) grad[off++] += da2[r] * hidden[c];
  for (Eigen::Index r = 0; r < n_out; ++r) grad[off++] += da2[r];
  return w1.transpose() * da1;
}

std::size_t CouplingNet::ParameterCount() const {
  return static_cast<std::size_t>(w1.size() + b1.size() + w2.size() + b2.size());
}

void CouplingNet::GetParameters(std::span<double> out) const {
  std::size_t off = 0;
  for (Eigen::Index r = 0; r < w1.rows(); ++r)
    for (Eigen::Index c = 0; c < w1.cols(); ++c) out[off++] = w1(r, c);
  for (Eigen::Index r = 0; r < b1.size(); ++r) out[off++] = b1[r];
  for (Eigen::Index r = 0; r < w2.rows(); ++r)
    for (Eigen::Index c = 0; c < w2.cols(); ++c) out[off++] = w2(r, c);
  for (Eigen::Index r = 0; r < b2.size(); ++r) out[off++] = b2[r];
}

void CouplingNet::SetParameters(std::span<const double> in) {
  std::size_t off = 0;
  for (Eigen::Index r = 0; r < w1.rows(); ++r)
    for (Eigen::Index c = 0; c < w1.cols(); ++c) w1(r, c) = in[off++];
  for (Eigen::Index r = 0; r < b1.size(); ++r) b1[r] = in[off++];
  for (Eigen::Index r = 0; r < w2.rows(); ++r)
    for (Eigen::Index c = 0; c < w2.cols(); ++c) w2(r, c) = in[off++];
  for (Eigen::Index r = 0; r < b2.size(); ++r) b2[r] = in[off++];
}

std::size_t CouplingLayer::ParameterCount() const {
  return scale.ParameterCount() + translate.ParameterCount();
}

FlowGenerator::FlowGenerator(int dim, std::vector<CouplingLayer> layers)
    : dim_(dim), layers_(std::move(layers)) {
  if (dim < 1) throw std::invalid_argument("FlowGenerator: dim must be >= 1");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    if (layer.dim != dim || layer.split < 1 || layer.split >= dim)
      throw std::invalid_argument("FlowGenerator: bad coupling split");
    if (l > 0 && layers_[l - 1].swap_halves == layer.swap_halves)
      throw std::invalid_argument("FlowGenerator: consecutive layers must alternate halves");
  }
}

Vector FlowGenerator::Forward(const Vector& z) const {
  if (z.size() != dim_) throw std::invalid_argument("FlowGenerator::Forward: dimension mismatch");
  Vector h = z;
  for (const auto& layer : layers_) {
    const int pass_n = layer.PassSize(), trans_n = layer.TransSize();
    Vector pass(pass_n);
    for (int i = 0; i < pass_n; ++i) pass[i] = h[layer.PassIndex(i)];
    const Vector s = layer.scale.Forward(pass);
    const Vector t = layer.translate.Forward(pass);
    for (int i = 0; i < trans_n; ++i) {
      const int idx = layer.TransIndex(i);
      h[idx] = h[idx] * std::exp(s[i]) + t[i];
    }
  }
  return h;
}

Vector FlowGenerator::Inverse(const Vector& x, double* log_det) const {
  if (x.size() != dim_) throw std::invalid_argument("FlowGenerator::Inverse: dimension mismatch");
  Vector h = x;
  double ld = 0.0;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) {
    const auto& layer = *it;
    const int pass_n = layer.PassSize(), trans_n = layer.TransSize();
    Vector pass(pass_n);
    for (int i = 0; i < pass_n; ++i) pass[i] = h[layer.PassIndex(i)];
    const Vector s = layer.scale.Forward(pass);
    const Vector t = layer.translate.Forward(pass);
    for (int i = 0; i < trans_n; ++i) {
      const int idx = layer.TransIndex(i);
      h[idx] = (h[idx] - t[i]) * std::exp(-s[i]);
      ld -= s[i];
    }
    if (!h.allFinite())
      throw std::runtime_error("FlowGenerator::Inverse: non-finite value at layer " +
                               std::to_string(static_cast<int>(layers_.rend() - it) - 1));
  }
  if (log_det != nullptr) *log_det = ld;
  return h;
}

double FlowGenerator::LogDensity(const Vector& x) const {
  double log_det = 0.0;
  const Vector z = Inverse(x, &log_det);
  return -0.5 * dim_ * kLog2Pi - 0.5 * z.squaredNorm() + log_det;
}

namespace {

// Everything the backward pass needs from one layer of the inverse pass.
struct LayerTrace {
  Vector pass;             // conditioner input (shared by both sides)
  Vector scale_hidden, scale_out;
  Vector trans_hidden, trans_out;
  Vector data_side;        // transformed coordinates before this layer
  Vector latent_side;      // transformed coordinates after this layer
};

}  // namespace

double FlowGenerator::LogDensityWithGradient(const Vector& x, double weight,
                                             std::span<double> grad) const {
  if (grad.size() != ParameterCount())
    throw std::invalid_argument("FlowGenerator: gradient span size mismatch");
  const int num_layers = NumLayers();
  std::vector<LayerTrace> trace(static_cast<std::size_t>(num_layers));

  // Inverse pass, data to latent, recording per-layer intermediates.
  Vector h = x;
  double log_det = 0.0;
  for (int l = num_layers - 1; l >= 0; --l) {
    const auto& layer = layers_[static_cast<std::size_t>(l)];
    auto& tr = trace[static_cast<std::size_t>(l)];
    const int pass_n = layer.PassSize(), trans_n = layer.TransSize();
    tr.pass.resize(pass_n);
    for (int i = 0; i < pass_n; ++i) tr.pass[i] = h[layer.PassIndex(i)];
    tr.scale_out = layer.scale.Forward(tr.pass, &tr.scale_hidden);
    tr.trans_out = layer.translate.Forward(tr.pass, &tr.trans_hidden);
    tr.data_side.resize(trans_n);
    tr.latent_side.resize(trans_n);
    for (int i = 0; i < trans_n; ++i) {
      const int idx = layer.TransIndex(i);
      tr.data_side[i] = h[idx];
      tr.latent_side[i] = (h[idx] - tr.trans_out[i]) * std::exp(-tr.scale_out[i]);
      h[idx] = tr.latent_side[i];
      log_det -= tr.scale_out[i];
    }
  }
  const Vector z = h;
  const double log_density = -0.5 * dim_ * kLog2Pi - 0.5 * z.squaredNorm() + log_det;

  if (weight == 0.0) return 0.0;

  // Reverse accumulation, latent back to data. dL/dz from the prior term;
  // every scale output also receives -weight from the log-determinant.
  Vector g = -weight * z;
  std::size_t offset = 0;
  for (int l = 0; l < num_layers; ++l) {
    const auto& layer = layers_[static_cast<std::size_t>(l)];
    const auto& tr = trace[static_cast<std::size_t>(l)];
    const int pass_n = layer.PassSize(), trans_n = layer.TransSize();

    Vector g_pass(pass_n), g_trans(trans_n);
    for (int i = 0; i < pass_n; ++i) g_pass[i] = g[layer.PassIndex(i)];
    for (int i = 0; i < trans_n; ++i) g_trans[i] = g[layer.TransIndex(i)];

    Vector d_data(trans_n), d_scale(trans_n), d_translate(trans_n);
    for (int i = 0; i < trans_n; ++i) {
      const double e = std::exp(-tr.scale_out[i]);
      d_data[i] = g_trans[i] * e;
      d_translate[i] = -d_data[i];
      d_scale[i] = -g_trans[i] * tr.latent_side[i] - weight;
    }

    const std::size_t scale_count = layer.scale.ParameterCount();
    const std::size_t trans_count = layer.translate.ParameterCount();
    Vector dp = g_pass;
    dp += layer.scale.Backward(tr.pass, tr.scale_hidden, tr.scale_out, d_scale,
                               grad.subspan(offset, scale_count));
    dp += layer.translate.Backward(tr.pass, tr.trans_hidden, tr.trans_out, d_translate,
                                   grad.subspan(offset + scale_count, trans_count));
    offset += scale_count + trans_count;

    for (int i = 0; i < pass_n; ++i) g[layer.PassIndex(i)] = dp[i];
    for (int i = 0; i < trans_n; ++i) g[layer.TransIndex(i)] = d_data[i];
  }
  return weight * log_density;
}

std::size_t FlowGenerator::ParameterCount() const {
  std::size_t n = 0;
  for (const auto& layer : layers_) n += layer.ParameterCount();
  return n;
}

void FlowGenerator::GetParameters(std::span<double> out) const {
  std::size_t off = 0;
  for (const auto& layer : layers_) {
    layer.scale.GetParameters(out.subspan(off, layer.scale.ParameterCount()));
    off += layer.scale.ParameterCount();
    layer.translate.GetParameters(out.subspan(off, layer.translate.ParameterCount()));
    off += layer.translate.ParameterCount();
  }
}

void FlowGenerator::SetParameters(std::span<const double> in) {
  std::size_t off = 0;
  for (auto& layer : layers_) {
    layer.scale.SetParameters(in.subspan(off, layer.scale.ParameterCount()));
    off += layer.scale.ParameterCount();
    layer.translate.SetParameters(in.subspan(off, layer.translate.ParameterCount()));
    off += layer.translate.ParameterCount();
  }
}

FlowGenerator FlowGenerator::Identity(int dim) { return FlowGenerator(dim, {}); }

FlowGenerator FlowGenerator::CreateStack(int dim, int blocks, int hidden, uint64_t seed) {
  if (blocks == 0) return Identity(dim);
  if (dim < 2)
    throw std::invalid_argument("FlowGenerator: coupling layers need dim >= 2 (use 0 blocks)");
  if (blocks < 0 || hidden < 1) throw std::invalid_argument("FlowGenerator: bad architecture");
  Rng rng(seed);
  const int split = dim / 2;

  auto make_net = [&](int in, int out, bool tanh_output) {
    CouplingNet net;
    net.tanh_output = tanh_output;
    const double radius = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> uniform(-radius, radius);
    net.w1.resize(hidden, in);
    net.b1.resize(hidden);
    for (Eigen::Index r = 0; r < hidden; ++r) {
      for (Eigen::Index c = 0; c < in; ++c) net.w1(r, c) = uniform(rng);
      net.b1[r] = uniform(rng);
    }
    net.w2 = Matrix::Zero(out, hidden);
    net.b2 = Vector::Zero(out);
    return net;
  };

  std::vector<CouplingLayer> layers;
  layers.reserve(static_cast<std::size_t>(2 * blocks));
  for (int l = 0; l < 2 * blocks; ++l) {
    CouplingLayer layer;
    layer.dim = dim;
    layer.split = split;
    layer.swap_halves = (l % 2) == 1;
    const int pass_n = layer.PassSize(), trans_n = layer.TransSize();
    layer.scale = make_net(pass_n, trans_n, true);
    layer.translate = make_net(pass_n, trans_n, false);
    layers.push_back(std::move(layer));
  }
  return FlowGenerator(dim, std::move(layers));
}

}  // namespace nmmhmm
