// nmmhmm/flow.h

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

#ifndef NMMHMM_FLOW_H_
#define NMMHMM_FLOW_H_

#include <cstdint>
#include <span>
#include <vector>

#include "nmmhmm/common.h"

namespace nmmhmm {

// Shallow feed-forward conditioner: one tanh hidden layer, then either a
// tanh output (scale net, bounding the log standard deviation) or an
// identity output (translation net).
struct CouplingNet {
  Matrix w1;  // hidden x in
  Vector b1;  // hidden
  Matrix w2;  // out x hidden
  Vector b2;  // out
  bool tanh_output = false;

  Vector Forward(const Vector& in) const;
  // Variant that keeps the hidden activation for the backward pass.
  Vector Forward(const Vector& in, Vector* hidden) const;
  // Accumulates parameter gradients into `grad` (layout: w1 row-major, b1,
  // w2 row-major, b2) and returns dL/din.
  Vector Backward(const Vector& in, const Vector& hidden, const Vector& out, const Vector& dout,
                  std::span<double> grad) const;

  std::size_t ParameterCount() const;
  void GetParameters(std::span<double> out) const;
  void SetParameters(std::span<const double> in);
};

// One affine coupling transform. With swap_halves false the first `split`
// coordinates pass through unchanged and condition the rest; with it true
// the roles of the two halves are exchanged.
struct CouplingLayer {
  int dim = 0;
  int split = 0;
  bool swap_halves = false;
  CouplingNet scale;      // tanh output
  CouplingNet translate;  // identity output

  int PassSize() const { return swap_halves ? dim - split : split; }
  int TransSize() const { return dim - PassSize(); }
  // Index of the i-th pass-through (resp. transformed) coordinate.
  int PassIndex(int i) const { return swap_halves ? split + i : i; }
  int TransIndex(int i) const { return swap_halves ? i : split + i; }

  std::size_t ParameterCount() const;
};

// An invertible stack of coupling layers with alternating pass-through
// halves. Forward maps latent to data; Inverse maps data to latent and
// yields the exact log |det d latent / d data|.
class FlowGenerator {
 public:
  FlowGenerator() = default;
  FlowGenerator(int dim, std::vector<CouplingLayer> layers);

  int Dim() const { return dim_; }
  int NumLayers() const { return static_cast<int>(layers_.size()); }
  const std::vector<CouplingLayer>& layers() const { return layers_; }
  std::vector<CouplingLayer>& layers() { return layers_; }

  Vector Forward(const Vector& z) const;
  Vector Inverse(const Vector& x, double* log_det) const;

  // log N(f(x); 0, I) + log_det, the standard-normal-latent log-density of x.
  double LogDensity(const Vector& x) const;

  // Accumulates d(weight * LogDensity(x)) / d(parameters) into `grad`
  // (same layout as GetParameters) and returns weight * LogDensity(x).
  double LogDensityWithGradient(const Vector& x, double weight, std::span<double> grad) const;

  std::size_t ParameterCount() const;
  void GetParameters(std::span<double> out) const;
  void SetParameters(std::span<const double> in);

  // Identity map (zero layers); the only valid flow for dim == 1.
  static FlowGenerator Identity(int dim);
  // blocks pairs of coupling layers with alternating halves. Output layers
  // are zero-initialized so the initial map is the identity; hidden layers
  // get small seeded uniform weights.
  static FlowGenerator CreateStack(int dim, int blocks, int hidden, uint64_t seed);

 private:
  int dim_ = 0;
  std::vector<CouplingLayer> layers_;
};

}  // namespace nmmhmm

#endif  // NMMHMM_FLOW_H_
