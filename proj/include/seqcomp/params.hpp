#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "seqcomp/rng.hpp"
#include "seqcomp/tensor.hpp"

namespace seqcomp {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct ParamGroup {
  std::string name;
  Tensor2D value;
  Tensor2D grad;
  Tensor2D m;  // Adam first moment
  Tensor2D v;  // Adam second moment
};

// All trainable tensors, each with a same-shape gradient slot and Adam
// moment buffers. Owned exclusively by one training loop; evaluation-time
// readers only touch `value`.
class ParameterStore {
 public:
  Tensor2D& add(const std::string& name, int rows, int cols);
  ParamGroup& group(const std::string& name);
  const ParamGroup& group(const std::string& name) const;
  bool has(const std::string& name) const;

  std::vector<ParamGroup>& groups() { return groups_; }
  const std::vector<ParamGroup>& groups() const { return groups_; }

  int64_t step() const { return step_; }
  void zero_grads();

  // Bias-corrected Adam over every group; gradients are zeroed and the step
  // counter incremented. A non-finite gradient anywhere aborts before any
  // parameter is touched.
  void adam_step(const AdamConfig& cfg);

  void save(std::ostream& out) const;
  void load(std::istream& in);

 private:
  std::vector<ParamGroup> groups_;
  std::map<std::string, size_t> index_;
  int64_t step_ = 0;
};

// Initializers. Dense weights get uniform(-a, a) with a = sqrt(6/(fan_in +
// fan_out)); embedding rows get normal(0, 0.1).
void init_dense(Tensor2D& t, RngState& rng);
void init_embedding(Tensor2D& t, RngState& rng);

// loss = -log softmax(logits)[gold], max-shifted for stability.
// dlogits = softmax(logits) - onehot(gold).
double softmax_cross_entropy(std::span<const double> logits, int gold,
                             std::span<double> dlogits);

void softmax_inplace(std::span<double> x);

// Inverted dropout: in training, each element is zeroed with probability
// `rate` and survivors scaled by 1/(1-rate); at inference it is the
// identity. `mask_out`, when non-null, receives the per-element scale and
// is what the backward pass multiplies by.
void dropout(std::span<double> x, double rate, RngState& rng, bool training,
             std::span<double> mask_out = {});

// Central-difference gradient verification. `loss_fn(store, with_grad)`
// must be deterministic across calls (dropout masks frozen by reseeding
// inside the closure); with_grad=true also populates store gradients.
// Samples up to `coords_per_group` coordinates per group and returns the
// max relative error |analytic-numeric| / max(|analytic|,|numeric|,1e-3).
double grad_check(const std::function<double(ParameterStore&, bool)>& loss_fn,
                  ParameterStore& store, double epsilon, RngState& rng,
                  int coords_per_group = 200);

}  // namespace seqcomp
