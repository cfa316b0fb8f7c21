#include "seqcomp/params.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "seqcomp/errors.hpp"

namespace seqcomp {

Tensor2D& ParameterStore::add(const std::string& name, int rows, int cols) {
  if (index_.count(name)) throw DataError("duplicate parameter group: " + name);
  index_[name] = groups_.size();
  ParamGroup g;
  g.name = name;
  g.value = Tensor2D(rows, cols);
  g.grad = Tensor2D(rows, cols);
  g.m = Tensor2D(rows, cols);
  g.v = Tensor2D(rows, cols);
  groups_.push_back(std::move(g));
  return groups_.back().value;
}

ParamGroup& ParameterStore::group(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw DataError("unknown parameter group: " + name);
  return groups_[it->second];
}

const ParamGroup& ParameterStore::group(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw DataError("unknown parameter group: " + name);
  return groups_[it->second];
}

bool ParameterStore::has(const std::string& name) const {
  return index_.count(name) != 0;
}

void ParameterStore::zero_grads() {
  for (auto& g : groups_) g.grad.fill(0.0);
}

void ParameterStore::adam_step(const AdamConfig& cfg) {
  for (const auto& g : groups_) {
    if (!all_finite(g.grad)) {
      throw NumericError("non-finite gradient in parameter group '" + g.name +
                         "' at step " + std::to_string(step_ + 1));
    }
  }
  ++step_;
  const double bc1 = 1.0 - std::pow(cfg.beta1, double(step_));
  const double bc2 = 1.0 - std::pow(cfg.beta2, double(step_));
  for (auto& g : groups_) {
    double* val = g.value.v.data();
    double* grad = g.grad.v.data();
    double* m = g.m.v.data();
    double* v = g.v.v.data();
    const size_t n = g.value.size();
    for (size_t i = 0; i < n; ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grad[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      val[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
      grad[i] = 0.0;
    }
  }
}

void ParameterStore::save(std::ostream& out) const {
  out << "params " << groups_.size() << " step " << step_ << "\n";
  char buf[64];
  for (const auto& g : groups_) {
    out << "tensor " << g.name << " " << g.value.rows << " " << g.value.cols << "\n";
    for (int i = 0; i < g.value.rows; ++i) {
      const double* r = g.value.row(i);
      for (int j = 0; j < g.value.cols; ++j) {
        // hexfloat keeps the dump bit-exact across save/load
        std::snprintf(buf, sizeof buf, "%a", r[j]);
        out << buf << (j + 1 == g.value.cols ? "" : " ");
      }
      out << "\n";
    }
  }
}

void ParameterStore::load(std::istream& in) {
  std::string word;
  size_t n_groups = 0;
  if (!(in >> word) || word != "params" || !(in >> n_groups))
    throw DataError("checkpoint: malformed params header");
  if (!(in >> word) || word != "step" || !(in >> step_))
    throw DataError("checkpoint: malformed step field");
  groups_.clear();
  index_.clear();
  for (size_t gi = 0; gi < n_groups; ++gi) {
    std::string name;
    int rows = 0, cols = 0;
    if (!(in >> word) || word != "tensor" || !(in >> name >> rows >> cols))
      throw DataError("checkpoint: malformed tensor header");
    Tensor2D& t = add(name, rows, cols);
    for (size_t i = 0; i < t.size(); ++i) {
      if (!(in >> word)) throw DataError("checkpoint: truncated tensor " + name);
      t.v[i] = std::strtod(word.c_str(), nullptr);
    }
  }
}

void init_dense(Tensor2D& t, RngState& rng) {
  const double a = std::sqrt(6.0 / double(t.rows + t.cols));
  for (double& x : t.v) x = rng.uniform(-a, a);
}

void init_embedding(Tensor2D& t, RngState& rng) {
  for (double& x : t.v) x = rng.normal(0.0, 0.1);
}

double softmax_cross_entropy(std::span<const double> logits, int gold,
                             std::span<double> dlogits) {
  assert(!logits.empty() && logits.size() == dlogits.size());
  assert(gold >= 0 && size_t(gold) < logits.size());
  double mx = logits[0];
  for (double x : logits) mx = std::max(mx, x);
  double sum = 0.0;
  for (size_t j = 0; j < logits.size(); ++j) {
    const double e = std::exp(logits[j] - mx);
    dlogits[j] = e;
    sum += e;
  }
  const double inv = 1.0 / sum;
  for (size_t j = 0; j < logits.size(); ++j) dlogits[j] *= inv;
  const double loss = std::log(sum) - (logits[gold] - mx);
  dlogits[gold] -= 1.0;
  return loss;
}

void softmax_inplace(std::span<double> x) {
  double mx = x[0];
  for (double v : x) mx = std::max(mx, v);
  double sum = 0.0;
  for (double& v : x) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : x) v /= sum;
}

void dropout(std::span<double> x, double rate, RngState& rng, bool training,
             std::span<double> mask_out) {
  assert(rate >= 0.0 && rate < 1.0);
  if (!training || rate == 0.0) {
    if (!mask_out.empty()) std::fill(mask_out.begin(), mask_out.end(), 1.0);
    return;
  }
  const double keep_scale = 1.0 / (1.0 - rate);
  for (size_t i = 0; i < x.size(); ++i) {
    const double scale = rng.uniform() < rate ? 0.0 : keep_scale;
    x[i] *= scale;
    if (!mask_out.empty()) mask_out[i] = scale;
  }
}

double grad_check(const std::function<double(ParameterStore&, bool)>& loss_fn,
                  ParameterStore& store, double epsilon, RngState& rng,
                  int coords_per_group) {
  store.zero_grads();
  loss_fn(store, true);
  std::vector<Tensor2D> analytic;
  analytic.reserve(store.groups().size());
  for (const auto& g : store.groups()) analytic.push_back(g.grad);

  double max_rel = 0.0;
  for (size_t gi = 0; gi < store.groups().size(); ++gi) {
    auto& g = store.groups()[gi];
    const size_t n = g.value.size();
    std::vector<size_t> coords;
    if (n <= size_t(coords_per_group)) {
      coords.resize(n);
      for (size_t i = 0; i < n; ++i) coords[i] = i;
    } else {
      std::set<size_t> picked;
      while (picked.size() < size_t(coords_per_group)) picked.insert(rng.below(n));
      coords.assign(picked.begin(), picked.end());
    }
    for (size_t idx : coords) {
      const double orig = g.value.v[idx];
      g.value.v[idx] = orig + epsilon;
      const double lp = loss_fn(store, false);
      g.value.v[idx] = orig - epsilon;
      const double lm = loss_fn(store, false);
      g.value.v[idx] = orig;
      const double numeric = (lp - lm) / (2.0 * epsilon);
      const double a = analytic[gi].v[idx];
      const double rel =
          std::fabs(a - numeric) / std::max({std::fabs(a), std::fabs(numeric), 1e-3});
      max_rel = std::max(max_rel, rel);
    }
  }
  store.zero_grads();
  return max_rel;
}

}  // namespace seqcomp
