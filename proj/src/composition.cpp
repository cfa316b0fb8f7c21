#include "seqcomp/composition.hpp"

#include <numeric>

#include "seqcomp/errors.hpp"

namespace seqcomp {

const char* const kBaselineMatrixGroup = "labels.matrix";

std::string component_group_name(int type) {
  return "labels.comp" + std::to_string(type);
}

CompositionMode composition_mode_from_string(const std::string& s) {
  if (s == "baseline") return CompositionMode::Baseline;
  if (s == "sum") return CompositionMode::Sum;
  if (s == "concat") return CompositionMode::Concat;
  throw UsageError("unknown composition mode '" + s +
                   "' (expected baseline, sum, or concat)");
}

std::string to_string(CompositionMode mode) {
  switch (mode) {
    case CompositionMode::Baseline: return "baseline";
    case CompositionMode::Sum: return "sum";
    case CompositionMode::Concat: return "concat";
  }
  return "?";
}

CompositionSpec CompositionSpec::make(CompositionMode mode, int output_dim,
                                      const LabelSchema& schema,
                                      const std::vector<int>& custom_dims) {
  if (output_dim <= 0) throw UsageError("label embedding dimension must be positive");
  CompositionSpec spec;
  spec.mode = mode;
  spec.output_dim = output_dim;
  const int K = schema.K();
  switch (mode) {
    case CompositionMode::Baseline:
      break;
    case CompositionMode::Sum:
      spec.component_dims.assign(K, output_dim);
      break;
    case CompositionMode::Concat:
      if (!custom_dims.empty()) {
        if (int(custom_dims.size()) != K)
          throw UsageError("concat split must name one size per component type");
        spec.component_dims = custom_dims;
      } else {
        if (output_dim < K)
          throw UsageError("concat mode needs output_dim >= K");
        spec.component_dims.assign(K, output_dim / K);
        spec.component_dims.back() += output_dim % K;
      }
      if (std::accumulate(spec.component_dims.begin(), spec.component_dims.end(), 0) !=
          output_dim)
        throw UsageError("concat component sizes must sum to the output dimension");
      break;
  }
  return spec;
}

void add_label_parameters(ParameterStore& store, const LabelSchema& schema,
                          const CompositionSpec& spec, RngState& rng) {
  if (spec.mode == CompositionMode::Baseline) {
    Tensor2D& w = store.add(kBaselineMatrixGroup, schema.num_labels(), spec.output_dim);
    init_embedding(w, rng);
    return;
  }
  for (int k = 0; k < schema.K(); ++k) {
    Tensor2D& wk =
        store.add(component_group_name(k), schema.vocab_size(k), spec.component_dims[k]);
    init_embedding(wk, rng);
  }
}

void compose_label_matrix(const LabelSchema& schema, const ParameterStore& store,
                          const CompositionSpec& spec, Tensor2D& w) {
  const int Y = schema.num_labels();
  const int D = spec.output_dim;
  w.resize(Y, D);
  switch (spec.mode) {
    case CompositionMode::Baseline: {
      const Tensor2D& m = store.group(kBaselineMatrixGroup).value;
      if (!m.same_shape(w))
        throw DataError("baseline label matrix shape mismatch");
      w.v = m.v;
      return;
    }
    case CompositionMode::Sum: {
      for (int y = 0; y < Y; ++y) {
        const auto& tuple = schema.decomposition(y).values;
        double* row = w.row(y);
        for (int k = 0; k < schema.K(); ++k) {
          const Tensor2D& wk = store.group(component_group_name(k)).value;
          const double* comp = wk.row(tuple[k]);
          for (int j = 0; j < D; ++j) row[j] += comp[j];
        }
      }
      return;
    }
    case CompositionMode::Concat: {
      for (int y = 0; y < Y; ++y) {
        const auto& tuple = schema.decomposition(y).values;
        double* row = w.row(y);
        int offset = 0;
        for (int k = 0; k < schema.K(); ++k) {
          const Tensor2D& wk = store.group(component_group_name(k)).value;
          const double* comp = wk.row(tuple[k]);
          for (int j = 0; j < spec.component_dims[k]; ++j) row[offset + j] = comp[j];
          offset += spec.component_dims[k];
        }
      }
      return;
    }
  }
}

void scatter_label_gradients(const Tensor2D& dw, const LabelSchema& schema,
                             const CompositionSpec& spec, ParameterStore& store) {
  const int Y = schema.num_labels();
  switch (spec.mode) {
    case CompositionMode::Baseline: {
      Tensor2D& g = store.group(kBaselineMatrixGroup).grad;
      for (size_t i = 0; i < g.size(); ++i) g.v[i] += dw.v[i];
      return;
    }
    case CompositionMode::Sum: {
      for (int y = 0; y < Y; ++y) {
        const auto& tuple = schema.decomposition(y).values;
        const double* row = dw.row(y);
        for (int k = 0; k < schema.K(); ++k) {
          double* g = store.group(component_group_name(k)).grad.row(tuple[k]);
          for (int j = 0; j < dw.cols; ++j) g[j] += row[j];
        }
      }
      return;
    }
    case CompositionMode::Concat: {
      for (int y = 0; y < Y; ++y) {
        const auto& tuple = schema.decomposition(y).values;
        const double* row = dw.row(y);
        int offset = 0;
        for (int k = 0; k < schema.K(); ++k) {
          double* g = store.group(component_group_name(k)).grad.row(tuple[k]);
          for (int j = 0; j < spec.component_dims[k]; ++j) g[j] += row[offset + j];
          offset += spec.component_dims[k];
        }
      }
      return;
    }
  }
}

void label_scores(const Tensor2D& features, const Tensor2D& w, Tensor2D& logits) {
  if (features.cols != w.cols)
    throw DataError("label_scores: feature dimension does not match label matrix");
  matmul_bt(features, w, logits);
}

}  // namespace seqcomp
