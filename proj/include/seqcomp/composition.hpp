#pragma once

#include <string>
#include <vector>

#include "seqcomp/params.hpp"
#include "seqcomp/schema.hpp"

namespace seqcomp {

// How the |Y| x D label-embedding matrix is parameterized:
//   Baseline - one independent row per label,
//   Sum      - row y is the sum of y's component embeddings (all of size D),
//   Concat   - row y concatenates y's component embeddings (sizes sum to D).
enum class CompositionMode { Baseline, Sum, Concat };

CompositionMode composition_mode_from_string(const std::string& s);
std::string to_string(CompositionMode mode);

// Resolved dimensions for one model instance. In Concat mode the default
// split is floor(D/K) per component type with the remainder on the last
// type; explicit per-type sizes may override it.
struct CompositionSpec {
  CompositionMode mode = CompositionMode::Baseline;
  int output_dim = 0;              // D
  std::vector<int> component_dims; // per type; empty in Baseline mode

  static CompositionSpec make(CompositionMode mode, int output_dim,
                              const LabelSchema& schema,
                              const std::vector<int>& custom_dims = {});
};

// Parameter group names: "labels.matrix" (Baseline) or "labels.comp<k>".
extern const char* const kBaselineMatrixGroup;
std::string component_group_name(int type);

// Creates and initializes the label-side parameter groups.
void add_label_parameters(ParameterStore& store, const LabelSchema& schema,
                          const CompositionSpec& spec, RngState& rng);

// Materializes W: row y is the mode's composition of y's component tuple.
// Baseline mode copies the free matrix through.
void compose_label_matrix(const LabelSchema& schema, const ParameterStore& store,
                          const CompositionSpec& spec, Tensor2D& w);

// Adjoint of compose_label_matrix: routes a |Y| x D gradient back onto the
// shared component embeddings (accumulating, not overwriting).
void scatter_label_gradients(const Tensor2D& dw, const LabelSchema& schema,
                             const CompositionSpec& spec, ParameterStore& store);

// logits[i][y] = dot(W[y], features[i]).
void label_scores(const Tensor2D& features, const Tensor2D& w, Tensor2D& logits);

}  // namespace seqcomp
