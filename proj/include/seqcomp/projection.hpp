#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "seqcomp/schema.hpp"
#include "seqcomp/tensor.hpp"

namespace seqcomp {

// 2-D map of the label-embedding space plus the grouping keys used for
// cluster inspection (span symbol; top hierarchy layer).
struct ProjectionResult {
  std::vector<std::string> labels;
  std::vector<std::array<double, 2>> coords;
  std::vector<int> span_group;
  std::vector<int> top_group;
  std::array<double, 2> explained_variance{0.0, 0.0};        // PCA eigenvalues
  std::array<double, 2> explained_variance_ratio{0.0, 0.0};  // /trace
  bool degenerate = false;  // all-identical rows (PCA emits zeros + warning)
};

// Symmetric eigensolver (cyclic Jacobi). Returns eigenvalues sorted
// descending; `vectors`, when non-null, receives matching unit
// eigenvectors as rows.
std::vector<double> jacobi_eigenvalues(const Tensor2D& sym, Tensor2D* vectors);

// Top-2 principal components of the mean-centered rows. Deterministic up
// to sign; the sign is fixed so each component's largest-|loading|
// coordinate is positive.
ProjectionResult project_pca(const Tensor2D& embeddings, const LabelSchema& schema);

struct TsneParams {
  double perplexity = 30.0;
  int iterations = 1000;
  double learning_rate = 0.0;  // 0 = auto: max(n/48, 50)
  uint64_t seed = 1;           // jitter source when the PCA init is rank-deficient
};

// Exact O(n^2) t-SNE with early exaggeration, initialized from the scaled
// PCA projection (duplicate input rows therefore start and stay together).
// Refuses degenerate (all-identical) input; requires perplexity < |Y|/3.
ProjectionResult project_tsne(const Tensor2D& embeddings, const LabelSchema& schema,
                              const TsneParams& params);

// Mean silhouette over points (Euclidean), (b-a)/max(a,b) with the 0/0
// convention of 0. Needs >= 2 groups; singleton points score 0.
double silhouette(const Tensor2D& points, const std::vector<int>& groups,
                  std::vector<double>* per_group_means = nullptr);

enum class Grouping { Span, TopLayer };

std::vector<int> grouping_keys(const LabelSchema& schema, Grouping g);

// Silhouette of a 2-D projection under one of the named groupings.
double cluster_stats(const ProjectionResult& result, Grouping g,
                     std::vector<double>* per_group_means = nullptr);

// TSV: label, x, y, span group, top-layer group.
void write_projection_tsv(std::ostream& out, const ProjectionResult& r,
                          const LabelSchema& schema);
// Scatter plot, one circle per label, colored by top-layer group.
void write_projection_svg(std::ostream& out, const ProjectionResult& r,
                          const LabelSchema& schema);

// Embedding export: composed rows (label + D columns), and raw component
// rows (type name, value string, d_k columns).
void write_composed_tsv(std::ostream& out, const Tensor2D& w, const LabelSchema& schema);

}  // namespace seqcomp
