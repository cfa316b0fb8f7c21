#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "seqcomp/errors.hpp"
#include "seqcomp/projection.hpp"
#include "seqcomp/rng.hpp"

using namespace seqcomp;

namespace {

LabelSchema simple_schema() {
  return LabelSchema::build({"O", "B-A/X", "I-A/X", "B-A/Y", "I-A/Y", "B-B/Z", "I-B/Z"});
}

Tensor2D random_embeddings(int rows, int cols, uint64_t seed) {
  Tensor2D w(rows, cols);
  RngState rng(seed);
  for (double& x : w.v) x = rng.normal(0.0, 1.0);
  return w;
}

double dist2d(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

}  // namespace

TEST_CASE("pca: centered 2-D input is reproduced up to rotation/sign") {
  const auto schema = simple_schema();
  Tensor2D w = random_embeddings(schema.num_labels(), 2, 5);
  // center it
  for (int j = 0; j < 2; ++j) {
    double mean = 0;
    for (int i = 0; i < w.rows; ++i) mean += w.at(i, j);
    mean /= w.rows;
    for (int i = 0; i < w.rows; ++i) w.at(i, j) -= mean;
  }
  const auto r = project_pca(w, schema);
  // full-rank 2-D data: projection is an isometry, distances preserved
  for (int i = 0; i < w.rows; ++i)
    for (int j = i + 1; j < w.rows; ++j) {
      const double orig = std::hypot(w.at(i, 0) - w.at(j, 0), w.at(i, 1) - w.at(j, 1));
      CHECK(dist2d(r.coords[i], r.coords[j]) == doctest::Approx(orig).epsilon(1e-9));
    }
}

TEST_CASE("pca: duplicated rows project to identical points") {
  const auto schema = simple_schema();
  Tensor2D w = random_embeddings(schema.num_labels(), 6, 8);
  for (int j = 0; j < 6; ++j) w.at(2, j) = w.at(1, j);
  const auto r = project_pca(w, schema);
  CHECK(r.coords[1][0] == doctest::Approx(r.coords[2][0]).epsilon(1e-12));
  CHECK(r.coords[1][1] == doctest::Approx(r.coords[2][1]).epsilon(1e-12));
}

TEST_CASE("pca: explained variance matches the power-iteration oracle") {
  const auto schema = simple_schema();
  const Tensor2D w = random_embeddings(schema.num_labels(), 5, 21);
  const auto r = project_pca(w, schema);

  Tensor2D centered = w;
  for (int j = 0; j < w.cols; ++j) {
    double mean = 0;
    for (int i = 0; i < w.rows; ++i) mean += w.at(i, j);
    mean /= w.rows;
    for (int i = 0; i < w.rows; ++i) centered.at(i, j) -= mean;
  }
  Tensor2D cov(w.cols, w.cols);
  matmul_at_accum(centered, centered, cov);
  for (double& v : cov.v) v /= double(w.rows - 1);

  const auto oracle_vals = oracle::power_iteration_eigenvalues(cov, 2, 99);
  CHECK(std::fabs(r.explained_variance[0] - oracle_vals[0]) < 1e-8);
  CHECK(std::fabs(r.explained_variance[1] - oracle_vals[1]) < 1e-8);
}

TEST_CASE("pca: invariant to adding a constant vector to all rows") {
  const auto schema = simple_schema();
  const Tensor2D w = random_embeddings(schema.num_labels(), 4, 33);
  Tensor2D shifted = w;
  for (int i = 0; i < w.rows; ++i)
    for (int j = 0; j < w.cols; ++j) shifted.at(i, j) += double(j) * 2.5 - 1.0;
  const auto a = project_pca(w, schema);
  const auto b = project_pca(shifted, schema);
  for (size_t i = 0; i < a.coords.size(); ++i) {
    CHECK(a.coords[i][0] == doctest::Approx(b.coords[i][0]).epsilon(1e-9));
    CHECK(a.coords[i][1] == doctest::Approx(b.coords[i][1]).epsilon(1e-9));
  }
}

TEST_CASE("pca: degenerate input returns zeros with the warning flag") {
  const auto schema = simple_schema();
  Tensor2D w(schema.num_labels(), 4);
  for (int i = 0; i < w.rows; ++i)
    for (int j = 0; j < 4; ++j) w.at(i, j) = 3.25;
  const auto r = project_pca(w, schema);
  CHECK(r.degenerate);
  for (const auto& c : r.coords) {
    CHECK(c[0] == 0.0);
    CHECK(c[1] == 0.0);
  }
}

TEST_CASE("tsne: refuses degenerate input and oversized perplexity") {
  const auto schema = simple_schema();
  Tensor2D w(schema.num_labels(), 4);
  TsneParams params;
  params.perplexity = 2.0;
  params.iterations = 10;
  CHECK_THROWS_AS(project_tsne(w, schema, params), DataError);

  const Tensor2D ok = random_embeddings(schema.num_labels(), 4, 2);
  params.perplexity = 10.0;  // >= 7/3
  CHECK_THROWS_AS(project_tsne(ok, schema, params), UsageError);
}

TEST_CASE("tsne: deterministic by seed; duplicated rows stay together") {
  const auto schema = simple_schema();
  Tensor2D w = random_embeddings(schema.num_labels(), 4, 13);
  for (int j = 0; j < 4; ++j) w.at(3, j) = w.at(4, j);
  TsneParams params;
  params.perplexity = 2.0;
  params.iterations = 120;
  const auto a = project_tsne(w, schema, params);
  const auto b = project_tsne(w, schema, params);
  for (size_t i = 0; i < a.coords.size(); ++i) {
    CHECK(a.coords[i][0] == b.coords[i][0]);
    CHECK(a.coords[i][1] == b.coords[i][1]);
  }
  // identical inputs start together under PCA init and stay glued
  CHECK(dist2d(a.coords[3], a.coords[4]) < 1e-6);
}

TEST_CASE("silhouette: two tight far-apart blobs score above 0.9") {
  Tensor2D pts(10, 2);
  std::vector<int> groups(10);
  RngState rng(4);
  for (int i = 0; i < 10; ++i) {
    const bool right = i >= 5;
    groups[i] = right;
    pts.at(i, 0) = (right ? 100.0 : 0.0) + rng.uniform(-0.5, 0.5);
    pts.at(i, 1) = rng.uniform(-0.5, 0.5);
  }
  CHECK(silhouette(pts, groups) > 0.9);
}

TEST_CASE("silhouette: all-identical points score 0 by convention") {
  Tensor2D pts(6, 2);
  std::vector<int> groups{0, 0, 0, 1, 1, 1};
  CHECK(silhouette(pts, groups) == 0.0);
}

TEST_CASE("silhouette: single group is an error") {
  Tensor2D pts(4, 2);
  std::vector<int> groups{1, 1, 1, 1};
  CHECK_THROWS_AS(silhouette(pts, groups), UsageError);
}

TEST_CASE("silhouette: random groups on uniform points hover near 0") {
  RngState rng(77);
  double total = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Tensor2D pts(40, 2);
    for (double& x : pts.v) x = rng.uniform(0, 1);
    std::vector<int> groups(40);
    for (auto& g : groups) g = int(rng.below(3));
    bool has_two = false;
    for (int g : groups) has_two |= g != groups[0];
    if (!has_two) groups[0] = (groups[0] + 1) % 3;
    total += silhouette(pts, groups);
  }
  CHECK(std::fabs(total / 20.0) < 0.1);
}

TEST_CASE("grouping keys and cluster_stats run on a projection") {
  const auto schema = simple_schema();
  const auto keys = grouping_keys(schema, Grouping::Span);
  CHECK(keys[0] == LabelSchema::kSpanO);
  CHECK(keys[schema.label_id("B-A/X")] == LabelSchema::kSpanB);
  CHECK(keys[schema.label_id("I-B/Z")] == LabelSchema::kSpanI);

  const auto tops = grouping_keys(schema, Grouping::TopLayer);
  CHECK(tops[schema.label_id("B-A/X")] == tops[schema.label_id("I-A/Y")]);
  CHECK(tops[schema.label_id("B-A/X")] != tops[schema.label_id("B-B/Z")]);

  const Tensor2D w = random_embeddings(schema.num_labels(), 4, 55);
  const auto r = project_pca(w, schema);
  CHECK_NOTHROW(cluster_stats(r, Grouping::Span));
  CHECK_NOTHROW(cluster_stats(r, Grouping::TopLayer));
}
