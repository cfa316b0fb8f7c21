#include "seqcomp/projection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <map>
#include <ostream>
#include <set>

#include "seqcomp/errors.hpp"
#include "seqcomp/rng.hpp"

namespace seqcomp {

namespace {

Tensor2D mean_center(const Tensor2D& x) {
  Tensor2D c = x;
  std::vector<double> mean(x.cols, 0.0);
  for (int i = 0; i < x.rows; ++i) {
    const double* r = x.row(i);
    for (int j = 0; j < x.cols; ++j) mean[j] += r[j];
  }
  for (double& m : mean) m /= double(x.rows);
  for (int i = 0; i < c.rows; ++i) {
    double* r = c.row(i);
    for (int j = 0; j < c.cols; ++j) r[j] -= mean[j];
  }
  return c;
}

Tensor2D covariance(const Tensor2D& centered) {
  Tensor2D cov(centered.cols, centered.cols);
  matmul_at_accum(centered, centered, cov);
  const double denom = centered.rows > 1 ? double(centered.rows - 1) : 1.0;
  for (double& v : cov.v) v /= denom;
  return cov;
}

void fill_groups(ProjectionResult& r, const LabelSchema& schema) {
  r.labels = schema.labels();
  r.span_group = grouping_keys(schema, Grouping::Span);
  r.top_group = grouping_keys(schema, Grouping::TopLayer);
}

double sq_dist(const double* a, const double* b, int d) {
  double s = 0.0;
  for (int j = 0; j < d; ++j) {
    const double diff = a[j] - b[j];
    s += diff * diff;
  }
  return s;
}

}  // namespace

std::vector<double> jacobi_eigenvalues(const Tensor2D& sym, Tensor2D* vectors) {
  const int n = sym.rows;
  if (n != sym.cols) throw NumericError("jacobi: matrix must be square");
  Tensor2D a = sym;
  Tensor2D v(n, n);
  for (int i = 0; i < n; ++i) v.at(i, i) = 1.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a.at(p, q) * a.at(p, q);
    if (off < 1e-24 * double(n) * double(n)) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a.at(p, q);
        if (std::fabs(apq) < 1e-300) continue;
        const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a.at(k, p), akq = a.at(k, q);
          a.at(k, p) = c * akp - s * akq;
          a.at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a.at(p, k), aqk = a.at(q, k);
          a.at(p, k) = c * apk - s * aqk;
          a.at(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v.at(k, p), vkq = v.at(k, q);
          v.at(k, p) = c * vkp - s * vkq;
          v.at(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a.at(i, i) > a.at(j, j); });
  std::vector<double> eigvals(n);
  if (vectors) vectors->resize(n, n);
  for (int i = 0; i < n; ++i) {
    eigvals[i] = a.at(order[i], order[i]);
    if (vectors)
      for (int k = 0; k < n; ++k) vectors->at(i, k) = v.at(k, order[i]);
  }
  return eigvals;
}

ProjectionResult project_pca(const Tensor2D& embeddings, const LabelSchema& schema) {
  if (embeddings.rows < 3) throw UsageError("projection needs at least 3 rows");
  ProjectionResult r;
  fill_groups(r, schema);
  r.coords.assign(embeddings.rows, {0.0, 0.0});

  const Tensor2D centered = mean_center(embeddings);
  double norm = 0.0;
  for (double x : centered.v) norm += x * x;
  if (norm == 0.0) {
    r.degenerate = true;
    std::cerr << "warning: all label embeddings identical; PCA projection is zeros\n";
    return r;
  }

  const Tensor2D cov = covariance(centered);
  Tensor2D vectors;
  const auto eigvals = jacobi_eigenvalues(cov, &vectors);
  double trace = 0.0;
  for (int j = 0; j < cov.rows; ++j) trace += cov.at(j, j);

  for (int comp = 0; comp < 2; ++comp) {
    // sign convention: largest-|loading| coordinate positive
    int arg = 0;
    for (int j = 1; j < vectors.cols; ++j)
      if (std::fabs(vectors.at(comp, j)) > std::fabs(vectors.at(comp, arg))) arg = j;
    const double flip = vectors.at(comp, arg) < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < centered.rows; ++i) {
      double dot = 0.0;
      const double* row = centered.row(i);
      for (int j = 0; j < centered.cols; ++j) dot += row[j] * vectors.at(comp, j);
      r.coords[i][comp] = flip * dot;
    }
    r.explained_variance[comp] = eigvals[comp];
    r.explained_variance_ratio[comp] = trace > 0.0 ? eigvals[comp] / trace : 0.0;
  }
  return r;
}

namespace {

// Binary-searches the Gaussian bandwidth for one point to match
// log(perplexity); returns the row of conditional probabilities.
void perplexity_row(const std::vector<double>& sqd, int self, double target_entropy,
                    std::vector<double>& p) {
  double beta = 1.0, beta_min = -std::numeric_limits<double>::infinity(),
         beta_max = std::numeric_limits<double>::infinity();
  const int n = int(sqd.size());
  for (int iter = 0; iter < 64; ++iter) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      p[j] = j == self ? 0.0 : std::exp(-beta * sqd[j]);
      sum += p[j];
    }
    double entropy = 0.0;
    for (int j = 0; j < n; ++j) {
      if (p[j] > 0.0) {
        p[j] /= sum;
        entropy -= p[j] * std::log(p[j]);
      }
    }
    const double diff = entropy - target_entropy;
    if (std::fabs(diff) < 1e-7) break;
    if (diff > 0) {
      beta_min = beta;
      beta = std::isinf(beta_max) ? beta * 2.0 : (beta + beta_max) / 2.0;
    } else {
      beta_max = beta;
      beta = std::isinf(beta_min) ? beta / 2.0 : (beta + beta_min) / 2.0;
    }
  }
}

}  // namespace

ProjectionResult project_tsne(const Tensor2D& embeddings, const LabelSchema& schema,
                              const TsneParams& params) {
  const int n = embeddings.rows;
  if (n < 3) throw UsageError("projection needs at least 3 rows");
  if (params.perplexity >= double(n) / 3.0)
    throw UsageError("t-SNE perplexity must be below |Y|/3");

  ProjectionResult r;
  fill_groups(r, schema);

  // pairwise squared distances
  std::vector<std::vector<double>> sqd(n, std::vector<double>(n, 0.0));
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = sq_dist(embeddings.row(i), embeddings.row(j), embeddings.cols);
      sqd[i][j] = sqd[j][i] = d;
      total += d;
    }
  if (total == 0.0) throw DataError("t-SNE refuses degenerate all-identical input");

  // symmetrized affinities
  Tensor2D p(n, n);
  {
    std::vector<double> row(n);
    const double target_entropy = std::log(params.perplexity);
    for (int i = 0; i < n; ++i) {
      perplexity_row(sqd[i], i, target_entropy, row);
      for (int j = 0; j < n; ++j) p.at(i, j) = row[j];
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double sym = (p.at(i, j) + p.at(j, i)) / (2.0 * n);
      p.at(i, j) = p.at(j, i) = std::max(sym, 1e-12);
    }

  Tensor2D y(n, 2), dy(n, 2), vel(n, 2), gains(n, 2);
  gains.fill(1.0);
  {
    const ProjectionResult init = project_pca(embeddings, schema);
    double var[2] = {0.0, 0.0};
    for (const auto& c : init.coords) {
      var[0] += c[0] * c[0];
      var[1] += c[1] * c[1];
    }
    RngState rng(RngState::derive_seed(params.seed, "tsne"));
    for (int d = 0; d < 2; ++d) {
      const double std_ = std::sqrt(var[d] / n);
      if (std_ > 0.0) {
        const double scale = 1e-4 / std_;
        for (int i = 0; i < n; ++i) y.at(i, d) = scale * init.coords[i][d];
      } else {
        // rank-deficient direction: seeded jitter
        for (int i = 0; i < n; ++i) y.at(i, d) = rng.normal(0.0, 1e-4);
      }
    }
  }

  const double learning_rate =
      params.learning_rate > 0.0 ? params.learning_rate
                                 : std::max(double(n) / 48.0, 50.0);
  const int exaggeration_until = std::min(250, params.iterations / 4 + 1);
  for (int iter = 0; iter < params.iterations; ++iter) {
    const double exaggeration = iter < exaggeration_until ? 12.0 : 1.0;
    const double momentum = iter < 250 ? 0.5 : 0.8;

    // q_ij denominator
    std::vector<std::vector<double>> num(n, std::vector<double>(n, 0.0));
    double qsum = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double d = sq_dist(y.row(i), y.row(j), 2);
        const double t = 1.0 / (1.0 + d);
        num[i][j] = num[j][i] = t;
        qsum += 2.0 * t;
      }

    dy.fill(0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const double q = std::max(num[i][j] / qsum, 1e-12);
        const double mult = (exaggeration * p.at(i, j) - q) * num[i][j];
        for (int d = 0; d < 2; ++d)
          dy.at(i, d) += 4.0 * mult * (y.at(i, d) - y.at(j, d));
      }
    }

    for (int i = 0; i < n; ++i)
      for (int d = 0; d < 2; ++d) {
        const bool same_sign = (dy.at(i, d) > 0) == (vel.at(i, d) > 0);
        gains.at(i, d) = same_sign ? std::max(gains.at(i, d) * 0.8, 0.01)
                                   : gains.at(i, d) + 0.2;
        vel.at(i, d) =
            momentum * vel.at(i, d) - learning_rate * gains.at(i, d) * dy.at(i, d);
        y.at(i, d) += vel.at(i, d);
      }
  }

  r.coords.resize(n);
  for (int i = 0; i < n; ++i) r.coords[i] = {y.at(i, 0), y.at(i, 1)};
  return r;
}

double silhouette(const Tensor2D& points, const std::vector<int>& groups,
                  std::vector<double>* per_group_means) {
  const int n = points.rows;
  if (int(groups.size()) != n)
    throw UsageError("silhouette: one group id per point required");
  std::map<int, int> group_sizes;
  for (int g : groups) group_sizes[g] += 1;
  if (group_sizes.size() < 2)
    throw UsageError("silhouette needs at least 2 groups");

  std::vector<double> scores(n, 0.0);
  for (int i = 0; i < n; ++i) {
    std::map<int, double> dist_sum;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      dist_sum[groups[j]] += std::sqrt(sq_dist(points.row(i), points.row(j), points.cols));
    }
    const int own = groups[i];
    const int own_others = group_sizes[own] - 1;
    if (own_others == 0) continue;  // singleton: score 0
    const double a = dist_sum[own] / double(own_others);
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [g, size] : group_sizes) {
      if (g == own) continue;
      b = std::min(b, dist_sum[g] / double(size));
    }
    const double denom = std::max(a, b);
    scores[i] = denom > 0.0 ? (b - a) / denom : 0.0;
  }

  if (per_group_means) {
    per_group_means->clear();
    for (const auto& [g, size] : group_sizes) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        if (groups[i] == g) s += scores[i];
      per_group_means->push_back(s / double(size));
    }
  }
  double mean = 0.0;
  for (double s : scores) mean += s;
  return mean / double(n);
}

std::vector<int> grouping_keys(const LabelSchema& schema, Grouping g) {
  std::vector<int> keys(schema.num_labels());
  for (int y = 0; y < schema.num_labels(); ++y) {
    keys[y] = g == Grouping::Span ? schema.span_value(y)
                                  : (schema.K() > 1 ? schema.decomposition(y).values[1] : 0);
  }
  return keys;
}

double cluster_stats(const ProjectionResult& result, Grouping g,
                     std::vector<double>* per_group_means) {
  Tensor2D pts(int(result.coords.size()), 2);
  for (size_t i = 0; i < result.coords.size(); ++i) {
    pts.at(int(i), 0) = result.coords[i][0];
    pts.at(int(i), 1) = result.coords[i][1];
  }
  const auto& groups = g == Grouping::Span ? result.span_group : result.top_group;
  return silhouette(pts, groups, per_group_means);
}

void write_projection_tsv(std::ostream& out, const ProjectionResult& r,
                          const LabelSchema& schema) {
  out << "label\tx\ty\tspan_group\ttop_group\n";
  char buf[256];
  for (size_t i = 0; i < r.labels.size(); ++i) {
    const std::string span = schema.value_name(0, r.span_group[i]);
    const std::string top =
        schema.K() > 1 ? schema.value_name(1, r.top_group[i]) : std::string("-");
    std::snprintf(buf, sizeof buf, "%s\t%.9g\t%.9g\t%s\t%s\n", r.labels[i].c_str(),
                  r.coords[i][0], r.coords[i][1], span.c_str(), top.c_str());
    out << buf;
  }
}

void write_projection_svg(std::ostream& out, const ProjectionResult& r,
                          const LabelSchema& schema) {
  const int size = 720, margin = 40;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!r.coords.empty()) {
    xmin = xmax = r.coords[0][0];
    ymin = ymax = r.coords[0][1];
    for (const auto& c : r.coords) {
      xmin = std::min(xmin, c[0]);
      xmax = std::max(xmax, c[0]);
      ymin = std::min(ymin, c[1]);
      ymax = std::max(ymax, c[1]);
    }
  }
  const double xspan = xmax > xmin ? xmax - xmin : 1.0;
  const double yspan = ymax > ymin ? ymax - ymin : 1.0;

  std::set<int> tops(r.top_group.begin(), r.top_group.end());
  std::map<int, int> color_index;
  for (int t : tops) color_index[t] = int(color_index.size());
  const int n_colors = std::max(1, int(color_index.size()));

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\""
      << size << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  char buf[256];
  for (size_t i = 0; i < r.coords.size(); ++i) {
    const double px = margin + (r.coords[i][0] - xmin) / xspan * (size - 2 * margin);
    const double py = size - margin - (r.coords[i][1] - ymin) / yspan * (size - 2 * margin);
    const int hue = (360 * color_index[r.top_group[i]]) / n_colors;
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"4\" fill=\"hsl(%d,70%%,45%%)\" "
                  "fill-opacity=\"0.8\"><title>%s</title></circle>\n",
                  px, py, hue, r.labels[i].c_str());
    out << buf;
  }
  out << "</svg>\n";
}

void write_composed_tsv(std::ostream& out, const Tensor2D& w, const LabelSchema& schema) {
  out << "label";
  for (int j = 0; j < w.cols; ++j) out << "\td" << j;
  out << "\n";
  char buf[32];
  for (int y = 0; y < w.rows; ++y) {
    out << schema.label(y);
    for (int j = 0; j < w.cols; ++j) {
      std::snprintf(buf, sizeof buf, "\t%.17g", w.at(y, j));
      out << buf;
    }
    out << "\n";
  }
}

}  // namespace seqcomp
