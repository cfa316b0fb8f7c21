#pragma once

// Test-only reference implementations, written independently of the library
// paths they check: a string-level conlleval-style IOB2 decoder, brute-force
// set-intersection span scorers, and a power-iteration eigensolver.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "seqcomp/rng.hpp"
#include "seqcomp/tensor.hpp"

namespace oracle {

// (start, end, entity type string); "" type means boundary-only.
using Span = std::tuple<int, int, std::string>;

// conlleval IOB2 semantics on raw label strings: a chunk starts at B-x, or
// at I-x when the previous token was not B-x/I-x of the same x; it ends
// before O, before any B, or before an I of a different type.
inline std::vector<Span> decode_iob2(const std::vector<std::string>& labels) {
  std::vector<Span> out;
  std::string cur_type;
  int cur_start = -1;
  auto flush = [&](int end) {
    if (cur_start >= 0) out.emplace_back(cur_start, end, cur_type);
    cur_start = -1;
    cur_type.clear();
  };
  for (int i = 0; i < int(labels.size()); ++i) {
    const std::string& l = labels[i];
    if (l == "O") {
      flush(i);
      continue;
    }
    const char prefix = l[0];
    const std::string type = l.substr(2);
    const bool continues = prefix == 'I' && cur_start >= 0 && cur_type == type;
    if (!continues) {
      flush(i);
      cur_start = i;
      cur_type = type;
    }
  }
  flush(int(labels.size()));
  return out;
}

struct Counts {
  long long tp = 0, fp = 0, fn = 0;
  bool operator==(const Counts&) const = default;
};

// Exact-match scoring by multiset intersection, per sentence.
inline Counts score(const std::vector<std::vector<Span>>& gold,
                    const std::vector<std::vector<Span>>& pred) {
  Counts c;
  for (size_t s = 0; s < gold.size(); ++s) {
    std::map<Span, int> gcount;
    for (const auto& g : gold[s]) gcount[g] += 1;
    for (const auto& p : pred[s]) {
      auto it = gcount.find(p);
      if (it != gcount.end() && it->second > 0) {
        it->second -= 1;
        c.tp += 1;
      } else {
        c.fp += 1;
      }
    }
    long long remaining = 0;
    for (const auto& [span, n] : gcount) remaining += n;
    c.fn += remaining;
  }
  return c;
}

inline std::string truncate_type(const std::string& type, int depth) {
  std::string out;
  int seen = 0;
  for (char ch : type) {
    if (ch == '/') {
      if (++seen == depth) return out;
    }
    out += ch;
  }
  return out;
}

inline std::vector<std::vector<Span>> map_spans(
    const std::vector<std::vector<Span>>& spans,
    const std::function<Span(const Span&)>& f) {
  std::vector<std::vector<Span>> out(spans.size());
  for (size_t s = 0; s < spans.size(); ++s)
    for (const auto& sp : spans[s]) out[s].push_back(f(sp));
  return out;
}

// Per-bucket tally: precision attributes FPs by the predicted label's
// bucket, recall attributes FNs by the gold label's bucket.
inline std::array<Counts, 3> score_bucketed(
    const std::vector<std::vector<Span>>& gold,
    const std::vector<std::vector<Span>>& pred,
    const std::function<int(const std::string&)>& bucket_of) {
  std::array<Counts, 3> c{};
  for (size_t s = 0; s < gold.size(); ++s) {
    std::map<Span, int> gcount;
    for (const auto& g : gold[s]) gcount[g] += 1;
    for (const auto& p : pred[s]) {
      const int b = bucket_of(std::get<2>(p));
      auto it = gcount.find(p);
      if (it != gcount.end() && it->second > 0) {
        it->second -= 1;
        c[b].tp += 1;
      } else {
        c[b].fp += 1;
      }
    }
    for (const auto& [span, n] : gcount)
      c[bucket_of(std::get<2>(span))].fn += n;
  }
  return c;
}

// Dominant eigenpairs of a symmetric matrix by power iteration with
// deflation; independent of the Jacobi solver in the library.
inline std::vector<double> power_iteration_eigenvalues(const seqcomp::Tensor2D& sym,
                                                       int count, uint64_t seed) {
  const int n = sym.rows;
  seqcomp::Tensor2D a = sym;
  seqcomp::RngState rng(seed);
  std::vector<double> eigvals;
  for (int e = 0; e < count; ++e) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal(0.0, 1.0);
    double lambda = 0.0;
    for (int iter = 0; iter < 2000; ++iter) {
      std::vector<double> av(n, 0.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) av[i] += a.at(i, j) * v[j];
      double norm = 0.0;
      for (double x : av) norm += x * x;
      norm = std::sqrt(norm);
      if (norm == 0.0) break;
      for (int i = 0; i < n; ++i) v[i] = av[i] / norm;
      // Rayleigh quotient
      double num = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) num += v[i] * a.at(i, j) * v[j];
      lambda = num;
    }
    eigvals.push_back(lambda);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a.at(i, j) -= lambda * v[i] * v[j];
  }
  return eigvals;
}

}  // namespace oracle
