#include "seqcomp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "seqcomp/errors.hpp"
#include "seqcomp/rng.hpp"

namespace seqcomp {

void SyntheticSpec::validate() const {
  if (n_top_types <= 0 || n_mid_per_top <= 0 || n_leaf_per_mid <= 0)
    throw UsageError("synthetic hierarchy sizes must be positive");
  if (zipf_exponent <= 0.0) throw UsageError("zipf_exponent must be positive");
  if (train_sentences <= 0 || dev_sentences <= 0 || test_sentences <= 0)
    throw UsageError("split sizes must be positive");
  if (min_sentence_len <= 0 || max_sentence_len < min_sentence_len)
    throw UsageError("bad sentence length range");
  if (entity_density <= 0.0 || entity_density >= 1.0)
    throw UsageError("entity_density must be in (0, 1)");
  if (cue_strength < 0.0 || cue_strength > 1.0)
    throw UsageError("cue_strength must be in [0, 1]");
  if (filler_vocab <= 0) throw UsageError("filler_vocab must be positive");
}

namespace {

struct LeafType {
  int top, mid, leaf;
  std::string path;       // "T<t>/M<t>_<m>/L<t>_<m>_<l>"
  std::string leaf_cue;   // unique per leaf
  std::string mid_cue;    // shared across the mid's leaves
  std::string top_cue;    // shared across the top's subtree
};

std::vector<double> zipf_cdf(int n, double exponent) {
  std::vector<double> cdf(n);
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    sum += 1.0 / std::pow(double(k + 1), exponent);
    cdf[k] = sum;
  }
  for (double& x : cdf) x /= sum;
  return cdf;
}

int sample_cdf(const std::vector<double>& cdf, RngState& rng) {
  const double u = rng.uniform();
  return int(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
}

SentenceExample make_sentence(const SyntheticSpec& spec,
                              const std::vector<LeafType>& leaves,
                              const std::vector<double>& cdf, RngState& rng) {
  SentenceExample s;
  const int len =
      spec.min_sentence_len + int(rng.below(spec.max_sentence_len - spec.min_sentence_len + 1));
  auto filler = [&] { return "w" + std::to_string(rng.below(uint64_t(spec.filler_vocab))); };
  int pos = 0;
  while (pos < len) {
    if (rng.uniform() < spec.entity_density) {
      const LeafType& lt = leaves[sample_cdf(cdf, rng)];
      const int max_len = std::min(4, len - pos);
      const int elen = 1 + int(rng.below(uint64_t(max_len)));
      const int cue_pos = int(rng.below(uint64_t(elen)));
      const bool leaf_cue = rng.uniform() < spec.cue_strength;
      for (int i = 0; i < elen; ++i) {
        std::string tok;
        if (i == cue_pos && leaf_cue) {
          tok = lt.leaf_cue;
        } else {
          const double u = rng.uniform();
          if (u < 0.45)
            tok = lt.top_cue;
          else if (u < 0.80)
            tok = lt.mid_cue;
          else
            tok = filler();
        }
        s.tokens.push_back(std::move(tok));
        s.gold_labels.push_back((i == 0 ? "B-" : "I-") + lt.path);
      }
      pos += elen;
      // entities are separated by at least one outside token
      if (pos < len) {
        s.tokens.push_back(filler());
        s.gold_labels.push_back("O");
        pos += 1;
      }
    } else {
      s.tokens.push_back(filler());
      s.gold_labels.push_back("O");
      pos += 1;
    }
  }
  return s;
}

uint64_t sentence_hash(const SentenceExample& s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (size_t i = 0; i < s.tokens.size(); ++i) {
    h = fnv1a64(s.tokens[i], h);
    h = fnv1a64("\x1f", h);
    h = fnv1a64(s.gold_labels[i], h);
    h = fnv1a64("\x1e", h);
  }
  return h;
}

}  // namespace

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();

  std::vector<LeafType> leaves;
  std::vector<std::string> label_strings{"O"};
  for (int t = 0; t < spec.n_top_types; ++t) {
    for (int m = 0; m < spec.n_mid_per_top; ++m) {
      for (int l = 0; l < spec.n_leaf_per_mid; ++l) {
        LeafType lt;
        lt.top = t;
        lt.mid = m;
        lt.leaf = l;
        const std::string tm = std::to_string(t) + "_" + std::to_string(m);
        lt.path = "T" + std::to_string(t) + "/M" + tm + "/L" + tm + "_" + std::to_string(l);
        lt.leaf_cue = "cueL_" + tm + "_" + std::to_string(l);
        lt.mid_cue = "cueM_" + tm;
        lt.top_cue = "cueT_" + std::to_string(t);
        label_strings.push_back("B-" + lt.path);
        label_strings.push_back("I-" + lt.path);
        leaves.push_back(std::move(lt));
      }
    }
  }

  SyntheticCorpus out;
  out.schema = LabelSchema::build(label_strings);

  const auto cdf = zipf_cdf(int(leaves.size()), spec.zipf_exponent);
  RngState rng(RngState::derive_seed(spec.seed, "synth"));
  std::set<uint64_t> seen;
  auto fill_split = [&](std::vector<SentenceExample>& split, int count) {
    split.reserve(count);
    while (int(split.size()) < count) {
      SentenceExample s = make_sentence(spec, leaves, cdf, rng);
      // splits must be sentence-disjoint; retry duplicates
      if (!seen.insert(sentence_hash(s)).second) continue;
      split.push_back(std::move(s));
    }
  };
  fill_split(out.train, spec.train_sentences);
  fill_split(out.dev, spec.dev_sentences);
  fill_split(out.test, spec.test_sentences);
  return out;
}

}  // namespace seqcomp
