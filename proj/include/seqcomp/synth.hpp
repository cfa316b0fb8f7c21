#pragma once

#include <cstdint>
#include <vector>

#include "seqcomp/corpus.hpp"
#include "seqcomp/schema.hpp"

namespace seqcomp {

// Synthetic hierarchical-NER generator. Leaf entity types live in a
// Top/Mid/Leaf hierarchy (K=4 with the span type) and are drawn with
// Zipf-skewed frequencies, so the emitted label set spans the Low/Middle/
// High training-frequency buckets. Entities carry type-revealing cue
// tokens: the leaf cue appears with probability `cue_strength`; remaining
// entity tokens mix top-level and mid-level cues with generic fillers,
// which is what lets shared label components pay off for rare leaves.
struct SyntheticSpec {
  int n_top_types = 4;
  int n_mid_per_top = 3;
  int n_leaf_per_mid = 4;
  double zipf_exponent = 1.4;
  int train_sentences = 2000;
  int dev_sentences = 500;
  int test_sentences = 500;
  int min_sentence_len = 6;
  int max_sentence_len = 14;
  double entity_density = 0.25;  // chance a position opens an entity
  double cue_strength = 0.9;
  int filler_vocab = 40;
  uint64_t seed = 1;

  void validate() const;
};

struct SyntheticCorpus {
  std::vector<SentenceExample> train;
  std::vector<SentenceExample> dev;
  std::vector<SentenceExample> test;
  LabelSchema schema;
};

// Deterministic by seed; splits are disjoint by sentence.
SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

}  // namespace seqcomp
