#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "seqcomp/corpus.hpp"
#include "seqcomp/schema.hpp"

namespace seqcomp {

// A decoded entity: [start, end) token indices plus the layer-value path
// (NULL-padded to K-1 entries, no span symbol).
struct SpanMention {
  int start = 0;
  int end = 0;
  std::vector<int> type_path;

  bool operator==(const SpanMention&) const = default;
  bool operator<(const SpanMention& o) const {
    if (start != o.start) return start < o.start;
    if (end != o.end) return end < o.end;
    return type_path < o.type_path;
  }
};

// IOB2 decoding with conlleval-compatible repair: a stray I-t (not preceded
// by B-t/I-t of the identical type path) opens a new span. Total: never
// fails, never overlaps.
std::vector<SpanMention> decode_spans(const std::vector<int>& label_ids,
                                      const LabelSchema& schema);

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t fn = 0;
};

// F1 = 2PR/(P+R), with the 0/0 conventions: empty predictions give P=0.
PRF prf_from_counts(int64_t tp, int64_t fp, int64_t fn);

using SpansPerSentence = std::vector<std::vector<SpanMention>>;

// Micro-averaged exact-match span F1 over sentence-aligned corpora.
PRF span_f1(const SpansPerSentence& gold, const SpansPerSentence& pred);

enum class Bucket { Low = 0, Mid = 1, High = 2 };
constexpr std::array<const char*, 3> kBucketNames = {"low", "mid", "high"};

// Low (0,100], Middle (100,500], High (500,inf) by training-set gold entity
// count. Predicted labels absent from training fall into Low.
struct FrequencyBuckets {
  std::map<std::string, int64_t> counts;  // entity path -> train mention count
  int64_t low_max = 100;
  int64_t mid_max = 500;

  Bucket bucket_of(const std::string& path) const;
  static FrequencyBuckets from_training(const std::vector<SentenceExample>& train,
                                        const LabelSchema& schema);
};

// Per-bucket P/R/F1: recall of bucket b over gold entities with label in b,
// precision over predicted entities with predicted label in b.
std::array<PRF, 3> bucketed_f1(const SpansPerSentence& gold, const SpansPerSentence& pred,
                               const LabelSchema& schema, const FrequencyBuckets& buckets);

// Correct at depth d iff boundaries match and the first d path components
// match (NULL-padded comparison). d = K-1 coincides with span_f1.
PRF layer_f1(const SpansPerSentence& gold, const SpansPerSentence& pred, int depth);

// Boundary-only match: (start, end) regardless of entity type.
PRF boundary_f1(const SpansPerSentence& gold, const SpansPerSentence& pred);

// The four scoring views over one test corpus.
struct EvalReport {
  PRF overall;
  std::array<PRF, 3> buckets;
  std::vector<PRF> layers;  // depth 1..K-1
  PRF boundary;
};

EvalReport evaluate(const SpansPerSentence& gold, const SpansPerSentence& pred,
                    const LabelSchema& schema, const FrequencyBuckets& buckets);

// Gold/pred helpers on raw corpora.
SpansPerSentence gold_spans(const std::vector<SentenceExample>& corpus,
                            const LabelSchema& schema);

// Machine-readable TSV: view, key, precision, recall, f1, tp, fp, fn.
void write_report_tsv(std::ostream& out, const EvalReport& report);
// Human-readable table, percent with two decimals.
void write_report_table(std::ostream& out, const EvalReport& report);

// Flattened (metric name, value) view; the multi-seed aggregator works on it.
std::vector<std::pair<std::string, double>> report_metrics(const EvalReport& report);

}  // namespace seqcomp
