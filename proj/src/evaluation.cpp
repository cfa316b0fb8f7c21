#include "seqcomp/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <set>

#include "seqcomp/errors.hpp"

namespace seqcomp {

std::vector<SpanMention> decode_spans(const std::vector<int>& label_ids,
                                      const LabelSchema& schema) {
  std::vector<SpanMention> spans;
  bool open = false;
  SpanMention cur;
  auto close = [&](int end) {
    if (open) {
      cur.end = end;
      spans.push_back(cur);
      open = false;
    }
  };
  for (size_t i = 0; i < label_ids.size(); ++i) {
    const int y = label_ids[i];
    const int span = schema.span_value(y);
    if (span == LabelSchema::kSpanO) {
      close(int(i));
      continue;
    }
    auto path = schema.type_path(y);
    if (span == LabelSchema::kSpanB || !open || cur.type_path != path) {
      close(int(i));
      cur.start = int(i);
      cur.type_path = std::move(path);
      open = true;
    }
    // else: I continuing the open span of identical type
  }
  close(int(label_ids.size()));
  return spans;
}

PRF prf_from_counts(int64_t tp, int64_t fp, int64_t fn) {
  PRF r;
  r.tp = tp;
  r.fp = fp;
  r.fn = fn;
  r.precision = (tp + fp) > 0 ? double(tp) / double(tp + fp) : 0.0;
  r.recall = (tp + fn) > 0 ? double(tp) / double(tp + fn) : 0.0;
  r.f1 = (r.precision + r.recall) > 0.0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

namespace {

void check_aligned(const SpansPerSentence& gold, const SpansPerSentence& pred) {
  if (gold.size() != pred.size())
    throw DataError("span scoring: gold and predictions are not sentence-aligned");
}

// Counts exact matches between two per-sentence span lists after applying
// `key` to each span. Spans within one sentence are unique, so set
// intersection per sentence is exact.
template <class Key>
PRF count_matches(const SpansPerSentence& gold, const SpansPerSentence& pred, Key key) {
  check_aligned(gold, pred);
  int64_t tp = 0, fp = 0, fn = 0;
  for (size_t s = 0; s < gold.size(); ++s) {
    std::set<decltype(key(gold[s][0]))> gset;
    for (const auto& g : gold[s]) gset.insert(key(g));
    int64_t matched = 0;
    std::set<decltype(key(gold[s][0]))> pseen;
    for (const auto& p : pred[s]) {
      const auto k = key(p);
      if (gset.count(k) && pseen.insert(k).second)
        ++matched;
      else
        ++fp;
    }
    tp += matched;
    fn += int64_t(gold[s].size()) - matched;
  }
  return prf_from_counts(tp, fp, fn);
}

}  // namespace

PRF span_f1(const SpansPerSentence& gold, const SpansPerSentence& pred) {
  return count_matches(gold, pred, [](const SpanMention& m) {
    return std::make_tuple(m.start, m.end, m.type_path);
  });
}

Bucket FrequencyBuckets::bucket_of(const std::string& path) const {
  const auto it = counts.find(path);
  const int64_t c = it == counts.end() ? 0 : it->second;
  if (c <= low_max) return Bucket::Low;
  if (c <= mid_max) return Bucket::Mid;
  return Bucket::High;
}

FrequencyBuckets FrequencyBuckets::from_training(
    const std::vector<SentenceExample>& train, const LabelSchema& schema) {
  FrequencyBuckets b;
  b.counts = frequency_table(train, schema);
  return b;
}

std::array<PRF, 3> bucketed_f1(const SpansPerSentence& gold, const SpansPerSentence& pred,
                               const LabelSchema& schema, const FrequencyBuckets& buckets) {
  check_aligned(gold, pred);
  int64_t tp[3] = {0, 0, 0}, fp[3] = {0, 0, 0}, fn[3] = {0, 0, 0};
  for (size_t s = 0; s < gold.size(); ++s) {
    std::set<SpanMention> gset(gold[s].begin(), gold[s].end());
    std::set<SpanMention> matched;
    for (const auto& p : pred[s]) {
      const int b = int(buckets.bucket_of(schema.path_string(p.type_path)));
      if (gset.count(p) && matched.insert(p).second)
        ++tp[b];
      else
        ++fp[b];
    }
    for (const auto& g : gold[s]) {
      if (!matched.count(g))
        ++fn[int(buckets.bucket_of(schema.path_string(g.type_path)))];
    }
  }
  std::array<PRF, 3> out;
  for (int b = 0; b < 3; ++b) out[b] = prf_from_counts(tp[b], fp[b], fn[b]);
  return out;
}

PRF layer_f1(const SpansPerSentence& gold, const SpansPerSentence& pred, int depth) {
  if (depth < 1) throw UsageError("layer_f1: depth must be >= 1");
  return count_matches(gold, pred, [depth](const SpanMention& m) {
    std::vector<int> trunc(size_t(depth), 0);
    for (int k = 0; k < depth && k < int(m.type_path.size()); ++k)
      trunc[k] = m.type_path[k];
    return std::make_tuple(m.start, m.end, trunc);
  });
}

PRF boundary_f1(const SpansPerSentence& gold, const SpansPerSentence& pred) {
  return count_matches(gold, pred, [](const SpanMention& m) {
    return std::make_tuple(m.start, m.end);
  });
}

EvalReport evaluate(const SpansPerSentence& gold, const SpansPerSentence& pred,
                    const LabelSchema& schema, const FrequencyBuckets& buckets) {
  EvalReport r;
  r.overall = span_f1(gold, pred);
  r.buckets = bucketed_f1(gold, pred, schema, buckets);
  for (int d = 1; d <= schema.hierarchy_depth(); ++d)
    r.layers.push_back(layer_f1(gold, pred, d));
  r.boundary = boundary_f1(gold, pred);
  return r;
}

SpansPerSentence gold_spans(const std::vector<SentenceExample>& corpus,
                            const LabelSchema& schema) {
  SpansPerSentence out;
  out.reserve(corpus.size());
  for (const auto& s : corpus) out.push_back(decode_spans(to_label_ids(s, schema), schema));
  return out;
}

namespace {

void tsv_row(std::ostream& out, const std::string& view, const std::string& key,
             const PRF& p) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s\t%s\t%.6f\t%.6f\t%.6f\t%lld\t%lld\t%lld\n",
                view.c_str(), key.c_str(), p.precision, p.recall, p.f1,
                (long long)p.tp, (long long)p.fp, (long long)p.fn);
  out << buf;
}

}  // namespace

void write_report_tsv(std::ostream& out, const EvalReport& r) {
  out << "view\tkey\tprecision\trecall\tf1\ttp\tfp\tfn\n";
  tsv_row(out, "overall", "-", r.overall);
  for (int b = 0; b < 3; ++b) tsv_row(out, "bucket", kBucketNames[b], r.buckets[b]);
  for (size_t d = 0; d < r.layers.size(); ++d)
    tsv_row(out, "layer", std::to_string(d + 1), r.layers[d]);
  tsv_row(out, "boundary", "-", r.boundary);
}

void write_report_table(std::ostream& out, const EvalReport& r) {
  char buf[160];
  auto line = [&](const char* name, const PRF& p) {
    std::snprintf(buf, sizeof buf, "  %-10s %8.2f %8.2f %8.2f %8lld %8lld %8lld\n",
                  name, 100.0 * p.precision, 100.0 * p.recall, 100.0 * p.f1,
                  (long long)p.tp, (long long)p.fp, (long long)p.fn);
    out << buf;
  };
  out << "  view              P        R       F1       TP       FP       FN\n";
  line("Low", r.buckets[0]);
  line("Middle", r.buckets[1]);
  line("High", r.buckets[2]);
  line("Overall", r.overall);
  for (size_t d = 0; d < r.layers.size(); ++d)
    line(("Layer-" + std::to_string(d + 1)).c_str(), r.layers[d]);
  line("Boundary", r.boundary);
}

std::vector<std::pair<std::string, double>> report_metrics(const EvalReport& r) {
  std::vector<std::pair<std::string, double>> m;
  auto push = [&](const std::string& name, const PRF& p) {
    m.emplace_back(name + "_p", p.precision);
    m.emplace_back(name + "_r", p.recall);
    m.emplace_back(name + "_f1", p.f1);
  };
  push("overall", r.overall);
  for (int b = 0; b < 3; ++b) push(kBucketNames[b], r.buckets[b]);
  for (size_t d = 0; d < r.layers.size(); ++d)
    push("layer" + std::to_string(d + 1), r.layers[d]);
  push("boundary", r.boundary);
  return m;
}

}  // namespace seqcomp
