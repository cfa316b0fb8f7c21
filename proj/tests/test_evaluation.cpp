#include <doctest.h>

#include <functional>

#include "oracles.hpp"
#include "seqcomp/evaluation.hpp"
#include "seqcomp/rng.hpp"

using namespace seqcomp;

namespace {

const std::vector<std::string> kPaths = {"A",     "A/B", "A/C", "B/C/D",
                                         "B/C/E", "C",   "C/D"};

LabelSchema fuzz_schema() {
  std::vector<std::string> labels{"O"};
  for (const auto& p : kPaths) {
    labels.push_back("B-" + p);
    labels.push_back("I-" + p);
  }
  return LabelSchema::build(labels);
}

// Arbitrary label sequences, stray I's included.
std::vector<std::string> random_labels(const LabelSchema& schema, int len, RngState& rng) {
  std::vector<std::string> out;
  out.reserve(len);
  for (int i = 0; i < len; ++i)
    out.push_back(schema.label(int(rng.below(uint64_t(schema.num_labels())))));
  return out;
}

std::vector<int> as_ids(const std::vector<std::string>& labels, const LabelSchema& schema) {
  std::vector<int> ids;
  for (const auto& l : labels) ids.push_back(schema.label_id(l));
  return ids;
}

std::vector<oracle::Span> library_spans_as_tuples(const std::vector<std::string>& labels,
                                                  const LabelSchema& schema) {
  std::vector<oracle::Span> out;
  for (const auto& sp : decode_spans(as_ids(labels, schema), schema))
    out.emplace_back(sp.start, sp.end, schema.path_string(sp.type_path));
  return out;
}

}  // namespace

TEST_CASE("decode_spans: worked examples") {
  const auto schema = LabelSchema::build({"O", "B-X", "I-X", "B-Y", "I-Y"});
  auto ids = as_ids({"B-X", "I-X", "O"}, schema);
  auto spans = decode_spans(ids, schema);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].start == 0);
  CHECK(spans[0].end == 2);

  CHECK(decode_spans(as_ids({"O", "O"}, schema), schema).empty());

  // stray I opens a span; type switch inside I opens another
  spans = decode_spans(as_ids({"I-X", "I-Y", "I-Y"}, schema), schema);
  REQUIRE(spans.size() == 2);
  CHECK(spans[0].start == 0);
  CHECK(spans[0].end == 1);
  CHECK(spans[1].start == 1);
  CHECK(spans[1].end == 3);
}

TEST_CASE("decode_spans: never overlaps, covers every B/I token") {
  const auto schema = fuzz_schema();
  RngState rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const auto labels = random_labels(schema, 1 + int(rng.below(12)), rng);
    const auto spans = decode_spans(as_ids(labels, schema), schema);
    int prev_end = 0;
    int covered = 0;
    for (const auto& sp : spans) {
      CHECK(sp.start >= prev_end);
      CHECK(sp.start < sp.end);
      CHECK(sp.end <= int(labels.size()));
      prev_end = sp.end;
      covered += sp.end - sp.start;
    }
    int bi_tokens = 0;
    for (const auto& l : labels) bi_tokens += l != "O";
    CHECK(covered == bi_tokens);
  }
}

TEST_CASE("decode_spans matches the conlleval-style reference on fuzz") {
  const auto schema = fuzz_schema();
  RngState rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto labels = random_labels(schema, 1 + int(rng.below(15)), rng);
    const auto ref = oracle::decode_iob2(labels);
    const auto got = library_spans_as_tuples(labels, schema);
    CHECK(ref == got);
  }
}

TEST_CASE("span_f1: perfect and empty predictions") {
  const auto schema = LabelSchema::build({"O", "B-X", "I-X"});
  SpansPerSentence gold{decode_spans(as_ids({"B-X", "I-X", "O"}, schema), schema)};
  SpansPerSentence pred = gold;
  auto prf = span_f1(gold, pred);
  CHECK(prf.precision == 1.0);
  CHECK(prf.recall == 1.0);
  CHECK(prf.f1 == 1.0);

  pred[0].clear();
  prf = span_f1(gold, pred);
  CHECK(prf.precision == 0.0);
  CHECK(prf.recall == 0.0);
  CHECK(prf.f1 == 0.0);
  CHECK(prf.fn == 1);
}

TEST_CASE("boundary_f1: right spans, wrong types") {
  const auto schema = LabelSchema::build({"O", "B-X", "I-X", "B-Y", "I-Y"});
  SpansPerSentence gold{decode_spans(as_ids({"B-X", "I-X", "O"}, schema), schema)};
  SpansPerSentence pred{decode_spans(as_ids({"B-Y", "I-Y", "O"}, schema), schema)};
  CHECK(span_f1(gold, pred).f1 == 0.0);
  CHECK(boundary_f1(gold, pred).f1 == 1.0);
}

TEST_CASE("layer_f1: worked example and full-depth equivalence") {
  const auto schema = LabelSchema::build({"O", "B-A/B", "I-A/B", "B-A/C", "I-A/C"});
  SpansPerSentence gold{decode_spans(as_ids({"B-A/B", "I-A/B"}, schema), schema)};
  SpansPerSentence pred{decode_spans(as_ids({"B-A/C", "I-A/C"}, schema), schema)};
  CHECK(layer_f1(gold, pred, 1).f1 == 1.0);  // A == A
  CHECK(layer_f1(gold, pred, 2).f1 == 0.0);  // B != C

  const auto full = layer_f1(gold, pred, schema.hierarchy_depth());
  const auto overall = span_f1(gold, pred);
  CHECK(full.tp == overall.tp);
  CHECK(full.fp == overall.fp);
  CHECK(full.fn == overall.fn);
}

TEST_CASE("bucketed_f1: one bucket on everything equals overall") {
  const auto schema = fuzz_schema();
  RngState rng(11);
  SpansPerSentence gold, pred;
  for (int s = 0; s < 40; ++s) {
    gold.push_back(decode_spans(as_ids(random_labels(schema, 9, rng), schema), schema));
    pred.push_back(decode_spans(as_ids(random_labels(schema, 9, rng), schema), schema));
  }
  FrequencyBuckets buckets;  // empty counts: everything Low
  const auto per_bucket = bucketed_f1(gold, pred, schema, buckets);
  const auto overall = span_f1(gold, pred);
  CHECK(per_bucket[0].tp == overall.tp);
  CHECK(per_bucket[0].fp == overall.fp);
  CHECK(per_bucket[0].fn == overall.fn);
  CHECK(per_bucket[1].tp + per_bucket[1].fp + per_bucket[1].fn == 0);
  CHECK(per_bucket[2].tp + per_bucket[2].fp + per_bucket[2].fn == 0);
}

TEST_CASE("scorers equal brute-force oracles on 1000 random sentences") {
  const auto schema = fuzz_schema();
  RngState rng(2024);

  SpansPerSentence gold, pred;
  std::vector<std::vector<oracle::Span>> ogold, opred;
  for (int s = 0; s < 1000; ++s) {
    const auto glabels = random_labels(schema, 1 + int(rng.below(14)), rng);
    const auto plabels = random_labels(schema, int(glabels.size()), rng);
    gold.push_back(decode_spans(as_ids(glabels, schema), schema));
    pred.push_back(decode_spans(as_ids(plabels, schema), schema));
    ogold.push_back(oracle::decode_iob2(glabels));
    opred.push_back(oracle::decode_iob2(plabels));
  }

  // overall
  const auto overall = span_f1(gold, pred);
  const auto oracle_overall = oracle::score(ogold, opred);
  CHECK(overall.tp == oracle_overall.tp);
  CHECK(overall.fp == oracle_overall.fp);
  CHECK(overall.fn == oracle_overall.fn);

  // boundary: erase types
  auto erase = [](const oracle::Span& sp) {
    return oracle::Span{std::get<0>(sp), std::get<1>(sp), ""};
  };
  const auto boundary = boundary_f1(gold, pred);
  const auto oracle_boundary = oracle::score(oracle::map_spans(ogold, erase),
                                             oracle::map_spans(opred, erase));
  CHECK(boundary.tp == oracle_boundary.tp);
  CHECK(boundary.fp == oracle_boundary.fp);
  CHECK(boundary.fn == oracle_boundary.fn);

  // layers: truncate-relabel-then-score
  for (int d = 1; d <= schema.hierarchy_depth(); ++d) {
    auto trunc = [d](const oracle::Span& sp) {
      return oracle::Span{std::get<0>(sp), std::get<1>(sp),
                          oracle::truncate_type(std::get<2>(sp), d)};
    };
    const auto got = layer_f1(gold, pred, d);
    const auto expect = oracle::score(oracle::map_spans(ogold, trunc),
                                      oracle::map_spans(opred, trunc));
    CHECK(got.tp == expect.tp);
    CHECK(got.fp == expect.fp);
    CHECK(got.fn == expect.fn);
  }

  // buckets: hand-tallied with an independent bucket function
  FrequencyBuckets buckets;
  buckets.counts = {{"A", 600}, {"A/B", 300}, {"A/C", 50}, {"B/C/D", 101},
                    {"B/C/E", 501}, {"C", 100}, {"C/D", 0}};
  const auto got = bucketed_f1(gold, pred, schema, buckets);
  auto bucket_of = [&](const std::string& path) {
    const auto it = buckets.counts.find(path);
    const long long c = it == buckets.counts.end() ? 0 : it->second;
    return c <= 100 ? 0 : c <= 500 ? 1 : 2;
  };
  const auto expect = oracle::score_bucketed(ogold, opred, bucket_of);
  for (int b = 0; b < 3; ++b) {
    CHECK(got[b].tp == expect[b].tp);
    CHECK(got[b].fp == expect[b].fp);
    CHECK(got[b].fn == expect[b].fn);
  }
}

TEST_CASE("monotonicity and partition properties on random corpora") {
  const auto schema = fuzz_schema();
  RngState rng(31337);
  for (int trial = 0; trial < 20; ++trial) {
    SpansPerSentence gold, pred;
    int64_t total_gold = 0, total_pred = 0;
    for (int s = 0; s < 50; ++s) {
      gold.push_back(decode_spans(as_ids(random_labels(schema, 10, rng), schema), schema));
      pred.push_back(decode_spans(as_ids(random_labels(schema, 10, rng), schema), schema));
      total_gold += int64_t(gold.back().size());
      total_pred += int64_t(pred.back().size());
    }
    const auto overall = span_f1(gold, pred);
    CHECK(boundary_f1(gold, pred).f1 >= overall.f1);

    double prev = 2.0;
    for (int d = 1; d <= schema.hierarchy_depth(); ++d) {
      const double f1 = layer_f1(gold, pred, d).f1;
      CHECK(f1 <= prev);
      prev = f1;
    }

    FrequencyBuckets buckets;
    buckets.counts = {{"A", 600}, {"A/B", 300}, {"C", 50}};
    const auto per_bucket = bucketed_f1(gold, pred, schema, buckets);
    int64_t gold_sum = 0, pred_sum = 0;
    for (int b = 0; b < 3; ++b) {
      gold_sum += per_bucket[b].tp + per_bucket[b].fn;
      pred_sum += per_bucket[b].tp + per_bucket[b].fp;
    }
    CHECK(gold_sum == total_gold);
    CHECK(pred_sum == total_pred);
    CHECK(overall.tp <= std::min(total_gold, total_pred));
  }
}

TEST_CASE("prf_from_counts conventions") {
  const auto zero = prf_from_counts(0, 0, 0);
  CHECK(zero.precision == 0.0);
  CHECK(zero.recall == 0.0);
  CHECK(zero.f1 == 0.0);
  const auto p = prf_from_counts(3, 1, 2);
  CHECK(p.precision == doctest::Approx(0.75));
  CHECK(p.recall == doctest::Approx(0.6));
  CHECK(p.f1 == doctest::Approx(2 * 0.75 * 0.6 / 1.35));
}
