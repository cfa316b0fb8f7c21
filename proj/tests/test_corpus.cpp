#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>

#include "seqcomp/corpus.hpp"
#include "seqcomp/errors.hpp"
#include "seqcomp/evaluation.hpp"
#include "seqcomp/synth.hpp"
#include "test_util.hpp"

using namespace seqcomp;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content) : path(name) {
    std::ofstream out(path, std::ios::binary);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("read_conll: basic two-token sentence") {
  TempFile f("t_conll1.tsv", "南\tB-Park\n公園\tI-Park\n");
  const auto corpus = read_conll(f.path);
  REQUIRE(corpus.size() == 1);
  CHECK(corpus[0].tokens == std::vector<std::string>{"南", "公園"});
  CHECK(corpus[0].gold_labels == std::vector<std::string>{"B-Park", "I-Park"});
}

TEST_CASE("read_conll: empty file, trailing blanks, CRLF") {
  TempFile empty("t_conll2.tsv", "");
  CHECK(read_conll(empty.path).empty());

  TempFile trailing("t_conll3.tsv", "a\tO\n\n\n\n");
  CHECK(read_conll(trailing.path).size() == 1);

  TempFile lf("t_conll4.tsv", "a\tO\nb\tB-X\n\nc\tO\n");
  TempFile crlf("t_conll5.tsv", "a\tO\r\nb\tB-X\r\n\r\nc\tO\r\n");
  CHECK(read_conll(lf.path) == read_conll(crlf.path));
}

TEST_CASE("read_conll: ragged lines raise with the line number") {
  TempFile bad("t_conll6.tsv", "a\tO\nbroken line\n");
  CHECK(throws_with<DataError>([&] { read_conll(bad.path); }, ":2"));
  TempFile extra("t_conll7.tsv", "a\tO\tX\n");
  CHECK_THROWS_AS(read_conll(extra.path), DataError);
}

TEST_CASE("read_conll with schema: unknown label is named") {
  TempFile f("t_conll8.tsv", "a\tB-Zzz\n");
  const auto schema = LabelSchema::build({"O", "B-X", "I-X"});
  CHECK(throws_with<DataError>([&] { read_conll(f.path, schema); }, "B-Zzz"));
}

TEST_CASE("write_conll then read_conll is the identity") {
  SyntheticSpec sp;
  sp.train_sentences = 50;
  sp.dev_sentences = 2;
  sp.test_sentences = 2;
  const auto synth = generate_synthetic(sp);
  const std::string path = "t_conll_rt.tsv";
  write_conll(path, synth.train);
  CHECK(read_conll(path) == synth.train);
  std::remove(path.c_str());
}

TEST_CASE("frequency_table: counts mentions, not tokens") {
  const auto schema = LabelSchema::build({"O", "B-X", "I-X", "B-Y", "I-Y"});
  SentenceExample s;
  s.tokens = {"a", "b", "c", "d", "e"};
  s.gold_labels = {"B-X", "I-X", "I-X", "O", "B-X"};
  const auto freq = frequency_table({s, s, s}, schema);
  CHECK(freq.at("X") == 6);  // two mentions per sentence
  CHECK(freq.at("Y") == 0);  // present in schema, absent from corpus

  FrequencyBuckets buckets;
  buckets.counts = freq;
  CHECK(buckets.bucket_of("Y") == Bucket::Low);
  CHECK(buckets.bucket_of("X") == Bucket::Low);
}

TEST_CASE("frequency_table: agrees with decode_spans tally") {
  SyntheticSpec sp;
  sp.train_sentences = 150;
  sp.dev_sentences = 2;
  sp.test_sentences = 2;
  const auto synth = generate_synthetic(sp);
  const auto freq = frequency_table(synth.train, synth.schema);

  std::map<std::string, int64_t> expect;
  for (const auto& p : synth.schema.entity_paths()) expect[p] = 0;
  for (const auto& spans : gold_spans(synth.train, synth.schema))
    for (const auto& sp_ : spans) expect[synth.schema.path_string(sp_.type_path)] += 1;
  CHECK(freq == expect);

  int64_t total_mentions = 0;
  for (const auto& [path, c] : freq) total_mentions += c;
  int64_t b_tokens = 0;
  for (const auto& s : synth.train)
    for (const auto& l : s.gold_labels) b_tokens += l[0] == 'B';
  CHECK(total_mentions == b_tokens);
}

TEST_CASE("bucket thresholds sit exactly at 100 and 500") {
  FrequencyBuckets b;
  b.counts = {{"a", 100}, {"b", 101}, {"c", 500}, {"d", 501}, {"e", 0}};
  CHECK(b.bucket_of("a") == Bucket::Low);
  CHECK(b.bucket_of("b") == Bucket::Mid);
  CHECK(b.bucket_of("c") == Bucket::Mid);
  CHECK(b.bucket_of("d") == Bucket::High);
  CHECK(b.bucket_of("e") == Bucket::Low);
  CHECK(b.bucket_of("unseen") == Bucket::Low);
}

TEST_CASE("generator: deterministic by seed, split-disjoint") {
  SyntheticSpec sp;
  sp.train_sentences = 60;
  sp.dev_sentences = 20;
  sp.test_sentences = 20;
  const auto a = generate_synthetic(sp);
  const auto b = generate_synthetic(sp);
  CHECK(a.train == b.train);
  CHECK(a.dev == b.dev);
  CHECK(a.test == b.test);

  sp.seed = 2;
  const auto c = generate_synthetic(sp);
  CHECK(a.train != c.train);

  auto key = [](const SentenceExample& s) { return s.tokens; };
  std::set<std::vector<std::string>> seen;
  for (const auto* split : {&a.train, &a.dev, &a.test})
    for (const auto& s : *split) seen.insert(key(s));
  CHECK(seen.size() == a.train.size() + a.dev.size() + a.test.size());
}

TEST_CASE("generator: zipf skew covers all three buckets at default sizes") {
  SyntheticSpec sp;  // defaults: 2000 train sentences, zipf 1.4
  sp.zipf_exponent = 1.5;
  sp.dev_sentences = 10;
  sp.test_sentences = 10;
  const auto synth = generate_synthetic(sp);
  const auto freq = frequency_table(synth.train, synth.schema);
  FrequencyBuckets buckets;
  buckets.counts = freq;
  std::array<int, 3> by_bucket{0, 0, 0};
  for (const auto& [path, c] : freq) by_bucket[int(buckets.bucket_of(path))] += 1;
  CHECK(by_bucket[0] > 0);
  CHECK(by_bucket[1] > 0);
  CHECK(by_bucket[2] > 0);
}

TEST_CASE("generator: labels parse under the emitted schema") {
  SyntheticSpec sp;
  sp.train_sentences = 30;
  sp.dev_sentences = 5;
  sp.test_sentences = 5;
  const auto synth = generate_synthetic(sp);
  CHECK(synth.schema.K() == 4);
  for (const auto* split : {&synth.train, &synth.dev, &synth.test})
    for (const auto& s : *split) CHECK_NOTHROW(to_label_ids(s, synth.schema));
}
