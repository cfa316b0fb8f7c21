#include "seqcomp/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "seqcomp/errors.hpp"

namespace seqcomp {

void TrainConfig::validate() const {
  if (epochs <= 0) throw UsageError("epochs must be positive");
  if (batch_size <= 0) throw UsageError("batch_size must be positive");
  if (learning_rate <= 0.0) throw UsageError("learning_rate must be positive");
  if (dropout_rate < 0.0 || dropout_rate >= 1.0)
    throw UsageError("dropout_rate must be in [0, 1)");
  if (word_dim <= 0 || window_radius < 0 || hidden_dim <= 0 || output_dim <= 0)
    throw UsageError("encoder dimensions must be positive");
}

EncoderConfig TrainConfig::encoder_config() const {
  EncoderConfig enc;
  enc.word_dim = word_dim;
  enc.window_radius = window_radius;
  enc.hidden_dim = hidden_dim;
  enc.output_dim = output_dim;
  enc.dropout_rate = dropout_rate;
  return enc;
}

RunResult train(const std::vector<SentenceExample>& train_corpus,
                const std::vector<SentenceExample>& dev_corpus,
                const LabelSchema& schema, const TrainConfig& config,
                std::ostream* metrics_log) {
  config.validate();
  if (train_corpus.empty()) throw DataError("training corpus is empty");

  TokenVocabulary vocab = build_vocab(train_corpus, config.min_count);
  CompositionSpec comp = CompositionSpec::make(config.mode, config.output_dim, schema,
                                               config.concat_dims);
  TaggerModel model(schema, std::move(vocab), config.encoder_config(), comp, config.seed);
  model.set_frequency_table(frequency_table(train_corpus, schema));
  const FrequencyBuckets buckets = model.buckets();

  // Separate stream from init so all modes see identical shuffles/masks.
  RngState rng(RngState::derive_seed(config.seed, "train"));
  AdamConfig adam = config.adam;
  adam.learning_rate = config.learning_rate;

  const SpansPerSentence dev_gold = gold_spans(dev_corpus, schema);

  RunResult result;
  result.seed = config.seed;
  result.best_model = model;

  std::vector<size_t> order(train_corpus.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_weighted = 0.0;
    int64_t tokens_seen = 0;
    size_t batch_index = 0;
    for (size_t begin = 0; begin < order.size(); begin += config.batch_size, ++batch_index) {
      const size_t end = std::min(order.size(), begin + config.batch_size);
      std::vector<const SentenceExample*> batch;
      batch.reserve(end - begin);
      int64_t batch_tokens = 0;
      for (size_t i = begin; i < end; ++i) {
        batch.push_back(&train_corpus[order[i]]);
        batch_tokens += int64_t(train_corpus[order[i]].tokens.size());
      }
      const double loss = model.batch_loss(batch, &rng, true, true);
      if (!std::isfinite(loss))
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) +
                           ", batch " + std::to_string(batch_index));
      model.store().adam_step(adam);
      loss_weighted += loss * double(batch_tokens);
      tokens_seen += batch_tokens;
    }

    EpochStats stats;
    stats.train_loss = tokens_seen > 0 ? loss_weighted / double(tokens_seen) : 0.0;
    SpansPerSentence dev_pred;
    dev_pred.reserve(dev_corpus.size());
    for (const auto& ids : model.predict_all(dev_corpus))
      dev_pred.push_back(decode_spans(ids, schema));
    stats.dev_report = evaluate(dev_gold, dev_pred, schema, buckets);
    const double dev_f1 = stats.dev_report.overall.f1;

    if (metrics_log) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%d\t%.6f\t%.6f\t%.6f\t%.6f\t%.6f\n", epoch,
                    stats.train_loss, dev_f1, stats.dev_report.buckets[0].f1,
                    stats.dev_report.buckets[1].f1, stats.dev_report.buckets[2].f1);
      (*metrics_log) << buf;
    }

    if (result.best_epoch < 0 || dev_f1 > result.best_dev_f1) {
      result.best_epoch = epoch;
      result.best_dev_f1 = dev_f1;
      result.best_model = model;
    }
    result.epochs.push_back(std::move(stats));
  }
  return result;
}

double token_accuracy(const TaggerModel& model,
                      const std::vector<SentenceExample>& corpus) {
  int64_t correct = 0, total = 0;
  const auto preds = model.predict_all(corpus);
  for (size_t s = 0; s < corpus.size(); ++s) {
    const auto gold = to_label_ids(corpus[s], model.schema());
    for (size_t i = 0; i < gold.size(); ++i) {
      correct += preds[s][i] == gold[i];
      ++total;
    }
  }
  return total > 0 ? double(correct) / double(total) : 0.0;
}

std::vector<MetricStat> aggregate_reports(const std::vector<EvalReport>& reports) {
  std::vector<MetricStat> stats;
  if (reports.empty()) return stats;
  const auto first = report_metrics(reports[0]);
  stats.resize(first.size());
  for (size_t m = 0; m < first.size(); ++m) {
    stats[m].name = first[m].first;
    stats[m].per_seed.reserve(reports.size());
  }
  for (const auto& r : reports) {
    const auto metrics = report_metrics(r);
    for (size_t m = 0; m < metrics.size(); ++m)
      stats[m].per_seed.push_back(metrics[m].second);
  }
  const double n = double(reports.size());
  for (auto& s : stats) {
    s.mean = std::accumulate(s.per_seed.begin(), s.per_seed.end(), 0.0) / n;
    if (s.per_seed.size() >= 2) {
      double ss = 0.0;
      for (double x : s.per_seed) ss += (x - s.mean) * (x - s.mean);
      s.stddev = std::sqrt(ss / (n - 1.0));
    }
  }
  return stats;
}

MultiSeedResult multi_seed(const std::vector<SentenceExample>& train_corpus,
                           const std::vector<SentenceExample>& dev_corpus,
                           const std::vector<SentenceExample>& test_corpus,
                           const LabelSchema& schema, const TrainConfig& config,
                           const std::vector<uint64_t>& seeds) {
  if (seeds.size() < 2) throw UsageError("multi_seed needs at least 2 seeds");
  MultiSeedResult out;
  out.seeds = seeds;
  const SpansPerSentence test_gold = gold_spans(test_corpus, schema);
  for (uint64_t seed : seeds) {
    TrainConfig cfg = config;
    cfg.seed = seed;
    RunResult run = train(train_corpus, dev_corpus, schema, cfg);
    SpansPerSentence test_pred;
    test_pred.reserve(test_corpus.size());
    for (const auto& ids : run.best_model.predict_all(test_corpus))
      test_pred.push_back(decode_spans(ids, schema));
    out.test_reports.push_back(
        evaluate(test_gold, test_pred, schema, run.best_model.buckets()));
  }
  out.stats = aggregate_reports(out.test_reports);
  return out;
}

}  // namespace seqcomp
