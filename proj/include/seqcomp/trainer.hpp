#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "seqcomp/model.hpp"

namespace seqcomp {

struct TrainConfig {
  CompositionMode mode = CompositionMode::Sum;
  int epochs = 20;
  int batch_size = 32;
  // Desk-scale default; the paper's BERT fine-tuning rate is available as
  // the "paper" preset (5e-5).
  double learning_rate = 1e-3;
  double dropout_rate = 0.1;
  uint64_t seed = 1;
  int word_dim = 32;
  int window_radius = 2;
  int hidden_dim = 128;
  int output_dim = 64;
  int min_count = 1;
  std::vector<int> concat_dims;  // optional per-type split override
  AdamConfig adam;               // learning_rate copied in before each step

  void validate() const;
  EncoderConfig encoder_config() const;
};

struct EpochStats {
  double train_loss = 0.0;
  EvalReport dev_report;
};

// Output of one seeded run. Reported metrics always come from the
// best-dev checkpoint (highest dev overall F1, earliest epoch on ties).
struct RunResult {
  std::vector<EpochStats> epochs;
  int best_epoch = -1;  // 1-based
  double best_dev_f1 = 0.0;
  TaggerModel best_model;
  uint64_t seed = 0;
};

// Mini-batched cross-entropy training with per-epoch dev evaluation.
// Deterministic given (seed, config, corpora). `metrics_log`, when set,
// receives one tab-separated line per epoch:
//   epoch  loss  dev_f1_overall  dev_f1_low  dev_f1_mid  dev_f1_high
RunResult train(const std::vector<SentenceExample>& train_corpus,
                const std::vector<SentenceExample>& dev_corpus,
                const LabelSchema& schema, const TrainConfig& config,
                std::ostream* metrics_log = nullptr);

double token_accuracy(const TaggerModel& model,
                      const std::vector<SentenceExample>& corpus);

struct MetricStat {
  std::string name;
  double mean = 0.0;
  double stddev = 0.0;  // sample stddev, n-1 denominator
  std::vector<double> per_seed;
};

struct MultiSeedResult {
  std::vector<uint64_t> seeds;
  std::vector<EvalReport> test_reports;  // one per seed, from best-dev model
  std::vector<MetricStat> stats;
};

// Trains once per seed and aggregates test-set metrics (mean, sample std).
MultiSeedResult multi_seed(const std::vector<SentenceExample>& train_corpus,
                           const std::vector<SentenceExample>& dev_corpus,
                           const std::vector<SentenceExample>& test_corpus,
                           const LabelSchema& schema, const TrainConfig& config,
                           const std::vector<uint64_t>& seeds);

// Mean/sample-std over already-collected reports (exposed for benchmark
// aggregation across parallel cells).
std::vector<MetricStat> aggregate_reports(const std::vector<EvalReport>& reports);

}  // namespace seqcomp
