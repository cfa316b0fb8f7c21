#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "seqcomp/composition.hpp"
#include "seqcomp/encoder.hpp"
#include "seqcomp/evaluation.hpp"
#include "seqcomp/schema.hpp"

namespace seqcomp {

// Encoder + label-embedding composition + softmax token classifier.
// Prediction follows argmax_y of W[y] . f(x_i, X); ties break toward the
// lowest label id.
class TaggerModel {
 public:
  TaggerModel(LabelSchema schema, TokenVocabulary vocab, EncoderConfig enc,
              CompositionSpec comp, uint64_t init_seed);

  const LabelSchema& schema() const { return schema_; }
  const TokenVocabulary& vocab() const { return vocab_; }
  const EncoderConfig& encoder_config() const { return enc_; }
  const CompositionSpec& composition() const { return comp_; }
  ParameterStore& store() { return store_; }
  const ParameterStore& store() const { return store_; }

  // Mean token-level cross-entropy over the batch; fills parameter
  // gradients when with_grad. rng feeds dropout only (training mode).
  double batch_loss(const std::vector<const SentenceExample*>& batch, RngState* rng,
                    bool training, bool with_grad);
  double batch_loss(const std::vector<SentenceExample>& batch, RngState* rng,
                    bool training, bool with_grad);

  std::vector<int> predict(const SentenceExample& sentence) const;
  std::vector<std::vector<int>> predict_all(const std::vector<SentenceExample>& corpus) const;

  // The materialized |Y| x D label matrix under the current parameters.
  Tensor2D composed_label_matrix() const;

  // Training-set frequency table rides along in the checkpoint so that
  // evaluate can bucket without the training corpus.
  void set_frequency_table(std::map<std::string, int64_t> counts);
  const std::map<std::string, int64_t>& frequency_table() const { return freq_; }
  FrequencyBuckets buckets() const;

  void save(const std::string& path) const;
  void save(std::ostream& out) const;
  // Verifies stored schema/vocab hashes; DataError on mismatch or version
  // drift. `expect_schema`, when given, must hash-match the checkpoint.
  static TaggerModel load(const std::string& path,
                          const LabelSchema* expect_schema = nullptr);
  static TaggerModel load(std::istream& in, const LabelSchema* expect_schema = nullptr);

  // Empty placeholder; assign a real model before use.
  TaggerModel() = default;

 private:
  LabelSchema schema_;
  TokenVocabulary vocab_;
  EncoderConfig enc_;
  CompositionSpec comp_;
  ParameterStore store_;
  std::map<std::string, int64_t> freq_;

  void forward_scores(const std::vector<int>& token_ids, RngState* rng, bool training,
                      Tensor2D& features, Tensor2D& logits, EncoderCache* cache,
                      const Tensor2D& w) const;
};

}  // namespace seqcomp
