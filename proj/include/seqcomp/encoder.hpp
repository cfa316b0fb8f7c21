#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "seqcomp/corpus.hpp"
#include "seqcomp/params.hpp"

namespace seqcomp {

// Windowed feedforward token encoder: each token's feature vector is an
// MLP over the word embeddings of a symmetric context window,
//   f_i = tanh([e(x_{i-r}) .. e(x_{i+r})] W1 + b1) W2 + b2,
// with PAD embeddings outside sentence bounds and dropout after the hidden
// layer during training.
struct EncoderConfig {
  int vocab_size = 0;
  int word_dim = 32;      // E
  int window_radius = 2;  // r
  int hidden_dim = 128;   // H
  int output_dim = 64;    // D, must equal the composition-side D
  double dropout_rate = 0.1;

  int window_width() const { return 2 * window_radius + 1; }
  int input_dim() const { return window_width() * word_dim; }
};

struct TokenVocabulary {
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;

  std::vector<std::string> id_to_token{"<pad>", "<unk>"};
  std::unordered_map<std::string, int> token_to_id{{"<pad>", 0}, {"<unk>", 1}};

  int id(const std::string& token) const {
    auto it = token_to_id.find(token);
    return it == token_to_id.end() ? kUnk : it->second;
  }
  int add(const std::string& token);
  int size() const { return int(id_to_token.size()); }
  std::vector<int> encode(const std::vector<std::string>& tokens) const;
  uint64_t hash() const;
};

// Tokens with count >= min_count get ids, ordered by count descending then
// lexicographic; everything else maps to UNK.
TokenVocabulary build_vocab(const std::vector<SentenceExample>& corpus, int min_count);

// Parameter groups: encoder.word_emb, encoder.w1, encoder.b1, encoder.w2,
// encoder.b2 (created in that order).
void add_encoder_parameters(ParameterStore& store, const EncoderConfig& cfg, RngState& rng);

// Intermediates needed by the backward pass.
struct EncoderCache {
  std::vector<int> window_ids;  // n * window_width gathered ids
  Tensor2D x;                   // n x input_dim
  Tensor2D h;                   // n x H, tanh output before dropout
  Tensor2D h_dropped;           // n x H, after dropout
  Tensor2D mask;                // n x H dropout scales
};

// features: n x D. `cache` may be null at inference; rng is consumed only
// when training (dropout mask draws).
void encode(const std::vector<int>& token_ids, const ParameterStore& store,
            const EncoderConfig& cfg, RngState* rng, bool training, Tensor2D& features,
            EncoderCache* cache);

// Accumulates parameter gradients for one sentence.
void encoder_backward(const Tensor2D& dfeatures, const EncoderCache& cache,
                      const EncoderConfig& cfg, ParameterStore& store);

}  // namespace seqcomp
