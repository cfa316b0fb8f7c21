#include "seqcomp/encoder.hpp"

#include <algorithm>
#include <map>

#include "seqcomp/errors.hpp"

namespace seqcomp {

int TokenVocabulary::add(const std::string& token) {
  auto it = token_to_id.find(token);
  if (it != token_to_id.end()) return it->second;
  const int idx = int(id_to_token.size());
  id_to_token.push_back(token);
  token_to_id[token] = idx;
  return idx;
}

std::vector<int> TokenVocabulary::encode(const std::vector<std::string>& tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(id(t));
  return ids;
}

uint64_t TokenVocabulary::hash() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& t : id_to_token) {
    h = fnv1a64("\x1f", h);
    h = fnv1a64(t, h);
  }
  return h;
}

TokenVocabulary build_vocab(const std::vector<SentenceExample>& corpus, int min_count) {
  std::map<std::string, int64_t> counts;
  for (const auto& s : corpus)
    for (const auto& t : s.tokens) counts[t] += 1;
  std::vector<std::pair<std::string, int64_t>> kept;
  for (const auto& [tok, c] : counts)
    if (c >= min_count) kept.emplace_back(tok, c);
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  TokenVocabulary vocab;
  for (const auto& [tok, c] : kept) vocab.add(tok);
  return vocab;
}

void add_encoder_parameters(ParameterStore& store, const EncoderConfig& cfg, RngState& rng) {
  Tensor2D& emb = store.add("encoder.word_emb", cfg.vocab_size, cfg.word_dim);
  init_embedding(emb, rng);
  Tensor2D& w1 = store.add("encoder.w1", cfg.input_dim(), cfg.hidden_dim);
  init_dense(w1, rng);
  store.add("encoder.b1", 1, cfg.hidden_dim);  // zeros
  Tensor2D& w2 = store.add("encoder.w2", cfg.hidden_dim, cfg.output_dim);
  init_dense(w2, rng);
  store.add("encoder.b2", 1, cfg.output_dim);
}

void encode(const std::vector<int>& token_ids, const ParameterStore& store,
            const EncoderConfig& cfg, RngState* rng, bool training, Tensor2D& features,
            EncoderCache* cache) {
  const int n = int(token_ids.size());
  const int width = cfg.window_width();
  const Tensor2D& emb = store.group("encoder.word_emb").value;
  const Tensor2D& w1 = store.group("encoder.w1").value;
  const Tensor2D& b1 = store.group("encoder.b1").value;
  const Tensor2D& w2 = store.group("encoder.w2").value;
  const Tensor2D& b2 = store.group("encoder.b2").value;

  EncoderCache local;
  EncoderCache& c = cache ? *cache : local;

  c.window_ids.assign(size_t(n) * width, TokenVocabulary::kPad);
  c.x.resize(n, cfg.input_dim());
  for (int i = 0; i < n; ++i) {
    double* xr = c.x.row(i);
    for (int w = 0; w < width; ++w) {
      const int pos = i - cfg.window_radius + w;
      int id = TokenVocabulary::kPad;
      if (pos >= 0 && pos < n) {
        id = token_ids[pos];
        if (id < 0 || id >= cfg.vocab_size)
          throw DataError("encode: token id out of vocabulary range");
      }
      c.window_ids[size_t(i) * width + w] = id;
      const double* e = emb.row(id);
      std::copy(e, e + cfg.word_dim, xr + w * cfg.word_dim);
    }
  }

  matmul(c.x, w1, c.h);
  for (int i = 0; i < n; ++i) {
    double* hr = c.h.row(i);
    for (int j = 0; j < cfg.hidden_dim; ++j) hr[j] = std::tanh(hr[j] + b1.at(0, j));
  }

  c.h_dropped = c.h;
  c.mask.resize(n, cfg.hidden_dim);
  if (training && cfg.dropout_rate > 0.0) {
    if (!rng) throw NumericError("encode: training mode requires an RNG");
    dropout({c.h_dropped.v.data(), c.h_dropped.size()}, cfg.dropout_rate, *rng, true,
            {c.mask.v.data(), c.mask.size()});
  } else {
    c.mask.fill(1.0);
  }

  matmul(c.h_dropped, w2, features);
  for (int i = 0; i < n; ++i) {
    double* fr = features.row(i);
    for (int j = 0; j < cfg.output_dim; ++j) fr[j] += b2.at(0, j);
  }
}

void encoder_backward(const Tensor2D& dfeatures, const EncoderCache& cache,
                      const EncoderConfig& cfg, ParameterStore& store) {
  const int n = dfeatures.rows;
  const int width = cfg.window_width();
  const Tensor2D& w1 = store.group("encoder.w1").value;
  const Tensor2D& w2 = store.group("encoder.w2").value;
  Tensor2D& demb = store.group("encoder.word_emb").grad;
  Tensor2D& dw1 = store.group("encoder.w1").grad;
  Tensor2D& db1 = store.group("encoder.b1").grad;
  Tensor2D& dw2 = store.group("encoder.w2").grad;
  Tensor2D& db2 = store.group("encoder.b2").grad;

  for (int i = 0; i < n; ++i) {
    const double* dr = dfeatures.row(i);
    for (int j = 0; j < cfg.output_dim; ++j) db2.at(0, j) += dr[j];
  }
  matmul_at_accum(cache.h_dropped, dfeatures, dw2);

  Tensor2D dh;  // n x H
  matmul_bt(dfeatures, w2, dh);
  // through dropout, then tanh
  for (int i = 0; i < n; ++i) {
    double* dhr = dh.row(i);
    const double* mr = cache.mask.row(i);
    const double* hr = cache.h.row(i);
    for (int j = 0; j < cfg.hidden_dim; ++j) {
      dhr[j] *= mr[j];
      dhr[j] *= 1.0 - hr[j] * hr[j];
      db1.at(0, j) += dhr[j];
    }
  }
  matmul_at_accum(cache.x, dh, dw1);

  Tensor2D dx;  // n x input_dim
  matmul_bt(dh, w1, dx);
  for (int i = 0; i < n; ++i) {
    const double* dxr = dx.row(i);
    for (int w = 0; w < width; ++w) {
      double* g = demb.row(cache.window_ids[size_t(i) * width + w]);
      const double* src = dxr + w * cfg.word_dim;
      for (int j = 0; j < cfg.word_dim; ++j) g[j] += src[j];
    }
  }
}

}  // namespace seqcomp
