#include "seqcomp/model.hpp"

#include <fstream>
#include <sstream>

#include "seqcomp/errors.hpp"

namespace seqcomp {

TaggerModel::TaggerModel(LabelSchema schema, TokenVocabulary vocab, EncoderConfig enc,
                         CompositionSpec comp, uint64_t init_seed)
    : schema_(std::move(schema)), vocab_(std::move(vocab)), enc_(enc), comp_(comp) {
  if (enc_.output_dim != comp_.output_dim)
    throw UsageError("encoder output dimension must match label embedding dimension");
  enc_.vocab_size = vocab_.size();
  RngState rng(RngState::derive_seed(init_seed, "init"));
  add_encoder_parameters(store_, enc_, rng);
  add_label_parameters(store_, schema_, comp_, rng);
}

void TaggerModel::forward_scores(const std::vector<int>& token_ids, RngState* rng,
                                 bool training, Tensor2D& features, Tensor2D& logits,
                                 EncoderCache* cache, const Tensor2D& w) const {
  encode(token_ids, store_, enc_, rng, training, features, cache);
  label_scores(features, w, logits);
}

double TaggerModel::batch_loss(const std::vector<const SentenceExample*>& batch,
                               RngState* rng, bool training, bool with_grad) {
  Tensor2D w;
  compose_label_matrix(schema_, store_, comp_, w);
  Tensor2D dw(w.rows, w.cols);

  int64_t total_tokens = 0;
  for (const auto* s : batch) total_tokens += int64_t(s->tokens.size());
  if (total_tokens == 0) return 0.0;
  const double inv_tokens = 1.0 / double(total_tokens);

  double loss_sum = 0.0;
  Tensor2D features, logits, dlogits, dfeatures;
  EncoderCache cache;
  for (const auto* sent : batch) {
    const auto token_ids = vocab_.encode(sent->tokens);
    const auto gold = to_label_ids(*sent, schema_);
    const int n = int(token_ids.size());
    forward_scores(token_ids, rng, training, features, logits,
                   with_grad ? &cache : nullptr, w);
    dlogits.resize(n, w.rows);
    for (int i = 0; i < n; ++i) {
      loss_sum += softmax_cross_entropy(logits.row_span(i), gold[i], dlogits.row_span(i));
    }
    if (!with_grad) continue;
    for (double& g : dlogits.v) g *= inv_tokens;
    // dW += dlogits^T . features ; dfeatures = dlogits . W
    matmul_at_accum(dlogits, features, dw);
    matmul(dlogits, w, dfeatures);
    encoder_backward(dfeatures, cache, enc_, store_);
  }
  if (with_grad) scatter_label_gradients(dw, schema_, comp_, store_);
  return loss_sum * inv_tokens;
}

double TaggerModel::batch_loss(const std::vector<SentenceExample>& batch, RngState* rng,
                               bool training, bool with_grad) {
  std::vector<const SentenceExample*> ptrs;
  ptrs.reserve(batch.size());
  for (const auto& s : batch) ptrs.push_back(&s);
  return batch_loss(ptrs, rng, training, with_grad);
}

std::vector<int> TaggerModel::predict(const SentenceExample& sentence) const {
  Tensor2D w;
  compose_label_matrix(schema_, store_, comp_, w);
  Tensor2D features, logits;
  forward_scores(vocab_.encode(sentence.tokens), nullptr, false, features, logits,
                 nullptr, w);
  std::vector<int> out(sentence.tokens.size());
  for (int i = 0; i < logits.rows; ++i) {
    const double* row = logits.row(i);
    int best = 0;
    for (int y = 1; y < logits.cols; ++y)
      if (row[y] > row[best]) best = y;
    out[i] = best;
  }
  return out;
}

std::vector<std::vector<int>> TaggerModel::predict_all(
    const std::vector<SentenceExample>& corpus) const {
  Tensor2D w;
  compose_label_matrix(schema_, store_, comp_, w);
  std::vector<std::vector<int>> out;
  out.reserve(corpus.size());
  Tensor2D features, logits;
  for (const auto& sent : corpus) {
    forward_scores(vocab_.encode(sent.tokens), nullptr, false, features, logits, nullptr, w);
    std::vector<int> pred(sent.tokens.size());
    for (int i = 0; i < logits.rows; ++i) {
      const double* row = logits.row(i);
      int best = 0;
      for (int y = 1; y < logits.cols; ++y)
        if (row[y] > row[best]) best = y;
      pred[i] = best;
    }
    out.push_back(std::move(pred));
  }
  return out;
}

Tensor2D TaggerModel::composed_label_matrix() const {
  Tensor2D w;
  compose_label_matrix(schema_, store_, comp_, w);
  return w;
}

void TaggerModel::set_frequency_table(std::map<std::string, int64_t> counts) {
  freq_ = std::move(counts);
}

FrequencyBuckets TaggerModel::buckets() const {
  FrequencyBuckets b;
  b.counts = freq_;
  return b;
}

namespace {
constexpr const char* kMagic = "seqcomp-checkpoint";
constexpr int kVersion = 1;
}  // namespace

void TaggerModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint: " + path);
  save(out);
}

void TaggerModel::save(std::ostream& out) const {
  out << kMagic << " " << kVersion << "\n";
  out << "mode " << to_string(comp_.mode) << "\n";
  out << "encoder " << enc_.word_dim << " " << enc_.window_radius << " "
      << enc_.hidden_dim << " " << enc_.output_dim << " " << enc_.dropout_rate << "\n";
  out << "comp_dims " << comp_.component_dims.size();
  for (int d : comp_.component_dims) out << " " << d;
  out << "\n";
  out << "schema_hash " << schema_.hash() << "\n";
  out << "vocab_hash " << vocab_.hash() << "\n";
  out << "labels " << schema_.num_labels() << "\n";
  for (const auto& l : schema_.labels()) out << l << "\n";
  out << "vocab " << vocab_.size() << "\n";
  for (const auto& t : vocab_.id_to_token) out << t << "\n";
  out << "freqs " << freq_.size() << "\n";
  for (const auto& [path, count] : freq_) out << path << "\t" << count << "\n";
  store_.save(out);
}

TaggerModel TaggerModel::load(const std::string& path, const LabelSchema* expect_schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path);
  return load(in, expect_schema);
}

TaggerModel TaggerModel::load(std::istream& in, const LabelSchema* expect_schema) {
  std::string word;
  int version = 0;
  if (!(in >> word) || word != kMagic || !(in >> version))
    throw DataError("not a checkpoint file");
  if (version != kVersion)
    throw DataError("unsupported checkpoint version " + std::to_string(version));

  TaggerModel m;
  std::string mode;
  if (!(in >> word >> mode) || word != "mode")
    throw DataError("checkpoint: missing mode");
  if (!(in >> word) || word != "encoder" ||
      !(in >> m.enc_.word_dim >> m.enc_.window_radius >> m.enc_.hidden_dim >>
        m.enc_.output_dim >> m.enc_.dropout_rate))
    throw DataError("checkpoint: malformed encoder line");
  size_t n_dims = 0;
  if (!(in >> word >> n_dims) || word != "comp_dims")
    throw DataError("checkpoint: malformed comp_dims line");
  std::vector<int> comp_dims(n_dims);
  for (auto& d : comp_dims)
    if (!(in >> d)) throw DataError("checkpoint: malformed comp_dims line");

  uint64_t schema_hash = 0, vocab_hash = 0;
  if (!(in >> word >> schema_hash) || word != "schema_hash")
    throw DataError("checkpoint: missing schema hash");
  if (!(in >> word >> vocab_hash) || word != "vocab_hash")
    throw DataError("checkpoint: missing vocab hash");

  size_t n_labels = 0;
  if (!(in >> word >> n_labels) || word != "labels")
    throw DataError("checkpoint: missing labels section");
  std::getline(in, word);  // eat line end
  std::vector<std::string> labels(n_labels);
  for (auto& l : labels)
    if (!std::getline(in, l)) throw DataError("checkpoint: truncated labels section");
  m.schema_ = LabelSchema::build(labels);

  size_t n_vocab = 0;
  if (!(in >> word >> n_vocab) || word != "vocab")
    throw DataError("checkpoint: missing vocab section");
  std::getline(in, word);
  TokenVocabulary vocab;
  for (size_t i = 0; i < n_vocab; ++i) {
    std::string tok;
    if (!std::getline(in, tok)) throw DataError("checkpoint: truncated vocab section");
    if (i >= 2) vocab.add(tok);  // first two are the reserved <pad>/<unk>
  }
  m.vocab_ = std::move(vocab);

  size_t n_freqs = 0;
  if (!(in >> word >> n_freqs) || word != "freqs")
    throw DataError("checkpoint: missing freqs section");
  std::getline(in, word);
  for (size_t i = 0; i < n_freqs; ++i) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("checkpoint: truncated freqs section");
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw DataError("checkpoint: malformed freq line");
    m.freq_[line.substr(0, tab)] = std::stoll(line.substr(tab + 1));
  }

  if (m.schema_.hash() != schema_hash)
    throw DataError("checkpoint: schema hash mismatch (corrupt or edited file)");
  if (m.vocab_.hash() != vocab_hash)
    throw DataError("checkpoint: vocabulary hash mismatch (corrupt or edited file)");
  if (expect_schema && expect_schema->hash() != schema_hash)
    throw DataError("checkpoint was trained against a different label schema");

  m.comp_ = CompositionSpec::make(composition_mode_from_string(mode), m.enc_.output_dim,
                                  m.schema_, comp_dims);
  m.enc_.vocab_size = m.vocab_.size();
  m.store_.load(in);
  return m;
}

}  // namespace seqcomp
