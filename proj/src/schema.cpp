#include "seqcomp/schema.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "seqcomp/corpus.hpp"
#include "seqcomp/errors.hpp"
#include "seqcomp/evaluation.hpp"

namespace seqcomp {

namespace {

constexpr const char* kNullName = "<null>";

// Splits "a/b/c"; empty segments are malformed.
std::vector<std::string> split_path(const std::string& label, const std::string& path) {
  std::vector<std::string> segs;
  std::string cur;
  for (char c : path) {
    if (c == '/') {
      if (cur.empty())
        throw DataError("malformed label '" + label + "': empty path segment");
      segs.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (cur.empty())
    throw DataError("malformed label '" + label + "': empty path segment");
  segs.push_back(cur);
  return segs;
}

int label_depth(const std::string& label) {
  if (label == "O") return 0;
  if (label.size() < 3 || (label[0] != 'B' && label[0] != 'I') || label[1] != '-')
    throw DataError("malformed label '" + label + "': expected O, B-..., or I-...");
  return int(split_path(label, label.substr(2)).size());
}

}  // namespace

SchemaVocabs::SchemaVocabs(int K) {
  values.resize(K);
  value_index.resize(K);
  values[0] = {"B", "I", "O"};
  for (int i = 0; i < 3; ++i) value_index[0][values[0][i]] = i;
  for (int k = 1; k < K; ++k) {
    values[k] = {kNullName};
    value_index[k][kNullName] = 0;
  }
}

int SchemaVocabs::intern(int type, const std::string& value) {
  auto it = value_index[type].find(value);
  if (it != value_index[type].end()) return it->second;
  const int idx = int(values[type].size());
  values[type].push_back(value);
  value_index[type][value] = idx;
  return idx;
}

LabelDecomposition parse_label(const std::string& label, int K, SchemaVocabs& vocabs) {
  LabelDecomposition d;
  d.values.assign(K, 0);
  if (label == "O") {
    d.values[0] = LabelSchema::kSpanO;
    return d;
  }
  if (label.size() < 3 || (label[0] != 'B' && label[0] != 'I') || label[1] != '-')
    throw DataError("malformed label '" + label + "': expected O, B-..., or I-...");
  d.values[0] = label[0] == 'B' ? LabelSchema::kSpanB : LabelSchema::kSpanI;
  const auto segs = split_path(label, label.substr(2));
  if (int(segs.size()) > K - 1)
    throw DataError("malformed label '" + label + "': depth " +
                    std::to_string(segs.size()) + " exceeds schema depth " +
                    std::to_string(K - 1));
  for (size_t i = 0; i < segs.size(); ++i) {
    d.values[1 + i] = vocabs.intern(int(1 + i), segs[i]);
  }
  return d;
}

LabelSchema LabelSchema::build(const std::vector<std::string>& label_strings) {
  if (label_strings.empty()) throw DataError("schema: empty label list");
  std::vector<std::string> labels = label_strings;
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
    throw DataError("schema: duplicate label '" +
                    *std::adjacent_find(labels.begin(), labels.end()) + "'");
  auto o_it = std::find(labels.begin(), labels.end(), "O");
  if (o_it == labels.end()) throw DataError("schema: label set must contain 'O'");
  labels.erase(o_it);
  labels.insert(labels.begin(), "O");

  int max_depth = 0;
  for (const auto& l : labels) max_depth = std::max(max_depth, label_depth(l));
  const int K = 1 + max_depth;

  LabelSchema s;
  s.K_ = K;
  s.vocabs_ = SchemaVocabs(K);
  s.labels_ = labels;
  s.decomps_.reserve(labels.size());
  for (size_t y = 0; y < labels.size(); ++y) {
    LabelDecomposition d = parse_label(labels[y], K, s.vocabs_);
    d.label_id = int(y);
    s.decomps_.push_back(std::move(d));
  }
  s.check_invariants();
  s.find_missing_variants();
  return s;
}

LabelSchema LabelSchema::from_decompositions(std::vector<std::string> labels,
                                             std::vector<std::vector<int>> tuples,
                                             SchemaVocabs vocabs) {
  if (labels.size() != tuples.size())
    throw DataError("schema: labels/tuples length mismatch");
  LabelSchema s;
  s.K_ = int(vocabs.values.size());
  s.vocabs_ = std::move(vocabs);
  s.labels_ = std::move(labels);
  for (size_t y = 0; y < tuples.size(); ++y) {
    if (int(tuples[y].size()) != s.K_)
      throw DataError("schema: tuple for '" + s.labels_[y] + "' has wrong arity");
    s.decomps_.push_back({int(y), std::move(tuples[y])});
  }
  s.check_invariants();
  s.find_missing_variants();
  return s;
}

void LabelSchema::check_invariants() const {
  std::set<std::vector<int>> seen;
  for (const auto& d : decomps_) {
    for (int k = 0; k < K_; ++k) {
      if (d.values[k] < 0 || d.values[k] >= vocab_size(k))
        throw DataError("schema: component value out of range for label '" +
                        labels_[d.label_id] + "'");
    }
    if (!seen.insert(d.values).second)
      throw DataError("schema: labels '" + labels_[d.label_id] +
                      "' and another share an identical component tuple");
  }
}

void LabelSchema::find_missing_variants() {
  missing_variants_.clear();
  std::set<std::string> present(labels_.begin(), labels_.end());
  for (const auto& l : labels_) {
    if (l.size() < 3 || l[1] != '-') continue;
    const std::string other = (l[0] == 'B' ? "I" : "B") + l.substr(1);
    if (!present.count(other)) missing_variants_.push_back(other);
  }
  std::sort(missing_variants_.begin(), missing_variants_.end());
}

LabelSchema LabelSchema::read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open schema file: " + path);
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    // trim
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t");
    labels.push_back(line.substr(b, e - b + 1));
  }
  return build(labels);
}

void LabelSchema::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write schema file: " + path);
  for (const auto& l : labels_) out << l << "\n";
}

LabelSchema LabelSchema::infer_from_corpus(const std::vector<SentenceExample>& corpus) {
  std::set<std::string> uniq{"O"};
  for (const auto& s : corpus)
    for (const auto& l : s.gold_labels) uniq.insert(l);
  return build(std::vector<std::string>(uniq.begin(), uniq.end()));
}

int LabelSchema::label_id(const std::string& label) const {
  for (size_t y = 0; y < labels_.size(); ++y)
    if (labels_[y] == label) return int(y);
  throw DataError("label '" + label + "' not in schema");
}

bool LabelSchema::has_label(const std::string& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::vector<int> LabelSchema::type_path(int y) const {
  const auto& d = decomps_[y];
  return std::vector<int>(d.values.begin() + 1, d.values.end());
}

std::string LabelSchema::path_string(int y) const {
  return path_string(type_path(y));
}

std::string LabelSchema::path_string(const std::vector<int>& tp) const {
  std::string out;
  for (size_t k = 0; k < tp.size(); ++k) {
    if (tp[k] == 0) break;
    if (!out.empty()) out += '/';
    out += vocabs_.values[k + 1][tp[k]];
  }
  return out;
}

std::string LabelSchema::label_string(const LabelDecomposition& d) const {
  if (d.values[0] == kSpanO) return "O";
  std::string out = d.values[0] == kSpanB ? "B-" : "I-";
  bool first = true;
  for (int k = 1; k < K_; ++k) {
    if (d.values[k] == 0) break;
    if (!first) out += '/';
    out += vocabs_.values[k][d.values[k]];
    first = false;
  }
  return out;
}

std::vector<std::string> LabelSchema::entity_paths() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (int y = 0; y < num_labels(); ++y) {
    if (span_value(y) == kSpanO) continue;
    std::string p = path_string(y);
    if (seen.insert(p).second) out.push_back(std::move(p));
  }
  return out;
}

uint64_t fnv1a64(std::string_view s, uint64_t h) {
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

uint64_t LabelSchema::hash() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv1a64(std::to_string(K_), h);
  for (const auto& l : labels_) {
    h = fnv1a64("\x1f", h);
    h = fnv1a64(l, h);
  }
  return h;
}

std::vector<std::vector<int64_t>> component_frequency(
    const LabelSchema& schema, const std::vector<SentenceExample>& corpus) {
  std::vector<std::vector<int64_t>> counts(schema.K());
  for (int k = 0; k < schema.K(); ++k)
    counts[k].assign(schema.vocab_size(k), 0);
  for (const auto& sent : corpus) {
    const auto ids = to_label_ids(sent, schema);
    const auto spans = decode_spans(ids, schema);
    int64_t entity_tokens = 0;
    for (const auto& sp : spans) {
      counts[0][LabelSchema::kSpanB] += 1;
      counts[0][LabelSchema::kSpanI] += (sp.end - sp.start) - 1;
      entity_tokens += sp.end - sp.start;
      for (size_t k = 0; k < sp.type_path.size(); ++k)
        counts[k + 1][sp.type_path[k]] += 1;
    }
    counts[0][LabelSchema::kSpanO] += int64_t(sent.tokens.size()) - entity_tokens;
  }
  return counts;
}

}  // namespace seqcomp
