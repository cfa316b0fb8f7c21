#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace seqcomp {

struct SentenceExample;  // corpus.hpp

// One label's typed component tuple. values[0] indexes the span vocabulary
// {B, I, O}; values[k>=1] index the layer-k vocabulary, where index 0 is the
// reserved NULL value padding labels shallower than the schema's depth.
struct LabelDecomposition {
  int label_id = -1;
  std::vector<int> values;  // exactly K entries
};

// Per-type value vocabularies used while parsing labels. Type 0 is always
// the span type {B, I, O}; every other type reserves index 0 for NULL.
struct SchemaVocabs {
  std::vector<std::vector<std::string>> values;          // per type
  std::vector<std::map<std::string, int>> value_index;   // per type

  explicit SchemaVocabs(int K);
  int intern(int type, const std::string& value);  // lookup-or-append
};

// Decomposes one IOB2 label string into its K-tuple, extending `vocabs`
// with unseen values. "O" maps to (O, NULL, ..., NULL); "B-a/b" with K=4
// maps to (B, a, b, NULL). Malformed labels raise DataError naming the
// label.
LabelDecomposition parse_label(const std::string& label, int K, SchemaVocabs& vocabs);

// The label set, its decomposition into K component types, and component
// vocabularies. Immutable after construction; safe to share across threads.
class LabelSchema {
 public:
  static constexpr int kSpanB = 0;
  static constexpr int kSpanI = 1;
  static constexpr int kSpanO = 2;

  // Builds from IOB2 label strings: deterministic ordering ("O" first, rest
  // sorted), K inferred as 1 + max path depth.
  static LabelSchema build(const std::vector<std::string>& label_strings);

  // Direct construction from explicit tuples; used by generators and tests
  // for schemas that cannot arise from IOB2 strings.
  static LabelSchema from_decompositions(std::vector<std::string> labels,
                                         std::vector<std::vector<int>> tuples,
                                         SchemaVocabs vocabs);

  // Schema file: one label per line, UTF-8, '#' comments and blank lines
  // ignored.
  static LabelSchema read_file(const std::string& path);
  void write_file(const std::string& path) const;

  static LabelSchema infer_from_corpus(const std::vector<SentenceExample>& corpus);

  int K() const { return K_; }
  int hierarchy_depth() const { return K_ - 1; }
  int num_labels() const { return int(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int y) const { return labels_[y]; }
  int label_id(const std::string& label) const;  // DataError if absent
  bool has_label(const std::string& label) const;

  const LabelDecomposition& decomposition(int y) const { return decomps_[y]; }
  int span_value(int y) const { return decomps_[y].values[0]; }
  // Layer values (without the span symbol), padded with NULL to K-1 entries.
  std::vector<int> type_path(int y) const;
  // Human-readable path string "a/b/c" (empty for O).
  std::string path_string(int y) const;
  std::string path_string(const std::vector<int>& type_path) const;

  int vocab_size(int type) const { return int(vocabs_.values[type].size()); }
  const std::string& value_name(int type, int idx) const {
    return vocabs_.values[type][idx];
  }
  const SchemaVocabs& vocabs() const { return vocabs_; }

  // Re-serializes a decomposition; round-trips every label in the schema.
  std::string label_string(const LabelDecomposition& d) const;

  // All distinct entity type paths (excluding O), in label order.
  std::vector<std::string> entity_paths() const;

  bool partial() const { return !missing_variants_.empty(); }
  const std::vector<std::string>& missing_variants() const { return missing_variants_; }

  uint64_t hash() const;

  // Empty schema; only useful as a placeholder before assignment.
  LabelSchema() : vocabs_(1) {}

 private:
  int K_ = 1;
  std::vector<std::string> labels_;
  std::vector<LabelDecomposition> decomps_;
  SchemaVocabs vocabs_;
  std::vector<std::string> missing_variants_;

  void check_invariants() const;
  void find_missing_variants();
};

// Gold-mention counts per component value: counts[type][value_index].
// Semantics: per decoded gold mention, B += 1, I += (length - 1), and each
// layer value of the mention's padded tuple (NULL included) += 1; the O
// span symbol counts gold O tokens.
std::vector<std::vector<int64_t>> component_frequency(
    const LabelSchema& schema, const std::vector<SentenceExample>& corpus);

uint64_t fnv1a64(std::string_view s, uint64_t h = 0xcbf29ce484222325ULL);

}  // namespace seqcomp
