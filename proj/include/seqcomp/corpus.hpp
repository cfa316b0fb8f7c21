#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "seqcomp/schema.hpp"

namespace seqcomp {

// One sentence with gold IOB2 labels; the unit of training and evaluation.
struct SentenceExample {
  std::vector<std::string> tokens;
  std::vector<std::string> gold_labels;

  bool operator==(const SentenceExample&) const = default;
};

// CoNLL-style file: one "token<TAB>label" per line, blank line between
// sentences, UTF-8, CRLF tolerated. Ragged lines raise DataError with the
// line number.
std::vector<SentenceExample> read_conll(const std::string& path);

// As above, but also validates every label against the schema.
std::vector<SentenceExample> read_conll(const std::string& path,
                                        const LabelSchema& schema);

void write_conll(const std::string& path, const std::vector<SentenceExample>& corpus);

// Label-string -> label-id conversion; DataError names the offending label.
std::vector<int> to_label_ids(const SentenceExample& sentence, const LabelSchema& schema);
std::vector<std::vector<int>> to_label_ids(const std::vector<SentenceExample>& corpus,
                                           const LabelSchema& schema);

// Gold entity-mention counts per entity type path. Every entity path of the
// schema gets an entry (0 when unseen), so an empty training set maps all
// labels to the Low bucket.
std::map<std::string, int64_t> frequency_table(const std::vector<SentenceExample>& train,
                                               const LabelSchema& schema);

}  // namespace seqcomp
