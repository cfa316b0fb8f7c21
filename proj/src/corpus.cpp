#include "seqcomp/corpus.hpp"

#include <fstream>
#include <sstream>

#include "seqcomp/errors.hpp"
#include "seqcomp/evaluation.hpp"

namespace seqcomp {

std::vector<SentenceExample> read_conll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file: " + path);
  std::vector<SentenceExample> corpus;
  SentenceExample cur;
  std::string line;
  size_t line_no = 0;
  auto flush = [&] {
    if (!cur.tokens.empty()) {
      corpus.push_back(std::move(cur));
      cur = {};
    }
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected exactly 'token<TAB>label'");
    if (tab == 0 || tab + 1 == line.size())
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": empty token or label field");
    cur.tokens.push_back(line.substr(0, tab));
    cur.gold_labels.push_back(line.substr(tab + 1));
  }
  flush();
  return corpus;
}

std::vector<SentenceExample> read_conll(const std::string& path,
                                        const LabelSchema& schema) {
  auto corpus = read_conll(path);
  for (const auto& s : corpus) {
    for (const auto& l : s.gold_labels) {
      if (!schema.has_label(l))
        throw DataError(path + ": label '" + l + "' not in schema");
    }
  }
  return corpus;
}

void write_conll(const std::string& path, const std::vector<SentenceExample>& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write corpus file: " + path);
  for (size_t i = 0; i < corpus.size(); ++i) {
    const auto& s = corpus[i];
    for (size_t t = 0; t < s.tokens.size(); ++t)
      out << s.tokens[t] << '\t' << s.gold_labels[t] << '\n';
    out << '\n';
  }
}

std::vector<int> to_label_ids(const SentenceExample& sentence, const LabelSchema& schema) {
  if (sentence.tokens.size() != sentence.gold_labels.size())
    throw DataError("sentence token/label length mismatch");
  std::vector<int> ids;
  ids.reserve(sentence.gold_labels.size());
  for (const auto& l : sentence.gold_labels) ids.push_back(schema.label_id(l));
  return ids;
}

std::vector<std::vector<int>> to_label_ids(const std::vector<SentenceExample>& corpus,
                                           const LabelSchema& schema) {
  std::vector<std::vector<int>> out;
  out.reserve(corpus.size());
  for (const auto& s : corpus) out.push_back(to_label_ids(s, schema));
  return out;
}

std::map<std::string, int64_t> frequency_table(const std::vector<SentenceExample>& train,
                                               const LabelSchema& schema) {
  std::map<std::string, int64_t> counts;
  for (const auto& path : schema.entity_paths()) counts[path] = 0;
  for (const auto& sent : train) {
    const auto ids = to_label_ids(sent, schema);
    for (const auto& sp : decode_spans(ids, schema))
      counts[schema.path_string(sp.type_path)] += 1;
  }
  return counts;
}

}  // namespace seqcomp
