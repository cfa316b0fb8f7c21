#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "seqcomp/corpus.hpp"
#include "seqcomp/errors.hpp"
#include "seqcomp/evaluation.hpp"
#include "seqcomp/model.hpp"
#include "seqcomp/projection.hpp"
#include "seqcomp/synth.hpp"
#include "seqcomp/trainer.hpp"

namespace py = pybind11;
using namespace seqcomp;

namespace {

std::vector<SentenceExample> corpus_from_py(
    const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& raw) {
  std::vector<SentenceExample> corpus;
  corpus.reserve(raw.size());
  for (const auto& [tokens, labels] : raw) {
    if (tokens.size() != labels.size())
      throw DataError("sentence token/label length mismatch");
    corpus.push_back({tokens, labels});
  }
  return corpus;
}

std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> corpus_to_py(
    const std::vector<SentenceExample>& corpus) {
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> out;
  out.reserve(corpus.size());
  for (const auto& s : corpus) out.emplace_back(s.tokens, s.gold_labels);
  return out;
}

py::dict prf_to_dict(const PRF& p) {
  py::dict d;
  d["precision"] = p.precision;
  d["recall"] = p.recall;
  d["f1"] = p.f1;
  d["tp"] = p.tp;
  d["fp"] = p.fp;
  d["fn"] = p.fn;
  return d;
}

py::dict report_to_dict(const EvalReport& r) {
  py::dict d;
  d["overall"] = prf_to_dict(r.overall);
  py::dict buckets;
  for (int b = 0; b < 3; ++b) buckets[kBucketNames[b]] = prf_to_dict(r.buckets[b]);
  d["buckets"] = buckets;
  py::list layers;
  for (const auto& l : r.layers) layers.append(prf_to_dict(l));
  d["layers"] = layers;
  d["boundary"] = prf_to_dict(r.boundary);
  return d;
}

TrainConfig config_from_kwargs(const py::kwargs& kwargs) {
  TrainConfig cfg;
  for (auto item : kwargs) {
    const std::string key = py::str(item.first);
    if (key == "mode")
      cfg.mode = composition_mode_from_string(py::cast<std::string>(item.second));
    else if (key == "epochs")
      cfg.epochs = py::cast<int>(item.second);
    else if (key == "batch_size")
      cfg.batch_size = py::cast<int>(item.second);
    else if (key == "learning_rate")
      cfg.learning_rate = py::cast<double>(item.second);
    else if (key == "dropout_rate")
      cfg.dropout_rate = py::cast<double>(item.second);
    else if (key == "seed")
      cfg.seed = py::cast<uint64_t>(item.second);
    else if (key == "word_dim")
      cfg.word_dim = py::cast<int>(item.second);
    else if (key == "window_radius")
      cfg.window_radius = py::cast<int>(item.second);
    else if (key == "hidden_dim")
      cfg.hidden_dim = py::cast<int>(item.second);
    else if (key == "output_dim")
      cfg.output_dim = py::cast<int>(item.second);
    else if (key == "min_count")
      cfg.min_count = py::cast<int>(item.second);
    else
      throw UsageError("unknown train option '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sequence labeling with compositional label embeddings";

  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<LabelSchema>(m, "LabelSchema")
      .def_static("build", &LabelSchema::build, py::arg("labels"))
      .def_static("read_file", &LabelSchema::read_file, py::arg("path"))
      .def("write_file", &LabelSchema::write_file, py::arg("path"))
      .def_property_readonly("k", &LabelSchema::K)
      .def_property_readonly("labels", &LabelSchema::labels)
      .def_property_readonly("partial", &LabelSchema::partial)
      .def("label_id", &LabelSchema::label_id)
      .def("decomposition",
           [](const LabelSchema& s, const std::string& label) {
             const int y = s.label_id(label);
             std::vector<std::string> parts;
             const auto& d = s.decomposition(y);
             for (int k = 0; k < s.K(); ++k) parts.push_back(s.value_name(k, d.values[k]));
             return parts;
           })
      .def("__len__", &LabelSchema::num_labels)
      .def("__repr__", [](const LabelSchema& s) {
        return "<LabelSchema K=" + std::to_string(s.K()) + " labels=" +
               std::to_string(s.num_labels()) + ">";
      });

  py::class_<TaggerModel>(m, "Model")
      .def("predict",
           [](const TaggerModel& model, const std::vector<std::string>& tokens) {
             const auto ids = model.predict({tokens, std::vector<std::string>(
                                                         tokens.size(), "O")});
             std::vector<std::string> labels;
             labels.reserve(ids.size());
             for (int y : ids) labels.push_back(model.schema().label(y));
             return labels;
           },
           py::arg("tokens"))
      .def("save", [](const TaggerModel& m_, const std::string& p) { m_.save(p); })
      .def_property_readonly("schema", &TaggerModel::schema)
      .def_property_readonly("mode",
                             [](const TaggerModel& m_) { return to_string(m_.composition().mode); })
      .def("label_matrix", [](const TaggerModel& m_) {
        const Tensor2D w = m_.composed_label_matrix();
        std::vector<std::vector<double>> rows(w.rows);
        for (int i = 0; i < w.rows; ++i)
          rows[i].assign(w.row(i), w.row(i) + w.cols);
        return rows;
      });

  m.def("load_model",
        [](const std::string& path) { return TaggerModel::load(path); },
        py::arg("path"));

  m.def("read_conll",
        [](const std::string& path) { return corpus_to_py(read_conll(path)); },
        py::arg("path"));
  m.def("write_conll",
        [](const std::string& path,
           const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& c) {
          write_conll(path, corpus_from_py(c));
        },
        py::arg("path"), py::arg("corpus"));

  m.def("generate_synthetic",
        [](int n_top, int n_mid, int n_leaf, double zipf_exponent, int train_sentences,
           int dev_sentences, int test_sentences, double entity_density,
           double cue_strength, uint64_t seed) {
          SyntheticSpec spec;
          spec.n_top_types = n_top;
          spec.n_mid_per_top = n_mid;
          spec.n_leaf_per_mid = n_leaf;
          spec.zipf_exponent = zipf_exponent;
          spec.train_sentences = train_sentences;
          spec.dev_sentences = dev_sentences;
          spec.test_sentences = test_sentences;
          spec.entity_density = entity_density;
          spec.cue_strength = cue_strength;
          spec.seed = seed;
          const SyntheticCorpus c = generate_synthetic(spec);
          return py::make_tuple(corpus_to_py(c.train), corpus_to_py(c.dev),
                                corpus_to_py(c.test), c.schema);
        },
        py::arg("n_top") = 4, py::arg("n_mid") = 3, py::arg("n_leaf") = 4,
        py::arg("zipf_exponent") = 1.4, py::arg("train_sentences") = 2000,
        py::arg("dev_sentences") = 500, py::arg("test_sentences") = 500,
        py::arg("entity_density") = 0.25, py::arg("cue_strength") = 0.9,
        py::arg("seed") = 1);

  m.def("train",
        [](const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& train_raw,
           const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& dev_raw,
           const LabelSchema& schema, const py::kwargs& kwargs) {
          const auto train_corpus = corpus_from_py(train_raw);
          const auto dev_corpus = corpus_from_py(dev_raw);
          const TrainConfig cfg = config_from_kwargs(kwargs);
          RunResult run = train(train_corpus, dev_corpus, schema, cfg);
          py::dict info;
          info["best_epoch"] = run.best_epoch;
          info["best_dev_f1"] = run.best_dev_f1;
          py::list losses;
          for (const auto& e : run.epochs) losses.append(e.train_loss);
          info["train_loss"] = losses;
          return py::make_tuple(std::move(run.best_model), info);
        },
        py::arg("train_corpus"), py::arg("dev_corpus"), py::arg("schema"));

  m.def("evaluate",
        [](const TaggerModel& model,
           const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& test_raw) {
          const auto test = corpus_from_py(test_raw);
          const auto& schema = model.schema();
          const auto gold = gold_spans(test, schema);
          SpansPerSentence pred;
          pred.reserve(test.size());
          for (const auto& ids : model.predict_all(test))
            pred.push_back(decode_spans(ids, schema));
          return report_to_dict(evaluate(gold, pred, schema, model.buckets()));
        },
        py::arg("model"), py::arg("test_corpus"));

  m.def("decode_spans",
        [](const std::vector<std::string>& labels, const LabelSchema& schema) {
          SentenceExample s;
          s.tokens.assign(labels.size(), "_");
          s.gold_labels = labels;
          const auto spans = decode_spans(to_label_ids(s, schema), schema);
          std::vector<std::tuple<int, int, std::string>> out;
          out.reserve(spans.size());
          for (const auto& sp : spans)
            out.emplace_back(sp.start, sp.end, schema.path_string(sp.type_path));
          return out;
        },
        py::arg("labels"), py::arg("schema"));

  m.def("pca_project",
        [](const std::vector<std::vector<double>>& rows, const LabelSchema& schema) {
          if (rows.empty()) throw UsageError("pca_project: empty input");
          Tensor2D w(int(rows.size()), int(rows[0].size()));
          for (size_t i = 0; i < rows.size(); ++i)
            std::copy(rows[i].begin(), rows[i].end(), w.row(int(i)));
          const auto r = project_pca(w, schema);
          py::dict d;
          d["labels"] = r.labels;
          d["coords"] = r.coords;
          d["explained_variance_ratio"] = r.explained_variance_ratio;
          d["degenerate"] = r.degenerate;
          return d;
        },
        py::arg("embeddings"), py::arg("schema"));

  m.def("silhouette",
        [](const std::vector<std::vector<double>>& rows, const std::vector<int>& groups) {
          if (rows.empty()) throw UsageError("silhouette: empty input");
          Tensor2D pts(int(rows.size()), int(rows[0].size()));
          for (size_t i = 0; i < rows.size(); ++i)
            std::copy(rows[i].begin(), rows[i].end(), pts.row(int(i)));
          return silhouette(pts, groups);
        },
        py::arg("points"), py::arg("groups"));
}
