// seqcomp: sequence labeling with compositional label embeddings.
// One binary, six subcommands: gen-corpus, train, evaluate, benchmark,
// export-embeddings, project. Exit codes: 0 ok, 1 usage, 2 data/schema,
// 3 numeric failure.

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "seqcomp/config.hpp"
#include "seqcomp/corpus.hpp"
#include "seqcomp/errors.hpp"
#include "seqcomp/evaluation.hpp"
#include "seqcomp/model.hpp"
#include "seqcomp/projection.hpp"
#include "seqcomp/synth.hpp"
#include "seqcomp/trainer.hpp"

namespace fs = std::filesystem;
using namespace seqcomp;

namespace {

void apply_preset(KeyValueConfig& cfg) {
  const std::string preset = cfg.get_string("preset", "");
  if (preset.empty()) return;
  if (preset == "desk") return;  // the defaults
  if (preset == "paper") {
    // the original fine-tuning setup: lr 5e-5, 20 epochs, batch 32
    if (!cfg.has("learning_rate")) cfg.set("learning_rate", "5e-5");
    if (!cfg.has("epochs")) cfg.set("epochs", "20");
    if (!cfg.has("batch_size")) cfg.set("batch_size", "32");
    if (!cfg.has("dropout_rate")) cfg.set("dropout_rate", "0.1");
    return;
  }
  throw UsageError("unknown preset '" + preset + "' (expected desk or paper)");
}

TrainConfig train_config_from(const KeyValueConfig& file_cfg) {
  KeyValueConfig cfg = file_cfg;
  apply_preset(cfg);
  TrainConfig tc;
  tc.mode = composition_mode_from_string(cfg.get_string("mode", "sum"));
  tc.epochs = int(cfg.get_int("epochs", tc.epochs));
  tc.batch_size = int(cfg.get_int("batch_size", tc.batch_size));
  tc.learning_rate = cfg.get_double("learning_rate", tc.learning_rate);
  tc.dropout_rate = cfg.get_double("dropout_rate", tc.dropout_rate);
  tc.seed = uint64_t(cfg.get_int("seed", int64_t(tc.seed)));
  tc.word_dim = int(cfg.get_int("word_dim", tc.word_dim));
  tc.window_radius = int(cfg.get_int("window_radius", tc.window_radius));
  tc.hidden_dim = int(cfg.get_int("hidden_dim", tc.hidden_dim));
  tc.output_dim = int(cfg.get_int("output_dim", tc.output_dim));
  tc.min_count = int(cfg.get_int("min_count", tc.min_count));
  const std::string splits = cfg.get_string("concat_dims", "");
  if (!splits.empty()) {
    std::istringstream ss(splits);
    std::string tok;
    while (std::getline(ss, tok, ','))
      tc.concat_dims.push_back(std::stoi(tok));
  }
  tc.validate();
  return tc;
}

SyntheticSpec synth_spec_from(const KeyValueConfig& cfg) {
  SyntheticSpec s;
  s.n_top_types = int(cfg.get_int("n_top_types", s.n_top_types));
  s.n_mid_per_top = int(cfg.get_int("n_mid_per_top", s.n_mid_per_top));
  s.n_leaf_per_mid = int(cfg.get_int("n_leaf_per_mid", s.n_leaf_per_mid));
  s.zipf_exponent = cfg.get_double("zipf_exponent", s.zipf_exponent);
  s.train_sentences = int(cfg.get_int("train_sentences", s.train_sentences));
  s.dev_sentences = int(cfg.get_int("dev_sentences", s.dev_sentences));
  s.test_sentences = int(cfg.get_int("test_sentences", s.test_sentences));
  s.min_sentence_len = int(cfg.get_int("min_sentence_len", s.min_sentence_len));
  s.max_sentence_len = int(cfg.get_int("max_sentence_len", s.max_sentence_len));
  s.entity_density = cfg.get_double("entity_density", s.entity_density);
  s.cue_strength = cfg.get_double("cue_strength", s.cue_strength);
  s.filler_vocab = int(cfg.get_int("filler_vocab", s.filler_vocab));
  s.seed = uint64_t(cfg.get_int("seed", int64_t(s.seed)));
  s.validate();
  return s;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
}

EvalReport evaluate_model(const TaggerModel& model,
                          const std::vector<SentenceExample>& test) {
  const auto& schema = model.schema();
  const auto gold = gold_spans(test, schema);
  SpansPerSentence pred;
  pred.reserve(test.size());
  for (const auto& ids : model.predict_all(test))
    pred.push_back(decode_spans(ids, schema));
  return evaluate(gold, pred, schema, model.buckets());
}

// ---------------------------------------------------------------- train

int cmd_train(const std::string& config_path, const KeyValueConfig& flag_overrides,
              const std::string& train_path, const std::string& dev_path,
              const std::string& schema_path, const std::string& out_dir) {
  KeyValueConfig cfg =
      config_path.empty() ? KeyValueConfig() : KeyValueConfig::read_file(config_path);
  for (const auto& [k, v] : flag_overrides.entries()) cfg.set(k, v);
  const TrainConfig tc = train_config_from(cfg);

  auto train_corpus = read_conll(train_path);
  LabelSchema schema = schema_path.empty()
                           ? LabelSchema::infer_from_corpus(train_corpus)
                           : LabelSchema::read_file(schema_path);
  if (!schema_path.empty()) {
    // surfacing bad labels early beats a mid-epoch failure
    train_corpus = read_conll(train_path, schema);
  }
  const auto dev_corpus = read_conll(dev_path, schema);
  if (schema.partial()) {
    std::cerr << "warning: schema is partial; missing IOB2 variants:";
    for (const auto& m : schema.missing_variants()) std::cerr << " " << m;
    std::cerr << "\n";
  }

  fs::create_directories(out_dir);
  std::ofstream log(fs::path(out_dir) / "metrics.tsv", std::ios::binary);
  if (!log) throw DataError("cannot write metrics log in " + out_dir);
  log << "epoch\tloss\tdev_f1_overall\tdev_f1_low\tdev_f1_mid\tdev_f1_high\n";

  RunResult run = train(train_corpus, dev_corpus, schema, tc, &log);
  run.best_model.save((fs::path(out_dir) / "best.ckpt").string());

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "mode=%s seed=%llu best_epoch=%d dev_f1_overall=%.4f\n",
                to_string(tc.mode).c_str(), (unsigned long long)tc.seed, run.best_epoch,
                run.best_dev_f1);
  std::cout << buf;
  return 0;
}

// -------------------------------------------------------------- evaluate

int cmd_evaluate(const std::string& checkpoint, const std::string& test_path,
                 const std::string& schema_path, const std::string& out_path) {
  std::optional<LabelSchema> expect;
  if (!schema_path.empty()) expect = LabelSchema::read_file(schema_path);
  TaggerModel model = TaggerModel::load(checkpoint, expect ? &*expect : nullptr);
  const auto test = read_conll(test_path, model.schema());
  const EvalReport report = evaluate_model(model, test);

  std::ostringstream tsv;
  write_report_tsv(tsv, report);
  if (!out_path.empty())
    write_text_file(out_path, tsv.str());
  else
    std::cout << tsv.str();
  write_report_table(std::cout, report);
  return 0;
}

// ------------------------------------------------------------ gen-corpus

int cmd_gen_corpus(const std::string& spec_path, const KeyValueConfig& flag_overrides,
                   const std::string& out_dir) {
  KeyValueConfig cfg =
      spec_path.empty() ? KeyValueConfig() : KeyValueConfig::read_file(spec_path);
  for (const auto& [k, v] : flag_overrides.entries()) cfg.set(k, v);
  const SyntheticSpec spec = synth_spec_from(cfg);
  const SyntheticCorpus corpus = generate_synthetic(spec);

  fs::create_directories(out_dir);
  write_conll((fs::path(out_dir) / "train.tsv").string(), corpus.train);
  write_conll((fs::path(out_dir) / "dev.tsv").string(), corpus.dev);
  write_conll((fs::path(out_dir) / "test.tsv").string(), corpus.test);
  corpus.schema.write_file((fs::path(out_dir) / "labels.txt").string());

  const auto freq = frequency_table(corpus.train, corpus.schema);
  FrequencyBuckets buckets;
  buckets.counts = freq;
  std::ostringstream stats;
  stats << "path\ttrain_mentions\tbucket\n";
  for (const auto& [path, count] : freq)
    stats << path << "\t" << count << "\t"
          << kBucketNames[int(buckets.bucket_of(path))] << "\n";
  write_text_file(fs::path(out_dir) / "frequency.tsv", stats.str());

  std::cout << "wrote " << corpus.train.size() << "/" << corpus.dev.size() << "/"
            << corpus.test.size() << " train/dev/test sentences, "
            << corpus.schema.num_labels() << " labels to " << out_dir << "\n";
  return 0;
}

// ------------------------------------------------------------- benchmark

struct BenchCell {
  CompositionMode mode;
  uint64_t seed;
  EvalReport report;
  double silhouette_span = 0.0;
  int best_epoch = -1;
};

std::string pm(double mean, double std_) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f±%.2f", 100.0 * mean, 100.0 * std_);
  return buf;
}

int cmd_benchmark(const std::string& spec_path, const std::string& config_path,
                  const KeyValueConfig& flag_overrides, int n_seeds,
                  const std::string& modes_csv, const std::string& out_dir, int jobs) {
  KeyValueConfig spec_cfg =
      spec_path.empty() ? KeyValueConfig() : KeyValueConfig::read_file(spec_path);
  KeyValueConfig train_cfg =
      config_path.empty() ? KeyValueConfig() : KeyValueConfig::read_file(config_path);
  for (const auto& [k, v] : flag_overrides.entries()) {
    spec_cfg.set(k, v);
    train_cfg.set(k, v);
  }
  const SyntheticSpec spec = synth_spec_from(spec_cfg);
  const TrainConfig base_tc = train_config_from(train_cfg);
  if (n_seeds < 2) throw UsageError("benchmark needs --seeds >= 2");

  std::vector<CompositionMode> modes;
  {
    std::istringstream ss(modes_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) modes.push_back(composition_mode_from_string(tok));
    if (modes.empty()) throw UsageError("benchmark needs at least one mode");
  }

  fs::create_directories(out_dir);
  const SyntheticCorpus corpus = generate_synthetic(spec);
  fs::create_directories(fs::path(out_dir) / "corpus");
  write_conll((fs::path(out_dir) / "corpus/train.tsv").string(), corpus.train);
  write_conll((fs::path(out_dir) / "corpus/dev.tsv").string(), corpus.dev);
  write_conll((fs::path(out_dir) / "corpus/test.tsv").string(), corpus.test);
  corpus.schema.write_file((fs::path(out_dir) / "corpus/labels.txt").string());

  std::vector<BenchCell> cells;
  for (const auto mode : modes)
    for (int s = 0; s < n_seeds; ++s)
      cells.push_back({mode, base_tc.seed + uint64_t(s), {}, 0.0, -1});

  const auto span_groups = grouping_keys(corpus.schema, Grouping::Span);
  const auto run_cell = [&](BenchCell& cell) {
    TrainConfig tc = base_tc;
    tc.mode = cell.mode;
    tc.seed = cell.seed;
    const fs::path run_dir = fs::path(out_dir) / "runs" /
                             (to_string(cell.mode) + "_seed" + std::to_string(cell.seed));
    fs::create_directories(run_dir);
    std::ofstream log(run_dir / "metrics.tsv", std::ios::binary);
    log << "epoch\tloss\tdev_f1_overall\tdev_f1_low\tdev_f1_mid\tdev_f1_high\n";
    RunResult run = train(corpus.train, corpus.dev, corpus.schema, tc, &log);
    run.best_model.save((run_dir / "best.ckpt").string());
    cell.report = evaluate_model(run.best_model, corpus.test);
    cell.silhouette_span =
        silhouette(run.best_model.composed_label_matrix(), span_groups);
    cell.best_epoch = run.best_epoch;
  };

  if (jobs <= 0) jobs = int(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min<int>(jobs, int(cells.size()));
  {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          const size_t i = next.fetch_add(1);
          if (i >= cells.size()) return;
          run_cell(cells[i]);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  // aggregate per mode, in the order given
  std::ostringstream per_seed, silhouette_tsv, table3, layers_tbl, boundary_tbl, t3tsv;
  per_seed << "mode\tseed\tmetric\tvalue\n";
  silhouette_tsv << "mode\tseed\tsilhouette_span\n";
  const char* cols[] = {"low_f1", "mid_f1", "high_f1", "overall_f1"};
  table3 << "           Low           Middle        High          Overall\n";
  t3tsv << "mode\tbucket\tmean_f1\tstd_f1\n";
  const int depth = corpus.schema.hierarchy_depth();
  layers_tbl << "          ";
  for (int d = 1; d <= depth; ++d) layers_tbl << " Layer-" << d << "       ";
  layers_tbl << "\n";
  boundary_tbl << "           Boundary\n";

  for (const auto mode : modes) {
    std::vector<EvalReport> reports;
    for (const auto& c : cells)
      if (c.mode == mode) {
        reports.push_back(c.report);
        for (const auto& [name, value] : report_metrics(c.report)) {
          char buf[128];
          std::snprintf(buf, sizeof buf, "%s\t%llu\t%s\t%.6f\n",
                        to_string(mode).c_str(), (unsigned long long)c.seed,
                        name.c_str(), value);
          per_seed << buf;
        }
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s\t%llu\t%.6f\n", to_string(mode).c_str(),
                      (unsigned long long)c.seed, c.silhouette_span);
        silhouette_tsv << buf;
      }
    const auto stats = aggregate_reports(reports);
    auto stat = [&](const std::string& name) -> const MetricStat& {
      for (const auto& s : stats)
        if (s.name == name) return s;
      throw NumericError("missing metric " + name);
    };
    char row[256];
    std::snprintf(row, sizeof row, "%-10s", to_string(mode).c_str());
    table3 << row;
    for (const char* c : cols) {
      const auto& s = stat(c);
      std::snprintf(row, sizeof row, " %-13s", pm(s.mean, s.stddev).c_str());
      table3 << row;
      t3tsv << to_string(mode) << "\t" << c << "\t" << s.mean << "\t" << s.stddev << "\n";
    }
    table3 << "\n";
    std::snprintf(row, sizeof row, "%-10s", to_string(mode).c_str());
    layers_tbl << row;
    for (int d = 1; d <= depth; ++d) {
      const auto& s = stat("layer" + std::to_string(d) + "_f1");
      std::snprintf(row, sizeof row, " %-13s", pm(s.mean, s.stddev).c_str());
      layers_tbl << row;
    }
    layers_tbl << "\n";
    std::snprintf(row, sizeof row, "%-10s %-13s\n", to_string(mode).c_str(),
                  pm(stat("boundary_f1").mean, stat("boundary_f1").stddev).c_str());
    boundary_tbl << row;
  }

  const std::string summary = "F1 by frequency class (mean±std over " +
                              std::to_string(n_seeds) + " seeds)\n" + table3.str() +
                              "\nF1 by hierarchical layer\n" + layers_tbl.str() +
                              "\nSpan boundary F1\n" + boundary_tbl.str();
  write_text_file(fs::path(out_dir) / "summary.txt", summary);
  write_text_file(fs::path(out_dir) / "table3.tsv", t3tsv.str());
  write_text_file(fs::path(out_dir) / "per_seed.tsv", per_seed.str());
  write_text_file(fs::path(out_dir) / "silhouette.tsv", silhouette_tsv.str());
  std::cout << summary;
  return 0;
}

// ---------------------------------------------------- export-embeddings

int cmd_export(const std::string& checkpoint, const std::string& out_prefix) {
  const TaggerModel model = TaggerModel::load(checkpoint);
  const auto& schema = model.schema();

  std::ostringstream composed;
  write_composed_tsv(composed, model.composed_label_matrix(), schema);
  write_text_file(out_prefix + ".composed.tsv", composed.str());

  std::ostringstream comps;
  comps << "type\tvalue\tembedding...\n";
  char buf[32];
  if (model.composition().mode == CompositionMode::Baseline) {
    const Tensor2D& w = model.store().group(kBaselineMatrixGroup).value;
    for (int y = 0; y < w.rows; ++y) {
      comps << "label\t" << schema.label(y);
      for (int j = 0; j < w.cols; ++j) {
        std::snprintf(buf, sizeof buf, "\t%.17g", w.at(y, j));
        comps << buf;
      }
      comps << "\n";
    }
  } else {
    for (int k = 0; k < schema.K(); ++k) {
      const Tensor2D& wk = model.store().group(component_group_name(k)).value;
      const std::string type_name = k == 0 ? "span" : "layer" + std::to_string(k);
      for (int vi = 0; vi < wk.rows; ++vi) {
        comps << type_name << "\t" << schema.value_name(k, vi);
        for (int j = 0; j < wk.cols; ++j) {
          std::snprintf(buf, sizeof buf, "\t%.17g", wk.at(vi, j));
          comps << buf;
        }
        comps << "\n";
      }
    }
  }
  write_text_file(out_prefix + ".components.tsv", comps.str());
  std::cout << "wrote " << out_prefix << ".composed.tsv and " << out_prefix
            << ".components.tsv\n";
  return 0;
}

// ---------------------------------------------------------------- project

int cmd_project(const std::string& checkpoint, const std::string& embeddings_path,
                const std::string& method, double perplexity, int iterations,
                uint64_t seed, const std::string& out_prefix, bool svg) {
  Tensor2D w;
  std::optional<LabelSchema> schema_opt;
  if (!checkpoint.empty()) {
    const TaggerModel model = TaggerModel::load(checkpoint);
    schema_opt = model.schema();
    w = model.composed_label_matrix();
  } else if (!embeddings_path.empty()) {
    std::ifstream in(embeddings_path, std::ios::binary);
    if (!in) throw DataError("cannot open embeddings file: " + embeddings_path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty embeddings file");
    std::vector<std::string> labels;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::istringstream ss(line);
      std::string label;
      if (!std::getline(ss, label, '\t')) throw DataError("malformed embeddings row");
      std::vector<double> row;
      std::string cell;
      while (std::getline(ss, cell, '\t')) row.push_back(std::stod(cell));
      labels.push_back(label);
      rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError("embeddings file has no rows");
    schema_opt = LabelSchema::build(labels);
    w.resize(int(rows.size()), int(rows[0].size()));
    for (size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows[0].size())
        throw DataError("embeddings file has ragged rows");
      const int y = schema_opt->label_id(labels[i]);
      std::copy(rows[i].begin(), rows[i].end(), w.row(y));
    }
  } else {
    throw UsageError("project needs --checkpoint or --embeddings");
  }
  const LabelSchema& schema = *schema_opt;

  ProjectionResult result;
  if (method == "pca") {
    result = project_pca(w, schema);
  } else if (method == "tsne") {
    TsneParams params;
    params.perplexity = perplexity;
    params.iterations = iterations;
    params.seed = seed;
    result = project_tsne(w, schema, params);
  } else {
    throw UsageError("unknown projection method '" + method + "'");
  }

  std::ostringstream tsv;
  write_projection_tsv(tsv, result, schema);
  write_text_file(out_prefix + ".tsv", tsv.str());
  if (svg) {
    std::ostringstream s;
    write_projection_svg(s, result, schema);
    write_text_file(out_prefix + ".svg", s.str());
  }

  char buf[160];
  std::snprintf(buf, sizeof buf, "silhouette(span)=%.4f silhouette(top_layer)=%.4f\n",
                cluster_stats(result, Grouping::Span),
                cluster_stats(result, Grouping::TopLayer));
  std::cout << buf;
  if (method == "pca") {
    std::snprintf(buf, sizeof buf, "explained_variance_ratio=%.6f,%.6f\n",
                  result.explained_variance_ratio[0],
                  result.explained_variance_ratio[1]);
    std::cout << buf;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequence labeling with compositional label embeddings"};
  app.require_subcommand(1);

  // train
  auto* train_cmd = app.add_subcommand("train", "Train a tagger on a CoNLL-style corpus");
  std::string t_config, t_train, t_dev, t_schema, t_out = "run";
  std::string t_mode, t_epochs, t_batch, t_lr, t_dropout, t_seed, t_word_dim, t_window,
      t_hidden, t_outdim, t_min_count, t_preset;
  train_cmd->add_option("--config", t_config, "Flat key=value config file");
  train_cmd->add_option("--train", t_train, "Training corpus (token<TAB>label)")->required();
  train_cmd->add_option("--dev", t_dev, "Development corpus")->required();
  train_cmd->add_option("--schema", t_schema, "Label schema file (default: infer from train)");
  train_cmd->add_option("--out", t_out, "Output directory (best.ckpt, metrics.tsv)");
  train_cmd->add_option("--mode", t_mode, "baseline | sum | concat");
  train_cmd->add_option("--epochs", t_epochs, "Training epochs");
  train_cmd->add_option("--batch-size", t_batch, "Sentences per batch");
  train_cmd->add_option("--learning-rate", t_lr, "Adam learning rate");
  train_cmd->add_option("--dropout", t_dropout, "Dropout rate after the hidden layer");
  train_cmd->add_option("--seed", t_seed, "Run seed");
  train_cmd->add_option("--word-dim", t_word_dim, "Word embedding size");
  train_cmd->add_option("--window-radius", t_window, "Context window radius");
  train_cmd->add_option("--hidden-dim", t_hidden, "Hidden layer size");
  train_cmd->add_option("--output-dim", t_outdim, "Feature/label embedding size D");
  train_cmd->add_option("--min-count", t_min_count, "Vocabulary frequency cutoff");
  train_cmd->add_option("--preset", t_preset, "desk (default) or paper (lr 5e-5)");

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "Score a checkpoint on a test corpus");
  std::string e_checkpoint, e_test, e_schema, e_out;
  eval_cmd->add_option("--checkpoint", e_checkpoint, "Trained checkpoint")->required();
  eval_cmd->add_option("--test", e_test, "Test corpus")->required();
  eval_cmd->add_option("--schema", e_schema, "Cross-check schema file");
  eval_cmd->add_option("--out", e_out, "Write report TSV here (default: stdout)");

  // gen-corpus
  auto* gen_cmd = app.add_subcommand("gen-corpus", "Generate a synthetic hierarchical corpus");
  std::string g_spec, g_out = "corpus";
  std::map<std::string, std::string> g_flags;
  gen_cmd->add_option("--spec", g_spec, "Synthetic spec config file");
  gen_cmd->add_option("--out", g_out, "Output directory");
  std::string g_seed, g_zipf, g_train_n, g_dev_n, g_test_n, g_density, g_cue;
  gen_cmd->add_option("--seed", g_seed, "Generator seed");
  gen_cmd->add_option("--zipf-exponent", g_zipf, "Zipf skew over leaf types");
  gen_cmd->add_option("--train-sentences", g_train_n, "Training split size");
  gen_cmd->add_option("--dev-sentences", g_dev_n, "Dev split size");
  gen_cmd->add_option("--test-sentences", g_test_n, "Test split size");
  gen_cmd->add_option("--entity-density", g_density, "Entity start probability");
  gen_cmd->add_option("--cue-strength", g_cue, "Leaf cue token probability");

  // benchmark
  auto* bench_cmd =
      app.add_subcommand("benchmark", "Train all modes across seeds and compare");
  std::string b_spec, b_config, b_out = "bench", b_modes = "baseline,sum,concat";
  int b_seeds = 5, b_jobs = 0;
  std::string b_seed, b_epochs, b_lr;
  bench_cmd->add_option("--spec", b_spec, "Synthetic spec config file");
  bench_cmd->add_option("--config", b_config, "Training config file");
  bench_cmd->add_option("--seeds", b_seeds, "Number of seeds (first seed 1 by default)");
  bench_cmd->add_option("--modes", b_modes, "Comma-separated composition modes");
  bench_cmd->add_option("--out", b_out, "Output directory");
  bench_cmd->add_option("--jobs", b_jobs, "Parallel (mode,seed) cells; 0 = all cores");
  bench_cmd->add_option("--seed", b_seed, "First seed / generator seed");
  bench_cmd->add_option("--epochs", b_epochs, "Training epochs");
  bench_cmd->add_option("--learning-rate", b_lr, "Adam learning rate");

  // export-embeddings
  auto* export_cmd =
      app.add_subcommand("export-embeddings", "Dump composed and component embeddings");
  std::string x_checkpoint, x_out = "embeddings";
  export_cmd->add_option("--checkpoint", x_checkpoint, "Trained checkpoint")->required();
  export_cmd->add_option("--out", x_out, "Output prefix");

  // project
  auto* project_cmd = app.add_subcommand("project", "2-D projection of label embeddings");
  std::string p_checkpoint, p_embeddings, p_method = "pca", p_out = "projection";
  double p_perplexity = 30.0;
  int p_iterations = 1000;
  uint64_t p_seed = 1;
  bool p_svg = false;
  project_cmd->add_option("--checkpoint", p_checkpoint, "Trained checkpoint");
  project_cmd->add_option("--embeddings", p_embeddings, "Composed-embedding TSV");
  project_cmd->add_option("--method", p_method, "pca (default) or tsne");
  project_cmd->add_option("--perplexity", p_perplexity, "t-SNE perplexity");
  project_cmd->add_option("--iterations", p_iterations, "t-SNE iterations");
  project_cmd->add_option("--seed", p_seed, "t-SNE init seed");
  project_cmd->add_option("--out", p_out, "Output prefix");
  project_cmd->add_flag("--svg", p_svg, "Also write an SVG scatter");

  try {
    app.parse(argc, argv);

    if (*train_cmd) {
      KeyValueConfig overrides;
      auto set_if = [&](const std::string& key, const std::string& v) {
        if (!v.empty()) overrides.set(key, v);
      };
      set_if("mode", t_mode);
      set_if("epochs", t_epochs);
      set_if("batch_size", t_batch);
      set_if("learning_rate", t_lr);
      set_if("dropout_rate", t_dropout);
      set_if("seed", t_seed);
      set_if("word_dim", t_word_dim);
      set_if("window_radius", t_window);
      set_if("hidden_dim", t_hidden);
      set_if("output_dim", t_outdim);
      set_if("min_count", t_min_count);
      set_if("preset", t_preset);
      return cmd_train(t_config, overrides, t_train, t_dev, t_schema, t_out);
    }
    if (*eval_cmd) return cmd_evaluate(e_checkpoint, e_test, e_schema, e_out);
    if (*gen_cmd) {
      KeyValueConfig overrides;
      auto set_if = [&](const std::string& key, const std::string& v) {
        if (!v.empty()) overrides.set(key, v);
      };
      set_if("seed", g_seed);
      set_if("zipf_exponent", g_zipf);
      set_if("train_sentences", g_train_n);
      set_if("dev_sentences", g_dev_n);
      set_if("test_sentences", g_test_n);
      set_if("entity_density", g_density);
      set_if("cue_strength", g_cue);
      return cmd_gen_corpus(g_spec, overrides, g_out);
    }
    if (*bench_cmd) {
      KeyValueConfig overrides;
      if (!b_seed.empty()) overrides.set("seed", b_seed);
      if (!b_epochs.empty()) overrides.set("epochs", b_epochs);
      if (!b_lr.empty()) overrides.set("learning_rate", b_lr);
      return cmd_benchmark(b_spec, b_config, overrides, b_seeds, b_modes, b_out, b_jobs);
    }
    if (*export_cmd) return cmd_export(x_checkpoint, x_out);
    if (*project_cmd)
      return cmd_project(p_checkpoint, p_embeddings, p_method, p_perplexity,
                         p_iterations, p_seed, p_out, p_svg);
    throw UsageError("no subcommand given");
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[usage]: " << e.what() << "\n";
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "error[usage]: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error[data]: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "error[numeric]: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error[data]: " << e.what() << "\n";
    return 2;
  }
}
