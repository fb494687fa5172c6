// Copyright 2026 The Coherence Fusion Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// cohfuse: command-line front end for graphs, prompts, training and
// evaluation reports.
//
// Exit codes: 0 success, 1 input or configuration error, 2 numerical failure.

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coh/checkpoint.h"
#include "coh/corpus_io.h"
#include "coh/encoder.h"
#include "coh/errors.h"
#include "coh/experiment.h"
#include "coh/graph.h"
#include "coh/prompt.h"
#include "coh/synth.h"
#include "coh/train.h"

namespace fs = std::filesystem;

namespace coh {
namespace {

constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;

void log(const std::string &msg) { std::cerr << msg << '\n'; }

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Stamp written into every artifact: the resolved config and its hash.
Json run_record(const std::string &command, const Json &config) {
  return Json{{"command", command},
              {"config", config},
              {"config_hash", hex64(fnv1a64(config.dump()))}};
}

void write_text(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot open '" + path + "' for writing: " +
                std::strerror(errno));
  }
  out << content;
  out.flush();
  if (!out) throw Error("write to '" + path + "' failed");
}

Json read_json_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open '" + path + "': " + std::strerror(errno));
  }
  try {
    return Json::parse(in);
  } catch (const Json::exception &e) {
    throw ParseError("config file '" + path + "': " + e.what(), 0);
  }
}

std::vector<Document> load_corpus(const std::string &path) {
  std::vector<Document> docs = read_corpus_file(path);
  if (docs.empty()) log("warning: corpus '" + path + "' is empty");
  return docs;
}

// ---------------------------------------------------------------------------
// Model and training flags shared by train / eval / cv / xdomain.

struct ModelFlags {
  bool toy = false;
  std::string config_path;
  std::optional<int> d_model, n_heads, n_layers, d_ffn, token_buckets,
      entity_buckets, max_rel, max_elements;
  std::optional<double> dropout;
  std::optional<uint64_t> seed;
  std::optional<std::string> variant, pooling;

  bool any_model_override() const {
    return toy || !config_path.empty() || d_model || n_heads || n_layers ||
           d_ffn || token_buckets || entity_buckets || max_rel ||
           max_elements || dropout || seed || variant || pooling;
  }
};

struct TrainFlags {
  std::optional<int> epochs, batch_size;
  std::optional<double> learning_rate, weight_decay;
  std::optional<uint64_t> seed;
};

void add_model_flags(CLI::App *app, ModelFlags &f) {
  app->add_flag("--toy", f.toy,
                "Start from the desk-scale preset (d_model 32, 2 heads, "
                "1 layer, FFN 64)");
  app->add_option("--config", f.config_path,
                  "JSON file with optional \"model\" and \"train\" objects; "
                  "flags override it")
      ->check(CLI::ExistingFile);
  app->add_option("--variant", f.variant,
                  "TextOnly, TextEnty, TextRel or Full (default Full)");
  app->add_option("--d-model", f.d_model, "Hidden size (default 256)");
  app->add_option("--heads", f.n_heads, "Attention heads (default 8)");
  app->add_option("--layers", f.n_layers, "Layers (default 2)");
  app->add_option("--d-ffn", f.d_ffn, "FFN inner size (default 1024)");
  app->add_option("--dropout", f.dropout, "Dropout rate (default 0.1)");
  app->add_option("--token-buckets", f.token_buckets,
                  "Token hash buckets (default 4096)");
  app->add_option("--entity-buckets", f.entity_buckets,
                  "Entity hash buckets (default 1024)");
  app->add_option("--max-rel", f.max_rel,
                  "Relative distance clip (default 128)");
  app->add_option("--max-elements", f.max_elements,
                  "Flat sequence length cap (default 512)");
  app->add_option("--pooling", f.pooling,
                  "mean_sentences or first_sentence (default mean_sentences)");
  app->add_option("--model-seed", f.seed, "Parameter init seed (default 0)");
}

void add_train_flags(CLI::App *app, TrainFlags &f) {
  app->add_option("--epochs", f.epochs, "Training epochs (default 20)");
  app->add_option("--batch-size", f.batch_size, "Batch size (default 32)");
  app->add_option("--lr", f.learning_rate, "Learning rate (default 1e-3)");
  app->add_option("--weight-decay", f.weight_decay,
                  "AdamW decoupled weight decay (default 0.01)");
  app->add_option("--seed", f.seed,
                  "Shuffling and dropout seed (default 0)");
}

Json config_section(const std::string &path, const char *key) {
  if (path.empty()) return Json::object();
  Json j = read_json_file(path);
  if (!j.is_object()) throw ParseError("config file must hold an object", 0);
  return j.contains(key) ? j.at(key) : Json::object();
}

ModelConfig apply_model_flags(ModelConfig c, const ModelFlags &f) {
  if (f.d_model) c.d_model = *f.d_model;
  if (f.n_heads) c.n_heads = *f.n_heads;
  if (f.n_layers) c.n_layers = *f.n_layers;
  if (f.d_ffn) c.d_ffn = *f.d_ffn;
  if (f.dropout) c.dropout_rate = *f.dropout;
  if (f.token_buckets) c.token_buckets = *f.token_buckets;
  if (f.entity_buckets) c.entity_buckets = *f.entity_buckets;
  if (f.max_rel) c.max_relative_distance = *f.max_rel;
  if (f.max_elements) c.max_elements = *f.max_elements;
  if (f.seed) c.seed = *f.seed;
  if (f.variant) c.variant = parse_variant(*f.variant);
  if (f.pooling) c.pooling = parse_pooling(*f.pooling);
  c.validate();
  return c;
}

// defaults < --toy < config file < flags.
ModelConfig resolve_model(const ModelFlags &f) {
  Json base = (f.toy ? toy_model_config() : ModelConfig()).to_json();
  base.merge_patch(config_section(f.config_path, "model"));
  return apply_model_flags(ModelConfig::from_json(base), f);
}

TrainConfig resolve_train(const TrainFlags &f, const std::string &config) {
  Json base = TrainConfig().to_json();
  base.merge_patch(config_section(config, "train"));
  TrainConfig c = TrainConfig::from_json(base);
  if (f.epochs) c.epochs = *f.epochs;
  if (f.batch_size) c.batch_size = *f.batch_size;
  if (f.learning_rate) c.learning_rate = *f.learning_rate;
  if (f.weight_decay) c.weight_decay = *f.weight_decay;
  if (f.seed) c.seed = *f.seed;
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------

struct BuildGraphArgs {
  std::string corpus, out;
};

void cmd_build_graph(const BuildGraphArgs &a) {
  const std::vector<Document> docs = load_corpus(a.corpus);
  const Json run = run_record("build-graph", Json::object());
  std::string out;
  size_t n_entity = 0, n_relation = 0;
  for (const Document &d : docs) {
    const CoherenceGraph g = build_graph(d);
    n_entity += g.entity_edges.size();
    n_relation += g.relation_edges.size();
    Json j = graph_to_json(g);
    j["config_hash"] = run["config_hash"];
    out += j.dump() + '\n';
  }
  write_text(a.out, out);
  log("build-graph: " + std::to_string(docs.size()) + " graphs, " +
      std::to_string(n_entity) + " entity edges, " +
      std::to_string(n_relation) + " relation edges -> " + a.out);
}

struct EmitPromptsArgs {
  std::string corpus, out_dir;
  std::vector<std::string> variants;
  size_t char_budget = 0;
};

void cmd_emit_prompts(const EmitPromptsArgs &a) {
  std::vector<PromptVariant> variants;
  if (a.variants.empty()) {
    variants = all_prompt_variants();
  } else {
    for (const auto &v : a.variants) variants.push_back(parse_prompt_variant(v));
  }
  const std::vector<Document> docs = load_corpus(a.corpus);
  Json names = Json::array();
  for (PromptVariant v : variants) names.push_back(prompt_variant_name(v));
  const Json config = {{"variants", names}, {"char_budget", a.char_budget}};
  const Json run = run_record("emit-prompts", config);

  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  if (ec) {
    throw Error("cannot create directory '" + a.out_dir + "': " +
                ec.message());
  }
  PromptOptions options;
  options.char_budget = a.char_budget;
  std::string index = "# cohfuse emit-prompts config_hash=" +
                      run["config_hash"].get<std::string>() + "\n# config=" +
                      config.dump() +
                      "\ndoc_id\tvariant\tchar_count\ttriple_count\t"
                      "truncated\n";
  int truncated = 0;
  for (const Document &d : docs) {
    const std::vector<Triple> triples = extract_triples(build_graph(d));
    for (PromptVariant v : variants) {
      const PromptDocument p =
          render_prompt(d, filter_triples(triples, v), v, options);
      const std::string name =
          d.id + "." + std::string(prompt_variant_name(v)) + ".txt";
      write_text((fs::path(a.out_dir) / name).string(), p.text);
      index += d.id + '\t' + std::string(prompt_variant_name(v)) + '\t' +
               std::to_string(p.char_count()) + '\t' +
               std::to_string(p.triples_used.size()) + '\t' +
               (p.truncation ? "yes" : "no") + '\n';
      if (p.truncation) {
        ++truncated;
        const TruncationEvent &t = *p.truncation;
        log("truncated: " + d.id + " " + std::string(prompt_variant_name(v)) +
            " from " + std::to_string(t.original_chars) + " to budget " +
            std::to_string(t.budget) + " chars (dropped " +
            std::to_string(t.dropped_triples) + " triples, " +
            std::to_string(t.dropped_sentences) + " sentences)");
      }
    }
  }
  write_text((fs::path(a.out_dir) / "index.tsv").string(), index);
  log("emit-prompts: " + std::to_string(docs.size() * variants.size()) +
      " prompts, " + std::to_string(truncated) + " truncated -> " +
      a.out_dir);
}

struct TrainArgs {
  std::string corpus, out, metrics;
  ModelFlags model;
  TrainFlags train;
};

void cmd_train(const TrainArgs &a) {
  const ModelConfig mc = resolve_model(a.model);
  const TrainConfig tc = resolve_train(a.train, a.model.config_path);
  const std::vector<Document> docs = load_corpus(a.corpus);
  if (docs.empty()) throw Error("cannot train on an empty corpus");
  gold_labels(docs);
  const Json run = run_record(
      "train", Json{{"model", mc.to_json()}, {"train", tc.to_json()}});
  const std::string metrics_path =
      a.metrics.empty() ? a.out + ".metrics.jsonl" : a.metrics;
  std::string metrics = Json{{"run", run}}.dump() + '\n';
  FusionModel model(mc);
  train(model, docs, tc, [&](const EpochMetrics &m) {
    const Json rec = {{"epoch", m.epoch},
                      {"loss", m.loss},
                      {"accuracy", m.accuracy},
                      {"wall_seconds", m.wall_seconds},
                      {"config_hash", run["config_hash"]}};
    metrics += rec.dump() + '\n';
    char line[128];
    std::snprintf(line, sizeof line, "epoch %d loss %.4f acc %.3f (%.1fs)",
                  m.epoch, m.loss, m.accuracy, m.wall_seconds);
    log(line);
  });
  save_checkpoint_file(a.out, model);
  write_text(metrics_path, metrics);
  log("train: checkpoint -> " + a.out + ", metrics -> " + metrics_path);
}

struct EvalArgs {
  std::string corpus, checkpoint, out;
  ModelFlags model;
};

std::string report_table(const std::string &title, const EvalReport &r) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%-12s n=%-5ld acc %.4f  macro-F1 %.4f  low %.4f  medium "
                "%.4f  high %.4f  range %.4f%s\n",
                title.c_str(), r.n, r.accuracy, r.macro_f1,
                r.per_label_accuracy[0], r.per_label_accuracy[1],
                r.per_label_accuracy[2], r.range,
                r.has_degenerate_class() ? "  (degenerate classes)" : "");
  return buf;
}

void emit_json(const std::string &path, const Json &j) {
  const std::string text = j.dump(2) + '\n';
  if (path.empty()) {
    std::cout << text;
  } else {
    write_text(path, text);
  }
}

void cmd_eval(const EvalArgs &a) {
  FusionModel model = load_checkpoint_file(a.checkpoint);
  if (a.model.any_model_override()) {
    ModelConfig expected = a.model.toy || !a.model.config_path.empty()
                               ? resolve_model(a.model)
                               : apply_model_flags(model.config(), a.model);
    const std::vector<std::string> diff = config_diff(model.config(), expected);
    if (!diff.empty()) {
      std::string msg = "checkpoint config does not match the flags:";
      for (const auto &d : diff) msg += "\n  " + d + " (checkpoint vs flags)";
      throw ContractError(msg);
    }
  }
  const std::vector<Document> docs = load_corpus(a.corpus);
  if (docs.empty()) throw Error("cannot evaluate an empty corpus");
  Labels preds;
  for (const Document &d : docs) preds.push_back(predict(d, model));
  const EvalReport r = per_label_report(preds, gold_labels(docs));
  const Json run = run_record("eval", Json{{"model", model.config().to_json()}});
  std::cerr << report_table(std::string(variant_name(model.config().variant)),
                            r);
  emit_json(a.out, Json{{"run", run}, {"report", report_to_json(r)}});
}

struct CvArgs {
  std::string corpus, out;
  int k = 5;
  uint64_t fold_seed = 0;
  bool plain = false;
  std::vector<std::string> variants;
  ModelFlags model;
  TrainFlags train;
};

void cmd_cv(const CvArgs &a) {
  const ModelConfig base = resolve_model(a.model);
  const TrainConfig tc = resolve_train(a.train, a.model.config_path);
  std::vector<Variant> variants;
  for (const auto &v : a.variants) variants.push_back(parse_variant(v));
  if (variants.empty()) variants.push_back(base.variant);
  const std::vector<Document> docs = load_corpus(a.corpus);

  Json names = Json::array();
  for (Variant v : variants) names.push_back(variant_name(v));
  ModelConfig stamped = base;
  const Json run = run_record(
      "cv", Json{{"model", stamped.to_json()},
                 {"train", tc.to_json()},
                 {"k", a.k},
                 {"fold_seed", a.fold_seed},
                 {"stratified", !a.plain},
                 {"variants", names}});
  Json results = Json::object();
  std::string table = "variant      fold  accuracy  macro-F1  range\n";
  for (Variant v : variants) {
    ModelConfig mc = base;
    mc.variant = v;
    const std::string name(variant_name(v));
    const CvResult r = run_cv(
        docs, a.k, a.fold_seed,
        [&] { return std::make_unique<FusionClassifier>(mc, tc); }, !a.plain,
        [&](int fold, const Classifier &, const EvalReport &rep) {
          char line[96];
          std::snprintf(line, sizeof line, "%-12s %4d  %.4f    %.4f    %.4f\n",
                        name.c_str(), fold, rep.accuracy, rep.macro_f1,
                        rep.range);
          table += line;
          log("cv " + name + " fold " + std::to_string(fold) + " done");
        });
    char line[160];
    std::snprintf(line, sizeof line,
                  "%-12s mean  %.4f±%.4f  %.4f±%.4f  %.4f±%.4f\n",
                  name.c_str(), r.accuracy.mean, r.accuracy.std,
                  r.macro_f1.mean, r.macro_f1.std, r.range.mean, r.range.std);
    table += line;
    results[name] = cv_to_json(r);
  }
  std::cout << table;
  if (!a.out.empty()) {
    write_text(a.out, Json{{"run", run}, {"results", results}}.dump(2) + '\n');
  }
}

struct XdomainArgs {
  std::string corpus, out, train_tag;
  std::vector<std::string> test_tags;
  ModelFlags model;
  TrainFlags train;
};

void cmd_xdomain(const XdomainArgs &a) {
  const ModelConfig mc = resolve_model(a.model);
  const TrainConfig tc = resolve_train(a.train, a.model.config_path);
  const std::vector<Document> docs = load_corpus(a.corpus);
  std::vector<std::string> tests = a.test_tags;
  if (tests.empty()) tests = domain_tags(docs);
  ModelConfig baseline = mc;
  baseline.variant = Variant::kTextOnly;
  const CrossDomainResult r = cross_domain(
      docs, a.train_tag, tests,
      [&] { return std::make_unique<FusionClassifier>(mc, tc); },
      [&] { return std::make_unique<FusionClassifier>(baseline, tc); });
  const Json run = run_record("xdomain", Json{{"model", mc.to_json()},
                                              {"train", tc.to_json()},
                                              {"train_tag", a.train_tag},
                                              {"test_tags", tests}});
  std::string table = "train " + a.train_tag + " -> test       " +
                      std::string(variant_name(mc.variant)) +
                      "   TextOnly   delta\n";
  for (const TransferEntry &e : r.entries) {
    char line[160];
    std::snprintf(line, sizeof line, "%-24s %.4f   %.4f     %+.4f%s\n",
                  e.tag.c_str(), e.model.accuracy, e.baseline.accuracy,
                  e.delta_accuracy,
                  e.model.has_degenerate_class() ? "  (degenerate classes)"
                                                 : "");
    table += line;
  }
  std::cout << table;
  if (!a.out.empty()) {
    write_text(a.out,
               Json{{"run", run}, {"result", cross_domain_to_json(r)}}.dump(2) +
                   '\n');
  }
}

struct SynthArgs {
  std::string out;
  int n = 500;
  uint64_t seed = 0;
  std::vector<std::string> profiles;
  std::optional<double> text_signal;
};

void cmd_synth(const SynthArgs &a) {
  std::vector<std::string> profiles = a.profiles;
  if (profiles.empty()) profiles.push_back("default");
  std::vector<Document> all;
  for (const std::string &name : profiles) {
    SynthProfile p = synth_profile(name);
    if (a.text_signal) p.text_signal = *a.text_signal;
    std::vector<Document> docs = synth_generate(a.n, a.seed, p);
    all.insert(all.end(), docs.begin(), docs.end());
  }
  write_corpus_file(a.out, all);
  log("synth: " + std::to_string(all.size()) + " documents -> " + a.out);
}

int run(int argc, char **argv) {
  CLI::App app{"Coherence assessment with entity and discourse-relation "
               "graphs: graph building, prompt emission, fusion-model "
               "training and evaluation."};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  BuildGraphArgs bg;
  auto *build = app.add_subcommand("build-graph",
                                   "Write one graph record per document");
  build->add_option("--corpus", bg.corpus, "Input corpus (JSONL)")->required();
  build->add_option("--out", bg.out, "Output graph dump (JSONL)")->required();

  EmitPromptsArgs ep;
  auto *emit = app.add_subcommand(
      "emit-prompts", "Write <doc_id>.<variant>.txt prompts and index.tsv");
  emit->add_option("--corpus", ep.corpus, "Input corpus (JSONL)")->required();
  emit->add_option("--out-dir", ep.out_dir, "Output directory")->required();
  emit->add_option("--variant", ep.variants,
                   "Prompt variants (repeatable; default all of TextOnly, "
                   "TextEnty, TextRel, Full, FullWithExplanation)");
  emit->add_option("--char-budget", ep.char_budget,
                   "Maximum prompt length in characters, 0 = unlimited");

  TrainArgs tr;
  auto *train_cmd =
      app.add_subcommand("train", "Train a fusion model and save a checkpoint");
  train_cmd->add_option("--corpus", tr.corpus, "Labeled corpus (JSONL)")
      ->required();
  train_cmd->add_option("--out", tr.out, "Checkpoint path")->required();
  train_cmd->add_option("--metrics", tr.metrics,
                        "Metrics log (default <out>.metrics.jsonl)");
  add_model_flags(train_cmd, tr.model);
  add_train_flags(train_cmd, tr.train);

  EvalArgs ev;
  auto *eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval_cmd->add_option("--corpus", ev.corpus, "Labeled corpus (JSONL)")
      ->required();
  eval_cmd->add_option("--checkpoint", ev.checkpoint, "Checkpoint path")
      ->required();
  eval_cmd->add_option("--out", ev.out, "Report path (default stdout)");
  add_model_flags(eval_cmd, ev.model);

  CvArgs cv;
  auto *cv_cmd = app.add_subcommand("cv", "k-fold cross-validation");
  cv_cmd->add_option("--corpus", cv.corpus, "Labeled corpus (JSONL)")
      ->required();
  cv_cmd->add_option("--out", cv.out, "Report path (JSON)");
  cv_cmd->add_option("--k", cv.k, "Number of folds");
  cv_cmd->add_option("--fold-seed", cv.fold_seed, "Fold assignment seed");
  cv_cmd->add_flag("--plain", cv.plain,
                   "Shuffled folds without label stratification");
  cv_cmd->add_option("--variants", cv.variants,
                     "Variants to compare (default: --variant)");
  add_model_flags(cv_cmd, cv.model);
  add_train_flags(cv_cmd, cv.train);

  XdomainArgs xd;
  auto *xd_cmd = app.add_subcommand(
      "xdomain", "Train on one domain tag, evaluate on the others");
  xd_cmd->add_option("--corpus", xd.corpus, "Labeled corpus (JSONL)")
      ->required();
  xd_cmd->add_option("--train-tag", xd.train_tag, "Training domain tag")
      ->required();
  xd_cmd->add_option("--test-tag", xd.test_tags,
                     "Test domain tags (repeatable; default all)");
  xd_cmd->add_option("--out", xd.out, "Report path (JSON)");
  add_model_flags(xd_cmd, xd.model);
  add_train_flags(xd_cmd, xd.train);

  SynthArgs sy;
  auto *synth_cmd =
      app.add_subcommand("synth", "Generate a synthetic labeled corpus");
  synth_cmd->add_option("--out", sy.out, "Output corpus (JSONL)")->required();
  synth_cmd->add_option("--n", sy.n, "Documents per profile")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seed", sy.seed, "Generator seed");
  synth_cmd->add_option("--profile", sy.profiles,
                        "default, domain-a or domain-b (repeatable)");
  synth_cmd->add_option("--text-signal", sy.text_signal,
                        "Override the profile's label-cue probability");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*build) cmd_build_graph(bg);
    if (*emit) cmd_emit_prompts(ep);
    if (*train_cmd) cmd_train(tr);
    if (*eval_cmd) cmd_eval(ev);
    if (*cv_cmd) cmd_cv(cv);
    if (*xd_cmd) cmd_xdomain(xd);
    if (*synth_cmd) cmd_synth(sy);
  } catch (const NumericalError &e) {
    log(std::string("numerical error: ") + e.what());
    return kExitNumerical;
  } catch (const std::exception &e) {
    log(std::string("error: ") + e.what());
    return kExitInput;
  }
  return 0;
}

}  // namespace
}  // namespace coh

int main(int argc, char **argv) { return coh::run(argc, argv); }
