/*
 * Copyright 2026 The GATN Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "gatn/cli.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "gatn/corr.h"
#include "gatn/embeddings.h"
#include "gatn/graph_export.h"
#include "gatn/metrics.h"
#include "gatn/model.h"
#include "gatn/serialize.h"
#include "gatn/synth.h"

namespace gatn::cli {
namespace {

// Raised for command-level usage problems found after flag parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a numerical verification does not meet its tolerance.
struct NumericCheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool EndsWith(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string Fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

LabelVocabulary LoadVocabulary(const std::string& path) {
  std::istringstream in(ReadTextFile(path));
  return LabelVocabulary::Parse(in);
}

EmbeddingTable LoadEmbeddings(const std::string& path) {
  std::istringstream in(ReadTextFile(path));
  return ParseEmbeddingFile(in);
}

AdjacencyMatrix BuildAdjacency(const std::string& mode,
                               const EmbeddingMatrix& z,
                               const CorrPipelineConfig& corr,
                               const Matrix* targets) {
  if (mode == "corr") return BuildCorrelation(z, corr);
  if (mode == "cooc") {
    if (targets == nullptr) {
      throw UsageError("mode 'cooc' needs label samples (--samples/--dataset)");
    }
    if (targets->cols() != z.num_labels()) {
      throw Error(ErrorKind::kShape,
                  "samples have " + std::to_string(targets->cols()) +
                      " labels, vocabulary has " +
                      std::to_string(z.num_labels()));
    }
    return CooccurrenceMatrix(*targets, corr);
  }
  throw UsageError("--mode must be 'corr' or 'cooc'");
}

// Loads --config (or defaults) and fills the feature dim from the dataset
// when the file leaves it out.
RunConfig LoadRunConfig(const std::string& path, std::size_t data_feature_dim) {
  RunConfig config;
  bool has_feature_dim = false;
  if (!path.empty()) {
    const Json j = ReadJsonFile(path);
    config = RunConfigFromJson(j);
    has_feature_dim = j.contains("feature_dim");
  }
  if (!has_feature_dim && data_feature_dim > 0) {
    config.model.feature_dim = data_feature_dim;
  }
  config.Validate();
  return config;
}

DecisionRule MakeDecisionRule(double threshold, std::size_t topk) {
  return topk > 0 ? DecisionRule::TopK(topk) : DecisionRule::Threshold(threshold);
}

Matrix Logits(const Checkpoint& ckpt, const Dataset& dataset) {
  return Forward(ckpt.params, ckpt.z, ckpt.a, dataset.samples).logits;
}

std::string LossCsvPath(const std::string& checkpoint_path) {
  std::string stem = checkpoint_path;
  if (EndsWith(stem, ".json")) stem.resize(stem.size() - 5);
  return stem + ".loss.csv";
}

struct Variant {
  const char* name;
  const char* mode;
  bool use_gat;
};

constexpr Variant kAblationVariants[] = {
    {"ML-GCN (CO-OCC)", "cooc", false},
    {"ML-GCN (CORR)", "corr", false},
    {"GATN (CO-OCC)", "cooc", true},
    {"GATN (CORR)", "corr", true},
};

class Commands {
 public:
  Commands(std::ostream& out) : out_(out) {}

  void Register(CLI::App& app) {
    RegisterBuildCorr(app);
    RegisterExportDot(app);
    RegisterTrain(app);
    RegisterEval(app);
    RegisterGradcheck(app);
    RegisterSynth(app);
    RegisterAblate(app);
  }

  // Runs whichever subcommand was selected.
  void Dispatch(CLI::App& app) {
    for (auto& [name, fn] : handlers_) {
      if (app.got_subcommand(name)) {
        fn();
        return;
      }
    }
  }

 private:
  void RegisterBuildCorr(CLI::App& app) {
    auto* sub = app.add_subcommand("build-corr",
                                   "Build the initial adjacency matrix A");
    sub->add_option("--labels", labels_, "Label file, one per line")->required();
    sub->add_option("--embeddings", embeddings_, "Word vector text file")
        ->required();
    sub->add_option("--samples", samples_,
                    "Dataset JSON whose label vectors feed --mode cooc");
    sub->add_option("--tau", tau_, "Binarization threshold")->capture_default_str();
    sub->add_option("--p", p_, "Re-weighting parameter")->capture_default_str();
    sub->add_option("--mode", mode_, "corr or cooc")
        ->check(CLI::IsMember({"corr", "cooc"}))
        ->capture_default_str();
    sub->add_option("--out", out_path_, "Output .json (or .csv)")->required();
    handlers_.emplace_back("build-corr", [this] { BuildCorr(); });
  }

  void BuildCorr() {
    CorrPipelineConfig corr{tau_, p_};
    corr.Validate();
    if (mode_ == "cooc" && samples_.empty()) {
      throw UsageError("--mode cooc requires --samples");
    }
    const LabelVocabulary vocab = LoadVocabulary(labels_);
    const EmbeddingMatrix z = BuildEmbeddingMatrix(vocab, LoadEmbeddings(embeddings_));
    std::optional<Matrix> targets;
    if (!samples_.empty()) {
      targets = DatasetFromJson(ReadJsonFile(samples_)).TargetMatrix();
    }
    const AdjacencyMatrix a =
        BuildAdjacency(mode_, z, corr, targets ? &*targets : nullptr);
    if (EndsWith(out_path_, ".csv")) {
      std::ostringstream csv;
      WriteAdjacencyCsv(a, vocab.labels(), csv);
      WriteTextFile(out_path_, csv.str());
    } else {
      WriteTextFile(out_path_, AdjacencyToJson(a, vocab.labels()).dump(1) + "\n");
    }
    out_ << "wrote " << a.n() << "x" << a.n() << " adjacency to " << out_path_
         << "\n";
  }

  void RegisterExportDot(CLI::App& app) {
    auto* sub = app.add_subcommand("export-dot",
                                   "Write an adjacency matrix as a DOT graph");
    sub->add_option("--adj", adj_, "Adjacency matrix JSON")->required();
    sub->add_option("--labels", labels_, "Label file overriding node names");
    sub->add_option("--edge-threshold", edge_threshold_,
                    "Minimum relation value for an edge")
        ->capture_default_str();
    sub->add_option("--out", out_path_, "Output .dot file")->required();
    handlers_.emplace_back("export-dot", [this] { ExportDotCmd(); });
  }

  void ExportDotCmd() {
    std::vector<std::string> names;
    const AdjacencyMatrix a = AdjacencyFromJson(ReadJsonFile(adj_), &names);
    if (!labels_.empty()) {
      names = LoadVocabulary(labels_).labels();
      if (names.size() != a.n()) {
        throw Error(ErrorKind::kShape, "label file has " +
                                           std::to_string(names.size()) +
                                           " labels, matrix has " +
                                           std::to_string(a.n()) + " nodes");
      }
    }
    WriteTextFile(out_path_, ExportDot(a, names, edge_threshold_));
    out_ << "wrote " << out_path_ << "\n";
  }

  void RegisterTrain(CLI::App& app) {
    auto* sub = app.add_subcommand("train", "Train the label branch");
    sub->add_option("--config", config_, "Training config JSON");
    sub->add_option("--dataset", dataset_, "Dataset JSON")->required();
    sub->add_option("--labels", labels_, "Label file")->required();
    sub->add_option("--embeddings", embeddings_, "Word vector file")->required();
    seed_opt_train_ = sub->add_option("--seed", seed_, "Overrides the config seed");
    sub->add_option("--out", out_path_, "Checkpoint JSON path")->required();
    handlers_.emplace_back("train", [this] { TrainCmd(); });
  }

  void TrainCmd() {
    const Dataset dataset = DatasetFromJson(ReadJsonFile(dataset_));
    RunConfig config = LoadRunConfig(config_, dataset.feature_dim);
    if (seed_opt_train_->count() > 0) config.train.seed = seed_;

    const LabelVocabulary vocab = LoadVocabulary(labels_);
    if (vocab.size() != dataset.num_labels) {
      throw Error(ErrorKind::kShape, "dataset has " +
                                         std::to_string(dataset.num_labels) +
                                         " labels, label file has " +
                                         std::to_string(vocab.size()));
    }
    Checkpoint ckpt;
    ckpt.config = config;
    ckpt.labels = vocab.labels();
    ckpt.z = BuildEmbeddingMatrix(vocab, LoadEmbeddings(embeddings_));
    const Matrix targets = dataset.TargetMatrix();
    ckpt.a = BuildAdjacency(config.mode, ckpt.z, config.corr, &targets);

    TrainResult result =
        Train(config.train, config.model, ckpt.z, ckpt.a, dataset.samples);
    ckpt.params = std::move(result.params);

    WriteTextFile(out_path_, CheckpointToJson(ckpt).dump() + "\n");
    std::ostringstream csv;
    WriteLossHistoryCsv(result.loss_history, csv);
    WriteTextFile(LossCsvPath(out_path_), csv.str());
    out_ << "epochs=" << result.loss_history.size()
         << " final_loss=" << Fixed6(result.loss_history.back()) << "\n";
  }

  void RegisterEval(CLI::App& app) {
    auto* sub = app.add_subcommand("eval", "Evaluate multi-label metrics");
    sub->add_option("--dataset", dataset_, "Dataset JSON (targets)")->required();
    auto* ckpt = sub->add_option("--checkpoint", checkpoint_, "Checkpoint JSON");
    auto* scores = sub->add_option(
        "--scores", scores_, "Precomputed logits JSON {\"logits\": [[...]]}");
    ckpt->excludes(scores);
    sub->add_option("--threshold", threshold_, "Sigmoid probability threshold")
        ->capture_default_str();
    sub->add_option("--topk", topk_, "Predict the top-k labels per sample");
    sub->add_option("--out", out_path_, "Report JSON path (stdout if omitted)");
    handlers_.emplace_back("eval", [this] { EvalCmd(); });
  }

  void EvalCmd() {
    if (checkpoint_.empty() == scores_.empty()) {
      throw UsageError("eval needs exactly one of --checkpoint or --scores");
    }
    const Dataset dataset = DatasetFromJson(ReadJsonFile(dataset_));
    Matrix logits;
    if (!checkpoint_.empty()) {
      const Checkpoint ckpt = CheckpointFromJson(ReadJsonFile(checkpoint_));
      logits = Logits(ckpt, dataset);
    } else {
      const Json j = ReadJsonFile(scores_);
      if (!j.is_object() || !j.contains("logits")) {
        throw Error(ErrorKind::kParse, "scores file: missing 'logits'");
      }
      Json wrapped{{"rows", j["logits"].size()},
                   {"cols", dataset.num_labels},
                   {"data", j["logits"]}};
      logits = MatrixFromJson(wrapped);
    }
    const MetricsReport report = Evaluate(logits, dataset.TargetMatrix(),
                                          MakeDecisionRule(threshold_, topk_));
    const std::string text = MetricsReportToJson(report);
    if (out_path_.empty()) {
      out_ << text;
    } else {
      WriteTextFile(out_path_, text);
      out_ << "wrote " << out_path_ << "\n";
    }
  }

  void RegisterGradcheck(CLI::App& app) {
    auto* sub = app.add_subcommand(
        "gradcheck", "Compare analytic gradients with central differences");
    sub->add_option("--seed", seed_, "Toy instance seed")->capture_default_str();
    handlers_.emplace_back("gradcheck", [this] { GradcheckCmd(); });
  }

  void GradcheckCmd() {
    const ToyProblem toy = GradcheckToy(seed_);
    const LossAndGradients analytic =
        Gradients(toy.params, toy.z, toy.a, toy.batch);
    const GradientBundle numeric =
        FiniteDiffGradients(toy.params, toy.z, toy.a, toy.batch, kGradcheckStep);
    const double err = MaxRelativeError(analytic.grads, numeric);
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "params=%zu loss=%.10f max_rel_error=%.3e tolerance=%.0e\n",
                  toy.params.NumScalars(), analytic.loss, err,
                  kGradcheckTolerance);
    out_ << buf;
    if (!(err <= kGradcheckTolerance)) {
      throw NumericCheckFailure("max relative error " + std::to_string(err) +
                                " exceeds tolerance");
    }
  }

  void RegisterSynth(CLI::App& app) {
    auto* sub = app.add_subcommand(
        "synth", "Write a seeded separable toy dataset with labels/embeddings");
    sub->add_option("--seed", seed_, "Generator seed")->capture_default_str();
    sub->add_option("--num-labels", synth_.num_labels)->capture_default_str();
    sub->add_option("--num-samples", synth_.num_samples)->capture_default_str();
    sub->add_option("--feature-dim", synth_.feature_dim)->capture_default_str();
    sub->add_option("--embed-dim", synth_.embed_dim)->capture_default_str();
    sub->add_option("--out", out_path_, "Output directory")->required();
    handlers_.emplace_back("synth", [this] { SynthCmd(); });
  }

  void SynthCmd() {
    synth_.seed = seed_;
    const SynthData data = Synthesize(synth_);
    std::error_code ec;
    std::filesystem::create_directories(out_path_, ec);
    if (ec) {
      throw Error(ErrorKind::kParse, "cannot create directory '" + out_path_ + "'");
    }
    const std::filesystem::path dir(out_path_);
    std::ostringstream labels, embeddings;
    for (const std::string& l : data.vocab.labels()) labels << l << "\n";
    WriteEmbeddingFile(data.table, embeddings);
    WriteTextFile((dir / "labels.txt").string(), labels.str());
    WriteTextFile((dir / "embeddings.txt").string(), embeddings.str());
    WriteTextFile((dir / "dataset.json").string(),
                  DatasetToJson(data.dataset).dump() + "\n");
    out_ << "wrote labels.txt, embeddings.txt, dataset.json to " << out_path_
         << "\n";
  }

  void RegisterAblate(CLI::App& app) {
    auto* sub = app.add_subcommand(
        "ablate", "Train and compare CO-OCC/CORR x attention on/off");
    sub->add_option("--config", config_, "Training config JSON");
    sub->add_option("--dataset", dataset_, "Dataset JSON (synthetic if omitted)");
    sub->add_option("--labels", labels_, "Label file");
    sub->add_option("--embeddings", embeddings_, "Word vector file");
    seed_opt_ablate_ = sub->add_option("--seed", seed_, "Seed for data and training");
    sub->add_option("--threshold", threshold_)->capture_default_str();
    sub->add_option("--topk", topk_);
    sub->add_option("--out", out_path_, "Comparison CSV path")->required();
    handlers_.emplace_back("ablate", [this] { AblateCmd(); });
  }

  void AblateCmd() {
    const bool have_files = !dataset_.empty() || !labels_.empty() ||
                            !embeddings_.empty();
    if (have_files &&
        (dataset_.empty() || labels_.empty() || embeddings_.empty())) {
      throw UsageError("ablate needs all of --dataset, --labels, --embeddings "
                       "or none of them");
    }
    LabelVocabulary vocab;
    EmbeddingTable table;
    Dataset dataset;
    if (have_files) {
      dataset = DatasetFromJson(ReadJsonFile(dataset_));
      vocab = LoadVocabulary(labels_);
      table = LoadEmbeddings(embeddings_);
    } else {
      SynthConfig sc;
      sc.seed = seed_;
      SynthData data = Synthesize(sc);
      vocab = std::move(data.vocab);
      table = std::move(data.table);
      dataset = std::move(data.dataset);
    }
    RunConfig base = LoadRunConfig(config_, dataset.feature_dim);
    if (seed_opt_ablate_->count() > 0 || config_.empty()) base.train.seed = seed_;

    // Deterministic split: the last quarter is held out for evaluation.
    const std::size_t held = std::max<std::size_t>(1, dataset.samples.size() / 4);
    if (dataset.samples.size() < 2) {
      throw Error(ErrorKind::kValidation, "ablate: need at least 2 samples");
    }
    const std::size_t split = dataset.samples.size() - held;
    const std::span<const LabeledSample> all(dataset.samples);
    const auto train_set = all.first(split);
    Dataset test;
    test.num_labels = dataset.num_labels;
    test.feature_dim = dataset.feature_dim;
    test.samples.assign(all.begin() + split, all.end());

    Dataset train_only = test;
    train_only.samples.assign(train_set.begin(), train_set.end());
    const Matrix train_targets = train_only.TargetMatrix();
    const EmbeddingMatrix z = BuildEmbeddingMatrix(vocab, table);

    std::ostringstream csv;
    csv << "variant,mAP,CP,CR,CF1,OP,OR,OF1\n";
    for (const Variant& v : kAblationVariants) {
      RunConfig config = base;
      config.mode = v.mode;
      config.model.use_gat = v.use_gat;
      const AdjacencyMatrix a =
          BuildAdjacency(config.mode, z, config.corr, &train_targets);
      const TrainResult result =
          Train(config.train, config.model, z, a, train_set);
      const Matrix logits = Forward(result.params, z, a, test.samples).logits;
      const MetricsReport r = Evaluate(logits, test.TargetMatrix(),
                                       MakeDecisionRule(threshold_, topk_));
      csv << v.name << ',' << Fixed6(r.mean_ap) << ','
          << Fixed6(r.class_precision) << ',' << Fixed6(r.class_recall) << ','
          << Fixed6(r.class_f1) << ',' << Fixed6(r.overall_precision) << ','
          << Fixed6(r.overall_recall) << ',' << Fixed6(r.overall_f1) << '\n';
    }
    WriteTextFile(out_path_, csv.str());
    out_ << csv.str();
  }

  std::ostream& out_;
  std::vector<std::pair<std::string, std::function<void()>>> handlers_;

  std::string labels_, embeddings_, samples_, dataset_, config_, checkpoint_,
      scores_, adj_, out_path_;
  std::string mode_ = "corr";
  double tau_ = 0.2;
  double p_ = 0.2;
  double edge_threshold_ = kDefaultEdgeThreshold;
  double threshold_ = 0.5;
  std::size_t topk_ = 0;
  std::uint64_t seed_ = 42;
  CLI::Option* seed_opt_train_ = nullptr;
  CLI::Option* seed_opt_ablate_ = nullptr;
  SynthConfig synth_;
};

int ExitCodeFor(ErrorKind kind) {
  return kind == ErrorKind::kNumeric ? kExitNumeric : kExitData;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Label relation graphs with attention-refined adjacency"};
  app.require_subcommand(1);
  Commands commands(out);
  commands.Register(app);

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error[usage]: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    commands.Dispatch(app);
  } catch (const UsageError& e) {
    err << "error[usage]: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericCheckFailure& e) {
    err << "error[numeric-check]: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const Error& e) {
    err << "error[" << ErrorKindName(e.kind()) << "]: " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    err << "error[internal]: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace gatn::cli
