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

#include "gatn/serialize.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace gatn {
namespace {

[[noreturn]] void Malformed(const std::string& what) {
  throw Error(ErrorKind::kParse, what);
}

const Json& Field(const Json& j, const char* key, const char* context) {
  if (!j.is_object()) Malformed(std::string(context) + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) {
    Malformed(std::string(context) + ": missing field '" + key + "'");
  }
  return *it;
}

template <typename T>
T As(const Json& j, const char* context) {
  try {
    return j.get<T>();
  } catch (const Json::exception& e) {
    Malformed(std::string(context) + ": " + e.what());
  }
}

std::size_t AsCount(const Json& j, const char* context) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) {
    Malformed(std::string(context) + ": expected a non-negative integer");
  }
  const auto v = j.get<long long>();
  if (v < 0) Malformed(std::string(context) + ": expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

std::vector<double> AsVector(const Json& j, const char* context) {
  if (!j.is_array()) Malformed(std::string(context) + ": expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const Json& v : j) {
    if (!v.is_number()) Malformed(std::string(context) + ": expected numbers");
    const double d = v.get<double>();
    if (!std::isfinite(d)) Malformed(std::string(context) + ": non-finite value");
    out.push_back(d);
  }
  return out;
}

Matrix RowsToMatrix(const Json& data, std::size_t rows, std::size_t cols,
                    const char* context) {
  if (!data.is_array() || data.size() != rows) {
    Malformed(std::string(context) + ": expected " + std::to_string(rows) +
              " rows");
  }
  std::vector<double> flat;
  flat.reserve(rows * cols);
  for (const Json& row : data) {
    std::vector<double> r = AsVector(row, context);
    if (r.size() != cols) {
      Malformed(std::string(context) + ": expected " + std::to_string(cols) +
                " columns per row");
    }
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return Matrix(rows, cols, std::move(flat));
}

Json RowsToJson(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
  return rows;
}

void RejectUnknownKeys(const Json& j, const std::set<std::string>& allowed,
                       const char* context) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      Malformed(std::string(context) + ": unknown key '" + it.key() + "'");
    }
  }
}

const char* ActivationName(Activation a) {
  return a == Activation::kLeakyRelu ? "leaky_relu" : "identity";
}

Activation ActivationFromName(const std::string& name) {
  if (name == "leaky_relu") return Activation::kLeakyRelu;
  if (name == "identity") return Activation::kIdentity;
  Malformed("unknown activation '" + name + "'");
}

std::string Fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

Json MatrixToJson(const Matrix& m) {
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", RowsToJson(m)}};
}

Matrix MatrixFromJson(const Json& j) {
  const std::size_t rows = AsCount(Field(j, "rows", "matrix"), "matrix rows");
  const std::size_t cols = AsCount(Field(j, "cols", "matrix"), "matrix cols");
  return RowsToMatrix(Field(j, "data", "matrix"), rows, cols, "matrix data");
}

Json AdjacencyToJson(const AdjacencyMatrix& a,
                     const std::vector<std::string>& labels) {
  Json j{{"n", a.n()}, {"stage", StageCode(a.stage)}, {"data", RowsToJson(a.a)}};
  if (!labels.empty()) j["labels"] = labels;
  return j;
}

AdjacencyMatrix AdjacencyFromJson(const Json& j,
                                  std::vector<std::string>* labels) {
  const std::size_t n = AsCount(Field(j, "n", "adjacency"), "adjacency n");
  AdjacencyMatrix a;
  a.stage = StageFromCode(As<std::string>(Field(j, "stage", "adjacency"),
                                          "adjacency stage"));
  a.a = RowsToMatrix(Field(j, "data", "adjacency"), n, n, "adjacency data");
  if (labels != nullptr) {
    labels->clear();
    if (j.contains("labels")) {
      *labels = As<std::vector<std::string>>(j["labels"], "adjacency labels");
      if (labels->size() != n) Malformed("adjacency labels: expected n names");
    }
  }
  return a;
}

void WriteAdjacencyCsv(const AdjacencyMatrix& a,
                       const std::vector<std::string>& labels,
                       std::ostream& out) {
  for (std::size_t i = 0; i < a.n(); ++i) {
    if (i) out << ',';
    out << (i < labels.size() ? labels[i] : std::to_string(i));
  }
  out << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < a.n(); ++i) {
    for (std::size_t j = 0; j < a.n(); ++j) {
      if (j) out << ',';
      out << a.a(i, j);
    }
    out << '\n';
  }
}

Json GatLayerToJson(const GatLayerParams& params) {
  Json subgraphs = Json::array();
  for (const SubGraphParams& sg : params.subgraphs) {
    Json heads = Json::array();
    for (const HeadParams& h : sg.heads) {
      heads.push_back({{"wq", MatrixToJson(h.wq)},
                       {"wk", MatrixToJson(h.wk)},
                       {"wv", MatrixToJson(h.wv)}});
    }
    subgraphs.push_back({{"heads", heads}, {"wo", MatrixToJson(sg.wo)}});
  }
  return Json{{"k", params.num_subgraphs()},
              {"h", params.num_heads()},
              {"d_h", params.head_dim()},
              {"subgraphs", subgraphs}};
}

GatLayerParams GatLayerFromJson(const Json& j) {
  const std::size_t k = AsCount(Field(j, "k", "gat params"), "gat params k");
  const std::size_t h = AsCount(Field(j, "h", "gat params"), "gat params h");
  const Json& subgraphs = Field(j, "subgraphs", "gat params");
  if (!subgraphs.is_array() || subgraphs.size() != k) {
    Malformed("gat params: expected k sub-graphs");
  }
  GatLayerParams params;
  for (const Json& sgj : subgraphs) {
    SubGraphParams sg;
    const Json& heads = Field(sgj, "heads", "sub-graph");
    if (!heads.is_array() || heads.size() != h) {
      Malformed("gat params: expected h heads per sub-graph");
    }
    for (const Json& hj : heads) {
      sg.heads.push_back({MatrixFromJson(Field(hj, "wq", "head")),
                          MatrixFromJson(Field(hj, "wk", "head")),
                          MatrixFromJson(Field(hj, "wv", "head"))});
    }
    sg.wo = MatrixFromJson(Field(sgj, "wo", "sub-graph"));
    params.subgraphs.push_back(std::move(sg));
  }
  if (params.head_dim() !=
      AsCount(Field(j, "d_h", "gat params"), "gat params d_h")) {
    Malformed("gat params: d_h does not match the stored projections");
  }
  return params;
}

void RunConfig::Validate() const {
  train.Validate();
  model.Validate();
  corr.Validate();
  if (mode != "corr" && mode != "cooc") {
    throw Error(ErrorKind::kValidation,
                "mode must be 'corr' or 'cooc', got '" + mode + "'");
  }
}

Json RunConfigToJson(const RunConfig& c) {
  return Json{{"lr", c.train.lr},
              {"momentum", c.train.momentum},
              {"weight_decay", c.train.weight_decay},
              {"epochs", c.train.epochs},
              {"batch_size", c.train.batch_size},
              {"seed", c.train.seed},
              {"lr_step_epochs", c.train.lr_step_epochs},
              {"lr_step_gamma", c.train.lr_step_gamma},
              {"tau", c.corr.tau},
              {"p", c.corr.p},
              {"mode", c.mode},
              {"use_gat", c.model.use_gat},
              {"k", c.model.num_subgraphs},
              {"h", c.model.num_heads},
              {"d_h", c.model.head_dim},
              {"gcn_hidden", c.model.gcn_hidden},
              {"feature_dim", c.model.feature_dim},
              {"leaky_slope", c.model.leaky_slope}};
}

RunConfig RunConfigFromJson(const Json& j) {
  if (!j.is_object()) Malformed("config: expected an object");
  RejectUnknownKeys(j,
                    {"lr", "momentum", "weight_decay", "epochs", "batch_size",
                     "seed", "lr_step_epochs", "lr_step_gamma", "tau", "p",
                     "mode", "use_gat", "k", "h", "d_h", "gcn_hidden",
                     "feature_dim", "leaky_slope"},
                    "config");
  RunConfig c;
  auto real = [&](const char* key, double& dst) {
    if (j.contains(key)) dst = As<double>(j[key], key);
  };
  auto count = [&](const char* key, std::size_t& dst) {
    if (j.contains(key)) dst = AsCount(j[key], key);
  };
  real("lr", c.train.lr);
  real("momentum", c.train.momentum);
  real("weight_decay", c.train.weight_decay);
  count("epochs", c.train.epochs);
  count("batch_size", c.train.batch_size);
  if (j.contains("seed")) c.train.seed = As<std::uint64_t>(j["seed"], "seed");
  count("lr_step_epochs", c.train.lr_step_epochs);
  real("lr_step_gamma", c.train.lr_step_gamma);
  real("tau", c.corr.tau);
  real("p", c.corr.p);
  if (j.contains("mode")) c.mode = As<std::string>(j["mode"], "mode");
  if (j.contains("use_gat")) c.model.use_gat = As<bool>(j["use_gat"], "use_gat");
  count("k", c.model.num_subgraphs);
  count("h", c.model.num_heads);
  count("d_h", c.model.head_dim);
  if (j.contains("gcn_hidden")) {
    c.model.gcn_hidden.clear();
    if (!j["gcn_hidden"].is_array()) Malformed("gcn_hidden: expected an array");
    for (const Json& d : j["gcn_hidden"])
      c.model.gcn_hidden.push_back(AsCount(d, "gcn_hidden"));
  }
  count("feature_dim", c.model.feature_dim);
  real("leaky_slope", c.model.leaky_slope);
  return c;
}

Json DatasetToJson(const Dataset& dataset) {
  Json samples = Json::array();
  for (const LabeledSample& s : dataset.samples) {
    Json sj;
    if (const auto* vec = std::get_if<std::vector<double>>(&s.features)) {
      sj["x"] = *vec;
    } else {
      const Matrix& fmap = std::get<Matrix>(s.features);
      sj["fmap"] = {{"d", fmap.rows()},
                    {"locs", fmap.cols()},
                    {"data", std::vector<double>(fmap.data().begin(),
                                                 fmap.data().end())}};
    }
    std::vector<int> bits;
    for (double y : s.targets) bits.push_back(static_cast<int>(y));
    sj["y"] = bits;
    samples.push_back(std::move(sj));
  }
  return Json{{"n", dataset.num_labels},
              {"d_feat", dataset.feature_dim},
              {"samples", samples}};
}

Dataset DatasetFromJson(const Json& j) {
  Dataset ds;
  ds.num_labels = AsCount(Field(j, "n", "dataset"), "dataset n");
  ds.feature_dim = AsCount(Field(j, "d_feat", "dataset"), "dataset d_feat");
  const Json& samples = Field(j, "samples", "dataset");
  if (!samples.is_array()) Malformed("dataset samples: expected an array");
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const Json& sj = samples[s];
    const std::string where = "dataset sample " + std::to_string(s);
    LabeledSample sample;
    if (sj.contains("x") == sj.contains("fmap")) {
      Malformed(where + ": exactly one of 'x' or 'fmap' is required");
    }
    if (sj.contains("x")) {
      sample.features = AsVector(sj["x"], where.c_str());
      if (std::get<std::vector<double>>(sample.features).size() !=
          ds.feature_dim) {
        Malformed(where + ": feature length does not match d_feat");
      }
    } else {
      const Json& fm = sj["fmap"];
      const std::size_t d = AsCount(Field(fm, "d", where.c_str()), "fmap d");
      const std::size_t locs =
          AsCount(Field(fm, "locs", where.c_str()), "fmap locs");
      if (d != ds.feature_dim) Malformed(where + ": fmap d does not match d_feat");
      std::vector<double> data =
          AsVector(Field(fm, "data", where.c_str()), where.c_str());
      if (data.size() != d * locs) Malformed(where + ": fmap data length");
      sample.features = Matrix(d, locs, std::move(data));
    }
    sample.targets = AsVector(Field(sj, "y", where.c_str()), where.c_str());
    if (sample.targets.size() != ds.num_labels) {
      Malformed(where + ": label vector length does not match n");
    }
    for (double y : sample.targets) {
      if (y != 0.0 && y != 1.0) Malformed(where + ": labels must be 0 or 1");
    }
    ds.samples.push_back(std::move(sample));
  }
  return ds;
}

Json CheckpointToJson(const Checkpoint& c) {
  Json gcn = Json::array();
  for (const GcnLayerParams& layer : c.params.gcn) {
    gcn.push_back({{"w", MatrixToJson(layer.w)},
                   {"activation", ActivationName(layer.activation)},
                   {"slope", layer.slope}});
  }
  Json momentum_gcn = Json::array();
  for (const Matrix& m : c.params.momentum.gcn)
    momentum_gcn.push_back(MatrixToJson(m));
  const auto gat_json = [](const std::optional<GatLayerParams>& g) {
    return g ? GatLayerToJson(*g) : Json(nullptr);
  };
  return Json{
      {"format", "gatn-checkpoint"},
      {"version", 1},
      {"config", RunConfigToJson(c.config)},
      {"labels", c.labels},
      {"z", MatrixToJson(c.z.z)},
      {"a", AdjacencyToJson(c.a)},
      {"params", {{"gat", gat_json(c.params.gat)}, {"gcn", gcn}}},
      {"momentum",
       {{"gat", gat_json(c.params.momentum.gat)}, {"gcn", momentum_gcn}}}};
}

Checkpoint CheckpointFromJson(const Json& j) {
  if (Field(j, "format", "checkpoint") != "gatn-checkpoint") {
    Malformed("checkpoint: unrecognized format tag");
  }
  Checkpoint c;
  c.config = RunConfigFromJson(Field(j, "config", "checkpoint"));
  c.labels = As<std::vector<std::string>>(Field(j, "labels", "checkpoint"),
                                          "checkpoint labels");
  c.z.z = MatrixFromJson(Field(j, "z", "checkpoint"));
  c.a = AdjacencyFromJson(Field(j, "a", "checkpoint"));

  const Json& params = Field(j, "params", "checkpoint");
  const Json& gat = Field(params, "gat", "checkpoint params");
  if (!gat.is_null()) c.params.gat = GatLayerFromJson(gat);
  const Json& gcn = Field(params, "gcn", "checkpoint params");
  if (!gcn.is_array()) Malformed("checkpoint gcn: expected an array");
  for (const Json& lj : gcn) {
    GcnLayerParams layer;
    layer.w = MatrixFromJson(Field(lj, "w", "gcn layer"));
    layer.activation = ActivationFromName(
        As<std::string>(Field(lj, "activation", "gcn layer"), "activation"));
    layer.slope = As<double>(Field(lj, "slope", "gcn layer"), "slope");
    c.params.gcn.push_back(std::move(layer));
  }

  const Json& momentum = Field(j, "momentum", "checkpoint");
  const Json& mgat = Field(momentum, "gat", "checkpoint momentum");
  if (!mgat.is_null()) c.params.momentum.gat = GatLayerFromJson(mgat);
  const Json& mgcn = Field(momentum, "gcn", "checkpoint momentum");
  if (!mgcn.is_array()) Malformed("checkpoint momentum gcn: expected an array");
  for (const Json& m : mgcn) c.params.momentum.gcn.push_back(MatrixFromJson(m));

  if (c.labels.size() != c.z.num_labels()) {
    Malformed("checkpoint: label count does not match Z");
  }
  try {
    ValidateGatnParams(c.params, c.z.num_labels(), c.z.dim());
  } catch (const Error& e) {
    Malformed(std::string("checkpoint: ") + e.what());
  }
  return c;
}

std::string MetricsReportToJson(const MetricsReport& r) {
  std::ostringstream out;
  out << "{\"mAP\": " << Fixed6(r.mean_ap)
      << ", \"CP\": " << Fixed6(r.class_precision)
      << ", \"CR\": " << Fixed6(r.class_recall)
      << ", \"CF1\": " << Fixed6(r.class_f1)
      << ", \"OP\": " << Fixed6(r.overall_precision)
      << ", \"OR\": " << Fixed6(r.overall_recall)
      << ", \"OF1\": " << Fixed6(r.overall_f1) << ", \"per_class_AP\": [";
  for (std::size_t c = 0; c < r.per_class_ap.size(); ++c) {
    if (c) out << ", ";
    out << (r.per_class_ap[c] ? Fixed6(*r.per_class_ap[c]) : "null");
  }
  out << "]}\n";
  return out.str();
}

void WriteLossHistoryCsv(const std::vector<double>& history,
                         std::ostream& out) {
  out << "epoch,loss\n" << std::setprecision(17);
  for (std::size_t e = 0; e < history.size(); ++e)
    out << e + 1 << ',' << history[e] << '\n';
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Malformed("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json ReadJsonFile(const std::string& path) {
  const std::string text = ReadTextFile(path);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    Malformed("'" + path + "' is not valid JSON: " + e.what());
  }
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Malformed("cannot write '" + path + "'");
  out << text;
  if (!out) Malformed("failed writing '" + path + "'");
}

}  // namespace gatn
