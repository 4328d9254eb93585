// Copyright 2026 The ltaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "ltaudit/attack.h"
#include "ltaudit/errors.h"
#include "ltaudit/parallel.h"
#include "ltaudit/transfer.h"

namespace ltaudit::cli {
namespace {

namespace fs = std::filesystem;

// Object view that rejects keys outside `allowed` and type-checks reads.
class Section {
 public:
  Section(const Json& doc, std::string path, std::set<std::string> allowed)
      : path_(std::move(path)) {
    if (doc.is_null()) {
      doc_ = Json::object();
      return;
    }
    if (!doc.is_object()) throw ConfigError(path_ + " must be an object");
    for (const auto& [key, value] : doc.items()) {
      if (!allowed.contains(key)) throw ConfigError("unknown key " + Name(key));
    }
    doc_ = doc;
  }

  bool Has(const std::string& key) const { return doc_.contains(key); }
  const Json& Raw(const std::string& key) const {
    static const Json kNull;
    return Has(key) ? doc_.at(key) : kNull;
  }

  double Number(const std::string& key, double fallback) const {
    if (!Has(key)) return fallback;
    const Json& v = doc_.at(key);
    if (!v.is_number()) throw ConfigError(Name(key) + " must be a number");
    return v.get<double>();
  }

  std::uint64_t Unsigned(const std::string& key, std::uint64_t fallback) const {
    return Has(key) ? AsUnsigned(doc_.at(key), Name(key)) : fallback;
  }

  bool Bool(const std::string& key, bool fallback) const {
    if (!Has(key)) return fallback;
    if (!doc_.at(key).is_boolean()) throw ConfigError(Name(key) + " must be a boolean");
    return doc_.at(key).get<bool>();
  }

  std::string String(const std::string& key, const std::string& fallback) const {
    if (!Has(key)) return fallback;
    if (!doc_.at(key).is_string()) throw ConfigError(Name(key) + " must be a string");
    return doc_.at(key).get<std::string>();
  }

  template <typename T, typename Convert>
  std::vector<T> List(const std::string& key, std::vector<T> fallback,
                      Convert convert) const {
    if (!Has(key)) return fallback;
    const Json& v = doc_.at(key);
    if (!v.is_array()) throw ConfigError(Name(key) + " must be an array");
    std::vector<T> out;
    for (const auto& item : v) out.push_back(convert(item, Name(key)));
    return out;
  }

  static std::uint64_t AsUnsigned(const Json& v, const std::string& name) {
    if (!v.is_number_unsigned()) {
      throw ConfigError(name + " must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }
  static double AsNumber(const Json& v, const std::string& name) {
    if (!v.is_number()) throw ConfigError(name + " entries must be numbers");
    return v.get<double>();
  }
  static std::string AsString(const Json& v, const std::string& name) {
    if (!v.is_string()) throw ConfigError(name + " entries must be strings");
    return v.get<std::string>();
  }

  std::string Name(const std::string& key) const {
    return path_.empty() ? "'" + key + "'" : "'" + path_ + "." + key + "'";
  }

 private:
  std::string path_;
  Json doc_;
};

TrainConfig ParseTrain(const Section& parent, const std::string& key,
                       const TrainConfig& defaults) {
  const Section s(parent.Raw(key), key,
                  {"learning_rate", "momentum", "batch_size", "iterations", "l2_penalty"});
  TrainConfig cfg = defaults;
  cfg.learning_rate = s.Number("learning_rate", cfg.learning_rate);
  cfg.momentum = s.Number("momentum", cfg.momentum);
  cfg.batch_size = s.Unsigned("batch_size", cfg.batch_size);
  cfg.iterations = s.Unsigned("iterations", cfg.iterations);
  cfg.l2_penalty = s.Number("l2_penalty", cfg.l2_penalty);
  try {
    cfg.Validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError("'" + key + "': " + e.what());
  }
  return cfg;
}

Json TrainJson(const TrainConfig& cfg) {
  return {{"learning_rate", cfg.learning_rate}, {"momentum", cfg.momentum},
          {"batch_size", cfg.batch_size},       {"iterations", cfg.iterations},
          {"l2_penalty", cfg.l2_penalty}};
}

template <typename T>
void RequireIncreasing(const std::vector<T>& v, const std::string& name) {
  if (v.empty()) throw ConfigError(name + " must not be empty");
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) throw ConfigError(name + " must be strictly increasing");
  }
}

void RequireSparsities(const std::vector<double>& v, const std::string& name) {
  RequireIncreasing(v, name);
  for (double p : v) {
    if (!(p >= 0.0 && p < 1.0)) throw ConfigError(name + " entries must lie in [0, 1)");
  }
}

DataSplit LoadData(const ExperimentConfig& cfg) {
  const DatasetConfig& d = cfg.dataset;
  DataSplit data;
  switch (d.source) {
    case Provenance::kSynthetic: {
      SyntheticSpec spec = d.synthetic;
      spec.seed = cfg.seed;
      data = MakeSynthetic(spec);
      break;
    }
    case Provenance::kMnist:
      data.train = LoadIdx(d.train_images, d.train_labels, Split::kTrain);
      data.test = LoadIdx(d.test_images, d.test_labels, Split::kTest);
      break;
    case Provenance::kCifar10:
      data.train = LoadCifar10(d.train_batches, Split::kTrain);
      data.test = LoadCifar10(d.test_batches, Split::kTest);
      break;
  }
  if (d.train_n > 0) data.train = Subsample(data.train, d.train_n, cfg.seed);
  if (d.test_n > 0) data.test = Subsample(data.test, d.test_n, cfg.seed + 1);
  return data;
}

std::string DatasetLabel(const ExperimentConfig& cfg) {
  if (cfg.dataset.source == Provenance::kSynthetic) {
    return "synthetic-k" + std::to_string(cfg.dataset.synthetic.class_count);
  }
  return ProvenanceName(cfg.dataset.source);
}

TrainConfig TargetTrain(const ExperimentConfig& cfg, std::uint64_t seed) {
  TrainConfig tc = cfg.train;
  tc.seed = seed;
  return tc;
}

AttackConfig MakeAttackConfig(const ExperimentConfig& cfg, std::uint64_t seed) {
  AttackConfig ac;
  ac.hidden_units = cfg.attack_hidden_units;
  ac.train_cfg = cfg.attack_train;
  ac.train_cfg.seed = seed;
  ac.sort_confidences = cfg.sort_confidences;
  return ac;
}

std::vector<LayerSpec> TargetLayers(const DataSplit& data,
                                    const std::vector<std::size_t>& hidden) {
  return MlpLayers(data.train.dim(), hidden,
                   static_cast<std::size_t>(data.train.class_count));
}

class Output {
 public:
  Output(const fs::path& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create " + dir_.string() + ": " + ec.message());
  }
  void Write(const std::string& name, const std::string& contents) const {
    const fs::path path = dir_ / name;
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string());
    WriteTextFile(path.string(), contents);
  }
  void WriteJson(const std::string& name, const Json& doc) const {
    Write(name, doc.dump(2) + "\n");
  }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
};

Json MeanStd(const std::vector<AttackMetrics>& runs) {
  std::vector<double> acc, prec, rec;
  for (const auto& m : runs) {
    acc.push_back(m.accuracy);
    prec.push_back(m.precision);
    rec.push_back(m.recall);
  }
  return {{"accuracy_mean", Mean(acc)},   {"accuracy_std", SampleStd(acc)},
          {"precision_mean", Mean(prec)}, {"precision_std", SampleStd(prec)},
          {"recall_mean", Mean(rec)},     {"recall_std", SampleStd(rec)},
          {"n_seeds", runs.size()}};
}

void CmdTrain(const ExperimentConfig& cfg, const Output& out, std::ostream& log) {
  const DataSplit data = LoadData(cfg);
  Network net = InitNetwork(TargetLayers(data, cfg.hidden), cfg.seed);
  const TrainReport report = Train(net, data.train, TargetTrain(cfg, cfg.seed), nullptr,
                                   data.test.empty() ? nullptr : &data.test);
  out.WriteJson("network.json", NetworkToJson(net));
  out.WriteJson("report.json", TrainReportToJson(report));
  log << "train accuracy " << FormatDouble(report.train_accuracy) << ", test accuracy "
      << FormatDouble(report.test_accuracy.value_or(0.0)) << "\n";
}

void CmdPrune(const ExperimentConfig& cfg, const Output& out, std::ostream& log) {
  const DataSplit data = LoadData(cfg);
  PruneConfig base;
  base.scope = cfg.scope;
  base.train_cfg = TargetTrain(cfg, cfg.seed);
  const auto tickets = SparsitySweep(TargetLayers(data, cfg.hidden), data, cfg.sparsities, base);
  std::ostringstream csv;
  WriteSweepCsv(csv, tickets);
  out.Write("sweep.csv", csv.str());
  for (const auto& t : tickets) {
    out.WriteJson("ticket_p" + FormatDouble(t.config.target_sparsity) + ".json",
                  TicketToJson(t));
  }
  log << csv.str();
}

void CmdAttack(const ExperimentConfig& cfg, const Output& out, std::ostream& log) {
  const DataSplit data = LoadData(cfg);
  const auto layers = TargetLayers(data, cfg.hidden);
  struct SeedRun {
    PairedMetrics metrics;
    AttackSplit dense_split, ticket_split;
    double dense_train = 0, dense_test = 0, ticket_train = 0, ticket_test = 0;
  };
  std::vector<SeedRun> runs(cfg.attack_seeds.size());
  ParallelFor(runs.size(), cfg.threads, [&](std::size_t i) {
    const std::uint64_t seed = cfg.attack_seeds[i];
    PruneConfig pc{cfg.attack_sparsity, cfg.scope, TargetTrain(cfg, seed)};
    const LotteryTicket ticket = OneShotPrune(layers, data, pc);
    const AttackConfig ac = MakeAttackConfig(cfg, seed);
    SeedRun& r = runs[i];
    r.metrics = AuditPair(ticket, data.train, data.test, cfg.attack_n_per_side, ac, seed);
    r.dense_split = BuildAttackDataset(ticket.dense_net, data.train, data.test,
                                       cfg.attack_n_per_side, seed, ac.sort_confidences);
    r.ticket_split = BuildAttackDataset(ticket.retrained_net, data.train, data.test,
                                        cfg.attack_n_per_side, seed, ac.sort_confidences);
    r.dense_train = ticket.dense_report.train_accuracy;
    r.dense_test = ticket.dense_report.test_accuracy.value_or(0.0);
    r.ticket_train = ticket.ticket_report.train_accuracy;
    r.ticket_test = ticket.ticket_report.test_accuracy.value_or(0.0);
  });

  Json per_seed = Json::array();
  std::vector<AttackMetrics> dense, ticket;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const SeedRun& r = runs[i];
    const std::string tag = "seed" + std::to_string(cfg.attack_seeds[i]);
    dense.push_back(r.metrics.dense);
    ticket.push_back(r.metrics.ticket);
    out.WriteJson("metrics/" + tag + "_dense.json", MetricsToJson(r.metrics.dense));
    out.WriteJson("metrics/" + tag + "_ticket.json", MetricsToJson(r.metrics.ticket));
    const std::pair<const char*, const AttackSplit*> splits[] = {
        {"dense", &r.dense_split}, {"ticket", &r.ticket_split}};
    for (const auto& [name, split] : splits) {
      std::ostringstream train_csv, eval_csv;
      WriteAttackDatasetCsv(train_csv, split->train);
      WriteAttackDatasetCsv(eval_csv, split->eval);
      out.Write("attack_data/" + tag + "_" + name + "_train.csv", train_csv.str());
      out.Write("attack_data/" + tag + "_" + name + "_eval.csv", eval_csv.str());
    }
    per_seed.push_back({{"seed", cfg.attack_seeds[i]},
                        {"dense", MetricsToJson(r.metrics.dense)},
                        {"ticket", MetricsToJson(r.metrics.ticket)},
                        {"dense_train_acc", r.dense_train},
                        {"dense_test_acc", r.dense_test},
                        {"ticket_train_acc", r.ticket_train},
                        {"ticket_test_acc", r.ticket_test}});
  }
  const Json dense_summary = MeanStd(dense);
  const Json ticket_summary = MeanStd(ticket);
  const double gap = std::abs(dense_summary["accuracy_mean"].get<double>() -
                              ticket_summary["accuracy_mean"].get<double>());
  out.WriteJson("attack_summary.json",
                {{"dataset", DatasetLabel(cfg)},
                 {"sparsity", cfg.attack_sparsity},
                 {"per_seed", per_seed},
                 {"summary",
                  {{"dense", dense_summary},
                   {"ticket", ticket_summary},
                   {"accuracy_gap", gap}}}});
  std::ostringstream table;
  table << "dataset,dense_acc,ticket_acc,dense_precision,ticket_precision\n"
        << DatasetLabel(cfg) << ','
        << FormatDouble(dense_summary["accuracy_mean"].get<double>()) << ','
        << FormatDouble(ticket_summary["accuracy_mean"].get<double>()) << ','
        << FormatDouble(dense_summary["precision_mean"].get<double>()) << ','
        << FormatDouble(ticket_summary["precision_mean"].get<double>()) << '\n';
  out.Write("table1.csv", table.str());
  log << table.str();
}

void CmdTransfer(const ExperimentConfig& cfg, const Output& out, std::ostream& log) {
  const DataSplit data = LoadData(cfg);
  std::vector<TransferMatrix> matrices(cfg.attack_seeds.size());
  ParallelFor(matrices.size(), cfg.threads, [&](std::size_t i) {
    const std::uint64_t seed = cfg.attack_seeds[i];
    PruneConfig base;
    base.scope = cfg.scope;
    base.train_cfg = TargetTrain(cfg, seed);
    std::vector<TransferTarget> targets;
    for (std::size_t width : cfg.transfer_widths) {
      const auto tickets = SparsitySweep(TargetLayers(data, {width}), data,
                                         cfg.transfer_sparsities, base);
      for (auto& t : TicketTargets(tickets, "w" + std::to_string(width))) {
        targets.push_back(std::move(t));
      }
    }
    matrices[i] = BuildTransferMatrix(targets, data.train, data.test,
                                      cfg.attack_n_per_side, MakeAttackConfig(cfg, seed),
                                      seed);
  });
  const TransferMatrix mean = MeanTransferMatrix(matrices);
  std::ostringstream csv;
  WriteTransferCsv(csv, mean);
  out.Write("transfer.csv", csv.str());
  Json per_seed = Json::array();
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    Json m = TransferMatrixToJson(matrices[i]);
    m["seed"] = cfg.attack_seeds[i];
    per_seed.push_back(std::move(m));
  }
  out.WriteJson("transfer.json",
                {{"ids", mean.ids},
                 {"mean", TransferMatrixToJson(mean)},
                 {"diagonal_dominance_count", mean.DiagonalDominanceCount()},
                 {"per_seed", std::move(per_seed)}});
  log << csv.str() << "diagonal dominance " << mean.DiagonalDominanceCount() << "/"
      << mean.size() << "\n";
}

void CmdSweepClasses(const ExperimentConfig& cfg, const Output& out, std::ostream& log) {
  if (cfg.dataset.source != Provenance::kSynthetic) {
    throw ConfigError("sweep-classes requires a synthetic dataset");
  }
  ClassSweepConfig sc;
  sc.data = cfg.dataset.synthetic;
  sc.hidden = cfg.hidden;
  sc.target_train = cfg.train;
  sc.attack = MakeAttackConfig(cfg, 0);
  sc.n_per_side = cfg.attack_n_per_side;
  sc.seeds = cfg.attack_seeds;
  sc.threads = cfg.threads;
  const auto rows = ClassCountSweep(cfg.class_counts, sc);

  std::ostringstream csv;
  csv << "k,attack_accuracy_mean,attack_accuracy_std,target_train_acc,target_test_acc\n";
  Json json_rows = Json::array();
  bool monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (i > 0 && r.accuracy_mean < rows[i - 1].accuracy_mean) monotone = false;
    csv << r.class_count << ',' << FormatDouble(r.accuracy_mean) << ','
        << FormatDouble(r.accuracy_std) << ',' << FormatDouble(r.target_train_acc) << ','
        << FormatDouble(r.target_test_acc) << '\n';
    Json seeds = Json::array();
    for (const auto& m : r.per_seed) seeds.push_back(MetricsToJson(m));
    json_rows.push_back({{"k", r.class_count},
                         {"attack_accuracy_mean", r.accuracy_mean},
                         {"attack_accuracy_std", r.accuracy_std},
                         {"target_train_acc", r.target_train_acc},
                         {"target_test_acc", r.target_test_acc},
                         {"per_seed", std::move(seeds)}});
  }
  out.Write("classes.csv", csv.str());
  out.WriteJson("classes.json",
                {{"rows", std::move(json_rows)},
                 {"monotone_non_decreasing", monotone},
                 {"total_rise", rows.back().accuracy_mean - rows.front().accuracy_mean}});
  log << csv.str();
}

}  // namespace

ExperimentConfig ParseConfig(const Json& doc) {
  ExperimentConfig cfg;
  const Section root(doc, "", {"seed", "threads", "output_dir", "dataset", "model", "train",
                               "prune", "attack", "transfer", "class_sweep"});
  cfg.seed = root.Unsigned("seed", cfg.seed);
  cfg.threads = root.Unsigned("threads", cfg.threads);
  if (cfg.threads == 0) throw ConfigError("'threads' must be positive");
  cfg.output_dir = root.String("output_dir", cfg.output_dir);

  {
    const Json& raw = root.Raw("dataset");
    const std::string source =
        raw.is_object() && raw.contains("source") && raw["source"].is_string()
            ? raw["source"].get<std::string>()
            : "synthetic";
    std::set<std::string> allowed{"source", "train_n", "test_n"};
    if (source == "synthetic") {
      allowed.insert({"classes", "dim", "n_per_class", "cluster_sep"});
    } else if (source == "mnist") {
      allowed.insert({"train_images", "train_labels", "test_images", "test_labels"});
    } else if (source == "cifar10") {
      allowed.insert({"train_batches", "test_batches"});
    } else {
      throw ConfigError("unknown dataset source '" + source + "'");
    }
    const Section s(raw, "dataset", allowed);
    DatasetConfig& d = cfg.dataset;
    d.train_n = s.Unsigned("train_n", 0);
    d.test_n = s.Unsigned("test_n", 0);
    if (source == "synthetic") {
      d.source = Provenance::kSynthetic;
      d.synthetic.class_count = static_cast<int>(s.Unsigned("classes", 10));
      d.synthetic.dim = s.Unsigned("dim", 20);
      d.synthetic.n_per_class = s.Unsigned("n_per_class", 50);
      d.synthetic.cluster_sep = s.Number("cluster_sep", 3.0);
      try {
        d.synthetic.Validate();
      } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("'dataset': ") + e.what());
      }
    } else if (source == "mnist") {
      d.source = Provenance::kMnist;
      for (const char* key : {"train_images", "train_labels", "test_images", "test_labels"}) {
        if (!s.Has(key)) throw ConfigError("missing " + s.Name(key));
      }
      d.train_images = s.String("train_images", "");
      d.train_labels = s.String("train_labels", "");
      d.test_images = s.String("test_images", "");
      d.test_labels = s.String("test_labels", "");
    } else {
      d.source = Provenance::kCifar10;
      d.train_batches = s.List<std::string>("train_batches", {}, Section::AsString);
      d.test_batches = s.List<std::string>("test_batches", {}, Section::AsString);
      if (d.train_batches.empty() || d.test_batches.empty()) {
        throw ConfigError("'dataset' needs non-empty train_batches and test_batches");
      }
    }
  }

  {
    const Section s(root.Raw("model"), "model", {"hidden"});
    cfg.hidden = s.List<std::size_t>("hidden", cfg.hidden, Section::AsUnsigned);
    for (std::size_t h : cfg.hidden) {
      if (h == 0) throw ConfigError("'model.hidden' widths must be positive");
    }
  }
  cfg.train = ParseTrain(root, "train", cfg.train);

  {
    const Section s(root.Raw("prune"), "prune", {"sparsities", "scope"});
    cfg.sparsities = s.List<double>("sparsities", cfg.sparsities, Section::AsNumber);
    RequireSparsities(cfg.sparsities, "'prune.sparsities'");
    const std::string scope = s.String("scope", "global");
    if (scope == "global") {
      cfg.scope = PruneScope::kGlobal;
    } else if (scope == "per_layer") {
      cfg.scope = PruneScope::kPerLayer;
    } else {
      throw ConfigError("'prune.scope' must be global or per_layer");
    }
  }

  {
    const Section s(root.Raw("attack"), "attack",
                    {"n_per_side", "seeds", "hidden_units", "sparsity", "sort_confidences",
                     "train"});
    cfg.attack_n_per_side = s.Unsigned("n_per_side", cfg.attack_n_per_side);
    if (cfg.attack_n_per_side < 2) throw ConfigError("'attack.n_per_side' must be >= 2");
    cfg.attack_seeds = s.List<std::uint64_t>("seeds", cfg.attack_seeds, Section::AsUnsigned);
    if (cfg.attack_seeds.empty()) throw ConfigError("'attack.seeds' must not be empty");
    cfg.attack_hidden_units = s.Unsigned("hidden_units", cfg.attack_hidden_units);
    if (cfg.attack_hidden_units == 0) throw ConfigError("'attack.hidden_units' must be positive");
    cfg.attack_sparsity = s.Number("sparsity", cfg.attack_sparsity);
    if (!(cfg.attack_sparsity >= 0.0 && cfg.attack_sparsity < 1.0)) {
      throw ConfigError("'attack.sparsity' must lie in [0, 1)");
    }
    cfg.sort_confidences = s.Bool("sort_confidences", cfg.sort_confidences);
    cfg.attack_train = ParseTrain(s, "train", cfg.attack_train);
  }

  {
    const Section s(root.Raw("transfer"), "transfer", {"widths", "sparsities"});
    cfg.transfer_widths = s.List<std::size_t>("widths", cfg.transfer_widths, Section::AsUnsigned);
    RequireIncreasing(cfg.transfer_widths, "'transfer.widths'");
    if (cfg.transfer_widths.front() == 0) throw ConfigError("'transfer.widths' must be positive");
    cfg.transfer_sparsities =
        s.List<double>("sparsities", cfg.transfer_sparsities, Section::AsNumber);
    RequireSparsities(cfg.transfer_sparsities, "'transfer.sparsities'");
  }

  {
    const Section s(root.Raw("class_sweep"), "class_sweep", {"class_counts"});
    cfg.class_counts = s.List<int>("class_counts", cfg.class_counts,
                                   [](const Json& v, const std::string& name) {
                                     return static_cast<int>(Section::AsUnsigned(v, name));
                                   });
    RequireIncreasing(cfg.class_counts, "'class_sweep.class_counts'");
    if (cfg.class_counts.front() < 2) {
      throw ConfigError("'class_sweep.class_counts' entries must be >= 2");
    }
  }
  return cfg;
}

Json CanonicalConfig(const ExperimentConfig& cfg) {
  const DatasetConfig& d = cfg.dataset;
  Json dataset = {{"source", ProvenanceName(d.source)},
                  {"train_n", d.train_n},
                  {"test_n", d.test_n}};
  switch (d.source) {
    case Provenance::kSynthetic:
      dataset["classes"] = d.synthetic.class_count;
      dataset["dim"] = d.synthetic.dim;
      dataset["n_per_class"] = d.synthetic.n_per_class;
      dataset["cluster_sep"] = d.synthetic.cluster_sep;
      break;
    case Provenance::kMnist:
      dataset["train_images"] = d.train_images;
      dataset["train_labels"] = d.train_labels;
      dataset["test_images"] = d.test_images;
      dataset["test_labels"] = d.test_labels;
      break;
    case Provenance::kCifar10:
      dataset["train_batches"] = d.train_batches;
      dataset["test_batches"] = d.test_batches;
      break;
  }
  return {{"seed", cfg.seed},
          {"dataset", std::move(dataset)},
          {"model", {{"hidden", cfg.hidden}}},
          {"train", TrainJson(cfg.train)},
          {"prune", {{"sparsities", cfg.sparsities}, {"scope", PruneScopeName(cfg.scope)}}},
          {"attack",
           {{"n_per_side", cfg.attack_n_per_side},
            {"seeds", cfg.attack_seeds},
            {"hidden_units", cfg.attack_hidden_units},
            {"sparsity", cfg.attack_sparsity},
            {"sort_confidences", cfg.sort_confidences},
            {"train", TrainJson(cfg.attack_train)}}},
          {"transfer", {{"widths", cfg.transfer_widths}, {"sparsities", cfg.transfer_sparsities}}},
          {"class_sweep", {{"class_counts", cfg.class_counts}}}};
}

std::string ConfigHash(const std::string& command, const ExperimentConfig& cfg) {
  const std::string text = command + "\n" + CanonicalConfig(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Membership inference audits of dense and lottery-ticket networks",
               "ltaudit"};
  app.require_subcommand(1);

  struct Flags {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
  } flags;

  using Command = void (*)(const ExperimentConfig&, const Output&, std::ostream&);
  const std::pair<const char*, std::pair<const char*, Command>> commands[] = {
      {"train", {"Train a dense target network", &CmdTrain}},
      {"prune", {"One-shot prune and retrain over a sparsity list", &CmdPrune}},
      {"attack", {"Attack dense and ticket networks over all seeds", &CmdAttack}},
      {"transfer", {"Cross-model attack transfer matrix", &CmdTransfer}},
      {"sweep-classes", {"Attack accuracy against class count", &CmdSweepClasses}},
  };
  std::map<CLI::App*, std::pair<std::string, Command>> by_app;
  for (const auto& [name, info] : commands) {
    CLI::App* sub = app.add_subcommand(name, info.first);
    sub->add_option("--config", flags.config, "Experiment config (JSON)")->required();
    sub->add_option("--out", flags.out, "Output root directory");
    sub->add_option("--seed", flags.seed, "Override the config seed");
    sub->add_option("--threads", flags.threads, "Worker threads");
    by_app[sub] = {name, info.second};
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const auto& [name, command] = by_app.at(app.get_subcommands().front());
  try {
    Json doc;
    try {
      doc = Json::parse(ReadTextFile(flags.config));
    } catch (const Json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig cfg = ParseConfig(doc);
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.threads) {
      if (*flags.threads == 0) throw ConfigError("--threads must be positive");
      cfg.threads = *flags.threads;
    }
    if (flags.out) cfg.output_dir = *flags.out;

    const Output output(fs::path(cfg.output_dir) / (name + "-" + ConfigHash(name, cfg)));
    output.WriteJson("config.json", CanonicalConfig(cfg));
    command(cfg, output, out);
    out << "wrote " << output.dir().string() << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericError& e) {
    err << "numeric abort: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace ltaudit::cli
