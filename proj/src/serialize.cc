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

#include "ltaudit/serialize.h"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <utility>

#include "ltaudit/errors.h"

namespace ltaudit {
namespace {

[[noreturn]] void BadDocument(const std::string& what) {
  throw FormatError(FormatErrorCode::kBadDocument, what);
}

const Json& Field(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    BadDocument(std::string("missing field '") + key + "'");
  }
  return doc.at(key);
}

template <typename T>
T Get(const Json& doc, const char* key) {
  try {
    return Field(doc, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    BadDocument(std::string("field '") + key + "': " + e.what());
  }
}

void CheckFormat(const Json& doc) {
  if (Get<int>(doc, "format") != kFormatVersion) {
    BadDocument("unsupported format version");
  }
}

Json ParamsToJson(const std::vector<LayerParams>& params) {
  Json out = Json::array();
  for (const auto& p : params) {
    out.push_back({{"weight", p.weight.data()}, {"bias", p.bias.data()}});
  }
  return out;
}

std::vector<LayerParams> ParamsFromJson(const Json& doc,
                                        const std::vector<LayerSpec>& layers) {
  if (!doc.is_array() || doc.size() != layers.size()) {
    BadDocument("parameter list does not match layers");
  }
  std::vector<LayerParams> out;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    auto w = Get<std::vector<double>>(doc[i], "weight");
    auto b = Get<std::vector<double>>(doc[i], "bias");
    try {
      out.push_back({Tensor({layers[i].out_dim, layers[i].in_dim}, std::move(w)),
                     Tensor({layers[i].out_dim}, std::move(b))});
    } catch (const InvalidArgument& e) {
      BadDocument(std::string("layer ") + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

std::string Csv(double v) { return FormatDouble(v); }

}  // namespace

std::string FormatDouble(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Json NetworkToJson(const Network& net) {
  Json layers = Json::array();
  for (const auto& l : net.layers()) {
    layers.push_back({{"kind", "dense"},
                      {"in_dim", l.in_dim},
                      {"out_dim", l.out_dim},
                      {"activation", ActivationName(l.activation)}});
  }
  return {{"format", kFormatVersion},
          {"seed", net.seed()},
          {"layers", std::move(layers)},
          {"weights", ParamsToJson(net.params())},
          {"init_snapshot", ParamsToJson(net.init_snapshot())}};
}

Network NetworkFromJson(const Json& doc) {
  CheckFormat(doc);
  std::vector<LayerSpec> layers;
  const Json& ls = Field(doc, "layers");
  if (!ls.is_array()) BadDocument("layers must be an array");
  for (const auto& l : ls) {
    if (Get<std::string>(l, "kind") != "dense") BadDocument("unknown layer kind");
    const auto act = Get<std::string>(l, "activation");
    if (act != "relu" && act != "identity") BadDocument("unknown activation " + act);
    layers.push_back({Get<std::size_t>(l, "in_dim"), Get<std::size_t>(l, "out_dim"),
                      act == "relu" ? Activation::kRelu : Activation::kIdentity});
  }
  try {
    ValidateLayers(layers);
  } catch (const InvalidArgument& e) {
    BadDocument(e.what());
  }
  auto params = ParamsFromJson(Field(doc, "weights"), layers);
  auto snapshot = ParamsFromJson(Field(doc, "init_snapshot"), layers);
  return Network(std::move(layers), std::move(params), std::move(snapshot),
                 Get<std::uint64_t>(doc, "seed"));
}

Json MaskToJson(const Mask& mask) {
  Json out = Json::array();
  for (const auto& t : mask.layers) {
    std::vector<int> bits;
    bits.reserve(t.size());
    for (double v : t.data()) bits.push_back(v != 0.0 ? 1 : 0);
    out.push_back(std::move(bits));
  }
  return out;
}

Mask MaskFromJson(const Json& doc, const Network& net) {
  if (!doc.is_array() || doc.size() != net.params().size()) {
    BadDocument("mask layer count does not match network");
  }
  Mask mask;
  for (std::size_t l = 0; l < doc.size(); ++l) {
    std::vector<double> bits;
    for (const auto& b : doc[l]) {
      const int v = b.get<int>();
      if (v != 0 && v != 1) BadDocument("mask entries must be 0 or 1");
      bits.push_back(v);
    }
    try {
      mask.layers.emplace_back(net.params()[l].weight.shape(), std::move(bits));
    } catch (const InvalidArgument& e) {
      BadDocument(std::string("mask layer: ") + e.what());
    }
  }
  return mask;
}

Json TrainConfigToJson(const TrainConfig& cfg) {
  return {{"learning_rate", cfg.learning_rate}, {"momentum", cfg.momentum},
          {"batch_size", cfg.batch_size},       {"iterations", cfg.iterations},
          {"seed", cfg.seed},                   {"l2_penalty", cfg.l2_penalty}};
}

TrainConfig TrainConfigFromJson(const Json& doc) {
  TrainConfig cfg;
  cfg.learning_rate = Get<double>(doc, "learning_rate");
  cfg.momentum = Get<double>(doc, "momentum");
  cfg.batch_size = Get<std::size_t>(doc, "batch_size");
  cfg.iterations = Get<std::size_t>(doc, "iterations");
  cfg.seed = Get<std::uint64_t>(doc, "seed");
  cfg.l2_penalty = Get<double>(doc, "l2_penalty");
  return cfg;
}

Json TrainReportToJson(const TrainReport& report) {
  Json out = {{"iterations", report.iterations},
              {"train_accuracy", report.train_accuracy},
              {"test_accuracy", nullptr},
              {"loss_curve", report.loss_curve}};
  if (report.test_accuracy) out["test_accuracy"] = *report.test_accuracy;
  return out;
}

TrainReport TrainReportFromJson(const Json& doc) {
  TrainReport r;
  r.iterations = Get<std::size_t>(doc, "iterations");
  r.train_accuracy = Get<double>(doc, "train_accuracy");
  if (!Field(doc, "test_accuracy").is_null()) {
    r.test_accuracy = Get<double>(doc, "test_accuracy");
  }
  r.loss_curve = Get<std::vector<double>>(doc, "loss_curve");
  return r;
}

Json PruneConfigToJson(const PruneConfig& cfg) {
  return {{"target_sparsity", cfg.target_sparsity},
          {"scope", PruneScopeName(cfg.scope)},
          {"train", TrainConfigToJson(cfg.train_cfg)}};
}

PruneConfig PruneConfigFromJson(const Json& doc) {
  PruneConfig cfg;
  cfg.target_sparsity = Get<double>(doc, "target_sparsity");
  const auto scope = Get<std::string>(doc, "scope");
  if (scope == "global") {
    cfg.scope = PruneScope::kGlobal;
  } else if (scope == "per_layer") {
    cfg.scope = PruneScope::kPerLayer;
  } else {
    BadDocument("unknown prune scope " + scope);
  }
  cfg.train_cfg = TrainConfigFromJson(Field(doc, "train"));
  return cfg;
}

Json TicketToJson(const LotteryTicket& ticket) {
  return {{"format", kFormatVersion},
          {"prune_config", PruneConfigToJson(ticket.config)},
          {"achieved_sparsity", ticket.achieved_sparsity},
          {"mask", MaskToJson(ticket.mask)},
          {"dense_network", NetworkToJson(ticket.dense_net)},
          {"rewound_network", NetworkToJson(ticket.rewound_net)},
          {"ticket_network", NetworkToJson(ticket.retrained_net)},
          {"dense_report", TrainReportToJson(ticket.dense_report)},
          {"ticket_report", TrainReportToJson(ticket.ticket_report)}};
}

LotteryTicket TicketFromJson(const Json& doc) {
  CheckFormat(doc);
  Network dense = NetworkFromJson(Field(doc, "dense_network"));
  Mask mask = MaskFromJson(Field(doc, "mask"), dense);
  return LotteryTicket{std::move(mask),
                       std::move(dense),
                       NetworkFromJson(Field(doc, "rewound_network")),
                       NetworkFromJson(Field(doc, "ticket_network")),
                       TrainReportFromJson(Field(doc, "dense_report")),
                       TrainReportFromJson(Field(doc, "ticket_report")),
                       Get<double>(doc, "achieved_sparsity"),
                       PruneConfigFromJson(Field(doc, "prune_config"))};
}

Json MetricsToJson(const AttackMetrics& m) {
  return {{"accuracy", m.accuracy},
          {"precision", m.precision},
          {"recall", m.recall},
          {"n_eval", m.n_eval},
          {"seed", m.seed}};
}

Json TransferMatrixToJson(const TransferMatrix& matrix) {
  Json cells = Json::array();
  for (std::size_t s = 0; s < matrix.size(); ++s) {
    for (std::size_t t = 0; t < matrix.size(); ++t) {
      Json c = MetricsToJson(matrix.at(s, t));
      c["source_id"] = matrix.ids[s];
      c["target_id"] = matrix.ids[t];
      cells.push_back(std::move(c));
    }
  }
  return {{"ids", matrix.ids},
          {"cells", std::move(cells)},
          {"diagonal_dominance_count", matrix.DiagonalDominanceCount()}};
}

void WriteAttackDatasetCsv(std::ostream& out, const AttackDataset& ds) {
  for (int c = 0; c < ds.class_count; ++c) out << 'c' << c << ',';
  out << "member\n";
  for (const auto& r : ds.records) {
    for (double v : r.confidences) out << Csv(v) << ',';
    out << (r.member ? 1 : 0) << '\n';
  }
}

void WriteSweepCsv(std::ostream& out, const std::vector<LotteryTicket>& tickets) {
  out << "sparsity,dense_train_acc,dense_test_acc,ticket_train_acc,ticket_test_acc\n";
  for (const auto& t : tickets) {
    out << Csv(t.config.target_sparsity) << ',' << Csv(t.dense_report.train_accuracy)
        << ',' << Csv(t.dense_report.test_accuracy.value_or(0.0)) << ','
        << Csv(t.ticket_report.train_accuracy) << ','
        << Csv(t.ticket_report.test_accuracy.value_or(0.0)) << '\n';
  }
}

void WriteTransferCsv(std::ostream& out, const TransferMatrix& matrix) {
  out << "source_id,target_id,accuracy,precision,recall\n";
  for (std::size_t s = 0; s < matrix.size(); ++s) {
    for (std::size_t t = 0; t < matrix.size(); ++t) {
      const auto& m = matrix.at(s, t);
      out << matrix.ids[s] << ',' << matrix.ids[t] << ',' << Csv(m.accuracy) << ','
          << Csv(m.precision) << ',' << Csv(m.recall) << '\n';
    }
  }
}

void WriteTextFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << contents;
  out.close();
  if (!out) throw IoError("write failed for " + path);
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ltaudit
