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

#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <string>
#include <vector>

#include "ltaudit/attack.h"
#include "ltaudit/dataset.h"
#include "ltaudit/errors.h"
#include "ltaudit/network.h"
#include "ltaudit/pruning.h"
#include "ltaudit/serialize.h"
#include "ltaudit/train.h"
#include "ltaudit/transfer.h"

namespace py = pybind11;

namespace ltaudit {
namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Tensor MatrixFromArray(const Array& a) {
  if (a.ndim() != 2) throw InvalidArgument("expected a 2-d array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return Tensor({rows, cols}, std::vector<double>(a.data(), a.data() + rows * cols));
}

Array ArrayFromTensor(const Tensor& t) {
  Array out(std::vector<py::ssize_t>(t.shape().begin(), t.shape().end()));
  std::memcpy(out.mutable_data(), t.data().data(), t.size() * sizeof(double));
  return out;
}

Dataset MakeDataset(const Array& features, std::vector<int> labels, int class_count) {
  Dataset ds{MatrixFromArray(features), std::move(labels), class_count};
  ds.Validate();
  return ds;
}

py::dict ReportDict(const TrainReport& r) {
  py::dict d;
  d["iterations"] = r.iterations;
  d["train_accuracy"] = r.train_accuracy;
  d["test_accuracy"] = r.test_accuracy ? py::cast(*r.test_accuracy) : py::none();
  d["loss_curve"] = r.loss_curve;
  return d;
}

py::dict MetricsDict(const AttackMetrics& m) {
  py::dict d;
  d["accuracy"] = m.accuracy;
  d["precision"] = m.precision;
  d["recall"] = m.recall;
  d["n_eval"] = m.n_eval;
  d["seed"] = m.seed;
  return d;
}

}  // namespace
}  // namespace ltaudit

PYBIND11_MODULE(_ltaudit, m) {
  using namespace ltaudit;
  m.doc() = "Lottery-ticket pruning and membership inference audits";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidArgument>(m, "InvalidArgument", error);
  py::register_exception<NumericError>(m, "NumericError", error);
  py::register_exception<IoError>(m, "IoError", error);
  py::register_exception<FormatError>(m, "FormatError", error);

  py::enum_<PruneScope>(m, "PruneScope")
      .value("GLOBAL", PruneScope::kGlobal)
      .value("PER_LAYER", PruneScope::kPerLayer);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init(&MakeDataset), py::arg("features"), py::arg("labels"),
           py::arg("class_count"))
      .def_property_readonly("features",
                             [](const Dataset& d) { return ArrayFromTensor(d.features); })
      .def_readonly("labels", &Dataset::labels)
      .def_readonly("class_count", &Dataset::class_count)
      .def("__len__", &Dataset::size)
      .def_property_readonly("dim", &Dataset::dim);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init([](double lr, double momentum, std::size_t batch_size,
                       std::size_t iterations, std::uint64_t seed, double l2) {
             return TrainConfig{lr, momentum, batch_size, iterations, seed, l2};
           }),
           py::arg("learning_rate") = 0.05, py::arg("momentum") = 0.9,
           py::arg("batch_size") = 32, py::arg("iterations") = 1000, py::arg("seed") = 0,
           py::arg("l2_penalty") = 0.0)
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("momentum", &TrainConfig::momentum)
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def_readwrite("iterations", &TrainConfig::iterations)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("l2_penalty", &TrainConfig::l2_penalty);

  py::class_<AttackConfig>(m, "AttackConfig")
      .def(py::init([](std::size_t hidden_units, const TrainConfig& train, bool sort) {
             return AttackConfig{hidden_units, train, sort};
           }),
           py::arg("hidden_units") = 100,
           py::arg("train") = TrainConfig{0.05, 0.9, 32, 2000, 0, 0.0},
           py::arg("sort_confidences") = false)
      .def_readwrite("hidden_units", &AttackConfig::hidden_units)
      .def_readwrite("train", &AttackConfig::train_cfg)
      .def_readwrite("sort_confidences", &AttackConfig::sort_confidences);

  py::class_<Network>(m, "Network")
      .def_property_readonly("input_dim", &Network::input_dim)
      .def_property_readonly("class_count", &Network::class_count)
      .def_property_readonly("weight_count", &Network::weight_count)
      .def_property_readonly("parameter_count", &Network::parameter_count)
      .def_property_readonly("seed", &Network::seed)
      .def("weights",
           [](const Network& n) {
             py::list out;
             for (const auto& p : n.params()) out.append(ArrayFromTensor(p.weight));
             return out;
           })
      .def("forward", [](const Network& n, const Array& x) {
        return ArrayFromTensor(Forward(n, MatrixFromArray(x)));
      })
      .def("confidences", [](const Network& n, const Array& x) {
        return ArrayFromTensor(SoftmaxConfidences(Forward(n, MatrixFromArray(x))));
      })
      .def("predict", [](const Network& n, const Array& x) { return Predict(n, MatrixFromArray(x)); })
      .def("to_json", [](const Network& n) { return NetworkToJson(n).dump(); })
      .def_static("from_json", [](const std::string& s) { return NetworkFromJson(Json::parse(s)); })
      .def(py::self == py::self);

  py::class_<Mask>(m, "Mask")
      .def_property_readonly("size", &Mask::size)
      .def_property_readonly("zero_count", &Mask::zero_count)
      .def_property_readonly("sparsity", &Mask::sparsity)
      .def("layers", [](const Mask& mk) {
        py::list out;
        for (const auto& t : mk.layers) out.append(ArrayFromTensor(t));
        return out;
      });

  py::class_<LotteryTicket>(m, "LotteryTicket")
      .def_readonly("mask", &LotteryTicket::mask)
      .def_readonly("dense_net", &LotteryTicket::dense_net)
      .def_readonly("rewound_net", &LotteryTicket::rewound_net)
      .def_readonly("retrained_net", &LotteryTicket::retrained_net)
      .def_readonly("achieved_sparsity", &LotteryTicket::achieved_sparsity)
      .def_property_readonly("dense_report",
                             [](const LotteryTicket& t) { return ReportDict(t.dense_report); })
      .def_property_readonly("ticket_report",
                             [](const LotteryTicket& t) { return ReportDict(t.ticket_report); })
      .def("to_json", [](const LotteryTicket& t) { return TicketToJson(t).dump(); });

  m.def(
      "make_synthetic",
      [](int classes, std::size_t dim, std::size_t n_per_class, double sep, std::uint64_t seed) {
        DataSplit s = MakeSynthetic({classes, dim, n_per_class, sep, seed});
        return py::make_tuple(std::move(s.train), std::move(s.test));
      },
      py::arg("classes"), py::arg("dim"), py::arg("n_per_class"), py::arg("cluster_sep") = 3.0,
      py::arg("seed") = 0, "Synthetic Gaussian classes; returns (train, test).");
  m.def("load_idx", [](const std::string& images, const std::string& labels) {
    return LoadIdx(images, labels);
  });
  m.def("load_cifar10", [](const std::vector<std::string>& paths) { return LoadCifar10(paths); });
  m.def("subsample", &Subsample, py::arg("dataset"), py::arg("n"), py::arg("seed"));

  m.def(
      "init_network",
      [](std::size_t in_dim, const std::vector<std::size_t>& hidden, std::size_t classes,
         std::uint64_t seed) { return InitNetwork(MlpLayers(in_dim, hidden, classes), seed); },
      py::arg("in_dim"), py::arg("hidden"), py::arg("classes"), py::arg("seed") = 0);
  m.def(
      "train",
      [](const Network& net, const Dataset& data, const TrainConfig& cfg, const Mask* mask,
         const Dataset* test) {
        Network out = net;
        const TrainReport r = Train(out, data, cfg, mask, test);
        return py::make_tuple(out, ReportDict(r));
      },
      py::arg("net"), py::arg("data"), py::arg("cfg") = TrainConfig{}, py::arg("mask") = nullptr,
      py::arg("test") = nullptr, "Trains a copy of net; returns (network, report).");
  m.def("evaluate", &Evaluate, py::arg("net"), py::arg("data"));
  m.def(
      "gradient_check",
      [](const Network& net, const Array& batch, const std::vector<int>& labels, double l2) {
        return GradientCheck(net, MatrixFromArray(batch), labels, l2);
      },
      py::arg("net"), py::arg("batch"), py::arg("labels"), py::arg("l2_penalty") = 0.0);

  m.def("magnitude_prune", &MagnitudePrune, py::arg("net"), py::arg("sparsity"),
        py::arg("scope") = PruneScope::kGlobal);
  m.def(
      "one_shot_prune",
      [](const std::vector<std::size_t>& hidden, const Dataset& train, const Dataset& test,
         double sparsity, const TrainConfig& cfg, PruneScope scope) {
        return OneShotPrune(MlpLayers(train.dim(), hidden, static_cast<std::size_t>(train.class_count)),
                            {train, test}, {sparsity, scope, cfg});
      },
      py::arg("hidden"), py::arg("train"), py::arg("test"), py::arg("sparsity"),
      py::arg("cfg") = TrainConfig{}, py::arg("scope") = PruneScope::kGlobal);

  m.def(
      "metrics_from_predictions",
      [](const std::vector<int>& predicted, const std::vector<int>& actual) {
        return MetricsDict(MetricsFromPredictions(predicted, actual));
      },
      py::arg("predicted"), py::arg("actual"));
  m.def(
      "attack_network",
      [](const Network& target, const Dataset& members, const Dataset& nonmembers,
         std::size_t n_per_side, const AttackConfig& cfg, std::uint64_t seed) {
        return MetricsDict(AttackNetwork(target, members, nonmembers, n_per_side, cfg, seed));
      },
      py::arg("target"), py::arg("members"), py::arg("nonmembers"), py::arg("n_per_side"),
      py::arg("cfg") = AttackConfig{}, py::arg("seed") = 0);
  m.def(
      "audit_pair",
      [](const LotteryTicket& ticket, const Dataset& members, const Dataset& nonmembers,
         std::size_t n_per_side, const AttackConfig& cfg, std::uint64_t seed) {
        const PairedMetrics pm = AuditPair(ticket, members, nonmembers, n_per_side, cfg, seed);
        return py::make_tuple(MetricsDict(pm.dense), MetricsDict(pm.ticket));
      },
      py::arg("ticket"), py::arg("members"), py::arg("nonmembers"), py::arg("n_per_side"),
      py::arg("cfg") = AttackConfig{}, py::arg("seed") = 0);
  m.def(
      "transfer_matrix",
      [](const std::vector<std::pair<std::string, Network>>& targets, const Dataset& members,
         const Dataset& nonmembers, std::size_t n_per_side, const AttackConfig& cfg,
         std::uint64_t seed, std::size_t threads) {
        std::vector<TransferTarget> ts;
        for (const auto& [id, net] : targets) ts.push_back({id, net});
        const TransferMatrix tm =
            BuildTransferMatrix(ts, members, nonmembers, n_per_side, cfg, seed, threads);
        py::dict out;
        out["ids"] = tm.ids;
        py::list rows;
        for (std::size_t s = 0; s < tm.size(); ++s) {
          py::list row;
          for (std::size_t t = 0; t < tm.size(); ++t) row.append(MetricsDict(tm.at(s, t)));
          rows.append(row);
        }
        out["cells"] = rows;
        out["diagonal_dominance_count"] = tm.DiagonalDominanceCount();
        return out;
      },
      py::arg("targets"), py::arg("members"), py::arg("nonmembers"), py::arg("n_per_side"),
      py::arg("cfg") = AttackConfig{}, py::arg("seed") = 0, py::arg("threads") = 1,
      "targets is a list of (id, network) pairs; cells[source][target].");
}
