# Copyright 2026 The ltaudit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Lottery-ticket pruning and membership inference audits (C++ core)."""

from ltaudit._ltaudit import (
    AttackConfig,
    Dataset,
    Error,
    FormatError,
    InvalidArgument,
    IoError,
    LotteryTicket,
    Mask,
    Network,
    NumericError,
    PruneScope,
    TrainConfig,
    attack_network,
    audit_pair,
    evaluate,
    gradient_check,
    init_network,
    load_cifar10,
    load_idx,
    magnitude_prune,
    make_synthetic,
    metrics_from_predictions,
    one_shot_prune,
    subsample,
    train,
    transfer_matrix,
)

__version__ = "0.1.0"
