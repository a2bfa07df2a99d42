# Copyright (c) 2024 dpmargin contributors
# All rights reserved.
#
# Redistribution and use in source and binary forms, with or without
# modification, are permitted provided that the following conditions are met:
#
# * Redistributions of source code must retain the above copyright notice, this
#   list of conditions and the following disclaimer.
#
# * Redistributions in binary form must reproduce the above copyright notice,
#   this list of conditions and the following disclaimer in the documentation
#   and/or other materials provided with the distribution.
#
# * Neither the name of dpmargin nor the names of its
#   contributors may be used to endorse or promote products derived from
#   this software without specific prior written permission.
#
# THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS"
# AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
# IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE ARE
# DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR CONTRIBUTORS BE LIABLE
# FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR CONSEQUENTIAL
# DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF SUBSTITUTE GOODS OR
# SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS INTERRUPTION) HOWEVER
# CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN CONTRACT, STRICT LIABILITY,
# OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE) ARISING IN ANY WAY OUT OF THE USE
# OF THIS SOFTWARE, EVEN IF ADVISED OF THE POSSIBILITY OF SUCH DAMAGE.

import clize
import numpy as np
import os
import sys

from dpmargin.analysis.audit import (
    RELATION_LABEL,
    RELATION_RECORD,
    AuditPlan,
    CoverLearnerRunner,
    ExponentialMechanismRunner,
    HashDiscretizer,
    RandomizedResponse,
    SignPatternDiscretizer,
    audit_markdown,
    estimate_epsilon,
    label_neighbors,
    record_neighbors,
    write_audit_csv,
)
from dpmargin.core.dataset import load_dataset
from dpmargin.core.errors import ParameterError
from dpmargin.core.losses import zero_one_risk
from dpmargin.core.rng import make_rng
from dpmargin.util.config import AnalysisConstants, coerce_options, resolve_config, write_manifest
from dpmargin.util.test import get_test_dataset, test_dataset_keys
from dpmargin.util.train_model import learner_defaults, learner_from_options

audit_mechanisms = {
    "pure-linear": "train_pure_dp on the dataset (record neighbors)",
    "nn": "train_nn_pure_dp on the dataset (record neighbors)",
    "label-dp": "train_label_dp on the dataset (label neighbors)",
    "exp-mech": "exponential mechanism over fixed random directions scored by zero-one risk",
    "randomized-response": "randomized response on a single bit (inputs 0 and 1)",
}
audit_mechanism_keys = clize.parameters.mapped([(k, [k], v) for k, v in audit_mechanisms.items()])

discretizer_kinds = {
    "index": "selected candidate index",
    "sign": "sign pattern on 10 random query points",
    "hash": "sha256 of the serialized model, 64 buckets",
}
discretizer_keys = clize.parameters.mapped([(k, [k], v) for k, v in discretizer_kinds.items()])

AUDIT_CSV_NAME = "audit.csv"
REPORT_NAME = "report.md"
EXP_MECH_DIRECTIONS = 16

audit_defaults = dict(
    {k: v for k, v in learner_defaults.items() if k not in ("algo", "bandwidth", "kernel_r")},
    mechanism=None,
    dataset="audit-4pt",
    record=0,
    trials=100000,
    discretizer="index",
    rho=1.0,
)


class DirectionScores:
    """Scores -zero_one_risk of n fixed unit directions; the directions only
    depend on (d, seed)."""

    def __init__(self, d, n=EXP_MECH_DIRECTIONS, seed=0):
        W = make_rng(seed, "directions").standard_normal((n, d))
        self.directions = W / np.linalg.norm(W, axis=1, keepdims=True)

    def __call__(self, dataset):
        margins = (dataset.features @ self.directions.T) * dataset.labels[:, None]
        return -zero_one_risk(margins, axis=0)


def _discretizer(kind, dataset, seed):
    if kind == "index":
        return None
    elif kind == "sign":
        return SignPatternDiscretizer(dataset.d, seed=seed, radius=max(dataset.radius_r, 1e-12))
    return HashDiscretizer()


def build_audit(values, progress=False):
    "Return (mechanism, plan) for resolved audit options."
    name = values["mechanism"]
    if name not in audit_mechanisms:
        raise ParameterError("missing or unknown --mechanism, expected one of %s" % list(audit_mechanisms))
    eps, delta = values["eps"], values["delta"]
    if name == "randomized-response":
        return RandomizedResponse(eps), AuditPlan(RELATION_RECORD, (0, 1), values["trials"], eps, delta)
    if values.get("data") is not None:
        S = load_dataset(values["data"])
    else:
        S = get_test_dataset(values["dataset"])
    if not 0 <= values["record"] < S.m:
        raise ParameterError("--record must index one of the %d records" % S.m)
    if name == "exp-mech":
        mech = ExponentialMechanismRunner(eps, 1.0 / S.m, DirectionScores(S.d, seed=values["seed"]))
        relation = RELATION_RECORD
    else:
        learner = learner_from_options(dict(values, algo=name), progress=False)
        mech = CoverLearnerRunner(learner, values["seed"], _discretizer(values["discretizer"], S, values["seed"]))
        relation = mech.relation
    if relation == RELATION_LABEL:
        neighbors = label_neighbors(S, values["record"])
    else:
        neighbors = record_neighbors(S, values["record"])
    min_count = AnalysisConstants.from_dict(values).audit_min_count
    return mech, AuditPlan(relation, neighbors, values["trials"], eps, delta, min_count)


def audit(
    *,
    mechanism: audit_mechanism_keys = None,
    dataset: test_dataset_keys = None,
    data=None,
    record: int = None,
    trials: int = None,
    discretizer: discretizer_keys = None,
    out=None,
    eps: float = None,
    delta: float = None,
    rho: float = None,
    lam: (float, "lambda") = None,  # noqa: F722
    beta: float = None,
    seed: int = None,
    config=None,
    layers: int = None,
    width: int = None,
    eta: float = None,
    fat_dim: float = None,
    pure_k_constant: float = None,
    nn_k_constant: float = None,
    nn_gamma_constant: float = None,
    cover_cap: int = None,
    audit_min_count: int = None,
    progress=False,
):
    """Estimate the privacy loss of a mechanism empirically on a neighboring
    pair and write audit.csv, report.md and manifest.txt to <out>. The
    estimate is a statistical lower bound, not a certificate.

    :param mechanism: pure-linear, nn, label-dp, exp-mech or randomized-response
    :param dataset: registered test dataset, used unless --data is given
    :param data: dataset file (csv or libsvm)
    :param record: index of the record that is replaced (or whose label is flipped)
    :param trials: runs per side of the pair, at least 1000
    :param discretizer: index, sign or hash
    :param out: output directory
    :param eps: claimed epsilon, also the budget the mechanism runs at
    :param delta: claimed delta
    :param rho: confidence margin of the learner
    :param lam: norm bound Lambda
    :param beta: failure probability
    :param seed: random seed of the trials; also fixes the data-independent draws
    :param config: key=value file with defaults for any of the options
    :param layers: number of layers (nn)
    :param width: layer width (nn)
    :param eta: activation slope (nn)
    :param fat_dim: fat-shattering dimension bound (label-dp)
    :param pure_k_constant: constant of the sketch dimension (pure-linear)
    :param nn_k_constant: constant of the sketch dimension (nn)
    :param nn_gamma_constant: constant of the cover radius (nn)
    :param cover_cap: maximum cover size
    :param audit_min_count: buckets with fewer hits on either side are ignored
    :param progress: show progress bars
    """
    overrides = {k: v for k, v in locals().items() if k not in ("config", "progress")}
    values = coerce_options(audit, resolve_config(audit_defaults, config, overrides))
    mech, plan = build_audit(values, progress)
    eps_hat, table = estimate_epsilon(mech, plan, seed=values["seed"], progress=progress)
    os.makedirs(values["out"], exist_ok=True)
    write_audit_csv(table, os.path.join(values["out"], AUDIT_CSV_NAME))
    with open(os.path.join(values["out"], REPORT_NAME), "w", encoding="utf-8", newline="\n") as f:
        f.write(audit_markdown(eps_hat, plan, table, values["mechanism"]))
    write_manifest(values["out"], "audit", values)
    print("Estimated epsilon %.4f for %s (claimed %g)" % (eps_hat, values["mechanism"], plan.epsilon))


def main():
    from dpmargin.util.cli import run

    sys.exit(run(["audit"] + sys.argv[1:]))


if __name__ == "__main__":
    main()
