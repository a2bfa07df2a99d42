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

import numpy as np
import os
import sys

from dpmargin.analysis.bounds import KIND_F2, KIND_F3, evaluate_bounds, normalize_kind
from dpmargin.core.errors import ParameterError
from dpmargin.core.losses import hinge_risk, margin_risk, zero_one_risk
from dpmargin.learner import learners
from dpmargin.learner.margin import MarginGrid
from dpmargin.util.config import coerce_options, resolve_config, write_manifest
from dpmargin.util.margin_select import REPORT_CSV_NAME, REPORT_NAME, bound_kind_keys
from dpmargin.util.serialize import load_model
from dpmargin.util.train_model import learner_from_options, load_input

report_defaults = {"model": None, "data": None, "kind": None, "out": ".", "bound_constant": None}


def learner_for_model(model, bound_constant=None):
    "Rebuild the (untrained) learner a model was produced by from its provenance."
    prov = model.provenance
    if prov.get("algo") not in learners:
        raise ParameterError("model provenance does not name a known learner (algo=%s)" % prov.get("algo"))
    values = {
        "algo": prov["algo"],
        "eps": float(prov.get("epsilon", 1.0)),
        "delta": float(prov.get("delta", 0.0)),
        "rho": float(prov.get("rho", 1.0)),
        "lam": float(prov.get("lambda", 1.0)),
        "beta": float(prov.get("beta", 0.1)),
        "bandwidth": prov.get("bandwidth"),
        "kernel_r": prov.get("kernel_r"),
        "layers": prov.get("layers"),
        "width": prov.get("width"),
        "eta": prov.get("eta"),
        "bound_constant": bound_constant,
    }
    return learner_from_options(values)


def model_metrics(model, dataset, rho):
    s = model.scores(dataset)
    return {
        "m": dataset.m,
        "zero_one": zero_one_risk(s),
        "margin_risk": margin_risk(s, rho),
        "hinge_risk": hinge_risk(s, rho),
    }


def report(*, model=None, data=None, kind: bound_kind_keys = None, out=None, bound_constant: float = None):
    """Evaluate a trained model on a dataset and write its metrics and the
    margin bound over the geometric margin grid to <out>/report.md and
    <out>/report.csv. The empirical statistic of every grid level is the
    model's own margin (or, for F2 and F3, hinge) risk at that level.

    :param model: model.txt written by train or select-margin
    :param data: dataset file (csv or libsvm)
    :param kind: bound kind, defaults to the one of the learner named in the model
    :param out: output directory
    :param bound_constant: constant replacing the O() factors of the bounds
    """
    overrides = dict(locals())
    values = coerce_options(report, resolve_config(report_defaults, None, overrides))
    if values["model"] is None:
        raise ParameterError("missing --model")
    h = load_model(values["model"])
    S = load_input(values)
    learner = learner_for_model(h, values["bound_constant"])
    kind = normalize_kind(values["kind"] if values["kind"] is not None else learner.bound_kind)
    rho = learner.marg.rho
    metrics = model_metrics(h, S, rho)
    grid = MarginGrid(learner.output_bound(S), S.m)
    s = h.scores(S)
    risk_fn = hinge_risk if kind in (KIND_F2, KIND_F3) else margin_risk
    risks = np.array([risk_fn(s, v) for v in grid.values])
    on_grid = np.flatnonzero(np.isclose(grid.values, rho, rtol=1e-12))
    selected = int(on_grid[0]) if on_grid.size else None
    notes = ["model trained at rho=%.6g by %s" % (rho, learner.name)]
    bounds = evaluate_bounds(kind, grid.values, risks, learner.bound_stats(S), learner.constants, selected, notes)
    lines = ["## Model metrics", "", "| metric | value |", "|---|---|"]
    lines += ["| %s | %.6g |" % (k, v) for k, v in metrics.items()]
    lines += ["", "Provenance: " + ", ".join("%s=%s" % (k, v) for k, v in sorted(h.provenance.items())), ""]
    os.makedirs(values["out"], exist_ok=True)
    with open(os.path.join(values["out"], REPORT_NAME), "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines) + "\n" + bounds.to_markdown())
    with open(os.path.join(values["out"], REPORT_CSV_NAME), "w", encoding="utf-8", newline="\n") as f:
        f.write(bounds.to_csv())
    write_manifest(values["out"], "report", values)
    msg = "zero-one %.4f, margin risk %.4f at rho=%g on %d examples"
    print(msg % (metrics["zero_one"], metrics["margin_risk"], rho, S.m))


def main():
    from dpmargin.util.cli import run

    sys.exit(run(["report"] + sys.argv[1:]))


if __name__ == "__main__":
    main()
