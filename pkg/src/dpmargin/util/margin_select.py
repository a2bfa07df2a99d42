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
import os
import sys

from dpmargin.analysis.bounds import bound_kinds
from dpmargin.core.params import PrivacyParams
from dpmargin.learner.margin import select_margin, select_margin_nonprivate
from dpmargin.util.config import coerce_options, resolve_config, write_manifest
from dpmargin.util.serialize import save_model
from dpmargin.util.train_model import MODEL_NAME, algo_keys, learner_defaults, learner_from_options, load_input

bound_kind_keys = clize.parameters.mapped([(x, [x, x.split("_")[0]], "bound %s" % x) for x in bound_kinds])

REPORT_NAME = "report.md"
REPORT_CSV_NAME = "report.csv"


def select(
    *,
    algo: algo_keys = None,
    kind: bound_kind_keys = None,
    data=None,
    out=None,
    eps: float = None,
    delta: float = None,
    select_eps: float = None,
    lam: (float, "lambda") = None,  # noqa: F722
    beta: float = None,
    seed: int = None,
    config=None,
    bandwidth: float = None,
    kernel_r: float = None,
    layers: int = None,
    width: int = None,
    eta: float = None,
    fat_dim: float = None,
    pure_k_constant: float = None,
    nn_k_constant: float = None,
    nn_gamma_constant: float = None,
    bound_constant: float = None,
    cover_cap: int = None,
    eff_k_cap: int = None,
    rff_cap: int = None,
    erm_steps: int = None,
    non_private=False,
    progress=False,
):
    """Select the confidence margin privately over a geometric grid, train the
    learner at the selected margin and write model.txt, report.md, report.csv
    and manifest.txt to <out>.

    :param algo: pure-linear, eff-linear, kernel, nn or label-dp
    :param kind: bound kind, defaults to the one of the learner
    :param data: dataset file (csv or libsvm)
    :param out: output directory
    :param eps: learner privacy parameter epsilon
    :param delta: learner privacy parameter delta
    :param select_eps: epsilon of the selection step, defaults to eps
    :param lam: norm bound Lambda
    :param beta: failure probability
    :param seed: random seed
    :param config: key=value file with defaults for any of the options
    :param bandwidth: Gaussian kernel bandwidth (kernel)
    :param kernel_r: kernel feature norm r (kernel)
    :param layers: number of layers (nn)
    :param width: layer width (nn)
    :param eta: activation slope (nn)
    :param fat_dim: fat-shattering dimension bound (label-dp)
    :param pure_k_constant: constant of the sketch dimension (pure-linear)
    :param nn_k_constant: constant of the sketch dimension (nn)
    :param nn_gamma_constant: constant of the cover radius (nn)
    :param bound_constant: constant replacing the O() factors of the bounds
    :param cover_cap: maximum cover size
    :param eff_k_cap: maximum sketch dimension (eff-linear, kernel)
    :param rff_cap: maximum number of random features (kernel)
    :param erm_steps: inner solver steps, 0 for the default
    :param non_private: pick the grid minimum of F without noise (NOT private, baseline only)
    :param progress: show progress bars
    """
    overrides = {k: v for k, v in locals().items() if k not in ("config", "progress")}
    defaults = dict({k: v for k, v in learner_defaults.items() if k != "rho"}, kind=None, select_eps=None, non_private=False)
    values = coerce_options(select, resolve_config(defaults, config, overrides))
    S = load_input(values)
    learner = learner_from_options(values, rho=1.0, progress=progress)
    if values["non_private"]:
        sel = select_margin_nonprivate(S, learner, values["kind"], seed=values["seed"])
    else:
        sel_eps = values["select_eps"] if values["select_eps"] is not None else values["eps"]
        sel = select_margin(S, learner, values["kind"], PrivacyParams(sel_eps), values["beta"], values["seed"])
    os.makedirs(values["out"], exist_ok=True)
    save_model(sel.model, os.path.join(values["out"], MODEL_NAME))
    md = sel.report.to_markdown()
    md += "\nSelected rho* = %.17g (grid index %d).\n" % (sel.rho_star, sel.index)
    md += "Total privacy budget: epsilon %g, delta %g.\n" % (sel.total_epsilon, sel.delta)
    with open(os.path.join(values["out"], REPORT_NAME), "w", encoding="utf-8", newline="\n") as f:
        f.write(md)
    with open(os.path.join(values["out"], REPORT_CSV_NAME), "w", encoding="utf-8", newline="\n") as f:
        f.write(sel.report.to_csv())
    write_manifest(values["out"], "select-margin", values)
    print("Selected rho* = %g for %s, total epsilon %g" % (sel.rho_star, learner.name, sel.total_epsilon))


def main():
    from dpmargin.util.cli import run

    sys.exit(run(["select-margin"] + sys.argv[1:]))


if __name__ == "__main__":
    main()
