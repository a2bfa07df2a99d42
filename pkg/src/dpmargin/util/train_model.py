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

from dpmargin.core.dataset import load_dataset
from dpmargin.core.errors import ParameterError
from dpmargin.core.losses import zero_one_risk
from dpmargin.core.params import MarginParams, PrivacyParams
from dpmargin.learner import get_learner, learners
from dpmargin.learner.kernel import KernelSpec
from dpmargin.learner.nn import NetworkArch
from dpmargin.util.config import AnalysisConstants, coerce_options, resolve_config, write_manifest
from dpmargin.util.serialize import save_model

algo_keys = clize.parameters.mapped([(x, [x], "learner %s" % x) for x in learners.keys()])

MODEL_NAME = "model.txt"

# options shared by every command that builds a learner
learner_defaults = {
    "algo": None,
    "data": None,
    "out": ".",
    "eps": 1.0,
    "delta": 0.0,
    "rho": None,
    "lam": 1.0,
    "beta": 0.1,
    "seed": 0,
    "bandwidth": 1.0,
    "kernel_r": 1.0,
    "layers": 2,
    "width": 2,
    "eta": 1.0,
}


def learner_from_options(values, rho=None, progress=False):
    "Build the learner named by values['algo'] from resolved command options."
    if values.get("algo") is None:
        raise ParameterError("missing --algo, expected one of %s" % list(learners))
    rho = values.get("rho") if rho is None else rho
    if rho is None:
        raise ParameterError("missing --rho")
    priv = PrivacyParams(values["eps"], values["delta"])
    marg = MarginParams(rho, values["lam"])
    constants = AnalysisConstants.from_dict(values)
    extra = dict(progress=progress)
    if values["algo"] == "kernel":
        extra["kernel"] = KernelSpec("gaussian", values["bandwidth"], values["kernel_r"])
    elif values["algo"] == "nn":
        extra["arch"] = NetworkArch(values["layers"], values["width"], values["eta"])
    elif values["algo"] == "label-dp":
        extra["fat_dim"] = values.get("fat_dim")
    return get_learner(values["algo"], priv, marg, values["beta"], constants, **extra)


def load_input(values):
    if values.get("data") is None:
        raise ParameterError("missing --data")
    return load_dataset(values["data"])


def train(
    *,
    algo: algo_keys = None,
    data=None,
    out=None,
    eps: float = None,
    delta: float = None,
    rho: float = None,
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
    cover_cap: int = None,
    eff_k_cap: int = None,
    rff_cap: int = None,
    erm_steps: int = None,
    progress=False,
):
    """Train a private learner on a dataset file and write <out>/model.txt and
    <out>/manifest.txt.

    :param algo: pure-linear, eff-linear, kernel, nn or label-dp
    :param data: dataset file (csv or libsvm)
    :param out: output directory
    :param eps: privacy parameter epsilon
    :param delta: privacy parameter delta, 0 for the pure-DP learners
    :param rho: confidence margin
    :param lam: norm bound Lambda
    :param beta: failure probability
    :param seed: random seed
    :param config: key=value file with defaults for any of the options
    :param bandwidth: Gaussian kernel bandwidth (kernel)
    :param kernel_r: kernel feature norm r (kernel)
    :param layers: number of layers (nn)
    :param width: layer width (nn)
    :param eta: activation slope (nn)
    :param fat_dim: fat-shattering dimension bound at scale rho/32 (label-dp)
    :param pure_k_constant: constant of the sketch dimension (pure-linear)
    :param nn_k_constant: constant of the sketch dimension (nn)
    :param nn_gamma_constant: constant of the cover radius (nn)
    :param cover_cap: maximum cover size
    :param eff_k_cap: maximum sketch dimension (eff-linear, kernel)
    :param rff_cap: maximum number of random features (kernel)
    :param erm_steps: inner solver steps, 0 for the default
    :param progress: show progress bars
    """
    overrides = {k: v for k, v in locals().items() if k not in ("config", "progress")}
    values = coerce_options(train, resolve_config(learner_defaults, config, overrides))
    S = load_input(values)
    learner = learner_from_options(values, progress=progress)
    model = learner.train(S, values["seed"])
    os.makedirs(values["out"], exist_ok=True)
    path = os.path.join(values["out"], MODEL_NAME)
    save_model(model, path)
    write_manifest(values["out"], "train", values)
    err = zero_one_risk(model.scores(S))
    print("Trained %s on %d examples: training error %.4f, model written to %s" % (learner.name, S.m, err, path))


def main():
    from dpmargin.util.cli import run

    sys.exit(run(["train"] + sys.argv[1:]))


if __name__ == "__main__":
    main()
