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

"""Private selection of the confidence margin.

The grid V = {2^-j h_max : j = 1..J}, J = ceil(log2(m) / 2), is scored by
-F(rho, g_rho(S)), where F is the learner's margin bound and g_rho(S) its
empirical statistic, and rho* is drawn with the generalized exponential
mechanism using the per-level sensitivities of F. The learner is then trained
at rho*. Selection at eps and training at (eps, delta) compose to
(2 eps, delta) when both budgets are equal."""

import attrs
import numpy as np

from dpmargin.analysis.bounds import (
    bound_F,
    check_monotonicity,
    evaluate_bounds,
    normalize_kind,
    sensitivity_bound,
)
from dpmargin.core.errors import ParameterError
from dpmargin.core.params import check_beta
from dpmargin.core.rng import derive_seed, make_rng
from dpmargin.mechanism import ScoredCandidates, generalized_exponential_mechanism


@attrs.frozen
class MarginGrid:
    h_max: float = attrs.field(converter=float)
    m: int = attrs.field(converter=int)

    def __attrs_post_init__(self):
        if not self.h_max > 0:
            raise ParameterError("h_max must be positive, got %s" % self.h_max)
        if self.m < 1:
            raise ParameterError("m must be >= 1")

    @property
    def J(self):
        return max(1, int(np.ceil(0.5 * np.log2(self.m))))

    @property
    def values(self):
        return self.h_max * 2.0 ** -np.arange(1, self.J + 1)


@attrs.frozen(eq=False)
class MarginSelection:
    rho_star: float
    index: int
    model: object
    report: object
    selection_epsilon: float
    total_epsilon: float
    delta: float
    private: bool = True


def _learner_kind(learner, kind):
    if kind is None:
        return normalize_kind(learner.bound_kind)
    kind = normalize_kind(kind)
    if kind != normalize_kind(learner.bound_kind):
        raise ParameterError("bound kind %s does not match learner %s (%s)" % (kind, learner.name, learner.bound_kind))
    return kind


def _score_grid(S, learner, kind):
    grid = MarginGrid(learner.output_bound(S), S.m)
    rhos = grid.values
    risks = np.asarray(learner.empirical_statistics(S, rhos), dtype=np.float64)
    stats = learner.bound_stats(S)
    check_monotonicity(kind, rhos, risks, stats, learner.constants)
    F = np.array([bound_F(kind, rho, stats.with_risk(t), learner.constants) for rho, t in zip(rhos, risks)])
    sens = np.array([sensitivity_bound(kind, rho, stats, learner.constants) for rho in rhos])
    return rhos, risks, stats, F, sens


def select_margin(S, learner, kind=None, priv=None, beta=0.1, seed=0):
    """Select rho privately and train learner at the selected margin.

    :param learner: a dpmargin.learner.base.Learner; its margin is replaced
    :param kind: bound kind, defaults to the learner's own
    :param priv: selection budget, defaults to the learner's; only epsilon is used
    :returns: MarginSelection with the model, the BoundReport and the budget ledger
    """
    beta = check_beta(beta)
    kind = _learner_kind(learner, kind)
    priv = priv if priv is not None else learner.priv
    rhos, risks, stats, F, sens = _score_grid(S, learner, kind)
    cands = ScoredCandidates(-F, sensitivities=sens)
    index = generalized_exponential_mechanism(cands, priv.epsilon, make_rng(seed, "select"), beta)
    rho_star = float(rhos[index])
    model = learner.with_margin(rho_star).train(S, derive_seed(seed, "train"))
    total = priv.epsilon + learner.priv.epsilon
    notes = [
        "selection epsilon %g + learner epsilon %g = total epsilon %g, delta %g"
        % (priv.epsilon, learner.priv.epsilon, total, learner.priv.delta),
    ]
    report = evaluate_bounds(kind, rhos, risks, stats, learner.constants, selected=index, notes=notes)
    return MarginSelection(
        rho_star=rho_star,
        index=index,
        model=model,
        report=report,
        selection_epsilon=priv.epsilon,
        total_epsilon=total,
        delta=learner.priv.delta,
    )


def select_margin_nonprivate(S, learner, kind=None, seed=0):
    """Baseline: argmin of F over the grid without noise. This reveals the data
    through the choice of rho and is not differentially private."""
    kind = _learner_kind(learner, kind)
    rhos, risks, stats, F, sens = _score_grid(S, learner, kind)
    index = int(np.argmin(F))
    rho_star = float(rhos[index])
    model = learner.with_margin(rho_star).train(S, derive_seed(seed, "train"))
    notes = ["NON-PRIVATE margin selection: rho was chosen without noise; no privacy guarantee for the pair"]
    report = evaluate_bounds(kind, rhos, risks, stats, learner.constants, selected=index, notes=notes)
    return MarginSelection(
        rho_star=rho_star,
        index=index,
        model=model,
        report=report,
        selection_epsilon=float("inf"),
        total_epsilon=float("inf"),
        delta=learner.priv.delta,
        private=False,
    )
