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

"""Label-private learner: exponential mechanism over an empirical max-norm
cover of the rho-truncated hypothesis class.

The cover is built from the features alone. Changing one label changes every
candidate's empirical rho/2-margin risk by at most 1/m, so the mechanism is
eps-label-DP. Changing a feature may change the cover, so this is not a
record-level guarantee."""

import attrs
import numpy as np

from dpmargin.analysis.bounds import label_bound_M
from dpmargin.analysis.erm_oracle import margin_erm
from dpmargin.core.errors import ParameterError
from dpmargin.core.losses import margin_risk
from dpmargin.core.params import MarginParams, PrivacyParams, check_beta
from dpmargin.cover.empirical import HypothesisFamily, LinearFamily, empirical_linf_cover
from dpmargin.learner.base import CoverLearner
from dpmargin.learner.linear import LinearModel


@attrs.frozen
class LabelDpConfig:
    """Margin rho, budget epsilon, the hypothesis family and a fat-shattering
    dimension bound at scale rho/32 (None: use linear_fat_dim when needed)."""

    rho: float = attrs.field(converter=float)
    epsilon: float = attrs.field(converter=float)
    family: HypothesisFamily = None
    fat_dim: float = None

    def __attrs_post_init__(self):
        if not self.rho > 0:
            raise ParameterError("rho must be positive, got %s" % self.rho)
        if not self.epsilon > 0:
            raise ParameterError("epsilon must be positive, got %s" % self.epsilon)
        if self.fat_dim is not None and not self.fat_dim >= 1:
            raise ParameterError("fat_dim must be >= 1, got %s" % self.fat_dim)


@attrs.frozen(eq=False)
class CoverHypothesis:
    "Hypothesis of a generic family, identified by its parameter vector."

    family: HypothesisFamily
    params: np.ndarray
    provenance: dict = attrs.field(factory=dict)

    def decision_function(self, X):
        return self.family.evaluate(np.asarray(self.params)[None, :], np.atleast_2d(X))[0]

    def predict(self, X):
        return np.where(self.decision_function(X) > 0, 1, -1)

    def scores(self, dataset):
        return dataset.labels * self.decision_function(dataset.features)


class LabelDpLearner(CoverLearner):
    name = "label-dp"
    bound_kind = "F4_label"

    def __init__(self, priv, marg, beta=0.1, constants=None, progress=False, family=None, fat_dim=None):
        super().__init__(priv, marg, beta, constants, progress)
        self.family = family
        self.fat_dim = fat_dim

    def family_for(self, dataset):
        if self.family is not None:
            return self.family
        return LinearFamily(dataset.d, self.marg.lam, cap=self.constants.cover_cap)

    def bound_stats(self, dataset):
        return attrs.evolve(super().bound_stats(dataset), delta=0.0, fat_dim=self.fat_dim)

    def candidates(self, dataset, seed):
        "rho/2 cover of the rho-truncated class on the features; labels are not read."
        return empirical_linf_cover(self.family_for(dataset), dataset.features, self.marg.rho)

    def candidate_scores(self, cands, dataset):
        return -margin_risk(cands.outputs * dataset.labels, self.marg.rho / 2.0, axis=1)

    def model_for(self, cands, index, provenance):
        provenance = dict(provenance, cover_scale=cands.scale)
        if isinstance(self.family, (LinearFamily, type(None))):
            return LinearModel(cands.params[index], provenance)
        return CoverHypothesis(self.family, cands.params[index], provenance)

    def empirical_statistics(self, dataset, rhos):
        return margin_erm(dataset.features, dataset.labels, rhos, self.marg.lam)["values"]


def train_label_dp(S, cfg, seed=0, beta=0.1, constants=None):
    "eps-label-DP learner; returns the selected cover hypothesis."
    family = cfg.family if cfg.family is not None else LinearFamily(S.d, 1.0)
    lam = getattr(family, "lam", 1.0)
    learner = LabelDpLearner(
        PrivacyParams(cfg.epsilon), MarginParams(cfg.rho, lam), beta, constants, family=family, fat_dim=cfg.fat_dim
    )
    return learner.train(S, seed)


def label_bound(cfg, m, beta, risk=0.0):
    """Evaluate the label-DP generalization bound for a given empirical margin
    risk. Returns a dict with M and each additive term; "bound" is risk
    plus all terms."""
    if int(m) < 1:
        raise ParameterError("m must be >= 1")
    beta = check_beta(beta)
    if cfg.fat_dim is None:
        raise ParameterError("label_bound needs fat_dim; see dpmargin.analysis.bounds.linear_fat_dim")
    if not 0 <= risk <= 1:
        raise ParameterError("margin risk must lie in [0, 1]")
    M = label_bound_M(cfg.fat_dim, m, beta)
    ret = {
        "M": float(M),
        "sqrt_term": float(2.0 * np.sqrt(M / m) * np.sqrt(risk)),
        "fast_term": float(2.0 * M / m),
        "privacy_term": float(64.0 * M * np.log(2.0 / beta) / (cfg.epsilon * m)),
    }
    ret["bound"] = float(risk) + ret["sqrt_term"] + ret["fast_term"] + ret["privacy_term"]
    return ret
