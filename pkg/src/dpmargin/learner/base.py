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

"""
Guide to writing learners
-------------------------

* Your learner must inherit the Learner abstract base class and set the
  class attributes name (the CLI/registry key) and bound_kind (the margin
  bound it satisfies, see dpmargin.analysis.bounds).
* train(dataset, seed) returns a model and must be deterministic given the
  seed. Derive sub-streams with dpmargin.core.rng.derive_seed instead of
  drawing from one shared generator.
* empirical_statistics(dataset, rhos) returns g_rho(S) for every rho of a
  margin grid; margin selection relies on it being nondecreasing in rho.
* Learners that select from a finite candidate set with the exponential
  mechanism should inherit CoverLearner and implement candidates(),
  candidate_scores() and model_for(). Everything candidates() draws must be
  independent of the labels and of any record that may change, so that the
  privacy guarantee only rests on the mechanism.
"""

import copy
import numpy as np
from abc import ABC, abstractmethod

from dpmargin.analysis.bounds import BoundStats
from dpmargin.core.params import check_beta
from dpmargin.core.rng import derive_seed, make_rng
from dpmargin.mechanism import ScoredCandidates, exponential_mechanism, exponential_probabilities
from dpmargin.util.config import AnalysisConstants


class Learner(ABC):
    """Learner class all private learners are based on. Holds the privacy
    budget, the margin parameters, the confidence beta and the analysis
    constants."""

    name = None
    bound_kind = None

    def __init__(self, priv, marg, beta=0.1, constants=None, progress=False):
        super().__init__()
        self.priv = priv
        self.marg = marg
        self.beta = check_beta(beta)
        self.constants = constants if constants is not None else AnalysisConstants()
        self.progress = progress

    def with_margin(self, rho):
        "Return a copy of this learner configured for margin rho."
        ret = copy.copy(self)
        ret.marg = self.marg.with_rho(rho)
        return ret

    def output_bound(self, dataset):
        "Upper bound h_max on |h(x)| over the class, used to lay out margin grids."
        return self.marg.lam * dataset.radius_r

    def bound_stats(self, dataset):
        return BoundStats(
            m=dataset.m,
            beta=self.beta,
            epsilon=self.priv.epsilon,
            delta=self.priv.delta,
            lam=self.marg.lam,
            r=dataset.radius_r,
        )

    @abstractmethod
    def train(self, dataset, seed):
        pass

    @abstractmethod
    def empirical_statistics(self, dataset, rhos):
        pass


class CoverLearner(Learner):
    """Pure-DP learner that runs the exponential mechanism with sensitivity 1/m
    over a data-independent finite candidate set."""

    def sensitivity(self, dataset):
        return 1.0 / dataset.m

    @abstractmethod
    def candidates(self, dataset, seed):
        pass

    @abstractmethod
    def candidate_scores(self, cands, dataset):
        pass

    @abstractmethod
    def model_for(self, cands, index, provenance):
        pass

    def candidate_count(self, cands):
        return len(cands)

    def scored(self, cands, dataset):
        return ScoredCandidates(self.candidate_scores(cands, dataset), sensitivity=self.sensitivity(dataset))

    def selection_probabilities(self, cands, dataset):
        "Exact output distribution over candidate indices."
        return exponential_probabilities(self.scored(cands, dataset), self.priv.epsilon)

    def train(self, dataset, seed):
        self.priv.require_pure()
        cands = self.candidates(dataset, derive_seed(seed, "public"))
        scored = self.scored(cands, dataset)
        index = exponential_mechanism(scored, self.priv.epsilon, make_rng(seed, "mechanism"))
        provenance = {
            "algo": self.name,
            "seed": int(seed),
            "epsilon": self.priv.epsilon,
            "delta": self.priv.delta,
            "rho": self.marg.rho,
            "lambda": self.marg.lam,
            "beta": self.beta,
            "cover_size": self.candidate_count(cands),
            "selected": index,
            "selected_score": float(scored.scores[index]),
            "best_score": float(np.max(scored.scores)),
        }
        return self.model_for(cands, index, provenance)
