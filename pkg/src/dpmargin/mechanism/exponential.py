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

"""Exponential mechanism and its generalization to per-candidate sensitivities.

Sampling is Gumbel-max over stabilized log-weights, which has exactly the
softmax output distribution and does not overflow for large eps * score.
np.argmax resolves ties to the lowest index."""

import attrs
import numpy as np
from scipy.special import softmax

from dpmargin.core.errors import ParameterError


def _scores_converter(x):
    return np.array(x, dtype=np.float64, copy=True).reshape(-1)


def _optional_array(x):
    if x is None:
        return None
    return np.array(x, dtype=np.float64, copy=True).reshape(-1)


@attrs.frozen(eq=False)
class ScoredCandidates:
    """Scores (higher is better) with either one uniform sensitivity or one
    sensitivity per candidate."""

    scores: np.ndarray = attrs.field(converter=_scores_converter)
    sensitivity: float = attrs.field(default=None)
    sensitivities: np.ndarray = attrs.field(default=None, converter=_optional_array)

    def __attrs_post_init__(self):
        if self.scores.size < 1:
            raise ParameterError("need at least one candidate")
        if not np.all(np.isfinite(self.scores)):
            raise ParameterError("candidate scores must be finite")
        if self.sensitivity is None and self.sensitivities is None:
            raise ParameterError("either sensitivity or sensitivities must be given")
        if self.sensitivity is not None and not self.sensitivity > 0:
            raise ParameterError("sensitivity must be positive, got %s" % self.sensitivity)
        if self.sensitivities is not None:
            if self.sensitivities.shape != self.scores.shape:
                raise ParameterError("need one sensitivity per candidate")
            if not np.all(self.sensitivities > 0):
                raise ParameterError("all sensitivities must be positive")

    @property
    def n(self):
        return self.scores.size

    def per_candidate_sensitivities(self):
        if self.sensitivities is not None:
            return self.sensitivities
        return np.full(self.n, float(self.sensitivity))

    def uniform_sensitivity(self):
        "Return the common sensitivity, or None if candidates differ."
        if self.sensitivity is not None:
            return float(self.sensitivity)
        if np.all(self.sensitivities == self.sensitivities[0]):
            return float(self.sensitivities[0])
        return None


def _check_eps(eps):
    if not eps > 0:
        raise ParameterError("epsilon must be positive, got %s" % eps)


def _exp_mech_logits(cands, eps):
    sens = cands.uniform_sensitivity()
    if sens is None:
        raise ParameterError("exponential mechanism needs a uniform sensitivity")
    logits = eps * cands.scores / (2.0 * sens)
    return logits - logits.max()


def _point_mass(values):
    p = np.zeros(values.size)
    p[int(np.argmax(values))] = 1.0
    return p


def exponential_probabilities(cands, eps):
    "Exact output distribution of the exponential mechanism."
    _check_eps(eps)
    if np.isinf(eps):
        return _point_mass(cands.scores)
    return softmax(_exp_mech_logits(cands, eps))


def exponential_mechanism(cands, eps, rng):
    """Return index i with probability proportional to
    exp(eps * score_i / (2 * sensitivity)). eps=inf returns the first maximizer."""
    _check_eps(eps)
    if cands.n == 1:
        return 0
    if np.isinf(eps):
        return int(np.argmax(cands.scores))
    logits = _exp_mech_logits(cands, eps)
    return int(np.argmax(logits + rng.gumbel(size=cands.n)))


def generalized_normalized_scores(cands, eps, beta=0.1):
    """Pairwise-normalized scores of the generalized exponential mechanism.
    With adjusted losses a_i = -score_i + t * sens_i, t = 2 ln(n / beta) / eps,
    candidate i gets s_i = max_j (a_i - a_j) / (sens_i + sens_j) >= 0. Each
    s_i changes by at most 1 between neighboring datasets."""
    sens = cands.per_candidate_sensitivities()
    t = 0.0 if np.isinf(eps) else 2.0 * np.log(cands.n / beta) / eps
    a = -cands.scores + t * sens
    s = (a[:, None] - a[None, :]) / (sens[:, None] + sens[None, :])
    return s.max(axis=1)


def generalized_probabilities(cands, eps, beta=0.1):
    _check_eps(eps)
    if cands.uniform_sensitivity() is not None:
        return exponential_probabilities(cands, eps)
    s = generalized_normalized_scores(cands, eps, beta)
    if np.isinf(eps):
        return _point_mass(-s)
    return softmax(-eps * s / 2.0)


def generalized_exponential_mechanism(cands, eps, rng, beta=0.1):
    """eps-DP selection for candidates whose scores have different
    sensitivities. Samples proportional to exp(-eps * s_i / 2) with s_i from
    generalized_normalized_scores. If all sensitivities are equal this is
    exactly exponential_mechanism, including its use of rng."""
    _check_eps(eps)
    if not (0 < beta < 1):
        raise ParameterError("beta must lie in (0, 1), got %s" % beta)
    sens = cands.uniform_sensitivity()
    if sens is not None:
        return exponential_mechanism(ScoredCandidates(cands.scores, sensitivity=sens), eps, rng)
    s = generalized_normalized_scores(cands, eps, beta)
    if np.isinf(eps):
        return int(np.argmin(s))
    logits = -eps * s / 2.0
    logits = logits - logits.max()
    return int(np.argmax(logits + rng.gumbel(size=cands.n)))


def sample_from(probabilities, n, rng):
    "Draw n i.i.d. indices from a categorical distribution."
    return rng.choice(len(probabilities), size=n, p=probabilities)
