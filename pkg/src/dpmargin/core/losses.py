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

"""Zero-one, margin and hinge losses.

All risks take precomputed margins scores_i = y_i * h(x_i), so the same code
serves linear, kernel and network hypotheses. The indicator convention is
1[u <= rho]: a score of exactly zero is an error."""

import numpy as np

from dpmargin.core.errors import ParameterError


def _as_scores(scores):
    scores = np.asarray(scores, dtype=np.float64)
    if scores.size == 0:
        raise ParameterError("empty score array")
    return scores


def zero_one_risk(scores, axis=None):
    "Fraction of scores <= 0."
    scores = _as_scores(scores)
    return np.mean(scores <= 0, axis=axis)


def margin_risk(scores, rho, axis=None):
    "Fraction of scores <= rho."
    if rho < 0:
        raise ParameterError("margin rho must be nonnegative, got %s" % rho)
    scores = _as_scores(scores)
    return np.mean(scores <= rho, axis=axis)


def hinge_loss(u, rho):
    "Pointwise rho-hinge loss max(1 - u/rho, 0)."
    if not rho > 0:
        raise ParameterError("hinge margin rho must be positive, got %s" % rho)
    return np.maximum(1.0 - np.asarray(u, dtype=np.float64) / rho, 0.0)


def hinge_risk(scores, rho, axis=None):
    scores = _as_scores(scores)
    return np.mean(hinge_loss(scores, rho), axis=axis)


def hinge_subgradient(u, rho):
    "A subgradient of the rho-hinge loss with respect to u (0 at the kink)."
    return np.where(np.asarray(u) < rho, -1.0 / rho, 0.0)


def smoothed_hinge(u, rho, mu):
    """Moreau envelope of the rho-hinge loss with parameter mu. It is still
    1/rho-Lipschitz and has a 1/mu-Lipschitz derivative."""
    u = np.asarray(u, dtype=np.float64)
    lin = (rho - u) / rho - mu / (2 * rho**2)
    quad = (u - rho) ** 2 / (2 * mu)
    return np.where(u <= rho - mu / rho, lin, np.where(u < rho, quad, 0.0))


def smoothed_hinge_grad(u, rho, mu):
    u = np.asarray(u, dtype=np.float64)
    return np.where(u <= rho - mu / rho, -1.0 / rho, np.where(u < rho, (u - rho) / mu, 0.0))


def linear_scores(weights, features, labels):
    "Margins y_i * <w, x_i> for a batch of weight vectors (last axis d) or a single one."
    weights = np.asarray(weights, dtype=np.float64)
    return (features @ weights.T) * (labels if weights.ndim == 1 else labels[:, None])
