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

import attrs
import numpy as np

from dpmargin.core.errors import ParameterError


@attrs.frozen
class PrivacyParams:
    """Privacy budget (epsilon, delta). delta=0 selects pure DP. Learners check
    their own regime with require_pure() or require_approx(m)."""

    epsilon: float = attrs.field(converter=float)
    delta: float = attrs.field(default=0.0, converter=float)

    def __attrs_post_init__(self):
        if not self.epsilon > 0:
            raise ParameterError("epsilon must be positive, got %s" % self.epsilon)
        if not (0.0 <= self.delta < 1.0):
            raise ParameterError("delta must lie in [0, 1), got %s" % self.delta)

    @property
    def is_pure(self):
        return self.delta == 0.0

    def require_pure(self):
        if not self.is_pure:
            raise ParameterError("pure-DP learner requires delta = 0, got delta=%g" % self.delta)

    def require_approx(self, m):
        "Check 0 < delta < 1/m and epsilon <= ln(1/delta)."
        if not (0.0 < self.delta < 1.0 / m):
            raise ParameterError("requires 0 < delta < 1/m = %g, got delta=%g" % (1.0 / m, self.delta))
        if self.epsilon > np.log(1.0 / self.delta):
            raise ParameterError(
                "requires epsilon <= ln(1/delta) = %g, got epsilon=%g" % (np.log(1.0 / self.delta), self.epsilon)
            )


@attrs.frozen
class MarginParams:
    "Confidence margin rho and norm bound lam."

    rho: float = attrs.field(converter=float)
    lam: float = attrs.field(converter=float)

    def __attrs_post_init__(self):
        if not self.rho > 0:
            raise ParameterError("rho must be positive, got %s" % self.rho)
        if not self.lam > 0:
            raise ParameterError("lambda must be positive, got %s" % self.lam)

    def with_rho(self, rho):
        return attrs.evolve(self, rho=rho)


def check_beta(beta):
    if not (0.0 < beta < 1.0):
        raise ParameterError("beta must lie in (0, 1), got %s" % beta)
    return float(beta)
