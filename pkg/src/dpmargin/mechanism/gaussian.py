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

from dpmargin.core.errors import ParameterError


def gaussian_sigma(eps, delta, l2_sensitivity, compositions=1):
    """Noise standard deviation for releasing `compositions` adaptive Gaussian
    queries of the given L2 sensitivity under an overall (eps, delta) budget:
    sigma = l2_sensitivity * sqrt(2 T ln(1.25 T / delta)) / eps."""
    if not eps > 0:
        raise ParameterError("epsilon must be positive, got %s" % eps)
    if delta == 0:
        raise ParameterError("unsupported: the Gaussian mechanism needs delta > 0")
    if not (0 < delta < 1):
        raise ParameterError("delta must lie in (0, 1), got %s" % delta)
    if not l2_sensitivity >= 0:
        raise ParameterError("sensitivity must be nonnegative")
    T = int(compositions)
    if T < 1:
        raise ParameterError("compositions must be >= 1")
    return l2_sensitivity * np.sqrt(2.0 * T * np.log(1.25 * T / delta)) / eps
