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

import pytest

import numpy as np

from dpmargin.core.errors import ParameterError
from dpmargin.core.params import MarginParams, PrivacyParams, check_beta
from dpmargin.core.rng import derive_seed, make_rng, split_rngs


def test_privacy_params():
    p = PrivacyParams(1.0)
    assert p.is_pure
    p.require_pure()
    q = PrivacyParams(1.0, 1e-4)
    assert not q.is_pure
    with pytest.raises(ParameterError):
        q.require_pure()
    q.require_approx(2000)
    with pytest.raises(ParameterError):
        q.require_approx(10**5)
    with pytest.raises(ParameterError):
        PrivacyParams(20.0, 1e-4).require_approx(100)
    with pytest.raises(ParameterError):
        p.require_approx(10)
    for eps, delta in [(0.0, 0.0), (-1.0, 0.0), (1.0, 1.0), (1.0, -0.1)]:
        with pytest.raises(ParameterError):
            PrivacyParams(eps, delta)


def test_margin_params():
    mp = MarginParams(0.5, 2.0)
    assert mp.with_rho(0.25) == MarginParams(0.25, 2.0)
    with pytest.raises(ParameterError):
        MarginParams(0.0, 1.0)
    with pytest.raises(ParameterError):
        MarginParams(0.5, -1.0)
    assert check_beta(0.1) == 0.1
    with pytest.raises(ParameterError):
        check_beta(1.0)


def test_derived_streams():
    assert derive_seed(7, "projection") == derive_seed(7, "projection")
    assert derive_seed(7, "projection") != derive_seed(7, "cover")
    assert derive_seed(7, "projection") != derive_seed(8, "projection")
    assert derive_seed(7, "round", 0) != derive_seed(7, "round", 1)
    a = make_rng(7, "x").standard_normal(5)
    b = make_rng(7, "x").standard_normal(5)
    assert (a == b).all()
    rngs = split_rngs(3, 4)
    draws = [r.integers(1 << 30) for r in rngs]
    assert len(set(draws)) == 4
    assert draws == [r.integers(1 << 30) for r in split_rngs(3, 4)]
    assert 0 <= derive_seed(-1, "neg") < 2**64
    assert isinstance(make_rng(0), np.random.Generator)
