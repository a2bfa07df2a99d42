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

from dpmargin.util.basic import (
    get_cover_cap,
    get_num_default_workers,
    iter_row_chunks,
    next_power_of_two,
    pad_columns_to,
    project_rows_to_ball,
    project_to_ball,
)


def test_next_power_of_two():
    assert [next_power_of_two(x) for x in [1, 2, 3, 5, 64, 65]] == [1, 2, 4, 8, 64, 128]
    with pytest.raises(AssertionError):
        next_power_of_two(0)


def test_pad_columns_to():
    A = np.eye(3)
    B = pad_columns_to(A, 5, val=-1)
    assert B.shape == (3, 5)
    assert (B[:, :3] == A).all()
    assert (B[:, 3:] == -1).all()
    assert pad_columns_to(A, 3) is A


def test_iter_row_chunks():
    chunks = list(iter_row_chunks(10, 4))
    assert chunks == [slice(0, 4), slice(4, 8), slice(8, 10)]
    assert list(iter_row_chunks(0, 4)) == []


def test_project_to_ball():
    X = np.array([[3.0, 4.0], [0.3, 0.4], [0.0, 0.0]])
    P = project_rows_to_ball(X, 1.0)
    assert np.allclose(P[0], [0.6, 0.8])
    assert (P[1:] == X[1:]).all()
    assert np.allclose(project_to_ball(np.array([3.0, 4.0]), 2.0), [1.2, 1.6])


def test_env_defaults(monkeypatch):
    monkeypatch.delenv("DPM_THREADS", raising=False)
    monkeypatch.delenv("DPM_COVER_CAP", raising=False)
    assert get_num_default_workers() == 1
    assert get_cover_cap() == 10**6
    monkeypatch.setenv("DPM_THREADS", "3")
    monkeypatch.setenv("DPM_COVER_CAP", "1e4")
    assert get_num_default_workers() == 3
    assert get_cover_cap() == 10**4
