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

from dpmargin.core.errors import ParameterError, ParseError
from dpmargin.util.config import (
    AnalysisConstants,
    coerce_options,
    read_config,
    read_manifest,
    resolve_config,
    write_config,
    write_manifest,
)
from dpmargin.util.margin_select import select
from dpmargin.util.train_model import train


def test_read_write_config(tmp_path):
    path = str(tmp_path / "run.cfg")
    write_config(path, {"eps": 0.5, "algo": "eff-linear", "seed": 3, "rho": None}, comment="test")
    values = read_config(path)
    assert values == {"eps": "0.5", "algo": "eff-linear", "seed": "3"}
    with open(path, "a") as f:
        f.write("\n# trailing comment\nkernel-r = 2\n")
    assert read_config(path)["kernel_r"] == "2"


def test_read_config_errors(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("eps=1\n\nno equals sign\n")
    with pytest.raises(ParseError) as e:
        read_config(str(path))
    assert e.value.lineno == 3
    path.write_text("=1\n")
    with pytest.raises(ParseError):
        read_config(str(path))


def test_resolve_config(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("eps=0.5\nseed=4\nalgo=nn\n")
    defaults = {"eps": 1.0, "seed": 0, "algo": None, "beta": 0.1}
    values = resolve_config(defaults, str(path), {"seed": 7, "beta": None})
    assert values == {"eps": 0.5, "seed": 7, "algo": "nn", "beta": 0.1}
    assert resolve_config(defaults) == defaults


def test_coerce_options():
    values = coerce_options(train, {"seed": "3", "eps": "0.5", "algo": "nn", "cover_cap": "1e5"})
    assert values == {"seed": 3, "eps": 0.5, "algo": "nn", "cover_cap": 100000}
    assert coerce_options(select, {"non_private": "true"})["non_private"] is True
    assert coerce_options(select, {"non_private": "0"})["non_private"] is False
    with pytest.raises(ParameterError):
        coerce_options(train, {"no_such_option": "1"})
    with pytest.raises(ParameterError):
        coerce_options(train, {"eps": "one"})


def test_analysis_constants():
    c = AnalysisConstants.from_dict({"cover_cap": "1e4", "jl_constant": "4", "algo": "nn", "rff_cap": None})
    assert c.cover_cap == 10**4 and c.jl_constant == 4.0
    assert c.rff_cap == AnalysisConstants().rff_cap
    assert c.as_dict()["cover_cap"] == 10**4


def test_cover_cap_from_environment(monkeypatch):
    monkeypatch.setenv("DPM_COVER_CAP", "500")
    assert AnalysisConstants().cover_cap == 500


def test_manifest(tmp_path):
    write_manifest(str(tmp_path), "train", {"eps": 1.0, "algo": "pure-linear"})
    command, values = read_manifest(str(tmp_path / "manifest.txt"))
    assert command == "train"
    assert values == {"eps": "1.0", "algo": "pure-linear"}
    write_config(str(tmp_path / "other.txt"), {"eps": 1.0})
    with pytest.raises(ParameterError):
        read_manifest(str(tmp_path / "other.txt"))
