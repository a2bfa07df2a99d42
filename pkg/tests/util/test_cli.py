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
import os

from dpmargin.core.dataset import load_dataset
from dpmargin.core.losses import zero_one_risk
from dpmargin.util.cli import EXIT_CAP, EXIT_OK, EXIT_PARAMETER, run
from dpmargin.util.serialize import load_model
from dpmargin.util.test import write_test_dataset


@pytest.fixture
def two_cluster_file(tmp_path):
    return write_test_dataset("two-cluster-2d", out_dir=str(tmp_path))


def read(path):
    with open(path, encoding="utf-8") as f:
        return f.read()


def test_gen_appendix_e(tmp_path):
    out = str(tmp_path / "gen")
    assert run(["gen", "--kind", "appendix_e", "--m", "10000", "--seed", "7", "--out", out]) == EXIT_OK
    S = load_dataset(os.path.join(out, "dataset.csv"))
    assert S.m == 10000 and S.d == 1
    assert zero_one_risk(S.scores(np.array([10.0]))) == pytest.approx(0.05, abs=0.01)
    manifest = read(os.path.join(out, "manifest.txt"))
    assert "command=gen" in manifest and "seed=7" in manifest


def test_gen_libsvm(tmp_path):
    out = str(tmp_path / "gen")
    args = ["gen", "--kind", "noisy_margin", "--m", "50", "--d", "5", "--format", "libsvm", "--out", out]
    assert run(args) == EXIT_OK
    assert load_dataset(os.path.join(out, "dataset.svm")).d == 5


def test_usage_errors(tmp_path, two_cluster_file):
    assert run(["frobnicate"]) == EXIT_PARAMETER
    assert run([]) == EXIT_PARAMETER
    assert run(["--help"]) == EXIT_OK
    assert run(["gen", "--m", "10", "--out", str(tmp_path)]) == EXIT_PARAMETER
    assert run(["gen", "--kind", "no_such_kind", "--m", "10"]) == EXIT_PARAMETER
    args = ["train", "--algo", "eff-linear", "--data", two_cluster_file, "--delta", "1e-3", "--out", str(tmp_path)]
    assert run(args) == EXIT_PARAMETER
    args = ["train", "--algo", "pure-linear", "--data", two_cluster_file, "--rho", "0.5", "--delta", "1e-5"]
    assert run(args + ["--out", str(tmp_path)]) == EXIT_PARAMETER


def test_argument_error_prints_help(capsys):
    assert run(["gen", "--bogus", "1"]) == EXIT_PARAMETER
    err = capsys.readouterr().err
    assert "--bogus" in err
    # the option list of gen follows the error
    assert "--separation" in err and "--kind" in err


def test_unreadable_inputs(tmp_path, capsys):
    missing = str(tmp_path / "missing.csv")
    out = str(tmp_path / "out")
    args = ["train", "--algo", "eff-linear", "--rho", "0.25", "--delta", "1e-3", "--out", out]
    assert run(args + ["--data", missing]) == EXIT_PARAMETER
    assert "cannot read" in capsys.readouterr().err
    bad = tmp_path / "bad.csv"
    bad.write_bytes(b"1,0.5,0.5\n-1,\xff,0.5\n")
    assert run(args + ["--data", str(bad)]) == EXIT_PARAMETER
    assert "line 2" in capsys.readouterr().err
    assert run(["train", "--config", str(tmp_path / "missing.cfg"), "--out", out]) == EXIT_PARAMETER
    assert run(["report", "--model", str(tmp_path / "missing.txt"), "--data", str(bad), "--out", out]) == EXIT_PARAMETER
    assert run(["replay", str(tmp_path / "missing_manifest.txt")]) == EXIT_PARAMETER


def test_cover_too_large(tmp_path, two_cluster_file):
    args = ["train", "--algo", "pure-linear", "--data", two_cluster_file, "--rho", "0.001", "--lambda", "10"]
    assert run(args + ["--out", str(tmp_path)]) == EXIT_CAP


def test_train_reproducible(tmp_path, two_cluster_file):
    common = ["train", "--algo", "eff-linear", "--data", two_cluster_file, "--rho", "0.25", "--delta", "1e-3", "--seed", "5"]
    a, b, c = (str(tmp_path / x) for x in "abc")
    assert run(common + ["--out", a]) == EXIT_OK
    assert run(common + ["--out", b]) == EXIT_OK
    assert read(os.path.join(a, "model.txt")) == read(os.path.join(b, "model.txt"))
    assert run(["replay", os.path.join(a, "manifest.txt"), "--out", c]) == EXIT_OK
    assert read(os.path.join(a, "model.txt")) == read(os.path.join(c, "model.txt"))
    model = load_model(os.path.join(a, "model.txt"))
    assert model.provenance["algo"] == "eff-linear" and model.provenance["seed"] == 5


def test_train_from_config(tmp_path, two_cluster_file):
    cfg = tmp_path / "train.cfg"
    cfg.write_text("algo=pure-linear\nrho=0.5\neps=2\npure_k_constant=0.05\ndata=%s\n" % two_cluster_file)
    out = str(tmp_path / "out")
    assert run(["train", "--config", str(cfg), "--eps", "0.5", "--out", out]) == EXIT_OK
    model = load_model(os.path.join(out, "model.txt"))
    assert model.provenance["epsilon"] == 0.5 and model.provenance["rho"] == 0.5


def test_select_margin_command(tmp_path, two_cluster_file):
    out = str(tmp_path / "sel")
    args = ["select-margin", "--algo", "eff-linear", "--data", two_cluster_file, "--eps", "1", "--delta", "1e-3"]
    assert run(args + ["--out", out]) == EXIT_OK
    report = read(os.path.join(out, "report.md"))
    assert "Total privacy budget: epsilon 2" in report
    assert read(os.path.join(out, "report.csv")).startswith("rho,F,sensitivity,selected,g\n")
    assert os.path.isfile(os.path.join(out, "model.txt"))


def test_report_command(tmp_path, two_cluster_file):
    train_out, report_out = str(tmp_path / "train"), str(tmp_path / "report")
    args = ["train", "--algo", "eff-linear", "--data", two_cluster_file, "--rho", "0.25", "--delta", "1e-3"]
    assert run(args + ["--out", train_out]) == EXIT_OK
    model = os.path.join(train_out, "model.txt")
    assert run(["report", "--model", model, "--data", two_cluster_file, "--out", report_out]) == EXIT_OK
    md = read(os.path.join(report_out, "report.md"))
    assert "## Model metrics" in md and "F2_eff_linear" in md


def test_audit_command(tmp_path):
    out = str(tmp_path / "rr")
    assert run(["audit", "--mechanism", "randomized-response", "--trials", "10000", "--out", out]) == EXIT_OK
    assert read(os.path.join(out, "audit.csv")).startswith("bucket,count_S,count_S',log_ratio\n")
    assert "## Privacy audit: randomized-response" in read(os.path.join(out, "report.md"))
    out = str(tmp_path / "exp")
    assert run(["audit", "--mechanism", "exp-mech", "--dataset", "audit-4pt", "--trials", "5000", "--out", out]) == EXIT_OK
    out = str(tmp_path / "pure")
    args = ["audit", "--mechanism", "pure-linear", "--pure-k-constant", "0.25", "--trials", "5000", "--out", out]
    assert run(args) == EXIT_OK
    assert run(["audit", "--mechanism", "pure-linear", "--record", "9", "--out", out]) == EXIT_PARAMETER
