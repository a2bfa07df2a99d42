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

"""Margin-bound functions F(rho, t) of the private learners and the
sensitivities of F(rho, g_rho(S)) as functions of the data.

Each F is the learner's high-probability bound on the true error, written as
the empirical statistic t plus additive terms. Big-O factors are replaced by
AnalysisConstants.bound_constant (default 1) except where the bound has an
explicit constant. Logarithms of ratios that may drop below e inside O(.) are
floored at 1."""

import attrs
import csv
import io
import numpy as np

from dpmargin.core.errors import MonotonicityError, ParameterError
from dpmargin.util.config import AnalysisConstants

KIND_F1 = "F1_pure_linear"
KIND_F2 = "F2_eff_linear"
KIND_F3 = "F3_kernel"
KIND_F4 = "F4_label"
KIND_F5 = "F5_nn"
bound_kinds = [KIND_F1, KIND_F2, KIND_F3, KIND_F4, KIND_F5]

bound_formulas = {
    KIND_F1: "t + C*(sqrt(t*A) + Gamma), A = L^2 r^2 log^2(m/b)/(m rho^2) + log(1/b)/m, "
    "Gamma = L^2 r^2 log(m/b) log(Lr/(b rho))/(rho^2 eps m) + A",
    KIND_F2: "t + C*(sqrt(log(1/b)/m) + (L r/rho)(1/sqrt(m) + sqrt(log(m/b) log(1/b)) log^(3/4)(1/delta)/sqrt(eps m)))",
    KIND_F3: "same as F2 with the kernel radius r and RKHS norm bound L",
    KIND_F4: "t + C*(2 sqrt(t M/m) + 2M/m + 64 M log(2/b)/(eps m)), "
    "M = 1 + d log2(2 c^2 m) log2(2 c e m/d) + log(2/b), c = 17",
    KIND_F5: "t + C*(a sqrt(N theta)/(rho sqrt(m)) + a^2 N theta/(rho^2 eps m)), a = r (2 eta L)^L, "
    "theta = log(L m/b) log(r (eta L)^L/rho)",
}

LABEL_BOUND_C = 17


def normalize_kind(kind):
    "Accept both F1 and F1_pure_linear style names."
    for k in bound_kinds:
        if kind == k or kind == k.split("_")[0]:
            return k
    raise ParameterError("unknown bound kind %s, expected one of %s" % (kind, bound_kinds))


@attrs.frozen
class BoundStats:
    """Inputs of the bound functions. risk is the empirical statistic t; the
    optional fields are needed by F4 (fat_dim) and F5 (layers, width, eta)."""

    m: int
    beta: float
    epsilon: float
    lam: float
    r: float
    delta: float = 0.0
    risk: float = 0.0
    fat_dim: float = None
    layers: int = None
    width: int = None
    eta: float = None

    def with_risk(self, risk):
        return attrs.evolve(self, risk=float(risk))


def _logf(x):
    return np.log(max(x, np.e))


def _require(stats, *names):
    for n in names:
        if getattr(stats, n) is None:
            raise ParameterError("missing bound statistic %s" % n)


def linear_fat_dim(lam, r, scale):
    "Fat-shattering dimension bound ceil((lam r / scale)^2) of bounded-norm linear predictors."
    return max(1.0, float(np.ceil((lam * r / scale) ** 2)))


def label_bound_M(fat_dim, m, beta, c=LABEL_BOUND_C):
    d = float(fat_dim)
    return 1.0 + d * np.log2(2 * c**2 * m) * np.log2(2 * c * np.e * m / d) + np.log(2.0 / beta)


def _f1_terms(rho, s):
    lr2 = (s.lam * s.r) ** 2
    lmb = np.log(s.m / s.beta)
    A = lr2 * lmb**2 / (s.m * rho**2) + np.log(1.0 / s.beta) / s.m
    gamma = lr2 * lmb * _logf(s.lam * s.r / (s.beta * rho)) / (rho**2 * s.epsilon * s.m) + A
    return A, gamma


def _f2_extra(rho, s):
    if not s.delta > 0:
        raise ParameterError("F2/F3 need delta > 0")
    return np.sqrt(np.log(1.0 / s.beta) / s.m) + (s.lam * s.r / rho) * (
        1.0 / np.sqrt(s.m)
        + np.sqrt(np.log(s.m / s.beta) * np.log(1.0 / s.beta)) * np.log(1.0 / s.delta) ** 0.75 / np.sqrt(s.epsilon * s.m)
    )


def _f4_M(rho, s):
    d = s.fat_dim if s.fat_dim is not None else linear_fat_dim(s.lam, s.r, rho / 32.0)
    # d log(2cem/d) is increasing only up to d = 2cm
    return label_bound_M(min(d, 2 * LABEL_BOUND_C * s.m), s.m, s.beta)


def _f5_terms(rho, s):
    _require(s, "layers", "width", "eta")
    a = s.r * (2 * s.eta * s.lam) ** s.layers
    theta = np.log(s.layers * s.m / s.beta) * _logf(s.r * (s.eta * s.lam) ** s.layers / rho)
    return a, theta


def bound_F(kind, rho, stats, constants=None):
    "Evaluate F(rho, stats.risk) for the given kind."
    kind = normalize_kind(kind)
    if not rho > 0:
        raise ParameterError("rho must be positive")
    C = (constants or AnalysisConstants()).bound_constant
    t = float(stats.risk)
    if kind == KIND_F1:
        A, gamma = _f1_terms(rho, stats)
        return t + C * (np.sqrt(t * A) + gamma)
    elif kind in (KIND_F2, KIND_F3):
        return t + C * _f2_extra(rho, stats)
    elif kind == KIND_F4:
        M = _f4_M(rho, stats)
        m = stats.m
        return t + C * (2 * np.sqrt(t * M / m) + 2 * M / m + 64 * M * np.log(2.0 / stats.beta) / (stats.epsilon * m))
    else:
        a, theta = _f5_terms(rho, stats)
        N = stats.width
        return t + C * (
            a * np.sqrt(N * theta) / (rho * np.sqrt(stats.m)) + a**2 * N * theta / (rho**2 * stats.epsilon * stats.m)
        )


def sensitivity_bound(kind, rho, stats, constants=None):
    "Sensitivity of rho -> F(rho, g_rho(S)) with respect to one record."
    kind = normalize_kind(kind)
    if not rho > 0:
        raise ParameterError("rho must be positive")
    C = (constants or AnalysisConstants()).bound_constant
    m = stats.m
    if kind == KIND_F1:
        lmb = np.log(m / stats.beta)
        return C * (1.0 / m + np.sqrt((stats.lam * stats.r * lmb / rho) ** 2 + np.log(1.0 / stats.beta)) / m)
    elif kind in (KIND_F2, KIND_F3):
        return 2.0 * stats.lam * stats.r / (m * rho)
    elif kind == KIND_F4:
        return C * (1.0 + np.sqrt(_f4_M(rho, stats))) / m
    else:
        return C / m


def check_monotonicity(kind, rhos, risks, stats, constants=None, rtol=1e-9):
    """Raise MonotonicityError unless risks are nondecreasing in rho and
    F(rho, t) is nonincreasing in rho for every t in risks."""
    rhos = np.asarray(rhos, dtype=np.float64)
    risks = np.asarray(risks, dtype=np.float64)
    order = np.argsort(rhos)
    r_sorted = risks[order]
    if np.any(np.diff(r_sorted) < -rtol):
        raise MonotonicityError("empirical statistic g_rho(S) decreases in rho: %s" % r_sorted)
    for t in np.unique(risks):
        vals = np.array([bound_F(kind, rho, stats.with_risk(t), constants) for rho in rhos[order]])
        if np.any(np.diff(vals) > rtol * np.maximum(np.abs(vals[:-1]), 1.0)):
            raise MonotonicityError("F(rho, t=%g) of kind %s increases in rho: %s" % (t, kind, vals))


@attrs.frozen(eq=False)
class BoundReport:
    """Evaluated bound terms over a margin grid, with sensitivities and the
    selected entry (or None)."""

    kind: str
    rhos: np.ndarray
    risks: np.ndarray
    values: np.ndarray
    sensitivities: np.ndarray
    constants: dict
    stats: dict
    selected: int = None
    notes: tuple = ()

    def rows(self):
        for j in range(len(self.rhos)):
            yield {
                "rho": float(self.rhos[j]),
                "g": float(self.risks[j]),
                "F": float(self.values[j]),
                "sensitivity": float(self.sensitivities[j]),
                "selected": int(self.selected == j),
            }

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["rho", "F", "sensitivity", "selected", "g"])
        for row in self.rows():
            fmt = ["%.17g" % row[key] for key in ("rho", "F", "sensitivity")]
            writer.writerow(fmt + [row["selected"], "%.17g" % row["g"]])
        return buf.getvalue()

    def to_markdown(self):
        lines = ["## Bound report: %s" % self.kind, "", "Formula: `%s`" % bound_formulas[self.kind], ""]
        lines += ["| rho | g_rho(S) | F | sensitivity | selected |", "|---|---|---|---|---|"]
        for row in self.rows():
            lines.append(
                "| %.6g | %.6g | %.6g | %.6g | %s |"
                % (row["rho"], row["g"], row["F"], row["sensitivity"], "yes" if row["selected"] else "")
            )
        lines += ["", "Statistics: " + ", ".join("%s=%s" % (k, v) for k, v in sorted(self.stats.items()) if v is not None)]
        lines += ["Constants: " + ", ".join("%s=%s" % (k, v) for k, v in sorted(self.constants.items()))]
        for note in self.notes:
            lines.append("- " + note)
        return "\n".join(lines) + "\n"


def evaluate_bounds(kind, rhos, risks, stats, constants=None, selected=None, notes=()):
    "Build a BoundReport for the grid rhos with empirical statistics risks."
    kind = normalize_kind(kind)
    constants = constants or AnalysisConstants()
    rhos = np.asarray(rhos, dtype=np.float64)
    risks = np.asarray(risks, dtype=np.float64)
    values = np.array([bound_F(kind, rho, stats.with_risk(t), constants) for rho, t in zip(rhos, risks)])
    sens = np.array([sensitivity_bound(kind, rho, stats, constants) for rho in rhos])
    return BoundReport(
        kind=kind,
        rhos=rhos,
        risks=risks,
        values=values,
        sensitivities=sens,
        constants=constants.as_dict(),
        stats=attrs.asdict(stats),
        selected=selected,
        notes=tuple(notes),
    )
