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

"""Non-private empirical risk minimization over the ball B^d(lam), used as the
reference value in utility checks and as the statistic g_rho(S) of margin
selection. Results are plain dicts like the other analysis passes."""

import numpy as np
import warnings

from dpmargin.core.losses import hinge_risk, hinge_subgradient, margin_risk
from dpmargin.util.basic import project_to_ball

DEFAULT_STEPS = 300
# warn if the certified optimality gap exceeds this
GAP_WARN_THRESH = 0.05


def hinge_erm(X, y, rho, lam, steps=DEFAULT_STEPS, w0=None, warn=False):
    """Projected subgradient descent on the empirical rho-hinge risk over
    ||w|| <= lam. Returns a dict with the best iterate "weights", its risk
    "value" and "gap", a Frank-Wolfe bound on value - min (valid because the
    problem is convex)."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    m, d = X.shape
    r = max(float(np.linalg.norm(X, axis=1).max()), 1e-300)
    G = r / rho
    w = np.zeros(d) if w0 is None else project_to_ball(np.array(w0, dtype=np.float64), lam)
    best_w, best_val, best_g = None, np.inf, None
    for t in range(steps + 1):
        u = y * (X @ w)
        val = hinge_risk(u, rho)
        g = X.T @ (y * hinge_subgradient(u, rho)) / m
        if val < best_val:
            best_w, best_val, best_g = w, val, g
        if t == steps:
            break
        eta = 2.0 * lam / (G * np.sqrt(t + 1))
        w = project_to_ball(w - eta * g, lam)
    gap = max(float(best_g @ best_w + lam * np.linalg.norm(best_g)), 0.0)
    if warn and gap > GAP_WARN_THRESH:
        warnings.warn("hinge ERM oracle optimality gap %.4f at rho=%g exceeds %g" % (gap, rho, GAP_WARN_THRESH))
    return {"weights": best_w, "value": float(best_val), "gap": gap}


def hinge_erm_grid(X, y, rhos, lam, steps=DEFAULT_STEPS, warn=False):
    """g_rho = min hinge risk over B^d(lam) for every rho in rhos. Solutions are
    pooled across levels: a solution at a larger margin, rescaled by the ratio
    of margins, has the same risk at the smaller one, which keeps the returned
    values nondecreasing in rho."""
    rhos = np.asarray(rhos, dtype=np.float64)
    order = np.argsort(-rhos)
    values = np.empty(rhos.size)
    gaps = np.empty(rhos.size)
    weights = [None] * rhos.size
    prev = None
    for j in order:
        warm = None if prev is None else prev[0] * (rhos[j] / prev[1])
        res = hinge_erm(X, y, rhos[j], lam, steps=steps, w0=warm, warn=warn)
        if warm is not None:
            warm_val = hinge_risk(y * (X @ warm), rhos[j])
            if warm_val < res["value"]:
                res = {"weights": warm, "value": float(warm_val), "gap": res["gap"]}
        values[j], gaps[j], weights[j] = res["value"], res["gap"], res["weights"]
        prev = (res["weights"], rhos[j])
    return {"values": values, "gaps": gaps, "weights": weights}


def direction_pool(X, y, rhos, lam, steps=DEFAULT_STEPS):
    "Candidate unit directions: hinge ERM solutions at every rho plus the label-weighted mean."
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    pool = [X.T @ y]
    for w in hinge_erm_grid(X, y, rhos, lam, steps=steps)["weights"]:
        pool.append(w)
    pool = np.asarray(pool)
    norms = np.linalg.norm(pool, axis=1, keepdims=True)
    pool = pool[norms[:, 0] > 0] / norms[norms[:, 0] > 0]
    if pool.shape[0] == 0:
        pool = np.eye(X.shape[1])[:1]
    return pool


def margin_erm(X, y, rhos, lam, pool=None, steps=DEFAULT_STEPS):
    """Heuristic minimum empirical rho-margin risk over B^d(lam) for every rho:
    the best of a fixed pool of directions scaled to norm lam. The pool is the
    same at every level, so the values are nondecreasing in rho; they upper
    bound the true minimum."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    rhos = np.atleast_1d(np.asarray(rhos, dtype=np.float64))
    if pool is None:
        pool = direction_pool(X, y, rhos, lam, steps=steps)
    scores = (X @ (lam * pool).T) * y[:, None]
    values = np.array([margin_risk(scores, rho, axis=0).min() for rho in rhos])
    return {"values": values, "pool": pool}
