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

"""Empirical privacy audits.

A mechanism is run many times on each dataset of a neighboring pair, its
outputs are discretized into buckets and the largest smoothed log-ratio of
bucket frequencies is reported as an estimate eps_hat. This is a statistical
lower-bound estimate only: a claimed eps is suspicious if eps_hat exceeds it
clearly, and nothing is certified when it does not."""

import attrs
import csv
import hashlib
import multiprocessing as mp
import numpy as np
import warnings
from abc import ABC, abstractmethod
from tqdm import tqdm

from dpmargin.core.dataset import Dataset
from dpmargin.core.errors import ParameterError
from dpmargin.core.rng import derive_seed, make_rng, split_rngs
from dpmargin.mechanism import ScoredCandidates, exponential_probabilities
from dpmargin.util.basic import get_num_default_workers
from dpmargin.util.serialize import dumps_model

RELATION_RECORD = "record"
RELATION_LABEL = "label"
audit_relations = [RELATION_RECORD, RELATION_LABEL]

MIN_TRIALS = 1000
DEFAULT_MIN_COUNT = 20
# trials drawn per rng stream
TRIALS_PER_CHUNK = 50000


def record_neighbors(S, i=0, x=None, y=None):
    """(S, S') with record i replaced; by default by (-x_i, y_i), which keeps
    radius_r and flips the sign of every linear margin on that record."""
    x = -S.features[i] if x is None else x
    y = S.labels[i] if y is None else y
    return S, S.replace_record(i, x, y)


def label_neighbors(S, i=0):
    "(S, S') with the label of record i flipped."
    return S, S.flip_label(i)


def check_neighbors(relation, a, b):
    "Raise ParameterError unless two datasets are neighbors under relation."
    if relation not in audit_relations:
        raise ParameterError("unknown neighboring relation %s, expected one of %s" % (relation, audit_relations))
    if not (isinstance(a, Dataset) and isinstance(b, Dataset)):
        return
    if a.features.shape != b.features.shape:
        raise ParameterError("neighboring datasets must have the same shape")
    rows_x = np.any(a.features != b.features, axis=1)
    rows_y = a.labels != b.labels
    if relation == RELATION_LABEL and np.any(rows_x):
        raise ParameterError("label neighbors may only differ in labels")
    if np.count_nonzero(rows_x | rows_y) > 1:
        raise ParameterError("neighboring datasets differ in more than one record")


@attrs.frozen(eq=False)
class AuditPlan:
    """Neighboring pair, relation ("record" or "label"), number of trials per
    side, claimed (epsilon, delta) and the per-side count floor of a bucket."""

    relation: str = attrs.field(validator=attrs.validators.in_(audit_relations))
    neighbors: tuple = attrs.field(converter=tuple)
    trials: int = attrs.field(converter=int)
    epsilon: float = attrs.field(converter=float)
    delta: float = attrs.field(default=0.0, converter=float)
    min_count: int = attrs.field(default=DEFAULT_MIN_COUNT, converter=int)

    def __attrs_post_init__(self):
        if len(self.neighbors) != 2:
            raise ParameterError("an audit needs exactly two neighboring inputs")
        if self.trials < MIN_TRIALS:
            raise ParameterError("an audit needs at least %d trials, got %d" % (MIN_TRIALS, self.trials))
        if not self.epsilon > 0:
            raise ParameterError("claimed epsilon must be positive")
        if not (0 <= self.delta < 1):
            raise ParameterError("claimed delta must lie in [0, 1)")
        check_neighbors(self.relation, *self.neighbors)


class Mechanism(ABC):
    """Randomized algorithm under audit. sample(dataset, n, rng) returns n
    discretized outputs (hashable bucket labels). relation names the
    neighboring relation the mechanism's guarantee refers to, or None."""

    relation = None

    @abstractmethod
    def sample(self, dataset, n, rng):
        pass


class RandomizedResponse(Mechanism):
    "Releases a bit truthfully with probability e^eps / (1 + e^eps). Inputs are 0 or 1."

    def __init__(self, epsilon):
        self.epsilon = float(epsilon)

    def sample(self, dataset, n, rng):
        bit = int(dataset)
        flip = rng.random(n) < 1.0 / (1.0 + np.exp(self.epsilon))
        return np.where(flip, 1 - bit, bit)


class ExponentialMechanismRunner(Mechanism):
    """Exponential mechanism over candidates whose scores are score_fn(dataset)
    (by default the input itself is the score vector). Outputs candidate indices."""

    def __init__(self, epsilon, sensitivity, score_fn=None):
        self.epsilon = float(epsilon)
        self.sensitivity = float(sensitivity)
        self.score_fn = score_fn

    def probabilities(self, dataset):
        scores = dataset if self.score_fn is None else self.score_fn(dataset)
        return exponential_probabilities(ScoredCandidates(scores, sensitivity=self.sensitivity), self.epsilon)

    def sample(self, dataset, n, rng):
        p = self.probabilities(dataset)
        return rng.choice(p.size, size=n, p=p)


class SignPatternDiscretizer:
    "Bucket = sign pattern of the model on a fixed set of query points."

    def __init__(self, d, n_points=10, seed=0, radius=1.0):
        rng = make_rng(seed, "query_points")
        P = rng.standard_normal((n_points, d))
        self.points = radius * P / np.linalg.norm(P, axis=1, keepdims=True)

    def __call__(self, model):
        return "".join("+" if v > 0 else "-" for v in model.decision_function(self.points))


class HashDiscretizer:
    "Bucket = sha256 of the serialized model, reduced modulo buckets."

    def __init__(self, buckets=64):
        self.buckets = int(buckets)

    def __call__(self, model):
        digest = hashlib.sha256(dumps_model(model).encode("utf-8")).hexdigest()
        return int(digest, 16) % self.buckets


class CoverLearnerRunner(Mechanism):
    """Runs a CoverLearner with its data-independent draws fixed by public_seed
    and samples directly from the exact output distribution of its exponential
    mechanism. Outputs are candidate indices, or discretizer(model) if a
    discretizer is given. The audit is then conditional on the public draws,
    which are independent of the data."""

    def __init__(self, learner, public_seed=0, discretizer=None):
        self.learner = learner
        self.public_seed = int(public_seed)
        self.discretizer = discretizer
        self.relation = RELATION_LABEL if learner.name == "label-dp" else RELATION_RECORD
        self._cache = {}

    def _prepare(self, dataset):
        key = dataset.fingerprint()
        if key not in self._cache:
            cands = self.learner.candidates(dataset, derive_seed(self.public_seed, "public"))
            probs = self.learner.selection_probabilities(cands, dataset)
            self._cache[key] = (cands, probs, {})
        return self._cache[key]

    def sample(self, dataset, n, rng):
        cands, probs, buckets = self._prepare(dataset)
        idx = rng.choice(probs.size, size=n, p=probs)
        if self.discretizer is None:
            return idx
        for i in np.unique(idx):
            if i not in buckets:
                buckets[i] = self.discretizer(self.learner.model_for(cands, int(i), {}))
        return np.asarray([buckets[i] for i in idx])


def _draw(mechanism, dataset, n, rng):
    values, counts = np.unique(mechanism.sample(dataset, n, rng), return_counts=True)
    return dict(zip(values.tolist(), counts.tolist()))


def _merge(total, part):
    for key, c in part.items():
        total[key] = total.get(key, 0) + c


def sample_counts(mechanism, dataset, trials, seed, progress=False):
    "Bucket counts of `trials` runs. Independent of the number of workers."
    sizes = [TRIALS_PER_CHUNK] * (trials // TRIALS_PER_CHUNK)
    if trials % TRIALS_PER_CHUNK:
        sizes.append(trials % TRIALS_PER_CHUNK)
    rngs = split_rngs(seed, len(sizes))
    tasks = [(mechanism, dataset, n, rng) for n, rng in zip(sizes, rngs)]
    counts = {}
    workers = min(get_num_default_workers(), len(tasks))
    if workers > 1:
        with mp.Pool(workers) as pool:
            for part in pool.starmap(_draw, tasks):
                _merge(counts, part)
    else:
        for task in tqdm(tasks, desc="Audit trials", disable=not progress):
            _merge(counts, _draw(*task))
    return counts


def estimate_epsilon(mechanism, plan, seed=0, progress=False):
    """Estimate eps from plan.trials runs on each side of plan.neighbors.

    Frequencies are smoothed as (count + 1) / trials and the log-ratio of a
    bucket is ln((p + delta) / (q + delta)). Buckets with fewer than
    plan.min_count hits on either side are reported but ignored. Returns
    (eps_hat, table), table being a list of dicts with the keys bucket,
    count_S, count_S_prime, log_ratio (S over S') and eligible; eps_hat is the
    largest absolute eligible log-ratio, i.e. the maximum over both directions."""
    if mechanism.relation == RELATION_LABEL and plan.relation == RELATION_RECORD:
        raise ParameterError("mechanism is only label-private, the plan uses record neighbors")
    S, S_prime = plan.neighbors
    counts_a = sample_counts(mechanism, S, plan.trials, derive_seed(seed, "audit", 0), progress)
    counts_b = sample_counts(mechanism, S_prime, plan.trials, derive_seed(seed, "audit", 1), progress)
    buckets = sorted(set(counts_a) | set(counts_b), key=str)
    table = []
    eps_hat = 0.0
    for b in buckets:
        ca, cb = counts_a.get(b, 0), counts_b.get(b, 0)
        p = (ca + 1.0) / plan.trials
        q = (cb + 1.0) / plan.trials
        ratio = float(np.log((p + plan.delta) / (q + plan.delta)))
        eligible = ca >= plan.min_count and cb >= plan.min_count
        if eligible:
            eps_hat = max(eps_hat, abs(ratio))
        table.append({"bucket": b, "count_S": ca, "count_S_prime": cb, "log_ratio": ratio, "eligible": eligible})
    if len(buckets) <= 1:
        warnings.warn("audit discretizer produced a single bucket; the estimate carries no information")
        eps_hat = 0.0
    return eps_hat, table


def write_audit_csv(table, path):
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["bucket", "count_S", "count_S'", "log_ratio"])
        for row in table:
            writer.writerow([row["bucket"], row["count_S"], row["count_S_prime"], "%.17g" % row["log_ratio"]])


def audit_markdown(eps_hat, plan, table, name="mechanism"):
    eligible = sum(1 for row in table if row["eligible"])
    lines = [
        "## Privacy audit: %s" % name,
        "",
        "- relation: %s" % plan.relation,
        "- trials per side: %d" % plan.trials,
        "- claimed epsilon: %g, delta: %g" % (plan.epsilon, plan.delta),
        "- buckets: %d (%d with at least %d hits on both sides)" % (len(table), eligible, plan.min_count),
        "- estimated epsilon: %.4f" % eps_hat,
        "- within claimed epsilon + 0.2: %s" % ("yes" if eps_hat <= plan.epsilon + 0.2 else "NO"),
    ]
    return "\n".join(lines) + "\n"
