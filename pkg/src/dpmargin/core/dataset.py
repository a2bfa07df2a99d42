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

"""Labeled datasets, synthetic generators and text file I/O."""

import attrs
import csv
import hashlib
import io
import numpy as np
import os

from dpmargin.core.errors import ParameterError, ParseError
from dpmargin.core.rng import make_rng
from dpmargin.util.basic import read_text_file

NORM_RTOL = 1e-9

FORMAT_CSV = "csv"
FORMAT_LIBSVM = "libsvm"
dataset_formats = [FORMAT_CSV, FORMAT_LIBSVM]


def _features_converter(x):
    x = np.array(x, dtype=np.float64, copy=True)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    return x


def _labels_converter(y):
    return np.array(y, dtype=np.int64, copy=True).reshape(-1)


@attrs.frozen(eq=False)
class Dataset:
    """Immutable sample S = ((x_1, y_1), ..., (x_m, y_m)) with features in the
    ball of radius radius_r. If radius_r is not given, the observed maximum row
    norm is used. The arrays are made read-only on construction."""

    features: np.ndarray = attrs.field(converter=_features_converter)
    labels: np.ndarray = attrs.field(converter=_labels_converter)
    radius_r: float = attrs.field(default=None)

    def __attrs_post_init__(self):
        X, y = self.features, self.labels
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise ParameterError("features must be an m x d matrix with m, d >= 1, got shape %s" % str(X.shape))
        if y.shape[0] != X.shape[0]:
            raise ParameterError("got %d labels for %d feature rows" % (y.shape[0], X.shape[0]))
        if not np.all(np.isfinite(X)):
            raise ParameterError("features must be finite")
        if not np.all((y == 1) | (y == -1)):
            raise ParameterError("labels must take values in {-1, +1}")
        norms = np.linalg.norm(X, axis=1)
        max_norm = float(norms.max())
        if self.radius_r is None:
            object.__setattr__(self, "radius_r", max_norm)
        else:
            object.__setattr__(self, "radius_r", float(self.radius_r))
            if self.radius_r < 0:
                raise ParameterError("radius_r must be nonnegative")
            if max_norm > self.radius_r * (1 + NORM_RTOL) + np.finfo(np.float64).tiny:
                raise ParameterError("feature row norm %.17g exceeds radius_r=%.17g" % (max_norm, self.radius_r))
        X.setflags(write=False)
        y.setflags(write=False)

    @property
    def m(self):
        return self.features.shape[0]

    @property
    def d(self):
        return self.features.shape[1]

    def scores(self, weights):
        "Return the margins y_i * <w, x_i>."
        return self.labels * (self.features @ np.asarray(weights, dtype=np.float64))

    def subset(self, idx):
        return Dataset(self.features[idx], self.labels[idx], radius_r=self.radius_r)

    def replace_record(self, i, x, y):
        "Return a copy with record i replaced by (x, y); radius_r is kept."
        X = np.array(self.features)
        labels = np.array(self.labels)
        X[i] = x
        labels[i] = y
        return Dataset(X, labels, radius_r=self.radius_r)

    def flip_label(self, i):
        labels = np.array(self.labels)
        labels[i] = -labels[i]
        return Dataset(self.features, labels, radius_r=self.radius_r)

    def with_features(self, features, radius_r=None):
        return Dataset(features, self.labels, radius_r=radius_r)

    def fingerprint(self):
        "Return a hex digest identifying the contents of this dataset."
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.features).tobytes())
        h.update(np.ascontiguousarray(self.labels).tobytes())
        h.update(repr(self.radius_r).encode())
        return h.hexdigest()


KIND_TWO_CLUSTER = "two_cluster_separable"
KIND_NOISY_MARGIN = "noisy_margin"
KIND_APPENDIX_E = "appendix_e"
KIND_CONCENTRIC = "concentric"

synthetic_defaults = {
    KIND_TWO_CLUSTER: {"d": 2, "separation": 1.0, "noise": 0.1},
    KIND_NOISY_MARGIN: {"d": 10, "margin": 0.1, "flip": 0.1},
    KIND_APPENDIX_E: {"gamma": 0.1, "r": 1.0},
    KIND_CONCENTRIC: {"d": 2, "inner": 0.2, "outer": 1.0, "width": 0.05},
}


@attrs.frozen(eq=False)
class SyntheticSpec:
    "Description of a synthetic dataset: kind, sample size, seed and kind-specific parameters."

    kind: str
    m: int = attrs.field(converter=int)
    seed: int = attrs.field(default=0, converter=int)
    params: dict = attrs.field(factory=dict, converter=dict)

    def __attrs_post_init__(self):
        if self.kind not in synthetic_defaults:
            raise ParameterError("unknown synthetic kind %s, expected one of %s" % (self.kind, list(synthetic_defaults)))
        unknown = set(self.params) - set(synthetic_defaults[self.kind])
        if unknown:
            raise ParameterError("unknown parameters for kind %s: %s" % (self.kind, sorted(unknown)))
        if self.m < 1:
            raise ParameterError("m must be >= 1")
        p = self.resolved_params()
        if "d" in p and int(p["d"]) < 1:
            raise ParameterError("d must be >= 1")
        if self.kind == KIND_APPENDIX_E and not (0 < p["gamma"] < p["r"]):
            raise ParameterError("appendix_e requires 0 < gamma < r")
        if self.kind == KIND_NOISY_MARGIN:
            if not (0 < p["margin"] <= 1):
                raise ParameterError("noisy_margin requires 0 < margin <= 1")
            if not (0 <= p["flip"] <= 0.5):
                raise ParameterError("noisy_margin requires flip probability in [0, 0.5]")
        if self.kind == KIND_TWO_CLUSTER and (p["separation"] < 0 or p["noise"] < 0):
            raise ParameterError("two_cluster_separable requires nonnegative separation and noise")
        if self.kind == KIND_CONCENTRIC and not (0 <= p["inner"] < p["outer"]):
            raise ParameterError("concentric requires 0 <= inner < outer")

    def resolved_params(self):
        ret = dict(synthetic_defaults[self.kind])
        ret.update({k: float(v) for k, v in self.params.items()})
        return ret


def _orthogonal_noise(rng, m, d):
    "Gaussian vectors with a zero first coordinate."
    z = rng.standard_normal((m, d))
    z[:, 0] = 0.0
    return z


def _gen_two_cluster(rng, m, p):
    d = int(p["d"])
    y = rng.choice([-1, 1], size=m)
    z = p["noise"] * rng.standard_normal((m, d))
    # along-axis jitter stays below a quarter of the separation, so the
    # classes are separated by at least separation / 4 along e_1
    z[:, 0] = np.clip(z[:, 0], -p["separation"] / 4, p["separation"] / 4)
    X = z
    X[:, 0] += y * p["separation"] / 2
    return Dataset(X, y)


def _gen_noisy_margin(rng, m, p):
    d = int(p["d"])
    y_clean = rng.choice([-1, 1], size=m)
    X = np.zeros((m, d))
    X[:, 0] = y_clean * p["margin"]
    if d > 1:
        v = _orthogonal_noise(rng, m, d)
        v /= np.maximum(np.linalg.norm(v, axis=1, keepdims=True), 1e-300)
        X += np.sqrt(1 - p["margin"] ** 2) * v
    flips = rng.random(m) < p["flip"]
    y = np.where(flips, -y_clean, y_clean)
    return Dataset(X, y, radius_r=1.0)


def appendix_e_atoms(gamma, r=1.0):
    """Return (points, labels, masses) of the four-atom distribution on the
    real line with alpha = gamma / 2."""
    alpha = gamma / 2
    points = np.asarray([r, -r, gamma, -gamma])
    labels = np.asarray([-1, 1, 1, -1])
    masses = np.asarray([alpha / 2, alpha / 2, (1 - alpha) / 2, (1 - alpha) / 2])
    return points, labels, masses


def _gen_appendix_e(rng, m, p):
    points, labels, masses = appendix_e_atoms(p["gamma"], p["r"])
    idx = rng.choice(4, size=m, p=masses)
    return Dataset(points[idx].reshape(-1, 1), labels[idx], radius_r=p["r"])


def _gen_concentric(rng, m, p):
    d = int(p["d"])
    y = rng.choice([-1, 1], size=m)
    u = rng.standard_normal((m, d))
    u /= np.maximum(np.linalg.norm(u, axis=1, keepdims=True), 1e-300)
    base = np.where(y == 1, p["inner"], p["outer"])
    radius = np.clip(base + rng.uniform(-p["width"], p["width"], size=m), 0.0, p["outer"])
    return Dataset(u * radius[:, None], y, radius_r=p["outer"])


_generators = {
    KIND_TWO_CLUSTER: _gen_two_cluster,
    KIND_NOISY_MARGIN: _gen_noisy_margin,
    KIND_APPENDIX_E: _gen_appendix_e,
    KIND_CONCENTRIC: _gen_concentric,
}


def generate_synthetic(spec):
    "Draw a Dataset according to spec. Deterministic given spec.seed."
    rng = make_rng(spec.seed, "synthetic", spec.kind)
    return _generators[spec.kind](rng, spec.m, spec.resolved_params())


def appendix_e_population(gamma, w, r=1.0):
    "Exact population hinge (rho = 1) and zero-one loss of the scalar predictor w."
    points, labels, masses = appendix_e_atoms(gamma, r)
    u = labels * points * w
    return {
        "hinge": float(np.sum(masses * np.maximum(1 - u, 0))),
        "zero_one": float(np.sum(masses * (u <= 0))),
    }


def hinge_grid_minimizer(dataset, grid, rho=1.0):
    """Minimize the empirical rho-hinge risk of the scalar predictors in grid
    on a one-dimensional dataset. Returns (w, hinge value); ties resolve to the
    first grid point."""
    assert dataset.d == 1, "hinge_grid_minimizer needs one-dimensional features"
    grid = np.asarray(grid, dtype=np.float64)
    s = dataset.labels * dataset.features[:, 0]
    values = np.maximum(1 - np.outer(grid, s) / rho, 0).mean(axis=1)
    i = int(np.argmin(values))
    return float(grid[i]), float(values[i])


def _parse_label(cell, lineno):
    try:
        v = float(cell)
    except ValueError:
        raise ParseError(lineno, "label %r is not a number" % cell)
    if v not in (-1.0, 1.0):
        raise ParseError(lineno, "label %r not in {-1, +1}" % cell)
    return int(v)


def _parse_float(cell, lineno):
    try:
        v = float(cell)
    except ValueError:
        raise ParseError(lineno, "value %r is not a number" % cell)
    if not np.isfinite(v):
        raise ParseError(lineno, "value %r is not finite" % cell)
    return v


def _is_numeric(cell):
    try:
        float(cell)
        return True
    except ValueError:
        return False


def _load_csv(path):
    X, y = [], []
    width = None
    seen_row = False
    rows = csv.reader(io.StringIO(read_text_file(path), newline=""))
    for lineno, row in enumerate(rows, start=1):
        if len(row) == 0 or all(c.strip() == "" for c in row) or row[0].lstrip().startswith("#"):
            continue
        if not seen_row:
            seen_row = True
            if not _is_numeric(row[0].strip()):
                # header row
                continue
        if len(row) < 2:
            raise ParseError(lineno, "expected a label followed by at least one feature")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(lineno, "dimension mismatch: expected %d columns, got %d" % (width, len(row)))
        y.append(_parse_label(row[0].strip(), lineno))
        X.append([_parse_float(c.strip(), lineno) for c in row[1:]])
    if len(y) == 0:
        raise ParameterError("no data rows in %s" % path)
    return Dataset(np.asarray(X), np.asarray(y))


def _load_libsvm(path, d=None):
    rows, y = [], []
    max_idx = 0
    for lineno, line in enumerate(io.StringIO(read_text_file(path)), start=1):
        if d is None and line.startswith("# d="):
            d = int(_parse_float(line[4:].strip(), lineno))
            continue
        line = line.split("#", 1)[0].strip()
        if line == "":
            continue
        tokens = line.split()
        y.append(_parse_label(tokens[0], lineno))
        entries = {}
        for tok in tokens[1:]:
            if ":" not in tok:
                raise ParseError(lineno, "malformed entry %r, expected index:value" % tok)
            idx_s, val_s = tok.split(":", 1)
            try:
                idx = int(idx_s)
            except ValueError:
                raise ParseError(lineno, "index %r is not an integer" % idx_s)
            if idx < 1:
                raise ParseError(lineno, "indices are 1-based, got %d" % idx)
            if d is not None and idx > d:
                raise ParseError(lineno, "dimension mismatch: index %d exceeds d=%d" % (idx, d))
            entries[idx] = _parse_float(val_s, lineno)
            max_idx = max(max_idx, idx)
        rows.append(entries)
    if len(y) == 0:
        raise ParameterError("no data rows in %s" % path)
    if d is None:
        d = max(max_idx, 1)
    X = np.zeros((len(rows), d))
    for i, entries in enumerate(rows):
        for idx, val in entries.items():
            X[i, idx - 1] = val
    return Dataset(X, np.asarray(y))


def infer_format(path):
    ext = os.path.splitext(path)[1].lower()
    if ext in (".svm", ".libsvm", ".txt"):
        return FORMAT_LIBSVM
    return FORMAT_CSV


def load_dataset(path, format=None, d=None):
    """Load a dataset from a CSV (label column first, optional header) or
    LIBSVM (1-based sparse indices) file. radius_r is the observed max norm."""
    if format is None:
        format = infer_format(path)
    if format == FORMAT_CSV:
        return _load_csv(path)
    elif format == FORMAT_LIBSVM:
        return _load_libsvm(path, d=d)
    else:
        raise ParameterError("unknown dataset format %s" % format)


def save_dataset(dataset, path, format=None):
    if format is None:
        format = infer_format(path)
    if format not in dataset_formats:
        raise ParameterError("unknown dataset format %s, expected one of %s" % (format, dataset_formats))
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        if format == FORMAT_LIBSVM:
            f.write("# d=%d\n" % dataset.d)
        for x, y in zip(dataset.features, dataset.labels):
            if format == FORMAT_CSV:
                f.write(",".join(["%d" % y] + ["%.17g" % v for v in x]) + "\n")
            else:
                nz = ["%d:%.17g" % (i + 1, v) for i, v in enumerate(x) if v != 0]
                f.write(" ".join(["%d" % y] + nz) + "\n")
