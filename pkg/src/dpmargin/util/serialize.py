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

"""Versioned text formats for trained models.

Every file starts with a magic line naming the model type and format version,
followed by one header line of space-separated key=value tokens (structural
fields plus the model's provenance) and then the parameters, one decimal
number per line with 17 significant digits, so that a save/load round trip
reproduces predictions bit for bit.

* dpmargin-linear v1: d weights.
* dpmargin-kernel v1: 2D weights; the feature map is regenerated from
  (kernel, bandwidth, kernel_r, D, d, rff_seed).
* dpmargin-nn v1: the factors W~_1..W~_L row-major; the projections are
  regenerated from (d, k, width, projection_seeds).
"""

import numpy as np

from dpmargin.core.errors import ParameterError, ParseError
from dpmargin.learner.kernel import KernelPredictor, KernelSpec, sample_rff
from dpmargin.learner.linear import LinearModel
from dpmargin.learner.nn import NeuralNet
from dpmargin.sketch import sample_projection
from dpmargin.util.basic import read_text_file

FORMAT_VERSION = 1
MAGIC_LINEAR = "dpmargin-linear"
MAGIC_KERNEL = "dpmargin-kernel"
MAGIC_NN = "dpmargin-nn"


def format_token(value):
    if isinstance(value, (bool, np.bool_)):
        return "%d" % int(value)
    if isinstance(value, (int, np.integer)):
        return "%d" % value
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    if isinstance(value, (list, tuple, np.ndarray)):
        return ",".join(format_token(v) for v in value)
    return str(value).replace(" ", "_")


def parse_token(text):
    if "," in text:
        return [parse_token(t) for t in text.split(",")]
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def format_header(fields):
    return " ".join("%s=%s" % (k, format_token(v)) for k, v in sorted(fields.items()) if v is not None)


def parse_header(line, lineno=2):
    ret = {}
    for tok in line.split():
        if "=" not in tok:
            raise ParseError(lineno, "malformed header token %r, expected key=value" % tok)
        key, value = tok.split("=", 1)
        ret[key] = parse_token(value)
    return ret


def _require(header, keys, lineno=2):
    for key in keys:
        if key not in header:
            raise ParseError(lineno, "header is missing %s" % key)


def _format_values(values):
    return "".join("%.17g\n" % v for v in np.asarray(values, dtype=np.float64).reshape(-1))


def _parse_values(lines, first_lineno, count):
    if len(lines) != count:
        raise ParseError(first_lineno + len(lines), "expected %d values, got %d" % (count, len(lines)))
    ret = np.empty(count)
    for i, line in enumerate(lines):
        try:
            ret[i] = float(line)
        except ValueError:
            raise ParseError(first_lineno + i, "value %r is not a number" % line)
    return ret


def dumps_model(model):
    "Serialize a LinearModel, KernelPredictor or NeuralNet to text."
    if isinstance(model, LinearModel):
        header = dict(model.provenance, d=model.d)
        return "%s v%d\n%s\n%s" % (MAGIC_LINEAR, FORMAT_VERSION, format_header(header), _format_values(model.weights))
    elif isinstance(model, KernelPredictor):
        rff = model.rff
        header = dict(model.provenance)
        header.update(kernel=rff.spec.kind, bandwidth=rff.spec.bandwidth, kernel_r=rff.spec.r)
        header.update(D=rff.D, d=rff.d, rff_seed=rff.seed)
        return "%s v%d\n%s\n%s" % (MAGIC_KERNEL, FORMAT_VERSION, format_header(header), _format_values(model.weights))
    elif isinstance(model, NeuralNet):
        header = dict(model.provenance)
        header.update(L=model.L, width=model.N, k=model.k, d=model.d, eta=model.eta)
        header["projection_seeds"] = [p.seed for p in model.projections]
        body = "".join(_format_values(f) for f in model.factors)
        return "%s v%d\n%s\n%s" % (MAGIC_NN, FORMAT_VERSION, format_header(header), body)
    raise ParameterError("cannot serialize model of type %s" % type(model).__name__)


def _load_linear(header, lines):
    _require(header, ["d"])
    weights = _parse_values(lines, 3, int(header["d"]))
    provenance = {k: v for k, v in header.items() if k != "d"}
    return LinearModel(weights, provenance)


def _load_kernel(header, lines):
    _require(header, ["kernel", "bandwidth", "kernel_r", "D", "d", "rff_seed"])
    spec = KernelSpec(header["kernel"], header["bandwidth"], header["kernel_r"])
    rff = sample_rff(spec, int(header["D"]), int(header["d"]), int(header["rff_seed"]))
    weights = _parse_values(lines, 3, rff.dim)
    return KernelPredictor(rff=rff, weights=weights, provenance=header)


def _load_nn(header, lines):
    _require(header, ["L", "width", "k", "d", "eta", "projection_seeds"])
    L, N, k, d = (int(header[key]) for key in ("L", "width", "k", "d"))
    seeds = header["projection_seeds"]
    seeds = seeds if isinstance(seeds, list) else [seeds]
    if len(seeds) != L:
        raise ParseError(2, "expected %d projection seeds, got %d" % (L, len(seeds)))
    projections = [sample_projection("dense_rademacher", d, k, seeds[0])]
    projections += [sample_projection("dense_rademacher", N, k, s) for s in seeds[1:]]
    shapes = [(k, N)] * (L - 1) + [(k, 1)]
    values = _parse_values(lines, 3, sum(a * b for a, b in shapes))
    factors, start = [], 0
    for a, b in shapes:
        factors.append(values[start : start + a * b].reshape(a, b))
        start += a * b
    return NeuralNet(eta=float(header["eta"]), factors=factors, projections=projections, provenance=header)


_loaders = {MAGIC_LINEAR: _load_linear, MAGIC_KERNEL: _load_kernel, MAGIC_NN: _load_nn}


def loads_model(text):
    "Parse a model written by dumps_model, dispatching on the magic line."
    lines = text.splitlines()
    if len(lines) < 2:
        raise ParseError(len(lines) + 1, "truncated model file")
    magic = lines[0].split()
    if len(magic) != 2 or magic[0] not in _loaders:
        raise ParseError(1, "unknown model format %r" % lines[0])
    if magic[1] != "v%d" % FORMAT_VERSION:
        raise ParseError(1, "unsupported format version %s" % magic[1])
    header = parse_header(lines[1])
    body = [line.strip() for line in lines[2:] if line.strip() != ""]
    return _loaders[magic[0]](header, body)


def save_model(model, path):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(dumps_model(model))


def load_model(path):
    return loads_model(read_text_file(path))


__all__ = ["save_model", "load_model", "dumps_model", "loads_model"]
