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

from dpmargin.core.errors import ParameterError
from dpmargin.sketch.base import Projection, jl_distortion, required_dim
from dpmargin.sketch.dense import DenseRademacherProjection
from dpmargin.sketch.hadamard import FastHadamardProjection

projection_kinds = dict()
projection_kinds["dense_rademacher"] = DenseRademacherProjection
projection_kinds["fast_hadamard"] = FastHadamardProjection


def sample_projection(kind, d, k, seed):
    "Return the projection of the given kind for (d, k, seed)."
    try:
        cls = projection_kinds[kind]
    except KeyError:
        raise ParameterError("unknown projection kind %s, expected one of %s" % (kind, list(projection_kinds)))
    return cls(d, k, seed)


def apply(proj, X):
    return proj.apply(X)


def apply_transpose(proj, w):
    return proj.apply_transpose(w)


__all__ = [
    "Projection",
    "DenseRademacherProjection",
    "FastHadamardProjection",
    "projection_kinds",
    "sample_projection",
    "apply",
    "apply_transpose",
    "required_dim",
    "jl_distortion",
]
