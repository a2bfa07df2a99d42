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

import multiprocessing as mp
import numpy as np
import os

from dpmargin.core.errors import ParameterError, ParseError

DEFAULT_COVER_CAP = 10**6


def get_num_default_workers():
    """Return the number of worker processes for parallel Monte-Carlo work.
    Controllable via the DPM_THREADS environment variable. If the env.var. is
    undefined, the default value of 1 is returned. A value of 0 means all
    available CPU cores.
    """

    try:
        workers = int(os.environ["DPM_THREADS"])
    except KeyError:
        return 1
    assert workers >= 0, "DPM_THREADS must be nonnegative."
    if workers == 0:
        workers = mp.cpu_count()
    return workers


def get_cover_cap():
    """Return the maximum number of elements any cover enumeration may produce.
    Controllable via the DPM_COVER_CAP environment variable, default 10^6."""

    try:
        return int(float(os.environ["DPM_COVER_CAP"]))
    except KeyError:
        return DEFAULT_COVER_CAP


def next_power_of_two(x):
    "Return the smallest power of two >= x, for integer x >= 1."
    assert int(x) == x and x >= 1, "The input x must be a positive integer."
    return 1 << (int(x) - 1).bit_length()


def pad_columns_to(ndarray, width, val=0):
    """Pad a 2D array with val on the right so that it has the given number of
    columns. Returns the input unchanged if it is already that wide."""
    assert ndarray.ndim == 2, "Expected a 2D array."
    assert width >= ndarray.shape[1], "Target width is smaller than the array."
    if width == ndarray.shape[1]:
        return ndarray
    return np.pad(ndarray, ((0, 0), (0, width - ndarray.shape[1])), mode="constant", constant_values=val)


def iter_row_chunks(n_rows, chunk_rows):
    "Yield slices covering range(n_rows) in pieces of at most chunk_rows."
    assert chunk_rows > 0, "chunk_rows must be positive."
    for start in range(0, n_rows, chunk_rows):
        yield slice(start, min(start + chunk_rows, n_rows))


def project_rows_to_ball(X, radius):
    "Euclidean projection of every row of X onto the ball of the given radius."
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    scale = np.where(norms > radius, radius / np.maximum(norms, 1e-300), 1.0)
    return X * scale


def project_to_ball(w, radius):
    n = np.linalg.norm(w)
    if n > radius:
        return w * (radius / n)
    return w


def read_text_file(path):
    """Return the contents of a UTF-8 text file. A missing or unreadable file
    raises ParameterError, undecodable bytes a ParseError with the line."""
    try:
        with open(path, "rb") as f:
            data = f.read()
    except OSError as e:
        raise ParameterError("cannot read %s: %s" % (path, e.strerror or e))
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(data.count(b"\n", 0, e.start) + 1, "%s is not valid UTF-8" % path)
