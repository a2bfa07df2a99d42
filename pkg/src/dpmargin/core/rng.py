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

"""Seeded random streams.

All randomness in dpmargin comes from numpy PCG64 generators. A run has one
64-bit seed, and every consumer derives its own named stream from it with
derive_seed(seed, "label", ...), so results do not depend on the order in
which components draw or on how many workers share a computation."""

import numpy as np
import zlib

SEED_MASK = (1 << 64) - 1


def _label_to_int(label):
    if isinstance(label, (int, np.integer)):
        return int(label) & SEED_MASK
    return zlib.crc32(str(label).encode("utf-8"))


def derive_seed(seed, *labels):
    "Return a 64-bit seed derived from seed and a sequence of labels (str or int)."
    entropy = [int(seed) & SEED_MASK] + [_label_to_int(x) for x in labels]
    ss = np.random.SeedSequence(entropy)
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed, *labels):
    "Return a PCG64-backed Generator for seed, optionally derived by labels."
    if len(labels) > 0:
        seed = derive_seed(seed, *labels)
    return np.random.Generator(np.random.PCG64(int(seed) & SEED_MASK))


def split_rngs(seed, n):
    "Return n independent generators spawned from seed."
    children = np.random.SeedSequence(int(seed) & SEED_MASK).spawn(n)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


def draw_seed(rng):
    "Draw a fresh 64-bit seed from an existing generator."
    return int(rng.integers(0, SEED_MASK, dtype=np.uint64, endpoint=True))
