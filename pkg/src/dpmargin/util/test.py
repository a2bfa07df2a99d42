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

import clize
import numpy as np
import os

from dpmargin.core.dataset import Dataset, SyntheticSpec, generate_synthetic, save_dataset

# named datasets shared by the test suite and the benchmark commands

test_dataset_details = {
    "appendix-e": {
        "description": "four-atom distribution on the line, gamma=0.1, m=10^4",
        "spec": SyntheticSpec("appendix_e", m=10**4, seed=0, params={"gamma": 0.1, "r": 1.0}),
    },
    "two-cluster-50d": {
        "description": "separable two-cluster data, d=50, m=500",
        "spec": SyntheticSpec("two_cluster_separable", m=500, seed=0, params={"d": 50, "separation": 1.0, "noise": 0.05}),
    },
    "two-cluster-2d": {
        "description": "separable two-cluster data, d=2, m=200",
        "spec": SyntheticSpec("two_cluster_separable", m=200, seed=0, params={"d": 2, "separation": 1.0, "noise": 0.1}),
    },
    "noisy-margin-10k": {
        "description": "noisy margin data, d=10^4, m=2000",
        "spec": SyntheticSpec("noisy_margin", m=2000, seed=0, params={"d": 10**4, "margin": 0.1, "flip": 0.05}),
    },
    "concentric-400": {
        "description": "concentric circles, inner radius 0.2, outer 1.0, m=400",
        "spec": SyntheticSpec("concentric", m=400, seed=0, params={"d": 2, "inner": 0.2, "outer": 1.0, "width": 0.05}),
    },
    "audit-4pt": {
        "description": "four crafted points in the plane for record-level audits",
        "features": [[1.0, 0.0], [0.6, 0.6], [-1.0, 0.0], [-0.6, -0.6]],
        "labels": [1, 1, -1, -1],
    },
    "audit-xor-8pt": {
        "description": "eight crafted XOR-like points for network audits",
        "features": [
            [0.7, 0.7],
            [-0.7, -0.7],
            [0.7, -0.7],
            [-0.7, 0.7],
            [0.3, 0.3],
            [-0.3, -0.3],
            [0.3, -0.3],
            [-0.3, 0.3],
        ],
        "labels": [1, 1, -1, -1, 1, 1, -1, -1],
    },
}


test_dataset_keys = clize.parameters.mapped(
    [(x, [x], test_dataset_details[x]["description"]) for x in test_dataset_details.keys()]
)


def get_test_dataset(name, seed=None):
    """Return the named test dataset. For synthetic entries seed replaces the
    registered seed."""
    details = test_dataset_details[name]
    if "spec" in details:
        spec = details["spec"]
        if seed is not None:
            spec = SyntheticSpec(spec.kind, m=spec.m, seed=seed, params=spec.params)
        return generate_synthetic(spec)
    return Dataset(np.asarray(details["features"]), np.asarray(details["labels"]))


def write_test_dataset(name: test_dataset_keys, *, out_dir="/tmp", format="csv", seed: int = None):
    """Write a named test dataset to out_dir/<name>.<format> and return the path.

    :param name: registered test dataset
    :param out_dir: target directory
    :param format: csv or libsvm
    :param seed: replaces the registered seed of synthetic entries
    """
    path = os.path.join(out_dir, "%s.%s" % (name, format))
    save_dataset(get_test_dataset(name, seed), path, format=format)
    return path


def dpmargin_test_data():
    clize.run(write_test_dataset)
