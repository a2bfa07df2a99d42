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
import os
import sys

from dpmargin.core.dataset import SyntheticSpec, dataset_formats, generate_synthetic, save_dataset, synthetic_defaults
from dpmargin.core.errors import ParameterError
from dpmargin.util.config import coerce_options, resolve_config, write_manifest

synthetic_kind_keys = clize.parameters.mapped([(x, [x], "synthetic kind %s" % x) for x in synthetic_defaults.keys()])
dataset_format_keys = clize.parameters.mapped([(x, [x], "%s text file" % x) for x in dataset_formats])

dataset_file_names = {"csv": "dataset.csv", "libsvm": "dataset.svm"}

gen_defaults = {"kind": None, "m": None, "seed": 0, "out": ".", "format": "csv"}


def gen(
    *,
    kind: synthetic_kind_keys = None,
    m: int = None,
    seed: int = None,
    out=None,
    format: dataset_format_keys = None,
    config=None,
    d: int = None,
    separation: float = None,
    noise: float = None,
    margin: float = None,
    flip: float = None,
    gamma: float = None,
    r: float = None,
    inner: float = None,
    outer: float = None,
    width: float = None,
):
    """Draw a synthetic dataset and write it to <out>/dataset.csv together with
    a manifest of the resolved parameters.

    :param kind: generator, one of two_cluster_separable, noisy_margin, appendix_e, concentric
    :param m: number of examples
    :param seed: random seed
    :param out: output directory
    :param format: csv or libsvm
    :param config: key=value file with defaults for any of the options
    :param d: dimension (two_cluster_separable, noisy_margin, concentric)
    :param separation: distance of the cluster centers (two_cluster_separable)
    :param noise: cluster standard deviation (two_cluster_separable)
    :param margin: geometric margin (noisy_margin)
    :param flip: label flip probability (noisy_margin)
    :param gamma: inner atom position (appendix_e)
    :param r: outer atom position (appendix_e)
    :param inner: inner class radius (concentric)
    :param outer: outer class radius (concentric)
    :param width: radial jitter (concentric)
    """
    overrides = {k: v for k, v in locals().items() if k != "config"}
    values = coerce_options(gen, resolve_config(gen_defaults, config, overrides))
    if values["kind"] is None or values["m"] is None:
        raise ParameterError("gen needs --kind and --m")
    params = {k: values[k] for k in synthetic_defaults[values["kind"]] if values.get(k) is not None}
    spec = SyntheticSpec(values["kind"], m=values["m"], seed=values["seed"], params=params)
    ds = generate_synthetic(spec)
    os.makedirs(values["out"], exist_ok=True)
    path = os.path.join(values["out"], dataset_file_names[values["format"]])
    save_dataset(ds, path, format=values["format"])
    write_manifest(values["out"], "gen", values)
    print("Wrote %d examples in dimension %d (radius %.6g) to %s" % (ds.m, ds.d, ds.radius_r, path))


def main():
    from dpmargin.util.cli import run

    sys.exit(run(["gen"] + sys.argv[1:]))


if __name__ == "__main__":
    main()
