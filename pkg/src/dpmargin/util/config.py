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

"""Flat key=value configuration files, run manifests and the pinned analysis
constants. A config file holds one key=value pair per line; blank lines and
lines starting with # are ignored. Command line flags override file values."""

import attrs
import inspect
import os

from dpmargin.core.errors import ParameterError, ParseError
from dpmargin.util.basic import get_cover_cap, read_text_file

MANIFEST_NAME = "manifest.txt"


@attrs.frozen
class AnalysisConstants:
    """Constants that replace the O(.) factors of the analysis. Every learner
    and bound takes one of these; reports print the values used."""

    jl_constant: float = 8.0
    pure_k_constant: float = 8.0
    nn_k_constant: float = 1.0
    nn_gamma_constant: float = 0.1
    bound_constant: float = 1.0
    cover_cap: int = attrs.field(factory=get_cover_cap)
    eff_k_cap: int = 4096
    rff_cap: int = 200000
    erm_steps: int = 0
    audit_min_count: int = 20

    @classmethod
    def from_dict(cls, values):
        "Build from a dict of (possibly string) values; unknown keys are ignored."
        kwargs = {}
        for f in attrs.fields(cls):
            if f.name in values and values[f.name] is not None:
                kwargs[f.name] = coerce_value(values[f.name], f.type, f.name)
        return cls(**kwargs)

    def as_dict(self):
        return attrs.asdict(self)


def coerce_value(value, typ, key="value"):
    if not isinstance(value, str):
        return typ(value)
    try:
        if typ is int:
            return int(float(value))
        if typ is bool:
            return value.strip().lower() in ("1", "true", "yes")
        return typ(value)
    except ValueError:
        raise ParameterError("cannot interpret %s=%r as %s" % (key, value, typ.__name__))


def format_value(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def read_config(path):
    "Parse a key=value file into a dict of strings."
    ret = dict()
    for lineno, line in enumerate(read_text_file(path).splitlines(), start=1):
        line = line.strip()
        if line == "" or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(lineno, "expected key=value, got %r" % line)
        key, value = line.split("=", 1)
        key = key.strip().replace("-", "_")
        if key == "":
            raise ParseError(lineno, "empty key")
        ret[key] = value.strip()
    return ret


def write_config(path, values, comment=None):
    "Write values as sorted key=value lines; None values are skipped."
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        if comment is not None:
            f.write("# %s\n" % comment)
        for key in sorted(values.keys()):
            if values[key] is None:
                continue
            f.write("%s=%s\n" % (key, format_value(values[key])))


def resolve_config(defaults, config_path=None, overrides=None):
    """Merge defaults <- config file <- overrides. Override entries that are
    None count as not given. Values from the file are coerced to the type of
    the corresponding default when it has one."""
    ret = dict(defaults)
    if config_path is not None:
        for key, value in read_config(config_path).items():
            if key in defaults and defaults[key] is not None and not isinstance(defaults[key], str):
                value = coerce_value(value, type(defaults[key]), key)
            ret[key] = value
    if overrides is not None:
        for key, value in overrides.items():
            if value is not None:
                ret[key] = value
    return ret


def write_manifest(out_dir, command, values):
    "Write out_dir/manifest.txt with the resolved values of a run and its command name."
    values = dict(values, command=command)
    write_config(os.path.join(out_dir, MANIFEST_NAME), values, comment="dpmargin run manifest")


def read_manifest(path):
    "Return (command, values) of a manifest written by write_manifest."
    values = read_config(path)
    if "command" not in values:
        raise ParameterError("manifest %s does not name a command" % path)
    command = values.pop("command")
    return command, values


def _annotated_type(annotation):
    for a in annotation if isinstance(annotation, tuple) else (annotation,):
        if a in (int, float, bool):
            return a
    return None


def coerce_options(fn, values):
    """Check that every key of values is a keyword parameter of fn and coerce
    string values to the int/float/bool annotated on it (or implied by a
    boolean default)."""
    params = inspect.signature(fn).parameters
    ret = dict()
    for key, value in values.items():
        if key not in params:
            raise ParameterError("unknown option %s for %s" % (key, fn.__name__))
        typ = _annotated_type(params[key].annotation)
        if typ is None and isinstance(params[key].default, bool):
            typ = bool
        if isinstance(value, str) and typ is not None:
            value = coerce_value(value, typ, key)
        ret[key] = value
    return ret
