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

"""The dpmargin command line driver. Every subcommand is a plain function
with keyword-only options (see the modules of dpmargin.util); run()
dispatches to it through clize and maps errors to exit codes:

* 0: success
* 2: invalid arguments or parameters (clize ArgumentError, ParameterError);
  argument errors are followed by the help of the subcommand
* 3: a cover or another enumeration would exceed its cap (CoverTooLargeError)
"""

import clize
import sys
from clize.errors import ArgumentError

from dpmargin.core.errors import CoverTooLargeError, ParameterError
from dpmargin.util.audit_privacy import audit
from dpmargin.util.config import coerce_options, read_manifest
from dpmargin.util.gen_data import gen
from dpmargin.util.make_report import report
from dpmargin.util.margin_select import select
from dpmargin.util.train_model import train

EXIT_OK = 0
EXIT_PARAMETER = 2
EXIT_CAP = 3


def replay(manifest, *, out=None):
    """Rerun the command recorded in a manifest.txt with the same resolved
    options.

    :param manifest: manifest.txt written by any dpmargin command
    :param out: write the outputs here instead of the recorded directory
    """
    command, values = read_manifest(manifest)
    if command not in subcommands or command == "replay":
        raise ParameterError("manifest %s names unknown command %s" % (manifest, command))
    fn = subcommands[command]
    values = coerce_options(fn, values)
    if out is not None:
        values["out"] = out
    return fn(**values)


subcommands = {
    "gen": gen,
    "train": train,
    "select-margin": select,
    "audit": audit,
    "report": report,
    "replay": replay,
}


def usage():
    return "Usage: dpmargin {%s} [options]\nRun dpmargin <command> --help for the options of a command." % " | ".join(
        subcommands
    )


def run(argv=None):
    "Run the command line argv (without the program name) and return the exit code."
    argv = sys.argv[1:] if argv is None else list(argv)
    if len(argv) == 0 or argv[0] not in subcommands:
        if len(argv) and argv[0] not in ("-h", "--help"):
            print("dpmargin: unknown command %s" % argv[0], file=sys.stderr)
            print(usage(), file=sys.stderr)
            return EXIT_PARAMETER
        print(usage())
        return EXIT_OK if len(argv) else EXIT_PARAMETER
    name, rest = argv[0], argv[1:]
    cli = clize.Clize.get_cli(subcommands[name])
    try:
        ret = cli("dpmargin " + name, *rest)
    except ArgumentError as e:
        print(str(e), file=sys.stderr)
        print(cli("dpmargin " + name, "--help"), file=sys.stderr)
        return EXIT_PARAMETER
    except CoverTooLargeError as e:
        print("dpmargin %s: %s" % (name, e), file=sys.stderr)
        return EXIT_CAP
    except ParameterError as e:
        print("dpmargin %s: %s" % (name, e), file=sys.stderr)
        return EXIT_PARAMETER
    if ret is not None:
        print(ret)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
