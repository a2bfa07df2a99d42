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

"""Exception types shared across dpmargin. The command line driver maps
ParameterError to exit code 2 and CoverTooLargeError to exit code 3."""


class ParameterError(ValueError):
    "Invalid parameter or violated precondition."

    pass


class ParseError(ParameterError):
    "Malformed dataset, config or model file."

    def __init__(self, lineno, msg):
        self.lineno = lineno
        super().__init__("line %d: %s" % (lineno, msg))


class CoverUnavailableError(ParameterError):
    "The hypothesis family has no enumerable parameter grid."

    pass


class KernelNotImplementedError(ParameterError):
    pass


class CoverTooLargeError(RuntimeError):
    """Raised when an enumeration would exceed the configured cardinality cap.
    The estimated size is kept on the exception for reports."""

    def __init__(self, estimated_size, cap, hint=""):
        self.estimated_size = estimated_size
        self.cap = cap
        msg = "cover too large: estimated size %.4g exceeds cap %d" % (estimated_size, cap)
        if hint:
            msg += "; " + hint
        super().__init__(msg)


class MonotonicityError(RuntimeError):
    "Margin selection found a bound evaluation that breaks its monotonicity contract."

    pass
