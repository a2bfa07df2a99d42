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
from dpmargin.learner.base import CoverLearner, Learner
from dpmargin.learner.kernel import KernelLearner
from dpmargin.learner.labeldp import LabelDpLearner
from dpmargin.learner.linear import EfficientLinearLearner, PureLinearLearner
from dpmargin.learner.nn import NeuralNetLearner

learners = dict()
learners["pure-linear"] = PureLinearLearner
learners["eff-linear"] = EfficientLinearLearner
learners["kernel"] = KernelLearner
learners["nn"] = NeuralNetLearner
learners["label-dp"] = LabelDpLearner


def get_learner(name, priv, marg, beta=0.1, constants=None, **kwargs):
    """Instantiate the learner registered under name. Extra keyword arguments
    (kernel=, arch=, family=, fat_dim=) go to the learner's constructor."""
    try:
        cls = learners[name]
    except KeyError:
        raise ParameterError("unknown algorithm %s, expected one of %s" % (name, list(learners)))
    return cls(priv, marg, beta, constants, **kwargs)


__all__ = ["Learner", "CoverLearner", "learners", "get_learner"]
