# Copyright 2026  The nmmhmm Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0

"""Generative sequence classification with GMM-HMM and NMM-HMM emissions."""

from nmmhmm._core import (
    Model,
    ModelSet,
    add_deltas,
    add_feature_noise,
    extract_features,
    generate_benchmark,
    mfcc,
    mix_noise,
    synth_noise,
    train_classes,
    train_model,
)

__all__ = [
    "Model",
    "ModelSet",
    "add_deltas",
    "add_feature_noise",
    "extract_features",
    "generate_benchmark",
    "mfcc",
    "mix_noise",
    "synth_noise",
    "train_classes",
    "train_model",
]
