"""Shipped experiment configurations.

Each preset is a plain config dict using the same flat key schema the CLI
accepts from ``--config`` JSON files, so a preset can be dumped, edited, and
fed back in.  Shapes follow the three benchmark-style multi-task layouts
(a GLUE-like 9-task mix, a CheXpert-like 5-label radiology mix, and a
MUStARD-like sarcasm/sentiment/emotion mix) plus a single-parameter-regime
shape used only for the head-count scaling table, and a small toy layout
sized for fast end-to-end runs.
"""

from __future__ import annotations

import copy


def _head(name, qubits, outputs, kind, *, layers=1, k_theta=3, num_classes=2,
          metrics=("accuracy",), lam=1.0, loss="default", calibration="none",
          eval_binarize=False):
    return {
        "name": name,
        "qubits": list(qubits),
        "outputs": outputs,
        "layers": layers,
        "k_theta": k_theta,
        "kind": kind,
        "num_classes": num_classes,
        "metrics": list(metrics),
        "lambda": lam,
        "loss": loss,
        "calibration": calibration,
        "eval_binarize": eval_binarize,
    }


_GLUE_BINARY = ["cola", "sst2", "mrpc", "qqp", "qnli", "rte", "wnli"]

PRESETS = {
    # 9 tasks on 10 qubits: 7 binary + 1 regression on single-qubit heads,
    # one 3-class head on a 2-qubit sub-register.
    "glue-like": {
        "variant": "qmtl",
        "encoder": {"qubits": 10, "layers": 3, "entangling": True},
        "heads": (
            [_head(n, [i], 1, "binary", metrics=("accuracy", "f1"))
             for i, n in enumerate(_GLUE_BINARY)]
            + [_head("stsb", [7], 1, "regression", metrics=("pearson", "spearman"))]
            + [_head("mnli", [8, 9], 3, "multiclass", num_classes=3,
                     metrics=("accuracy",))]
        ),
        "data": {"feature_dim": 30, "n_train": 256, "n_val": 128,
                 "teacher_seed": 0, "noise_level": 0.0},
        "train": {"lr": 5e-4, "epochs": 50, "batch_size": 32,
                  "protocol": "task_sampled", "cap": 4, "optimizer": "adamw",
                  "weight_decay": 0.01, "clip_norm": 1.0,
                  "scheduler_factor": 0.2, "scheduler_patience": 10,
                  "min_lr": 1e-7, "early_stop_patience": 5, "seed": 0},
    },
    # 5 observations, each trained 3-way (uncertain/negative/positive) with
    # focal loss and binarized for evaluation, on 2-qubit heads.
    "chexpert-like": {
        "variant": "qmtl",
        "encoder": {"qubits": 10, "layers": 3, "entangling": True},
        "heads": [
            _head(n, [2 * i, 2 * i + 1], 3, "multiclass", num_classes=3,
                  metrics=("accuracy", "f1"), loss="focal",
                  calibration="temperature", eval_binarize=True)
            for i, n in enumerate(
                ["atelectasis", "cardiomegaly", "consolidation", "edema",
                 "effusion"])
        ],
        "data": {"feature_dim": 30, "n_train": 256, "n_val": 128,
                 "teacher_seed": 0, "noise_level": 0.0},
        "train": {"lr": 1e-4, "epochs": 50, "batch_size": 32,
                  "protocol": "masked_parallel", "optimizer": "adam",
                  "weight_decay": 0.0, "clip_norm": 1.0,
                  "scheduler_factor": 0.2, "scheduler_patience": 10,
                  "min_lr": 1e-7, "early_stop_patience": 5, "seed": 0},
    },
    # sarcasm (primary, binary) + implicit/explicit sentiment (3-class)
    # + speaker/context emotion (9-class on 4-qubit heads), aux weight 0.2.
    "mustard-like": {
        "variant": "qmtl",
        "encoder": {"qubits": 13, "layers": 3, "entangling": True},
        "heads": [
            _head("sarcasm", [0], 1, "binary", metrics=("accuracy", "f1")),
            _head("sentiment_implicit", [1, 2], 3, "multiclass",
                  num_classes=3, lam=0.2),
            _head("sentiment_explicit", [3, 4], 3, "multiclass",
                  num_classes=3, lam=0.2),
            _head("emotion_implicit", [5, 6, 7, 8], 9, "multiclass",
                  num_classes=9, lam=0.2),
            _head("emotion_explicit", [9, 10, 11, 12], 9, "multiclass",
                  num_classes=9, lam=0.2),
        ],
        "data": {"feature_dim": 39, "n_train": 256, "n_val": 128,
                 "teacher_seed": 0, "noise_level": 0.0},
        "train": {"lr": 1e-3, "epochs": 50, "batch_size": 32,
                  "protocol": "masked_parallel", "optimizer": "adam",
                  "weight_decay": 0.0, "clip_norm": 1.0,
                  "scheduler_factor": 0.2, "scheduler_patience": 10,
                  "min_lr": 1e-7, "early_stop_patience": 5, "seed": 0},
    },
    # Single-regime shape (r=2, L=3, k_theta=1, L_h=1, S=1) used by the
    # `params` command to print the quantum/classical head-count scaling
    # table across task counts.
    "theorem1": {
        "variant": "qmtl",
        "scaling": {
            "outputs": 2, "layers": 3, "k_theta": 1,
            "head_layers": 1, "head_size": 1,
            "task_counts": [1, 2, 5, 10, 20, 50, 100, 1000],
        },
    },
    # Small separable 3-task layout: two binary single-qubit heads and one
    # 3-class 2-qubit head on a 4-qubit encoder, d = Q*L = 12 features.
    # The encoder is a product circuit here: without inter-qubit entangling
    # every head sees an undisturbed feature qubit, which keeps this layout
    # trainable to high accuracy at this tiny width.
    "toy": {
        "variant": "qmtl",
        "encoder": {"qubits": 4, "layers": 3, "entangling": False},
        "heads": [
            _head("alpha", [0], 1, "binary", metrics=("accuracy", "f1"),
                  calibration="affine"),
            _head("beta", [1], 1, "binary", metrics=("accuracy", "f1"),
                  calibration="affine"),
            _head("gamma", [2, 3], 3, "multiclass", num_classes=3,
                  metrics=("accuracy",), calibration="affine"),
        ],
        "data": {"feature_dim": 12, "n_train": 512, "n_val": 128,
                 "teacher_seed": 216, "noise_level": 0.0},
        "train": {"lr": 0.1, "epochs": 200, "batch_size": 64,
                  "protocol": "masked_parallel", "optimizer": "adam",
                  "weight_decay": 0.0, "clip_norm": 1.0,
                  "scheduler_factor": 0.2, "scheduler_patience": 20,
                  "min_lr": 1e-7, "early_stop_patience": 50,
                  "eval_every": 5, "seed": 0},
    },
}


def get_preset(name: str) -> dict:
    if name not in PRESETS:
        raise KeyError(name)
    return copy.deepcopy(PRESETS[name])
