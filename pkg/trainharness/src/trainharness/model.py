"""The toy classifier and its checkpoints.

One architecture is registered: "toy-8", eight weight layers (six 3x3
convolutions in three pooled stages, then two fully connected layers).
It is a deliberate scale substitution for the full-size residual
network the source experiments used; it trains on a laptop CPU in
minutes.  Checkpoints carry the architecture name and head size so a
mismatched load fails loudly instead of silently reshaping.
"""

from pathlib import Path

import torch
from torch import nn

from .errors import CheckpointMismatch

_FORMAT = "trainharness-ckpt v1"


class ToyConvNet(nn.Module):
    """conv(1>w) conv(w>w) pool, conv(w>2w) conv(2w>2w) pool,
    conv(2w>4w) conv(4w>4w) pool, GAP, fc(4w>4w), fc(4w>classes)."""

    def __init__(self, n_classes: int, width: int = 16):
        super().__init__()
        w = width
        self.features = nn.Sequential(
            nn.Conv2d(1, w, 3, padding=1), nn.BatchNorm2d(w), nn.ReLU(),
            nn.Conv2d(w, w, 3, padding=1), nn.BatchNorm2d(w), nn.ReLU(),
            nn.MaxPool2d(2),
            nn.Conv2d(w, 2 * w, 3, padding=1), nn.BatchNorm2d(2 * w), nn.ReLU(),
            nn.Conv2d(2 * w, 2 * w, 3, padding=1), nn.BatchNorm2d(2 * w), nn.ReLU(),
            nn.MaxPool2d(2),
            nn.Conv2d(2 * w, 4 * w, 3, padding=1), nn.BatchNorm2d(4 * w), nn.ReLU(),
            nn.Conv2d(4 * w, 4 * w, 3, padding=1), nn.BatchNorm2d(4 * w), nn.ReLU(),
            nn.MaxPool2d(2),
        )
        self.pool = nn.AdaptiveAvgPool2d(1)
        self.hidden = nn.Linear(4 * w, 4 * w)
        self.act = nn.ReLU()
        self.head = nn.Linear(4 * w, n_classes)
        self.width = width
        self.n_classes = n_classes

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        x = self.pool(self.features(x)).flatten(1)
        return self.head(self.act(self.hidden(x)))


MODELS = {"toy-8": ToyConvNet}


def build_model(model: str, n_classes: int) -> nn.Module:
    if model not in MODELS:
        raise CheckpointMismatch(f"unknown model {model!r}; "
                                 f"known: {sorted(MODELS)}")
    return MODELS[model](n_classes)


def save_checkpoint(net: nn.Module, model: str, path) -> None:
    payload = {
        "format": _FORMAT,
        "model": model,
        "n_classes": net.n_classes,
        "state": net.state_dict(),
    }
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    torch.save(payload, path)


def load_checkpoint(path, model: str, n_classes: int) -> nn.Module:
    """Rebuild a network for n_classes target labels from a checkpoint,
    keeping every weight except the classification head."""
    path = Path(path)
    if not path.is_file():
        raise CheckpointMismatch(f"no checkpoint at {path}")
    payload = torch.load(path, map_location="cpu", weights_only=True)
    if not isinstance(payload, dict) or payload.get("format") != _FORMAT:
        raise CheckpointMismatch(f"{path} is not a harness checkpoint")
    if payload["model"] != model:
        raise CheckpointMismatch(
            f"checkpoint is {payload['model']!r}, requested {model!r}")
    donor = build_model(model, payload["n_classes"])
    donor.load_state_dict(payload["state"])
    net = build_model(model, n_classes)
    state = {k: v for k, v in donor.state_dict().items()
             if not k.startswith("head.")}
    net.load_state_dict(state, strict=False)
    return net
