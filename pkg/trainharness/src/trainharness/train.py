"""Training loops and their logs.

pretrain fits the classifier to a generated dataset (optionally with a
fraction of labels randomized first) and logs training accuracy per
epoch; finetune starts from a checkpoint or from scratch, swaps the
head for the target label count, and logs held-out accuracy per epoch.
Logs are lists of (epoch, split, accuracy, loss) rows, written as CSV
with exactly that header.  With a fixed config and seed both loops are
bit-reproducible within one environment.
"""

import csv
import math
from dataclasses import dataclass, replace
from pathlib import Path

import torch
from torch import nn

from .data import apply_label_noise, class_count, load_dataset
from .errors import ConfigError, DivergenceError
from .model import build_model, load_checkpoint

SCRATCH = "scratch"


@dataclass(frozen=True)
class TrainConfig:
    dataset_root: str
    model: str = "toy-8"
    batch_size: int = 64
    epochs: int = 15
    learning_rate: float = 0.01
    momentum: float = 0.9
    label_noise_fraction: float = 0.0
    seed: int = 0
    image_size: int = 32

    def __post_init__(self):
        if self.batch_size < 1:
            raise ConfigError("batch_size must be positive")
        if self.epochs < 0:
            raise ConfigError("epochs must be >= 0")
        if self.learning_rate <= 0 or self.momentum < 0:
            raise ConfigError("learning_rate must be > 0 and momentum >= 0")
        if not 0.0 <= self.label_noise_fraction <= 1.0:
            raise ConfigError("label_noise_fraction must be in [0, 1]")
        if self.image_size < 8:
            raise ConfigError("image_size must be >= 8")


def _epoch_batches(n: int, batch_size: int, generator: torch.Generator):
    perm = torch.randperm(n, generator=generator)
    for start in range(0, n, batch_size):
        yield perm[start:start + batch_size]


@torch.no_grad()
def _evaluate(net: nn.Module, images: torch.Tensor,
              labels: torch.Tensor, batch_size: int) -> tuple[float, float]:
    net.eval()
    lossfn = nn.CrossEntropyLoss(reduction="sum")
    correct = 0
    loss_sum = 0.0
    for start in range(0, len(images), batch_size):
        xb = images[start:start + batch_size]
        yb = labels[start:start + batch_size]
        out = net(xb)
        loss_sum += lossfn(out, yb).item()
        correct += (out.argmax(dim=1) == yb).sum().item()
    return correct / len(images), loss_sum / len(images)


def _train_loop(net: nn.Module, images: torch.Tensor, labels: torch.Tensor,
                cfg: TrainConfig, heldout=None) -> list[tuple]:
    if cfg.batch_size > len(images):
        raise ConfigError(f"batch_size {cfg.batch_size} exceeds the "
                          f"{len(images)}-image dataset")
    optimizer = torch.optim.SGD(net.parameters(), lr=cfg.learning_rate,
                                momentum=cfg.momentum)
    lossfn = nn.CrossEntropyLoss()
    shuffle = torch.Generator().manual_seed(cfg.seed)
    rows = []
    for epoch in range(1, cfg.epochs + 1):
        net.train()
        correct = 0
        loss_sum = 0.0
        for batch in _epoch_batches(len(images), cfg.batch_size, shuffle):
            xb, yb = images[batch], labels[batch]
            optimizer.zero_grad()
            out = net(xb)
            loss = lossfn(out, yb)
            value = loss.item()
            if not math.isfinite(value):
                raise DivergenceError(f"non-finite loss at epoch {epoch}")
            loss.backward()
            optimizer.step()
            loss_sum += value * len(batch)
            correct += (out.argmax(dim=1) == yb).sum().item()
        rows.append((epoch, "train", correct / len(images),
                     loss_sum / len(images)))
        if heldout is not None:
            acc, loss_value = _evaluate(net, *heldout, cfg.batch_size)
            rows.append((epoch, "test", acc, loss_value))
    return rows


def pretrain(cfg: TrainConfig) -> tuple[nn.Module, list[tuple]]:
    """Train on a generated dataset; returns (network, log rows).

    label_noise_fraction randomizes that fraction of the labels before
    training; the log records training accuracy per epoch.
    """
    images, labels = load_dataset(cfg.dataset_root, cfg.image_size)
    labels = apply_label_noise(labels, cfg.label_noise_fraction, cfg.seed)
    torch.manual_seed(cfg.seed)
    net = build_model(cfg.model, class_count(labels))
    rows = _train_loop(net, images, labels, cfg)
    return net, rows


def finetune(checkpoint, target_root, cfg: TrainConfig) -> tuple[nn.Module, list[tuple]]:
    """Fine-tune a checkpoint (or "scratch") on a target dataset.

    The target splits train/test by stable path hash, the head is
    rebuilt for the target's label count, and the log carries both
    train rows and held-out test rows per epoch.
    """
    cfg = replace(cfg, dataset_root=str(target_root))
    train_images, train_labels = load_dataset(target_root, cfg.image_size,
                                              split="train")
    test_images, test_labels = load_dataset(target_root, cfg.image_size,
                                            split="test")
    n_classes = max(class_count(train_labels), class_count(test_labels))
    torch.manual_seed(cfg.seed)
    if checkpoint == SCRATCH:
        net = build_model(cfg.model, n_classes)
    else:
        net = load_checkpoint(checkpoint, cfg.model, n_classes)
    train_labels = apply_label_noise(train_labels, cfg.label_noise_fraction,
                                     cfg.seed)
    rows = _train_loop(net, train_images, train_labels, cfg,
                       heldout=(test_images, test_labels))
    return net, rows


def write_log(rows: list[tuple], path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "split", "accuracy", "loss"])
        for epoch, split, accuracy, loss in rows:
            writer.writerow([epoch, split, f"{accuracy:.6f}", f"{loss:.6f}"])


def read_log(path) -> list[tuple]:
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["epoch", "split", "accuracy", "loss"]:
            raise ConfigError(f"{path}: unexpected log header {header}")
        return [(int(e), s, float(a), float(l)) for e, s, a, l in reader]


def epochs_to_reach(rows: list[tuple], threshold: float,
                    split: str = "test") -> int | None:
    """First epoch whose accuracy on the split meets the threshold."""
    for epoch, row_split, accuracy, _ in rows:
        if row_split == split and accuracy >= threshold:
            return epoch
    return None
