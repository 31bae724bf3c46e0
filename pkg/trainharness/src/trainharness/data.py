"""Dataset plumbing.

Reads the generator's on-disk dataset format directly (a manifest.csv of
"relative_path,label" rows under a "# fdsl-manifest v1, digest=<hex>"
header, plus grayscale PNGs); nothing here imports the generator.  Also
builds the small natural-image benchmark used by fine-tuning: crops of
scikit-learn's two bundled photographs, written in that same format.
"""

import hashlib
from pathlib import Path

import numpy as np
import torch
from PIL import Image

from .errors import IntegrityError

MANIFEST_MAGIC = "# fdsl-manifest v1"

# fraction of a dataset held out by stable path hash, so both training
# arms of an experiment see the identical split regardless of seed
TEST_FRACTION = 0.25


def read_manifest(root) -> tuple[str, list[tuple[str, int]]]:
    """Parse <root>/manifest.csv into (digest, [(relative_path, label)])."""
    path = Path(root) / "manifest.csv"
    if not path.is_file():
        raise IntegrityError(f"no manifest at {path}")
    lines = path.read_text().splitlines()
    prefix = f"{MANIFEST_MAGIC}, digest="
    if not lines or not lines[0].startswith(prefix):
        raise IntegrityError(f"{path}: unrecognized manifest header")
    records = []
    for line in lines[1:]:
        if not line.strip():
            continue
        rel, _, label = line.rpartition(",")
        records.append((rel, int(label)))
    if not records:
        raise IntegrityError(f"{path}: manifest lists no images")
    return lines[0][len(prefix):], records


def is_test_path(relative_path: str) -> bool:
    """Stable train/test membership from the path alone."""
    digest = hashlib.sha256(relative_path.encode("utf-8")).digest()
    return digest[0] < 256 * TEST_FRACTION


def load_dataset(root, image_size: int = 32,
                 split: str | None = None) -> tuple[torch.Tensor, torch.Tensor]:
    """Load a dataset directory into memory.

    Returns (images, labels): float32 images in [0, 1] shaped
    (N, 1, image_size, image_size) and int64 labels.  split selects
    "train" or "test" rows by stable path hash; None loads everything.
    Any manifest path missing from disk is an integrity failure.
    """
    root = Path(root)
    _, records = read_manifest(root)
    if split == "train":
        records = [r for r in records if not is_test_path(r[0])]
    elif split == "test":
        records = [r for r in records if is_test_path(r[0])]
    elif split is not None:
        raise ValueError("split must be 'train', 'test', or None")

    images = np.empty((len(records), 1, image_size, image_size),
                      dtype=np.float32)
    labels = np.empty(len(records), dtype=np.int64)
    for i, (rel, label) in enumerate(records):
        path = root / rel
        if not path.is_file():
            raise IntegrityError(f"missing image {rel}")
        with Image.open(path) as im:
            im = im.convert("L")
            if im.size != (image_size, image_size):
                im = im.resize((image_size, image_size), Image.BILINEAR)
            images[i, 0] = np.asarray(im, dtype=np.float32) / 255.0
        labels[i] = label
    return torch.from_numpy(images), torch.from_numpy(labels)


def class_count(labels: torch.Tensor) -> int:
    return int(labels.max().item()) + 1


def apply_label_noise(labels: torch.Tensor, fraction: float,
                      seed: int) -> torch.Tensor:
    """Replace round(fraction * N) labels, chosen without replacement,
    with labels drawn uniformly over all classes."""
    if not 0.0 <= fraction <= 1.0:
        raise ValueError("noise fraction must be in [0, 1]")
    noisy = labels.clone()
    count = round(fraction * len(labels))
    if count == 0:
        return noisy
    rng = np.random.default_rng(seed)
    picked = rng.choice(len(labels), size=count, replace=False)
    noisy[picked] = torch.from_numpy(
        rng.integers(0, class_count(labels), size=count))
    return noisy


def _write_manifest(root: Path, records: list[tuple[str, int]],
                    config_text: str) -> None:
    digest = hashlib.sha256(config_text.encode("utf-8")).hexdigest()[:16]
    lines = [f"{MANIFEST_MAGIC}, digest={digest}"]
    lines += [f"{rel},{label}" for rel, label in records]
    (root / "manifest.csv").write_text("\n".join(lines) + "\n")


def crop_benchmark(output_root, seed: int = 0, crops_per_class: int = 96,
                   crop: int = 96, image_size: int = 64) -> Path:
    """Materialize the natural-image benchmark as a dataset directory.

    Two classes, one per bundled photograph; each example is a random
    crop rescaled to image_size and saved as a grayscale PNG in the
    generator's layout, so the fine-tuning loader needs no special case.
    Returns the dataset directory.
    """
    from sklearn.datasets import load_sample_images

    sources = load_sample_images().images
    root = Path(output_root) / f"natural-{len(sources)}"
    root.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    records = []
    for label, source in enumerate(sources):
        gray = source.mean(axis=2).astype(np.float32)
        (root / f"{label:05d}").mkdir(exist_ok=True)
        for j in range(crops_per_class):
            top = rng.integers(0, gray.shape[0] - crop + 1)
            left = rng.integers(0, gray.shape[1] - crop + 1)
            tile = gray[top:top + crop, left:left + crop]
            im = Image.fromarray(tile.astype(np.uint8), mode="L")
            im = im.resize((image_size, image_size), Image.BILINEAR)
            rel = f"{label:05d}/{label:05d}_{j:04d}.png"
            im.save(root / rel, format="PNG")
            records.append((rel, label))
    config = (f"natural crops seed={seed} per_class={crops_per_class} "
              f"crop={crop} size={image_size}\n")
    (root / "config.txt").write_text(config)
    _write_manifest(root, records, config)
    return root
