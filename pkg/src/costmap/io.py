"""Text formats for activation tensors and costmaps, plus PGM export.

Activation file::

    AIRL-ACT k h w c
    <k*h*w*c floats, kernel-major, then row, column, channel>

Costmap file::

    AIRL-MAP h w
    <h rows of w floats>
"""

import logging
import math
import re
from itertools import islice
from pathlib import Path
from typing import Optional, Union

import numpy as np
from PIL import Image

from src.core.exceptions import ParseError
from src.costmap.image import ActivationTensor, CostmapImage, CostmapStage

logger = logging.getLogger(__name__)

ACTIVATION_MAGIC = b"AIRL-ACT"
MAP_MAGIC = b"AIRL-MAP"
_TOKEN = re.compile(rb"\S+")
# largest tensor or map a file may declare
MAX_ELEMENTS = 1 << 28

PathLike = Union[str, Path]


def _parse_payload(data: bytes, path: Optional[str], magic: bytes, n_dims: int) -> tuple[tuple[int, ...], np.ndarray]:
    """Split ``data`` into a dimension header and a float payload.

    Every failure raises ParseError at the byte offset of the offending
    token, or at the end of the data when values are missing.
    """
    tokens = _TOKEN.finditer(data)
    first = next(tokens, None)
    if first is None or first.group() != magic:
        raise ParseError(path, first.start() if first else 0, f"expected header {magic.decode()}")

    dims = []
    for name_idx in range(n_dims):
        tok = next(tokens, None)
        if tok is None:
            raise ParseError(path, len(data), f"header truncated: expected {n_dims} dimensions")
        try:
            value = int(tok.group())
        except ValueError:
            raise ParseError(path, tok.start(), f"dimension {name_idx} is not an integer: {tok.group()!r}")
        if value <= 0:
            raise ParseError(path, tok.start(), f"dimension {name_idx} must be positive, got {value}")
        dims.append(value)
        if math.prod(dims) > MAX_ELEMENTS:
            raise ParseError(path, tok.start(), f"declared size exceeds {MAX_ELEMENTS} values")

    header_end = tok.end()
    expected = math.prod(dims)
    body = data[header_end:]
    try:
        values = np.array(body.decode("ascii").split(), dtype=float)
    except (UnicodeDecodeError, ValueError):
        values = None

    if values is None or values.size != expected or not np.all(np.isfinite(values)):
        _locate_payload_error(data, header_end, expected, path)
    return tuple(dims), values


def _locate_payload_error(data: bytes, start: int, expected: int, path: Optional[str]) -> None:
    count = 0
    for tok in _TOKEN.finditer(data, start):
        if count == expected:
            raise ParseError(path, tok.start(), f"trailing data after {expected} values")
        try:
            value = float(tok.group().decode("ascii"))
        except (UnicodeDecodeError, ValueError):
            raise ParseError(path, tok.start(), f"invalid number {tok.group()[:32]!r}")
        if not np.isfinite(value):
            raise ParseError(path, tok.start(), f"non-finite value {tok.group()!r}")
        count += 1
    raise ParseError(path, len(data), f"expected {expected} values, found {count}")


def parse_activation_bytes(data: bytes, path: Optional[str] = None) -> ActivationTensor:
    dims, values = _parse_payload(data, path, ACTIVATION_MAGIC, 4)
    if np.any(values < 0):
        first_bad = int(np.argmax(values < 0))
        # magic and four dimensions precede the values
        offset = next(islice(_TOKEN.finditer(data), 5 + first_bad, None)).start()
        raise ParseError(path, offset, "activation values must be non-negative")
    return ActivationTensor(values.reshape(dims))


def read_activation_file(path: PathLike) -> ActivationTensor:
    tensor = parse_activation_bytes(Path(path).read_bytes(), str(path))
    logger.info(f"Read activation tensor {tensor.values.shape} from {path}")
    return tensor


def format_activation(tensor: ActivationTensor) -> str:
    k, h, w, c = tensor.values.shape
    lines = [f"AIRL-ACT {k} {h} {w} {c}"]
    flat = tensor.values.reshape(-1, c)
    lines.extend(" ".join(f"{v:.17g}" for v in row) for row in flat)
    return "\n".join(lines) + "\n"


def write_activation_file(tensor: ActivationTensor, path: PathLike) -> Path:
    target = Path(path)
    target.write_text(format_activation(tensor))
    return target


def _infer_stage(values: np.ndarray) -> CostmapStage:
    if np.all((values == 0.0) | (values == 1.0)):
        return CostmapStage.BINARY
    if values.min() >= 0.0 and values.max() <= 1.0:
        return CostmapStage.BLURRED
    return CostmapStage.RAW


def parse_map_bytes(data: bytes, path: Optional[str] = None) -> CostmapImage:
    dims, values = _parse_payload(data, path, MAP_MAGIC, 2)
    grid = values.reshape(dims)
    return CostmapImage(grid, _infer_stage(grid))


def read_map_file(path: PathLike) -> CostmapImage:
    return parse_map_bytes(Path(path).read_bytes(), str(path))


def format_map(m: CostmapImage) -> str:
    lines = [f"AIRL-MAP {m.height} {m.width}"]
    lines.extend(" ".join(f"{v:.17g}" for v in row) for row in m.values)
    return "\n".join(lines) + "\n"


def write_map_file(m: CostmapImage, path: PathLike) -> Path:
    target = Path(path)
    target.write_text(format_map(m))
    return target


def to_grey(m: CostmapImage) -> np.ndarray:
    """uint8 grey levels, round(255 * cost) with costs clipped to [0, 1]."""
    scaled = np.clip(m.values, 0.0, 1.0) * 255.0
    return np.floor(scaled + 0.5).astype(np.uint8)


def write_pgm(m: CostmapImage, path: PathLike) -> Path:
    """Binary PGM (P5, maxval 255)."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(to_grey(m)).save(target, format="PPM")
    logger.debug(f"Wrote {m.width}x{m.height} PGM to {target}")
    return target
