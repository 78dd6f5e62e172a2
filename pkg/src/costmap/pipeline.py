"""Activation aggregation, filtering, resizing, blur and cost lookup."""

import logging
from math import comb
from typing import Optional

import numpy as np

from src.costmap.image import MAP_HEIGHT, MAP_WIDTH, ActivationTensor, CostmapImage, CostmapStage
from src.geometry.camera import PixelArray, PixelCoord

logger = logging.getLogger(__name__)

BINARY_THRESHOLD = 0.0


def aggregate_activations(tensor: ActivationTensor) -> CostmapImage:
    """Mean over kernels, then an unweighted mean over channels."""
    if tensor.values.size == 0:
        raise ValueError("activation tensor is empty")
    per_channel = tensor.values.mean(axis=0)
    return CostmapImage(per_channel.mean(axis=-1), CostmapStage.RAW)


def binary_filter(m: CostmapImage, threshold: float = BINARY_THRESHOLD) -> CostmapImage:
    """1 where value > threshold, else 0."""
    m.require_stage(CostmapStage.RAW, CostmapStage.BINARY)
    return CostmapImage((m.values > threshold).astype(float), CostmapStage.BINARY)


def resize_nearest(m: CostmapImage, target_w: int, target_h: int) -> CostmapImage:
    """Nearest-neighbour resize sampling source pixel centres."""
    if target_w <= 0 or target_h <= 0:
        raise ValueError(f"target size must be positive, got {target_w}x{target_h}")
    rows = np.floor((np.arange(target_h) + 0.5) * m.height / target_h).astype(int)
    cols = np.floor((np.arange(target_w) + 0.5) * m.width / target_w).astype(int)
    rows = np.clip(rows, 0, m.height - 1)
    cols = np.clip(cols, 0, m.width - 1)
    return CostmapImage(m.values[np.ix_(rows, cols)], m.stage)


def binomial_kernel(radius: int) -> np.ndarray:
    """(2r+1)x(2r+1) binomial kernel with unit mass; radius 1 is (1,2,1)x(1,2,1)/16."""
    if radius < 1:
        raise ValueError(f"blur radius must be >= 1, got {radius}")
    row = np.array([comb(2 * radius, i) for i in range(2 * radius + 1)], dtype=float)
    kernel = np.outer(row, row)
    return kernel / kernel.sum()


def binomial_blur(m: CostmapImage, radius: int = 1) -> CostmapImage:
    """Blur a binary map with replicate borders; larger radii are more risk-averse."""
    m.require_stage(CostmapStage.BINARY)
    kernel = binomial_kernel(radius)
    padded = np.pad(m.values, radius, mode="edge")
    out = np.zeros_like(m.values)
    h, w = m.shape
    size = 2 * radius + 1
    for di in range(size):
        for dj in range(size):
            out += kernel[di, dj] * padded[di:di + h, dj:dj + w]
    return CostmapImage(np.clip(out, 0.0, 1.0), CostmapStage.BLURRED)


def gaussian_blur_3x3(m: CostmapImage) -> CostmapImage:
    return binomial_blur(m, radius=1)


def build_costmap(
    tensor: ActivationTensor,
    target_w: int = MAP_WIDTH,
    target_h: int = MAP_HEIGHT,
    threshold: float = BINARY_THRESHOLD,
    blur_radius: int = 0,
) -> CostmapImage:
    """aggregate -> binary_filter -> resize_nearest -> optional blur."""
    m = aggregate_activations(tensor)
    m = binary_filter(m, threshold)
    m = resize_nearest(m, target_w, target_h)
    if blur_radius > 0:
        m = binomial_blur(m, blur_radius)
    logger.debug(f"Built {m.stage.value} costmap {m.width}x{m.height}, occupied={m.occupied_fraction():.3f}")
    return m


def round_half_away(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    return np.sign(values) * np.floor(np.abs(values) + 0.5)


def lookup_many(m: CostmapImage, pixels: PixelArray, threshold: Optional[float] = None) -> np.ndarray:
    """Vectorized cost_lookup; off-image and behind-camera points cost 0.

    With ``threshold`` set, looked-up values are mapped to {0, 1} by
    value >= threshold.
    """
    valid = pixels.in_frame & ~pixels.behind_camera
    u = np.where(valid, pixels.u, 0.0)
    v = np.where(valid, pixels.v, 0.0)
    cols = np.clip(round_half_away(u).astype(int), 0, m.width - 1)
    rows = np.clip(round_half_away(v).astype(int), 0, m.height - 1)
    values = m.values[rows, cols]
    if threshold is not None:
        values = (values >= threshold).astype(float)
    return np.where(valid, values, 0.0)


def cost_lookup(m: CostmapImage, p: PixelCoord) -> float:
    """Map value at the rounded pixel; 0 when out of frame or degenerate."""
    if not p.in_frame or p.behind_camera:
        return 0.0
    col = int(min(max(round_half_away(p.u), 0), m.width - 1))
    row = int(min(max(round_half_away(p.v), 0), m.height - 1))
    return float(m.values[row, col])
