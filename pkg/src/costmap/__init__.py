"""Costmap pipeline: activation maps to image-space cost grids."""

from src.costmap.image import (
    MAP_HEIGHT,
    MAP_WIDTH,
    ActivationTensor,
    CostmapImage,
    CostmapStage,
)
from src.costmap.io import (
    format_activation,
    parse_activation_bytes,
    parse_map_bytes,
    read_activation_file,
    read_map_file,
    write_activation_file,
    write_map_file,
    write_pgm,
)
from src.costmap.pipeline import (
    aggregate_activations,
    binary_filter,
    binomial_blur,
    binomial_kernel,
    build_costmap,
    cost_lookup,
    gaussian_blur_3x3,
    lookup_many,
    resize_nearest,
)

__all__ = [
    "MAP_HEIGHT",
    "MAP_WIDTH",
    "ActivationTensor",
    "CostmapImage",
    "CostmapStage",
    "aggregate_activations",
    "binary_filter",
    "binomial_blur",
    "binomial_kernel",
    "build_costmap",
    "cost_lookup",
    "format_activation",
    "gaussian_blur_3x3",
    "lookup_many",
    "parse_activation_bytes",
    "parse_map_bytes",
    "read_activation_file",
    "read_map_file",
    "resize_nearest",
    "write_activation_file",
    "write_map_file",
    "write_pgm",
]
