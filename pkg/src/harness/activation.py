"""Ingest externally produced activation maps through the costmap pipeline."""

import logging
from pathlib import Path
from typing import Optional, Union

from src.costmap.image import MAP_HEIGHT, MAP_WIDTH, CostmapImage
from src.costmap.io import read_activation_file, write_map_file, write_pgm
from src.costmap.pipeline import BINARY_THRESHOLD, build_costmap

logger = logging.getLogger(__name__)


def process_activation_file(
    path: Union[str, Path],
    blur: bool,
    *,
    blur_radius: int = 1,
    threshold: float = BINARY_THRESHOLD,
    out_dir: Optional[Union[str, Path]] = None,
    width: int = MAP_WIDTH,
    height: int = MAP_HEIGHT,
) -> CostmapImage:
    """aggregate -> binary -> resize -> optional blur, then export.

    Writes ``<stem>.pgm`` and ``<stem>.map`` next to the input, or into
    ``out_dir`` when given.
    """
    if blur and blur_radius < 1:
        raise ValueError(f"blur radius must be >= 1, got {blur_radius}")
    source = Path(path)
    tensor = read_activation_file(source)
    costmap = build_costmap(tensor, width, height, threshold, blur_radius if blur else 0)

    target_dir = Path(out_dir) if out_dir is not None else source.parent
    target_dir.mkdir(parents=True, exist_ok=True)
    write_pgm(costmap, target_dir / f"{source.stem}.pgm")
    write_map_file(costmap, target_dir / f"{source.stem}.map")
    logger.info(
        f"Processed {source.name}: {costmap.stage.value} map, "
        f"{costmap.occupied_fraction():.1%} of pixels non-zero"
    )
    return costmap
