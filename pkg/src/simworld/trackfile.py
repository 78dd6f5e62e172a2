"""Track fixture files.

    # comment lines and blank lines are ignored
    AIRL-TRACK closed|open [curb=<meters>]
    x y half_width
    ...

One centerline point per line, meters. A half width of ``inf`` makes an
unbounded plane.
"""

import logging
import re
from pathlib import Path
from typing import Optional, Union

import numpy as np

from src.core.exceptions import ParseError
from src.simworld.track import TrackWorld

logger = logging.getLogger(__name__)

TRACK_MAGIC = "AIRL-TRACK"
_LINE = re.compile(rb"[^\n]*\n?")


def parse_track_bytes(data: bytes, path: Optional[str] = None, name: Optional[str] = None) -> TrackWorld:
    header = None
    rows = []
    for match in _LINE.finditer(data):
        raw = match.group()
        if not raw:
            break
        offset = match.start()
        text = raw.split(b"#", 1)[0].strip()
        if not text:
            continue
        try:
            fields = text.decode("ascii").split()
        except UnicodeDecodeError:
            raise ParseError(path, offset, "non-ASCII content")

        if header is None:
            if fields[0] != TRACK_MAGIC or len(fields) < 2 or fields[1] not in ("closed", "open"):
                raise ParseError(path, offset, f"expected '{TRACK_MAGIC} closed|open'")
            curb = 0.0
            for extra in fields[2:]:
                key, _, value = extra.partition("=")
                if key != "curb":
                    raise ParseError(path, offset, f"unknown header option {extra!r}")
                try:
                    curb = float(value)
                except ValueError:
                    raise ParseError(path, offset, f"invalid curb width {value!r}")
            header = (fields[1] == "closed", curb)
            continue

        if len(fields) != 3:
            raise ParseError(path, offset, f"expected 'x y half_width', got {len(fields)} fields")
        try:
            rows.append([float(f) for f in fields])
        except ValueError:
            raise ParseError(path, offset, f"invalid number in {text.decode('ascii')!r}")

    if header is None:
        raise ParseError(path, 0, f"missing {TRACK_MAGIC} header")
    if len(rows) < 3:
        raise ParseError(path, len(data), f"need at least 3 centerline points, found {len(rows)}")

    arr = np.array(rows)
    closed, curb = header
    try:
        return TrackWorld(arr[:, :2], arr[:, 2], closed=closed, name=name or "track", curb_width=curb)
    except ValueError as e:
        raise ParseError(path, 0, str(e))


def read_track_file(path: Union[str, Path]) -> TrackWorld:
    target = Path(path)
    world = parse_track_bytes(target.read_bytes(), str(target), name=target.stem)
    logger.info(f"Loaded track {world.name} ({len(world.centerline)} points, length {world.length:.1f} m)")
    return world


def format_track(world: TrackWorld) -> str:
    kind = "closed" if world.closed else "open"
    lines = [f"# {world.name}", f"{TRACK_MAGIC} {kind} curb={world.curb_width:g}"]
    lines.extend(f"{x:.6f} {y:.6f} {hw:g}" for (x, y), hw in zip(world.centerline, world.half_width))
    return "\n".join(lines) + "\n"


def write_track_file(world: TrackWorld, path: Union[str, Path]) -> Path:
    target = Path(path)
    target.write_text(format_track(world))
    return target
