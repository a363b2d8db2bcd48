"""Map fixture generation: descriptor + PGM pairs for tests and the CLI.

The 100x100 fixture at 0.05 m/cell is the standard reproduction environment.
"""

from __future__ import annotations

import os

import numpy as np

DEFAULT_RESOLUTION = 0.05
PIXEL_FREE = 254
PIXEL_OCCUPIED = 0


def write_map_files(out_dir: str, name: str, occupied: np.ndarray,
                    resolution: float = DEFAULT_RESOLUTION,
                    origin: tuple[float, float, float] = (0.0, 0.0, 0.0)) -> str:
    """Write <name>.pgm + <name>.yaml from a bool (height, width) occupied mask
    indexed with row 0 at the BOTTOM; returns the descriptor path."""
    os.makedirs(out_dir, exist_ok=True)
    height, width = occupied.shape
    pixels = np.where(occupied, PIXEL_OCCUPIED, PIXEL_FREE).astype(np.uint8)
    pixels = np.flipud(pixels)  # image row 0 is the top
    pgm_path = os.path.join(out_dir, f"{name}.pgm")
    with open(pgm_path, "wb") as f:
        f.write(f"P5\n{width} {height}\n255\n".encode())
        f.write(pixels.tobytes())
    yaml_path = os.path.join(out_dir, f"{name}.yaml")
    with open(yaml_path, "w") as f:
        f.write(f"image: {name}.pgm\n")
        f.write(f"resolution: {resolution}\n")
        f.write(f"origin: [{origin[0]}, {origin[1]}, {origin[2]}]\n")
        f.write("negate: 0\n")
        f.write("occupied_thresh: 0.65\n")
        f.write("free_thresh: 0.196\n")
    return yaml_path


def empty_mask(width: int, height: int) -> np.ndarray:
    return np.zeros((height, width), dtype=bool)


def wall_mask(width: int, height: int) -> np.ndarray:
    """Vertical wall at mid-width spanning the bottom 80% of rows; gap on top."""
    occ = np.zeros((height, width), dtype=bool)
    col = width // 2
    occ[: max(1, int(height * 0.8)), col] = True
    return occ


def random_mask(width: int, height: int, density: float, seed: int) -> np.ndarray:
    """Bernoulli obstacles; the lower-left and upper-right corners stay Free."""
    rng = np.random.default_rng(seed)
    occ = rng.random((height, width)) < density
    occ[0, 0] = False
    occ[height - 1, width - 1] = False
    return occ


def make_fixture(kind: str, width: int, height: int, out_dir: str,
                 density: float = 0.2, seed: int = 0,
                 resolution: float = DEFAULT_RESOLUTION) -> str:
    if width < 1 or height < 1:
        raise ValueError(f"bad fixture dimensions {width}x{height}")
    if kind == "empty":
        occ = empty_mask(width, height)
    elif kind == "wall":
        occ = wall_mask(width, height)
    elif kind == "random":
        if not 0.0 <= density <= 1.0:
            raise ValueError(f"density must be in [0, 1], got {density}")
        occ = random_mask(width, height, density, seed)
    else:
        raise ValueError(f"unknown fixture kind '{kind}'")
    return write_map_files(out_dir, kind, occ, resolution=resolution)
