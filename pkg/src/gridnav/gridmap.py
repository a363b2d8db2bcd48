"""Occupancy-grid maps: loading, inflation, and world/grid coordinate transforms.

Maps come in as a YAML descriptor pointing at a PGM image (map-server style).
Image row 0 is the top of the map, but the grid origin anchors the lower-left
cell, so rows are flipped on load: grid row 0 is the bottom.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from enum import IntEnum
from typing import NamedTuple

import numpy as np
import yaml

from .errors import (
    InvalidThresholdsError,
    MalformedDescriptorError,
    MalformedImageError,
    MissingFileError,
    OutOfBoundsError,
)

DEFAULT_OCCUPIED_THRESH = 0.65
DEFAULT_FREE_THRESH = 0.196


class Occupancy(IntEnum):
    UNKNOWN = -1
    FREE = 0
    OCCUPIED = 1


class GridIndex(NamedTuple):
    col: int
    row: int


class WorldPoint(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class OccupancyGrid:
    """Immutable 2D cell map. `cells` is (height, width) int8 of Occupancy values."""

    width: int
    height: int
    resolution: float
    origin: tuple[float, float, float]  # x, y, theta of the lower-left cell corner
    cells: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("grid dimensions must be >= 1")
        if self.resolution <= 0:
            raise ValueError("resolution must be > 0")
        if self.cells.shape != (self.height, self.width):
            raise ValueError("cells shape must be (height, width)")
        self.cells.setflags(write=False)

    def occupancy(self, idx: GridIndex) -> Occupancy:
        if not self.in_bounds(idx):
            raise OutOfBoundsError(f"index {idx} outside {self.width}x{self.height} grid")
        return Occupancy(int(self.cells[idx.row, idx.col]))

    def in_bounds(self, idx: GridIndex) -> bool:
        return 0 <= idx.col < self.width and 0 <= idx.row < self.height

    def is_free(self, idx: GridIndex) -> bool:
        return self.in_bounds(idx) and self.cells[idx.row, idx.col] == Occupancy.FREE

    def free_mask(self) -> np.ndarray:
        return self.cells == Occupancy.FREE


def classify(p: float, occupied_thresh: float, free_thresh: float) -> Occupancy:
    """Map an occupancy probability to a cell state. Total over [0, 1]."""
    if p >= occupied_thresh:
        return Occupancy.OCCUPIED
    if p <= free_thresh:
        return Occupancy.FREE
    return Occupancy.UNKNOWN


def _read_pgm(path: str) -> np.ndarray:
    """Read a P2/P5 PGM with maxval 255; returns (rows, cols) uint8, row 0 = image top."""
    try:
        with open(path, "rb") as f:
            data = f.read()
    except FileNotFoundError:
        raise MissingFileError(f"image file not found: {path}")

    # header tokens, skipping '#' comments
    tokens: list[bytes] = []
    pos = 0
    while len(tokens) < 4 and pos < len(data):
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] not in (10, 13):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if pos > start:
            tokens.append(data[start:pos])
    if len(tokens) < 4:
        raise MalformedImageError(f"truncated PGM header in {path}")

    magic = tokens[0]
    if magic not in (b"P2", b"P5"):
        raise MalformedImageError(f"bad magic {magic!r} in {path} (want P2 or P5)")
    try:
        width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    except ValueError:
        raise MalformedImageError(f"non-numeric PGM header field in {path}")
    if width < 1 or height < 1:
        raise MalformedImageError(f"bad PGM dimensions {width}x{height} in {path}")
    if maxval != 255:
        raise MalformedImageError(f"unsupported maxval {maxval} in {path} (want 255)")

    if magic == b"P5":
        pixels = np.frombuffer(data[pos + 1 :], dtype=np.uint8, count=-1)
        if pixels.size < width * height:
            raise MalformedImageError(
                f"PGM pixel data too short in {path}: {pixels.size} < {width * height}"
            )
        pixels = pixels[: width * height]
    else:
        body = data[pos:].split(b"#")[0].split()
        if len(body) < width * height:
            raise MalformedImageError(
                f"PGM pixel data too short in {path}: {len(body)} < {width * height}"
            )
        try:
            pixels = np.array([int(t) for t in body[: width * height]], dtype=np.uint8)
        except (ValueError, OverflowError):
            raise MalformedImageError(f"non-numeric P2 pixel in {path}")
    return pixels.reshape(height, width)


def load_map(descriptor_path: str) -> OccupancyGrid:
    """Load a YAML descriptor + PGM image into an OccupancyGrid.

    Occupancy probability per pixel: p = pixel/255 if negate else (255-pixel)/255.
    Occupied if p >= occupied_thresh, Free if p <= free_thresh, else Unknown.
    """
    if not os.path.isfile(descriptor_path):
        raise MissingFileError(f"descriptor not found: {descriptor_path}")
    try:
        with open(descriptor_path) as f:
            desc = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise MalformedDescriptorError(f"unparseable descriptor {descriptor_path}: {e}")
    if not isinstance(desc, dict):
        raise MalformedDescriptorError(f"descriptor {descriptor_path} is not a mapping")

    for key in ("image", "resolution", "origin"):
        if key not in desc:
            raise MalformedDescriptorError(f"descriptor missing required key '{key}'")

    image_path = desc["image"]
    if not os.path.isabs(image_path):
        image_path = os.path.join(os.path.dirname(os.path.abspath(descriptor_path)), image_path)

    try:
        resolution = float(desc["resolution"])
        origin_raw = desc["origin"]
        origin = (float(origin_raw[0]), float(origin_raw[1]), float(origin_raw[2]))
        negate = int(desc.get("negate", 0))
        occupied_thresh = float(desc.get("occupied_thresh", DEFAULT_OCCUPIED_THRESH))
        free_thresh = float(desc.get("free_thresh", DEFAULT_FREE_THRESH))
    except (TypeError, ValueError, IndexError, KeyError) as e:
        raise MalformedDescriptorError(f"bad descriptor field in {descriptor_path}: {e}")
    if resolution <= 0:
        raise MalformedDescriptorError(f"resolution must be > 0, got {resolution}")
    if occupied_thresh < free_thresh:
        raise InvalidThresholdsError(
            f"occupied_thresh {occupied_thresh} < free_thresh {free_thresh}"
        )

    pixels = _read_pgm(image_path)
    height, width = pixels.shape
    if negate:
        p = pixels.astype(np.float64) / 255.0
    else:
        p = (255.0 - pixels.astype(np.float64)) / 255.0

    cells = np.full((height, width), Occupancy.UNKNOWN, dtype=np.int8)
    cells[p >= occupied_thresh] = Occupancy.OCCUPIED
    cells[p <= free_thresh] = Occupancy.FREE
    # image row 0 is the top; grid row 0 is the bottom
    cells = np.flipud(cells).copy()

    return OccupancyGrid(width=width, height=height, resolution=resolution,
                         origin=origin, cells=cells)


def inflate(grid: OccupancyGrid, radius: float) -> OccupancyGrid:
    """Grow Occupied cells by `radius` meters (Euclidean, cell-center metric)."""
    if radius < 0:
        raise ValueError("inflation radius must be >= 0")
    r_cells = radius / grid.resolution
    k = int(math.floor(r_cells + 1e-9))
    if k == 0 or not np.any(grid.cells == Occupancy.OCCUPIED):
        return grid
    occ = grid.cells == Occupancy.OCCUPIED
    inflated = occ.copy()
    for dr in range(-k, k + 1):
        for dc in range(-k, k + 1):
            if dr == 0 and dc == 0:
                continue
            if math.hypot(dr, dc) > r_cells + 1e-9:
                continue
            shifted = np.zeros_like(occ)
            rs = slice(max(dr, 0), grid.height + min(dr, 0))
            rsrc = slice(max(-dr, 0), grid.height + min(-dr, 0))
            cs = slice(max(dc, 0), grid.width + min(dc, 0))
            csrc = slice(max(-dc, 0), grid.width + min(-dc, 0))
            shifted[rs, cs] = occ[rsrc, csrc]
            inflated |= shifted
    cells = grid.cells.copy()
    cells[inflated] = Occupancy.OCCUPIED
    return OccupancyGrid(width=grid.width, height=grid.height,
                         resolution=grid.resolution, origin=grid.origin, cells=cells)


def world_to_grid(grid: OccupancyGrid, p: WorldPoint) -> GridIndex:
    """Map a world point to the grid cell containing it; raises OutOfBoundsError."""
    ox, oy, oth = grid.origin
    dx = p.x - ox
    dy = p.y - oy
    if oth != 0.0:
        c, s = math.cos(-oth), math.sin(-oth)
        dx, dy = c * dx - s * dy, s * dx + c * dy
    col = math.floor(dx / grid.resolution)
    row = math.floor(dy / grid.resolution)
    if not (0 <= col < grid.width and 0 <= row < grid.height):
        raise OutOfBoundsError(f"world point {p} maps to cell ({col}, {row}) off the map")
    return GridIndex(int(col), int(row))


def grid_to_world(grid: OccupancyGrid, i: GridIndex) -> WorldPoint:
    """World coordinates of the CENTER of cell i."""
    if not grid.in_bounds(i):
        raise OutOfBoundsError(f"index {i} outside {grid.width}x{grid.height} grid")
    ox, oy, oth = grid.origin
    lx = (i.col + 0.5) * grid.resolution
    ly = (i.row + 0.5) * grid.resolution
    if oth != 0.0:
        c, s = math.cos(oth), math.sin(oth)
        lx, ly = c * lx - s * ly, s * lx + c * ly
    return WorldPoint(ox + lx, oy + ly)


def dump_map(grid: OccupancyGrid) -> dict:
    """Debug dump preserving dimensions and every cell classification."""
    return {
        "width": grid.width,
        "height": grid.height,
        "resolution": grid.resolution,
        "origin": list(grid.origin),
        "cells": grid.cells.flatten().tolist(),
    }
