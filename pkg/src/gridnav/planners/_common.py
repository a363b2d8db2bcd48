"""Constants shared by both search engine backends.

Both backends must compute heuristics and step costs with the exact same
float64 expressions so their results are bit-identical.
"""

import math

SQRT2 = math.sqrt(2.0)

H_ZERO = 0
H_MANHATTAN = 1
H_DIAGONAL = 2
H_EUCLIDEAN = 3

# N, NE, E, SE, S, SW, W, NW as (drow, dcol); row grows northward
DROW = (1, 1, 0, -1, -1, -1, 0, 1)
DCOL = (0, 1, 1, 1, 0, -1, -1, -1)
