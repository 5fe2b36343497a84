"""Shared pool of probability distribution lists (PDLs).

The pool is an immutable, indexed map of 6-entry action distributions that
every agent can read but never write. Each training step one uniformly random
key picks a row, and all agents sample their exploration action from that
same row, which keeps their pushes statistically aligned without any
communication.

Rows are generated in quads. A quad starts from four values: ``value1`` drawn
from U(0, cap), plus three U(0, 1) draws scaled so the four sum to one. The
draw is rejected and restarted unless the opposing-direction gap
``|value1 - value3|`` reaches the margin. The accepted 4-vector is then
cyclically shifted into a 4x4 matrix (one row per 90-degree relabeling of the
push directions), and each row expands to six entries by halving the two
side-pair columns:

    [v0, v1, v2, v3]  ->  [v0, v1/2, v1/2, v2, v3/2, v3/2]

so entries 2/3 and 5/6 are always equal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FormatError, GenerationStallError

PDL_SUM_TOL = 1e-9
MAX_GENERATION_RETRIES = 1_000_000


def validate_pdl(candidate) -> str | None:
    """Return None when the candidate is a valid PDL, else a violation message."""
    arr = np.asarray(candidate, dtype=float)
    if arr.ndim != 1 or arr.shape[0] != 6:
        return f"expected 6 entries, got shape {arr.shape}"
    if not np.all(np.isfinite(arr)):
        return "entries must be finite"
    if np.any(arr < 0.0):
        return "entries must be non-negative"
    total = float(arr.sum())
    if abs(total - 1.0) > PDL_SUM_TOL:
        return f"entries sum to {total!r}, not 1"
    return None


def feasible(cap: float, margin: float) -> bool:
    """Can the rejection loop terminate for these parameters?"""
    return 0.0 < cap <= 1.0 and 0.0 <= margin < 1.0 and margin + cap <= 1.0


def _check_params(cap: float, margin: float) -> None:
    if not 0.0 < cap <= 1.0:
        raise ValueError(f"cap must be in (0, 1], got {cap!r}")
    if not 0.0 <= margin < 1.0:
        raise ValueError(f"margin must be in [0, 1), got {margin!r}")
    if margin + cap > 1.0:
        raise ValueError(
            f"infeasible parameters: margin + cap must not exceed 1 "
            f"(got {margin!r} + {cap!r})"
        )


def generate_quad(
    cap: float,
    margin: float,
    rng: np.random.Generator,
    max_retries: int = MAX_GENERATION_RETRIES,
) -> np.ndarray:
    """Draw one accepted 4-vector and return its 4x4 cyclic-shift matrix.

    Row i is the accepted vector shifted right by i positions, so the four
    rows cover the four 90-degree relabelings of the push directions.
    """
    _check_params(cap, margin)
    for _ in range(max_retries):
        value1 = rng.uniform(0.0, cap)
        raw = rng.random(3)
        total = raw[0] + raw[1] + raw[2]
        if total == 0.0:
            continue
        remaining = 1.0 - value1
        value2 = raw[0] / total * remaining
        value3 = raw[1] / total * remaining
        value4 = raw[2] / total * remaining
        if abs(value1 - value3) >= margin:
            break
    else:
        raise GenerationStallError(
            f"no accepted draw after {max_retries} retries (cap={cap}, margin={margin})"
        )
    all_values = (value1, value2, value3, value4)
    quad = np.empty((4, 4), dtype=float)
    for i in range(4):
        for j in range(4):
            quad[i, j] = all_values[(j - i) % 4]
    return quad


def expand_quad_row(row4) -> np.ndarray:
    """4-vector -> 6-entry PDL: side-pair columns split in half, then renormalize."""
    v0, v1, v2, v3 = (float(v) for v in row4)
    if min(v0, v1, v2, v3) < 0.0:
        raise ValueError("row values must be non-negative")
    row6 = np.array([v0, v1 / 2.0, v1 / 2.0, v2, v3 / 2.0, v3 / 2.0])
    total = row6.sum()
    if total == 0.0:
        raise ValueError("cannot expand an all-zero row")
    return row6 / total


@dataclass(frozen=True)
class PdlMap:
    """Immutable indexed pool of PDLs plus its generation parameters."""

    pdls: np.ndarray
    cap: float
    margin: float
    seed: int

    def __post_init__(self):
        arr = np.ascontiguousarray(self.pdls, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != 6:
            raise ValueError(f"map must be (n, 6), got shape {arr.shape}")
        if arr.shape[0] % 4 != 0 or arr.shape[0] == 0:
            raise ValueError("map length must be a positive multiple of 4")
        for idx, row in enumerate(arr):
            why = validate_pdl(row)
            if why is not None:
                raise ValueError(f"row {idx} is not a valid PDL: {why}")
        arr.setflags(write=False)  # agents may read, never write
        object.__setattr__(self, "pdls", arr)

    def __len__(self) -> int:
        return self.pdls.shape[0]

    def __getitem__(self, key: int) -> np.ndarray:
        return self.pdls[key]


def build_map(n_pdls: int, cap: float, margin: float, seed: int) -> PdlMap:
    """Generate ``n_pdls`` rows (a multiple of 4) deterministically from the seed."""
    if n_pdls < 4 or n_pdls % 4 != 0:
        raise ValueError(f"n_pdls must be a positive multiple of 4, got {n_pdls!r}")
    _check_params(cap, margin)
    rng = np.random.default_rng(seed)
    rows = np.empty((n_pdls, 6), dtype=np.float64)
    for q in range(n_pdls // 4):
        quad = generate_quad(cap, margin, rng)
        for i in range(4):
            rows[4 * q + i] = expand_quad_row(quad[i])
    return PdlMap(pdls=rows, cap=cap, margin=margin, seed=seed)


def key_from_uniform(u: float, map_size: int) -> int:
    """Uniform u in [0, 1) -> key in [0, map_size)."""
    return int(u * map_size)


def draw_key(map_size: int, rng: np.random.Generator) -> int:
    """One uniformly random key; drawn once per training step for all agents."""
    if map_size < 1:
        raise ValueError("map_size must be at least 1")
    return key_from_uniform(rng.random(), map_size)


def action_index_from_uniform(pdl, u: float) -> int:
    """Inverse-CDF categorical sample; returns a 0-based action index."""
    cum = 0.0
    for j in range(6):
        cum += pdl[j]
        if u < cum:
            return j
    return 5


def sample_action(pdl, rng: np.random.Generator) -> int:
    """Sample an action id in 1..6 from the PDL (entry i is p(action i+1))."""
    why = validate_pdl(pdl)
    if why is not None:
        raise ValueError(f"not a valid PDL: {why}")
    return action_index_from_uniform(pdl, rng.random()) + 1


def save_map(pdl_map: PdlMap, path) -> None:
    """One header line with the generation parameters, then one PDL per line."""
    lines = [
        f"# pdl-map n_pdls={len(pdl_map)} cap={pdl_map.cap!r} "
        f"margin={pdl_map.margin!r} seed={pdl_map.seed}"
    ]
    for row in pdl_map.pdls:
        lines.append(" ".join(repr(float(v)) for v in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_map(path) -> PdlMap:
    source = str(path)
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("# pdl-map "):
        raise FormatError(source, 1, "missing '# pdl-map' header line")
    header: dict[str, str] = {}
    for part in lines[0][len("# pdl-map "):].split():
        key, _, value = part.partition("=")
        header[key] = value
    try:
        n_pdls = int(header["n_pdls"])
        cap = float(header["cap"])
        margin = float(header["margin"])
        seed = int(header["seed"])
    except (KeyError, ValueError) as exc:
        raise FormatError(source, 1, f"bad header: {exc}") from exc
    rows = []
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 6:
            raise FormatError(source, line_no, f"expected 6 values, got {len(parts)}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise FormatError(source, line_no, str(exc)) from exc
    if len(rows) != n_pdls:
        raise FormatError(source, 0, f"header says {n_pdls} rows, file has {len(rows)}")
    return PdlMap(pdls=np.array(rows, dtype=np.float64), cap=cap, margin=margin, seed=seed)
