"""Seeded Monte Carlo simulation of the k-box chooser process.

States are tuples of box counts sorted in decreasing order.  A big-chooser
takes from the last of the maximal boxes and a little-chooser from the last
box, which keeps the tuple sorted without re-sorting and makes the choice
among tied boxes irrelevant.

Randomness: one uniform per arrival (big iff u < p).  Trials are grouped in
blocks of ``BLOCK`` rows; block ``b`` draws from PCG64 seeded with
SeedSequence([seed, b]), row-major with k*n uniforms per trial.  Trial i
therefore sees the same uniforms regardless of how many trials are run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from .numeric import Probability, Scalar, as_probability

PLike = Union[Probability, Scalar, str]

RNG_ALGORITHM = "numpy-PCG64/SeedSequence[seed,block]"
BLOCK = 8192

RESIDUE = "residue"
FIRST_RETURN = "first_return"
TARGETS = (RESIDUE, FIRST_RETURN)

State = Tuple[int, ...]


def step(state: Sequence[int], is_big: bool) -> State:
    """Remove one match: from a fullest box if ``is_big``, else an emptiest one."""
    boxes = sorted(state, reverse=True)
    if not boxes or boxes[0] <= 0:
        raise ValueError("no matches left to take")
    if is_big:
        j = 0
        while j + 1 < len(boxes) and boxes[j + 1] == boxes[0]:
            j += 1
    else:
        j = len(boxes) - 1
        if boxes[j] == 0:
            raise ValueError("the emptiest box is already empty")
    boxes[j] -= 1
    return tuple(boxes)


def _draws(rng) -> float:
    return float(rng.random()) if hasattr(rng, "random") else float(next(rng))


def run_residue(k: int, n: int, p: PLike, rng) -> int:
    """One sample of the residue: matches left once a box first empties.

    ``rng`` is a numpy Generator or an iterator of uniforms in [0, 1).
    """
    pf = float(as_probability(p).p)
    state: State = (n,) * k
    steps = 0
    while state[-1] > 0:
        state = step(state, _draws(rng) < pf)
        steps += 1
    assert steps <= k * n
    return sum(state)


def run_first_return(k: int, n: int, p: PLike, rng) -> int:
    """One sample of the first diagonal-return order Y, capped at n when a box
    empties first."""
    pf = float(as_probability(p).p)
    state: State = (n,) * k
    state = step(state, _draws(rng) < pf)
    while state[-1] > 0:
        if state[0] == state[-1]:
            return n - state[0]
        state = step(state, _draws(rng) < pf)
    return n


def block_uniforms(seed: int, block: int, rows: int, k: int, n: int) -> np.ndarray:
    gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, block])))
    return gen.random((rows, k * n))


def simulate_batch(k: int, n: int, p: float, u: np.ndarray, target: str) -> np.ndarray:
    """Vectorised run of ``len(u)`` independent trajectories.

    Row r of ``u`` supplies the uniforms of trajectory r in order; the result
    equals ``run_residue``/``run_first_return`` fed the same row.
    """
    rows = u.shape[0]
    boxes = np.full((rows, k), n, dtype=np.int64)
    result = np.full(rows, -1, dtype=np.int64)
    active = np.ones(rows, dtype=bool)
    idx = np.arange(rows)
    for t in range(k * n):
        live = idx[active]
        if live.size == 0:
            break
        b = boxes[live]
        big = u[live, t] < p
        # last index holding the maximum; the array stays sorted descending
        j_big = (b == b[:, :1]).sum(axis=1) - 1
        j = np.where(big, j_big, k - 1)
        boxes[live, j] -= 1
        b = boxes[live]
        emptied = b[:, -1] == 0
        if target == RESIDUE:
            done = emptied
            result[live[done]] = b[done].sum(axis=1)
        else:
            level = np.where(b[:, 0] == b[:, -1], b[:, 0], -1)
            returned = (level > 0) & ~emptied
            result[live[returned]] = n - level[returned]
            result[live[emptied]] = n
            done = returned | emptied
        active[live[done]] = False
    if active.any():
        raise AssertionError("trajectory exceeded k*n steps")
    return result


def sample(k: int, n: int, p: PLike, trials: int, seed: int, target: str = RESIDUE) -> np.ndarray:
    if target not in TARGETS:
        raise ValueError(f"target must be one of {TARGETS}")
    if trials < 1 or n < 1 or k < 2:
        raise ValueError("need trials >= 1, n >= 1, k >= 2")
    pf = float(as_probability(p).p)
    chunks = []
    for block, start in enumerate(range(0, trials, BLOCK)):
        rows = min(BLOCK, trials - start)
        chunks.append(simulate_batch(k, n, pf, block_uniforms(seed, block, rows, k, n), target))
    return np.concatenate(chunks)


@dataclass(frozen=True)
class SimulationResult:
    samples: int
    mean: float
    stderr: float
    seed: int
    rng: str = RNG_ALGORITHM


def summarize(values: np.ndarray, seed: int) -> SimulationResult:
    m = len(values)
    mean = math.fsum(values.tolist()) / m
    if m == 1:
        return SimulationResult(1, mean, 0.0, seed)
    var = math.fsum(((v - mean) ** 2 for v in values.tolist())) / (m - 1)
    return SimulationResult(m, mean, math.sqrt(var / m), seed)


def estimate(
    k: int, n: int, p: PLike, trials: int, seed: int, target: str = RESIDUE
) -> SimulationResult:
    """Monte Carlo mean and standard error of the residue or first-return order."""
    return summarize(sample(k, n, p, trials, seed, target), seed)
