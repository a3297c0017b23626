"""Observables of walk states: marginals, occupations, distances, tables."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RangeError, ValidationError
from .hilbert import LatticeConfig, WalkState
from .walks import initial_state, iter_evolve


def _probabilities(state: WalkState) -> np.ndarray:
    n = state.n_sites
    return (np.abs(state.amplitudes) ** 2).reshape(n, 2, 1 << n)


def position_marginal(state: WalkState) -> np.ndarray:
    """P(x), velocity and memory traced out."""
    return _probabilities(state).sum(axis=(1, 2))


def velocity_marginal(state: WalkState) -> np.ndarray:
    """P(v) as ``[P(+1), P(-1)]``."""
    return _probabilities(state).sum(axis=(0, 2))


def memory_occupation(state: WalkState, k: int) -> float:
    """Probability that the memory qubit at site ``k`` reads |1>."""
    n = state.n_sites
    if not 0 <= k < n:
        raise RangeError(f"memory site {k} outside [0, {n})")
    per_word = _probabilities(state).sum(axis=(0, 1))
    words = np.arange(1 << n)
    return float(per_word[(words >> k) & 1 == 1].sum())


def memory_occupations(state: WalkState) -> np.ndarray:
    return np.array([memory_occupation(state, k) for k in range(state.n_sites)])


def total_variation(p, q, tol: float = 1e-8) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape or p.ndim != 1:
        raise ValidationError(f"distributions must be equal-length vectors, got {p.shape} and {q.shape}")
    for name, d in (("p", p), ("q", q)):
        if (d < -tol).any() or abs(d.sum() - 1) > tol:
            raise ValidationError(f"{name} is not a probability distribution (sum={d.sum()!r})")
    return float(0.5 * np.abs(p - q).sum())


@dataclass
class ProbabilityTable:
    """``probs[t, x]`` for t = 0..steps, x = 0..N-1."""

    probs: np.ndarray

    @property
    def steps(self) -> int:
        return self.probs.shape[0] - 1

    @property
    def n_sites(self) -> int:
        return self.probs.shape[1]

    def row(self, t: int) -> np.ndarray:
        return self.probs[t]

    def row_sums(self) -> np.ndarray:
        return self.probs.sum(axis=1)

    def records(self):
        """``(t, x, p)`` triples in row-major order."""
        for t, row in enumerate(self.probs):
            for x, p in enumerate(row):
                yield t, x, float(p)


def trajectory_table(model: str, params, config, t: int, initial: WalkState | None = None) -> ProbabilityTable:
    """Position marginals of ``t`` steps of ``model``, by default from the centred start."""
    if isinstance(config, int):
        config = LatticeConfig(config)
    state = initial if initial is not None else initial_state(config)
    if state.n_sites != config.n_sites:
        raise ValidationError(f"initial state has N={state.n_sites}, config has N={config.n_sites}")
    rows = [position_marginal(s) for s in iter_evolve(model, params, state, t)]
    return ProbabilityTable(np.array(rows))
