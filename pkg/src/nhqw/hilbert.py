"""State vectors, basis codecs and generic tensor-factor operations.

Walk basis layout: ``index = (x * 2 + vbit) * 2**N + m`` with ``vbit = 0``
for velocity +1 and ``1`` for velocity -1; bit ``k`` of the memory word ``m``
is the memory qubit at site ``k``.

QCA layout: qubit ``q`` of a :class:`QcaState` is bit ``q`` of the flat
index, and cell ``k`` owns qubits ``4k .. 4k+3`` in the order V0, V1, M0, M1.

Factor identifiers passed to :func:`apply_factor_unitary` and
:func:`apply_factor_permutation` are ``"v"`` or ``("m", k)`` for walk states
and plain qubit integers for QCA states.  When a gate lists several targets,
the first target is the most significant bit of the gate's matrix index.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import RangeError, ValidationError

UNITARY_TOL = 1e-9
VELOCITIES = (+1, -1)
VELOCITY = "v"


def mem(k: int) -> tuple[str, int]:
    """Factor identifier of the memory qubit at site ``k``."""
    return ("m", k)


@dataclass(frozen=True)
class LatticeConfig:
    """Cyclic one-dimensional lattice Z_N."""

    n_sites: int

    def __post_init__(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 3:
            raise ValidationError(f"lattice needs N >= 3 sites, got {self.n_sites!r}")

    @property
    def dim(self) -> int:
        return walk_dim(self.n_sites)

    @property
    def center(self) -> int:
        return self.n_sites // 2


class BasisLabel(NamedTuple):
    x: int
    v: int
    m: int


def walk_dim(n: int) -> int:
    return n * 2 * (1 << n)


def velocity_bit(v: int) -> int:
    if v == +1:
        return 0
    if v == -1:
        return 1
    raise RangeError(f"velocity must be +1 or -1, got {v!r}")


def encode_basis(x: int, v: int, m: int, n: int) -> int:
    if not 0 <= x < n:
        raise RangeError(f"site {x} outside [0, {n})")
    if not 0 <= m < (1 << n):
        raise RangeError(f"memory word {m} outside [0, 2**{n})")
    return (x * 2 + velocity_bit(v)) * (1 << n) + m


def decode_basis(index: int, n: int) -> BasisLabel:
    if not 0 <= index < walk_dim(n):
        raise RangeError(f"index {index} outside [0, {walk_dim(n)})")
    block, m = divmod(index, 1 << n)
    x, vbit = divmod(block, 2)
    return BasisLabel(x, VELOCITIES[vbit], m)


def _as_amplitudes(amplitudes, dim: int) -> np.ndarray:
    arr = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    if arr.shape[0] != dim:
        raise ValidationError(f"expected {dim} amplitudes, got {arr.shape[0]}")
    return arr


class _State:
    """Shared behaviour of walk and QCA state vectors."""

    amplitudes: np.ndarray

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self._shape())

    def norm(self) -> float:
        return norm(self)

    def with_amplitudes(self, amplitudes):
        return type(self)(amplitudes, self._size())

    def copy(self):
        return self.with_amplitudes(self.amplitudes.copy())

    def __len__(self):
        return self.amplitudes.shape[0]


class WalkState(_State):
    """Amplitudes over ``|x>|v>|m_0 ... m_{N-1}>``."""

    def __init__(self, amplitudes, n_sites: int):
        self.config = LatticeConfig(n_sites)
        self.amplitudes = _as_amplitudes(amplitudes, walk_dim(n_sites))

    @property
    def n_sites(self) -> int:
        return self.config.n_sites

    @classmethod
    def zeros(cls, n_sites: int) -> "WalkState":
        return cls(np.zeros(walk_dim(n_sites), dtype=np.complex128), n_sites)

    @classmethod
    def basis(cls, x: int, v: int, m: int, n_sites: int) -> "WalkState":
        state = cls.zeros(n_sites)
        state.amplitudes[encode_basis(x, v, m, n_sites)] = 1.0
        return state

    def _size(self):
        return self.n_sites

    def _shape(self):
        return (self.n_sites, 2) + (2,) * self.n_sites

    def factors(self) -> list:
        return [VELOCITY] + [mem(k) for k in range(self.n_sites)]

    def axis(self, factor: Hashable) -> int:
        """Axis of ``factor`` in :meth:`tensor` (axis 0 is position)."""
        n = self.n_sites
        if factor == VELOCITY:
            return 1
        if isinstance(factor, tuple) and len(factor) == 2 and factor[0] == "m":
            k = factor[1]
            if not 0 <= k < n:
                raise RangeError(f"memory site {k} outside [0, {n})")
            return 2 + (n - 1 - k)
        raise ValidationError(f"unknown walk factor {factor!r}")

    def __repr__(self):
        return f"WalkState(N={self.n_sites}, norm={self.norm():.12f})"


class QcaState(_State):
    """Amplitudes over the 4N qubits of the QCA."""

    def __init__(self, amplitudes, n_cells: int):
        if n_cells < 3:
            raise ValidationError(f"QCA needs at least 3 cells, got {n_cells}")
        self.n_cells = n_cells
        self.amplitudes = _as_amplitudes(amplitudes, 1 << (4 * n_cells))

    @classmethod
    def zeros(cls, n_cells: int) -> "QcaState":
        return cls(np.zeros(1 << (4 * n_cells), dtype=np.complex128), n_cells)

    @property
    def n_qubits(self) -> int:
        return 4 * self.n_cells

    def _size(self):
        return self.n_cells

    def _shape(self):
        return (2,) * self.n_qubits

    def factors(self) -> list:
        return list(range(self.n_qubits))

    def axis(self, factor: Hashable) -> int:
        if isinstance(factor, (int, np.integer)) and 0 <= factor < self.n_qubits:
            return self.n_qubits - 1 - int(factor)
        raise ValidationError(f"unknown QCA qubit {factor!r}")

    def __repr__(self):
        return f"QcaState(cells={self.n_cells}, norm={self.norm():.12f})"


def check_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> np.ndarray:
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {u.shape}")
    err = np.abs(u.conj().T @ u - np.eye(u.shape[0])).max()
    if err > tol:
        raise ValidationError(f"matrix is not unitary: max |u^dag u - I| = {err:.3e}")
    return u


def apply_to_axes(tensor: np.ndarray, axes: Sequence[int], u: np.ndarray) -> np.ndarray:
    """Contract the ``2**k x 2**k`` matrix ``u`` into the listed qubit axes.

    No validation; ``axes[0]`` is the most significant bit of ``u``'s index.
    """
    k = len(axes)
    ut = u.reshape((2,) * (2 * k))
    out = np.tensordot(ut, tensor, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(out, list(range(k)), list(axes))


def apply_factor_unitary(state, targets: Sequence[Hashable], u) -> "WalkState | QcaState":
    targets = list(targets)
    if len(set(targets)) != len(targets):
        raise ValidationError(f"targets must be distinct, got {targets}")
    u = check_unitary(u)
    if u.shape[0] != 1 << len(targets):
        raise ValidationError(
            f"{len(targets)} targets need a {1 << len(targets)}-dim matrix, got {u.shape[0]}"
        )
    axes = [state.axis(t) for t in targets]
    out = apply_to_axes(state.tensor(), axes, u)
    return state.with_amplitudes(np.ascontiguousarray(out).reshape(-1))


def apply_factor_permutation(state, permutation: Mapping[Hashable, Hashable]):
    """Move the content of factor ``src`` to factor ``permutation[src]``.

    Factors missing from the mapping stay in place.  Amplitudes are carried
    over unchanged, only their positions move.
    """
    factors = set(state.factors())
    srcs = set(permutation)
    dsts = set(permutation.values())
    if not srcs <= factors or not dsts <= factors:
        bad = (srcs | dsts) - factors
        raise ValidationError(f"unknown factors in permutation: {sorted(map(str, bad))}")
    if srcs != dsts or len(dsts) != len(permutation):
        raise ValidationError("factor map is not a bijection")
    tensor = state.tensor()
    order = list(range(tensor.ndim))
    for src, dst in permutation.items():
        order[state.axis(dst)] = state.axis(src)
    out = np.transpose(tensor, order)
    return state.with_amplitudes(np.ascontiguousarray(out).reshape(-1))


def _check_same_dim(a, b):
    if len(a) != len(b):
        raise ValidationError(f"dimension mismatch: {len(a)} vs {len(b)}")


def inner_product(a, b) -> complex:
    """Hermitian inner product, conjugate-linear in ``a``."""
    _check_same_dim(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def norm(a) -> float:
    return float(np.sqrt(np.vdot(a.amplitudes, a.amplitudes).real))
