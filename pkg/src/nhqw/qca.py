"""Multi-particle QCA whose single-particle sector carries the UOB walk.

A cell holds four qubits V0 V1 M0 M1.  ``|V0 V1> = |01>`` is a right-mover,
``|10>`` a left-mover, ``|00>`` an empty cell.  One global step is

    G = S3 sigma3 S2 sigma2 S1 sigma1,   sigma2 = sigma1^-1,

with the sigmas moving qubits between neighbouring cells and each S applying
one 16x16 local unitary to every cell.  Local matrices index a cell basis
state ``|v0 v1 m0 m1>`` as ``8 v0 + 4 v1 + 2 m0 + m1``.

After sigma1 the particle cell holds m_{x+1} in M0 and m_{x-1} in M1, so
L1 reads its memory pair in the order (M1, M0) = (left, right).
``local_L1(p, literal=True)`` gives the variant that reads (M0, M1) as
(left, right); it realises a mirror-image walk and fails the sector check.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import SeamCrossingError, SectorLeakageError, ValidationError
from .hilbert import (
    VELOCITIES,
    BasisLabel,
    QcaState,
    WalkState,
    apply_factor_permutation,
    apply_to_axes,
    decode_basis,
    walk_dim,
)
from .walks import UobNhqwParams, initial_state, symmetric_unitary, uob_step

V0, V1, M0, M1 = range(4)
ROLES = ("V0", "V1", "M0", "M1")
RIGHT_MOVER = (0, 1)
LEFT_MOVER = (1, 0)
MAX_CELLS = 6


@dataclass(frozen=True)
class QcaConfig:
    n_cells: int

    def __post_init__(self):
        if self.n_cells < 3:
            raise ValidationError(f"QCA needs at least 3 cells, got {self.n_cells}")

    @property
    def n_qubits(self) -> int:
        return 4 * self.n_cells

    def qubit(self, cell: int, role: int) -> int:
        return 4 * (cell % self.n_cells) + role


def _cell_bits(v0, v1, m0, m1):
    return v0 | (v1 << 1) | (m0 << 2) | (m1 << 3)


def embed_basis(label: BasisLabel, n: int) -> int:
    """QCA basis index of the walk basis state ``|x>|v>|m>``.

    Cells left of the particle store their memory bit in M1, cells right of
    it in M0, and the particle cell stores its own bit in M0.  "Left" and
    "right" compare the integer representatives 0..N-1.
    """
    x, v, m = label
    if n < 3:
        raise ValidationError(f"QCA needs at least 3 cells, got {n}")
    index = 0
    for k in range(n):
        bit = (m >> k) & 1
        if k < x:
            cell = _cell_bits(0, 0, 0, bit)
        elif k == x:
            vv = RIGHT_MOVER if v == +1 else LEFT_MOVER
            cell = _cell_bits(vv[0], vv[1], bit, 0)
        else:
            cell = _cell_bits(0, 0, bit, 0)
        index |= cell << (4 * k)
    return index


@lru_cache(maxsize=None)
def embedding_indices(n: int) -> np.ndarray:
    """``out[j]`` is the QCA index of walk basis index ``j``."""
    if n > MAX_CELLS:
        raise ValidationError(f"QCA limited to {MAX_CELLS} cells (2**{4 * MAX_CELLS} amplitudes)")
    out = np.array([embed_basis(decode_basis(j, n), n) for j in range(walk_dim(n))], dtype=np.int64)
    out.setflags(write=False)
    return out


def embed_state(psi: WalkState) -> QcaState:
    n = psi.n_sites
    out = QcaState.zeros(n)
    out.amplitudes[embedding_indices(n)] = psi.amplitudes
    return out


@lru_cache(maxsize=None)
def _outside_sector(n: int) -> np.ndarray:
    mask = np.ones(1 << (4 * n), dtype=bool)
    mask[embedding_indices(n)] = False
    mask.setflags(write=False)
    return mask


def sector_leakage(state: QcaState) -> float:
    """Norm of the part of ``state`` outside the embedded walk basis."""
    return float(np.linalg.norm(state.amplitudes[_outside_sector(state.n_cells)]))


def extract_state(state: QcaState, tolerance: float = 1e-10) -> WalkState:
    leak = sector_leakage(state)
    if leak > tolerance:
        raise SectorLeakageError(leak, tolerance)
    return WalkState(state.amplitudes[embedding_indices(state.n_cells)], state.n_cells)


def _memory_shuffle(n: int, inverse: bool) -> dict:
    cfg = QcaConfig(n)
    perm = {}
    for k in range(n):
        # sigma1: cell k receives M0 of cell k+1 and M1 of cell k-1
        if not inverse:
            perm[cfg.qubit(k + 1, M0)] = cfg.qubit(k, M0)
            perm[cfg.qubit(k - 1, M1)] = cfg.qubit(k, M1)
        else:
            perm[cfg.qubit(k, M0)] = cfg.qubit(k + 1, M0)
            perm[cfg.qubit(k, M1)] = cfg.qubit(k - 1, M1)
    return perm


def _velocity_hop(n: int) -> dict:
    cfg = QcaConfig(n)
    perm = {}
    for k in range(n):
        perm[cfg.qubit(k + 1, V0)] = cfg.qubit(k, V0)
        perm[cfg.qubit(k - 1, V1)] = cfg.qubit(k, V1)
    return perm


def sigma1(state: QcaState) -> QcaState:
    return apply_factor_permutation(state, _memory_shuffle(state.n_cells, inverse=False))


def sigma2(state: QcaState) -> QcaState:
    return apply_factor_permutation(state, _memory_shuffle(state.n_cells, inverse=True))


def sigma3(state: QcaState) -> QcaState:
    return apply_factor_permutation(state, _velocity_hop(state.n_cells))


def _pair_spin(v: int, eta: float) -> np.ndarray:
    """Spin map on span{|01>, |10>} of V0 V1, as a 4-vector."""
    coeffs = symmetric_unitary(eta)[:, 0 if v == +1 else 1]
    out = np.zeros(4, dtype=np.complex128)
    out[0b01] = coeffs[0]
    out[0b10] = coeffs[1]
    return out


def _mem_spin(b: int, eta: float) -> np.ndarray:
    return symmetric_unitary(eta)[:, b]


def _cell_vector(v: int, eta: float, left: int, right: int, p: UobNhqwParams, literal: bool) -> np.ndarray:
    ml = _mem_spin(left, p.gamma_l)
    mr = _mem_spin(right, p.gamma_r)
    memory = np.kron(ml, mr) if literal else np.kron(mr, ml)
    return np.kron(_pair_spin(v, eta), memory)


def local_L1(p: UobNhqwParams, literal: bool = False) -> np.ndarray:
    """Stage-1 cell scattering, identity on the |00> and |11> velocity blocks."""
    def vec(v, eta, left, right):
        return _cell_vector(v, eta, left, right, p, literal)

    c0, s0 = np.cos(p.theta0), np.sin(p.theta0)
    c1, s1 = np.cos(p.theta1), np.sin(p.theta1)
    rules = {
        (+1, 0, 0): c0 * vec(+1, p.alpha0, 0, 1) + 1j * s0 * vec(-1, p.alpha1, 1, 0),
        (-1, 0, 0): 1j * s0 * vec(+1, p.alpha0, 0, 1) + c0 * vec(-1, p.alpha1, 1, 0),
        (+1, 0, 1): vec(-1, p.beta0, 1, 1),
        (-1, 1, 0): vec(+1, p.beta0, 1, 1),
        (+1, 1, 0): vec(+1, p.beta1, 0, 0),
        (-1, 0, 1): vec(-1, p.beta1, 0, 0),
        (+1, 1, 1): c1 * vec(+1, p.alpha1, 1, 0) + 1j * s1 * vec(-1, p.alpha0, 0, 1),
        (-1, 1, 1): 1j * s1 * vec(+1, p.alpha1, 1, 0) + c1 * vec(-1, p.alpha0, 0, 1),
    }
    u = np.eye(16, dtype=np.complex128)
    for (v, left, right), col in rules.items():
        vv = 0b01 if v == +1 else 0b10
        m0, m1 = (left, right) if literal else (right, left)
        u[:, vv * 4 + m0 * 2 + m1] = col
    return u


def _controlled_memory_swap(control: int) -> np.ndarray:
    u = np.zeros((16, 16))
    for j in range(16):
        vv, m0, m1 = j >> 2, (j >> 1) & 1, j & 1
        out = vv * 4 + m1 * 2 + m0 if vv == control else j
        u[out, j] = 1
    return u.astype(np.complex128)


def local_L2() -> np.ndarray:
    """Swap M0 and M1 when the cell holds a right-mover."""
    return _controlled_memory_swap(0b01)


def local_L3() -> np.ndarray:
    """Swap M0 and M1 when the cell holds a left-mover."""
    return _controlled_memory_swap(0b10)


def stage_scatter(state: QcaState, local: np.ndarray) -> QcaState:
    tensor = state.tensor()
    for k in range(state.n_cells):
        axes = [state.axis(4 * k + r) for r in (V0, V1, M0, M1)]
        tensor = apply_to_axes(tensor, axes, local)
    return state.with_amplitudes(np.ascontiguousarray(tensor).reshape(-1))


def global_step(state: QcaState, p: UobNhqwParams, literal: bool = False) -> QcaState:
    state = stage_scatter(sigma1(state), local_L1(p, literal))
    state = stage_scatter(sigma2(state), local_L2())
    return stage_scatter(sigma3(state), local_L3())


def max_seam_free_steps(n: int) -> int:
    """Steps from the centred start before scattering touches site 0 or N-1.

    Equals N // 2 for odd N and N // 2 - 1 for even N.
    """
    c = n // 2
    return min(c, n - 1 - c)


@dataclass
class EquivalenceReport:
    params: UobNhqwParams
    n_cells: int
    steps: int
    tolerance: float
    leakage_tolerance: float = 1e-12
    deviations: list = field(default_factory=list)
    leakages: list = field(default_factory=list)

    @property
    def max_deviation(self) -> float:
        return max(self.deviations, default=0.0)

    @property
    def max_leakage(self) -> float:
        return max(self.leakages, default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tolerance and self.max_leakage < self.leakage_tolerance


def equivalence_report(
    p: UobNhqwParams,
    n: int,
    t: int,
    tolerance: float = 1e-10,
    check_seam: bool = True,
    literal: bool = False,
    leakage_tolerance: float = 1e-12,
) -> EquivalenceReport:
    """Compare G^t(embed(psi0)) with embed(T^t(psi0)) after every step.

    Deviations are 2-norms of the difference vector.

    ``check_seam=False`` skips the seam guard so that seam-crossing runs can
    be measured; their deviations are then expected to be large.
    """
    if t < 0:
        raise ValidationError(f"step count must be >= 0, got {t}")
    QcaConfig(n)
    if check_seam and t > max_seam_free_steps(n):
        raise SeamCrossingError(
            f"t={t} at N={n} scatters at a lattice end (site 0 or {n - 1}); the embedding "
            f"orders cells by integer index, which breaks across the cyclic seam. "
            f"At most {max_seam_free_steps(n)} steps are seam-free from the centred start."
        )
    report = EquivalenceReport(p, n, t, tolerance, leakage_tolerance)
    psi = initial_state(n)
    qca = embed_state(psi)
    report.deviations.append(0.0)
    report.leakages.append(sector_leakage(qca))
    for _ in range(t):
        psi = uob_step(psi, p)
        qca = global_step(qca, p, literal=literal)
        diff = qca.amplitudes - embed_state(psi).amplitudes
        report.deviations.append(float(np.linalg.norm(diff)))
        report.leakages.append(sector_leakage(qca))
    return report


def cell_labels(index: int, n: int) -> list[str]:
    """Readable per-cell ``'v0v1|m0m1'`` strings of a QCA basis index."""
    out = []
    for k in range(n):
        c = (index >> (4 * k)) & 0xF
        out.append(f"{c & 1}{(c >> 1) & 1}|{(c >> 2) & 1}{(c >> 3) & 1}")
    return out


__all__ = [
    "QcaConfig", "ROLES", "VELOCITIES", "embed_basis", "embed_state", "extract_state",
    "sector_leakage", "sigma1", "sigma2", "sigma3", "local_L1", "local_L2", "local_L3",
    "stage_scatter", "global_step", "equivalence_report", "EquivalenceReport",
    "max_seam_free_steps",
]
