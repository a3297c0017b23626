"""One-step transition rules T = A S for the four walk models.

All scattering operators are applied position block by position block
through a single neighborhood engine: for site ``x`` the local matrix acts
on the velocity together with the memory qubits at ``x + offset`` for each
offset of the model's neighborhood (``(0,)`` for the site-history walk,
``(-1, +1)`` for the neighborhood-history walks).
"""
from __future__ import annotations

from dataclasses import astuple, dataclass, field, fields
from typing import Callable, Sequence

import numpy as np

from .errors import ValidationError
from .hilbert import (
    VELOCITY,
    LatticeConfig,
    WalkState,
    apply_to_axes,
    check_unitary,
    encode_basis,
    mem,
)


def symmetric_unitary(theta: float) -> np.ndarray:
    """``[[cos t, i sin t], [i sin t, cos t]]``."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, 1j * s], [1j * s, c]], dtype=np.complex128)


R0 = symmetric_unitary(np.pi / 4)


def spin_transform(b: int, eta: float) -> np.ndarray:
    """Image of basis ket ``b`` (0 for |b>, 1 for |b>^perp) under the spin map."""
    if b not in (0, 1):
        raise ValidationError(f"basis label must be 0 or 1, got {b!r}")
    return symmetric_unitary(eta)[:, b].copy()


def _velocity_spin(j: int, eta: float) -> np.ndarray:
    return spin_transform(0 if j == +1 else 1, eta)


@dataclass(frozen=True)
class QwParams:
    coin: np.ndarray = field(default_factory=lambda: R0.copy())

    def __post_init__(self):
        check_unitary(self.coin, tol=1e-12)


@dataclass(frozen=True)
class ShqwParams:
    theta_m: float
    theta_b: float


MR_MEMORY_MODES = ("directed", "both")


@dataclass(frozen=True)
class MrNhqwParams:
    """Memory-ricochet parameters.

    ``memory_mode="directed"`` applies the memory-strength coin to the
    neighbour in the direction of travel, m_{x+v}; ``"both"`` applies it to
    m_{x-1} and m_{x+1} independently.
    """

    theta_v: float
    theta_00: float
    theta_01: float
    theta_10: float
    theta_11: float
    memory_mode: str = "directed"

    def __post_init__(self):
        if self.memory_mode not in MR_MEMORY_MODES:
            raise ValidationError(f"memory_mode must be one of {MR_MEMORY_MODES}")

    def back_action(self, word: int) -> float:
        """Angle for neighbourhood word ``word = 2*m_{x-1} + m_{x+1}``."""
        return (self.theta_00, self.theta_01, self.theta_10, self.theta_11)[word]


@dataclass(frozen=True)
class UobNhqwParams:
    alpha0: float = 0.0
    alpha1: float = 0.0
    beta0: float = 0.0
    beta1: float = 0.0
    gamma_l: float = 0.0
    gamma_r: float = 0.0
    theta0: float = 0.0
    theta1: float = 0.0

    def as_tuple(self) -> tuple:
        return astuple(self)

    @classmethod
    def names(cls) -> tuple:
        return tuple(f.name for f in fields(cls))

    @classmethod
    def random(cls, rng: np.random.Generator) -> "UobNhqwParams":
        return cls(*rng.uniform(-np.pi, np.pi, size=8))


def build_uob(p: UobNhqwParams) -> np.ndarray:
    """The eight product vectors of the unentangled orthogonal basis.

    Row ``i`` is a vector of the velocity (x) m_{x-1} (x) m_{x+1} space.  Rows
    run over j = +1 then j = -1, each through the alpha0, alpha1, beta0,
    beta1 types whose memory pairs are |01>, |10>, |11>, |00>.
    """
    types = (
        (p.alpha0, 0, 1),
        (p.alpha1, 1, 0),
        (p.beta0, 1, 1),
        (p.beta1, 0, 0),
    )
    rows = []
    for j in (+1, -1):
        for eta, bl, br in types:
            memory = np.kron(spin_transform(bl, p.gamma_l), spin_transform(br, p.gamma_r))
            rows.append(np.kron(_velocity_spin(j, eta), memory))
    return np.array(rows)


def _local_index(v: int, ml: int, mr: int) -> int:
    return (0 if v == +1 else 1) * 4 + ml * 2 + mr


def uob_scattering_matrix(p: UobNhqwParams) -> np.ndarray:
    """8x8 neighbourhood scattering on ``|v>|m_{x-1} m_{x+1}>``."""
    uob = build_uob(p)
    a_plus, c_plus, b0_plus, b1_plus = uob[0:4]
    d_minus, b_minus, b0_minus, b1_minus = uob[4:8]
    # a: |+1>_a0|01>, b: |-1>_a1|10>, c: |+1>_a1|10>, d: |-1>_a0|01>
    c0, s0 = np.cos(p.theta0), np.sin(p.theta0)
    c1, s1 = np.cos(p.theta1), np.sin(p.theta1)
    columns = {
        (+1, 0, 0): c0 * a_plus + 1j * s0 * b_minus,
        (-1, 0, 0): 1j * s0 * a_plus + c0 * b_minus,
        (+1, 0, 1): b0_minus,
        (-1, 1, 0): b0_plus,
        (+1, 1, 0): b1_plus,
        (-1, 0, 1): b1_minus,
        (+1, 1, 1): c1 * c_plus + 1j * s1 * d_minus,
        (-1, 1, 1): 1j * s1 * c_plus + c1 * d_minus,
    }
    u = np.zeros((8, 8), dtype=np.complex128)
    for key, col in columns.items():
        u[:, _local_index(*key)] = col
    return u


def shqw_scattering_matrix(p: ShqwParams) -> np.ndarray:
    """4x4 S = R M on ``|v>|m_x>``."""
    memory = np.kron(np.eye(2), symmetric_unitary(p.theta_m))
    ricochet = np.kron(R0, np.diag([1, 0])) + np.kron(symmetric_unitary(p.theta_b), np.diag([0, 1]))
    return ricochet @ memory


def mr_scattering_matrix(p: MrNhqwParams) -> np.ndarray:
    """8x8 S = R M on ``|v>|m_{x-1} m_{x+1}>``."""
    uv = symmetric_unitary(p.theta_v)
    eye = np.eye(2)
    if p.memory_mode == "directed":
        right, left = np.diag([1, 0]), np.diag([0, 1])
        memory = np.kron(right, np.kron(eye, uv)) + np.kron(left, np.kron(uv, eye))
    else:
        memory = np.kron(eye, np.kron(uv, uv))
    ricochet = np.zeros((8, 8), dtype=np.complex128)
    for word in range(4):
        proj = np.zeros((4, 4))
        proj[word, word] = 1
        ricochet += np.kron(symmetric_unitary(p.back_action(word)), proj)
    return ricochet @ memory


def initial_state(config: LatticeConfig | int) -> WalkState:
    """(|c>|+1> + |c>|-1>)/sqrt(2) with all memory qubits in |0>, c = N // 2."""
    if isinstance(config, int):
        config = LatticeConfig(config)
    n = config.n_sites
    state = WalkState.zeros(n)
    for v in (+1, -1):
        state.amplitudes[encode_basis(config.center, v, 0, n)] = 1 / np.sqrt(2)
    return state


def product_state(n: int, site: int, velocity_amplitudes: Sequence[complex], memory: int = 0) -> WalkState:
    """``|site> (a|+1> + b|-1>) |memory>``, normalised."""
    a, b = velocity_amplitudes
    scale = np.sqrt(abs(a) ** 2 + abs(b) ** 2)
    if scale == 0:
        raise ValidationError("velocity amplitudes must not both be zero")
    state = WalkState.zeros(n)
    state.amplitudes[encode_basis(site, +1, memory, n)] = a / scale
    state.amplitudes[encode_basis(site, -1, memory, n)] = b / scale
    return state


def advect(state: WalkState) -> WalkState:
    """``|x>|v>|m> -> |x+v mod N>|v>|m>``."""
    n = state.n_sites
    blocks = state.amplitudes.reshape(n, 2, -1)
    out = np.empty_like(blocks)
    out[:, 0] = np.roll(blocks[:, 0], 1, axis=0)
    out[:, 1] = np.roll(blocks[:, 1], -1, axis=0)
    return state.with_amplitudes(out.reshape(-1))


def neighborhood_scatter(state: WalkState, offsets: Sequence[int], u: np.ndarray) -> WalkState:
    """Apply ``u`` to (velocity, m_{x+o} for o in offsets) in every block x."""
    n = state.n_sites
    tensor = state.tensor()
    out = np.empty_like(tensor)
    for x in range(n):
        sites = [(x + o) % n for o in offsets]
        if len(set(sites)) != len(sites):
            raise ValidationError(f"neighbourhood {tuple(offsets)} collides on N={n}")
        # drop the position axis: block axes are the walk axes shifted by one
        axes = [state.axis(VELOCITY) - 1] + [state.axis(mem(k)) - 1 for k in sites]
        out[x] = apply_to_axes(tensor[x], axes, u)
    return state.with_amplitudes(out.reshape(-1))


def nhqw_step(state: WalkState, offsets: Sequence[int], u: np.ndarray) -> WalkState:
    return advect(neighborhood_scatter(state, offsets, u))


def qw_step(state: WalkState, p: QwParams = QwParams()) -> WalkState:
    scattered = apply_to_axes(state.tensor(), [state.axis(VELOCITY)], p.coin)
    return advect(state.with_amplitudes(scattered.reshape(-1)))


def shqw_step(state: WalkState, p: ShqwParams) -> WalkState:
    return nhqw_step(state, (0,), shqw_scattering_matrix(p))


def mr_step(state: WalkState, p: MrNhqwParams) -> WalkState:
    return nhqw_step(state, (-1, +1), mr_scattering_matrix(p))


def uob_step(state: WalkState, p: UobNhqwParams) -> WalkState:
    return nhqw_step(state, (-1, +1), uob_scattering_matrix(p))


MODELS: dict[str, tuple[type, Callable]] = {
    "qw": (QwParams, qw_step),
    "shqw": (ShqwParams, shqw_step),
    "mr-nhqw": (MrNhqwParams, mr_step),
    "uob-nhqw": (UobNhqwParams, uob_step),
}


def step_function(model: str) -> Callable:
    try:
        return MODELS[model][1]
    except KeyError:
        raise ValidationError(f"unknown model {model!r}; expected one of {sorted(MODELS)}") from None


@dataclass(frozen=True)
class StepOperator:
    """One step of ``model`` with fixed parameters."""

    model: str
    params: object

    def __call__(self, state: WalkState) -> WalkState:
        return step_function(self.model)(state, self.params)

    def dense(self, n: int) -> np.ndarray:
        from .oracle import dense_step_matrix

        return dense_step_matrix(self.model, self.params, n)


def iter_evolve(model: str, params, state: WalkState, t: int):
    """Yield the input state and then each of the ``t`` evolved states."""
    if t < 0:
        raise ValidationError(f"step count must be >= 0, got {t}")
    step = step_function(model)
    yield state
    for _ in range(t):
        state = step(state, params)
        yield state


def evolve(model: str, params, state: WalkState, t: int) -> list[WalkState]:
    step_function(model)
    return list(iter_evolve(model, params, state, t))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with phase correction."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_params(model: str, rng: np.random.Generator):
    """Parameter draw for ``model``; angles uniform on [-pi, pi)."""
    def angles(k):
        return rng.uniform(-np.pi, np.pi, size=k)

    if model == "qw":
        return QwParams(random_unitary(2, rng))
    if model == "shqw":
        return ShqwParams(*angles(2))
    if model == "mr-nhqw":
        mode = MR_MEMORY_MODES[int(rng.integers(2))]
        return MrNhqwParams(*angles(5), memory_mode=mode)
    if model in ("uob-nhqw", "qca"):
        return UobNhqwParams.random(rng)
    raise ValidationError(f"unknown model {model!r}")
