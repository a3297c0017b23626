"""Brute-force reference operators built straight from the basis-state rules.

Nothing here calls into :mod:`nhqw.walks` or :mod:`nhqw.qca`; the only shared
code is the basis codec in :mod:`nhqw.hilbert`.  Each walk rule maps one
basis label to a list of ``(amplitude, label)`` terms using scalar complex
arithmetic, and dense matrices are assembled column by column from it.

The QCA reference works in the packed "nibble" basis: cell ``k`` of a QCA
index is the 4-bit value ``v0 + 2 v1 + 4 m0 + 8 m1`` at bit offset ``4k``.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np
import scipy.sparse as sp

from .errors import RangeError, SizeLimitError, ValidationError
from .hilbert import decode_basis, encode_basis, walk_dim

MAX_WALK_SITES = 5
MAX_QCA_CELLS = 3
WALK_MODELS = ("qw", "shqw", "mr-nhqw", "uob-nhqw")
MODELS = WALK_MODELS + ("qca",)

I = 1j


def _coin(theta: float, out_bit: int, in_bit: int) -> complex:
    # [[cos, i sin], [i sin, cos]]
    return complex(math.cos(theta)) if out_bit == in_bit else I * math.sin(theta)


def _bit(m: int, k: int) -> int:
    return (m >> k) & 1


def _set_bit(m: int, k: int, b: int) -> int:
    return (m & ~(1 << k)) | (b << k)


def _hop(x: int, v: int, n: int) -> int:
    return (x + v) % n


# ---------------------------------------------------------------------------
# walk rules: label -> [(amplitude, (x, v, m))]


def _qw_rule(params, n):
    coin = np.asarray(params.coin, dtype=complex)

    def rule(x, v, m):
        vb = 0 if v == +1 else 1
        out = []
        for v2, vb2 in ((+1, 0), (-1, 1)):
            a = coin[vb2, vb]
            if a != 0:
                out.append((a, (_hop(x, v2, n), v2, m)))
        return out

    return rule


def _shqw_rule(params, n):
    def ricochet_angle(mx):
        return math.pi / 4 if mx == 0 else params.theta_b

    def rule(x, v, m):
        out = []
        mx = _bit(m, x)
        for mx2 in (0, 1):
            a_mem = _coin(params.theta_m, mx2, mx)
            m2 = _set_bit(m, x, mx2)
            vb = 0 if v == +1 else 1
            for v2, vb2 in ((+1, 0), (-1, 1)):
                a = a_mem * _coin(ricochet_angle(mx2), vb2, vb)
                if a != 0:
                    out.append((a, (_hop(x, v2, n), v2, m2)))
        return out

    return rule


def _mr_rule(params, n):
    thetas = {
        (0, 0): params.theta_00,
        (0, 1): params.theta_01,
        (1, 0): params.theta_10,
        (1, 1): params.theta_11,
    }
    mode = params.memory_mode

    def memory_stage(x, v, m):
        if mode == "directed":
            sites = [(x + v) % n]
        elif mode == "both":
            sites = [(x - 1) % n, (x + 1) % n]
        else:
            raise ValidationError(f"unknown memory mode {mode!r}")
        terms = [(1.0 + 0j, m)]
        for k in sites:
            nxt = []
            for a, mm in terms:
                for b in (0, 1):
                    c = _coin(params.theta_v, b, _bit(mm, k))
                    if c != 0:
                        nxt.append((a * c, _set_bit(mm, k, b)))
            terms = nxt
        return terms

    def rule(x, v, m):
        out = []
        vb = 0 if v == +1 else 1
        for a_mem, m2 in memory_stage(x, v, m):
            word = (_bit(m2, (x - 1) % n), _bit(m2, (x + 1) % n))
            for v2, vb2 in ((+1, 0), (-1, 1)):
                a = a_mem * _coin(thetas[word], vb2, vb)
                if a != 0:
                    out.append((a, (_hop(x, v2, n), v2, m2)))
        return out

    return rule


def _vel_ket(j: int, eta: float) -> dict:
    """|j>_eta for velocity: |+1> plays |b>, |-1> plays |b>^perp."""
    return {j: complex(math.cos(eta)), -j: I * math.sin(eta)}


def _mem_ket(b: int, eta: float) -> dict:
    return {b: complex(math.cos(eta)), 1 - b: I * math.sin(eta)}


def _product(scale: complex, vel: dict, left: dict, right: dict) -> list:
    return [
        (scale * av * al * ar, (v, ml, mr))
        for v, av in vel.items()
        for ml, al in left.items()
        for mr, ar in right.items()
    ]


def uob_local_terms(p, v: int, ml: int, mr: int) -> list:
    """Output terms ``(amp, (v', m_{x-1}', m_{x+1}'))`` of the UOB scattering."""
    gl, gr = p.gamma_l, p.gamma_r
    c0, s0 = math.cos(p.theta0), math.sin(p.theta0)
    c1, s1 = math.cos(p.theta1), math.sin(p.theta1)

    def A(scale):  # |+1>_{a0} |0>_{gl} |1>_{gr}
        return _product(scale, _vel_ket(+1, p.alpha0), _mem_ket(0, gl), _mem_ket(1, gr))

    def B(scale):  # |-1>_{a1} |1>_{gl} |0>_{gr}
        return _product(scale, _vel_ket(-1, p.alpha1), _mem_ket(1, gl), _mem_ket(0, gr))

    def C(scale):  # |+1>_{a1} |1>_{gl} |0>_{gr}
        return _product(scale, _vel_ket(+1, p.alpha1), _mem_ket(1, gl), _mem_ket(0, gr))

    def D(scale):  # |-1>_{a0} |0>_{gl} |1>_{gr}
        return _product(scale, _vel_ket(-1, p.alpha0), _mem_ket(0, gl), _mem_ket(1, gr))

    key = (v, ml, mr)
    if key == (+1, 0, 0):
        return A(c0) + B(I * s0)
    if key == (-1, 0, 0):
        return A(I * s0) + B(c0)
    if key == (+1, 0, 1):
        return _product(1, _vel_ket(-1, p.beta0), _mem_ket(1, gl), _mem_ket(1, gr))
    if key == (-1, 1, 0):
        return _product(1, _vel_ket(+1, p.beta0), _mem_ket(1, gl), _mem_ket(1, gr))
    if key == (+1, 1, 0):
        return _product(1, _vel_ket(+1, p.beta1), _mem_ket(0, gl), _mem_ket(0, gr))
    if key == (-1, 0, 1):
        return _product(1, _vel_ket(-1, p.beta1), _mem_ket(0, gl), _mem_ket(0, gr))
    if key == (+1, 1, 1):
        return C(c1) + D(I * s1)
    if key == (-1, 1, 1):
        return C(I * s1) + D(c1)
    raise RangeError(f"bad local basis state {key}")


def _uob_rule(params, n):
    def rule(x, v, m):
        left, right = (x - 1) % n, (x + 1) % n
        out = []
        for a, (v2, ml2, mr2) in uob_local_terms(params, v, _bit(m, left), _bit(m, right)):
            if a != 0:
                m2 = _set_bit(_set_bit(m, left, ml2), right, mr2)
                out.append((a, (_hop(x, v2, n), v2, m2)))
        return out

    return rule


_RULES = {
    "qw": _qw_rule,
    "shqw": _shqw_rule,
    "mr-nhqw": _mr_rule,
    "uob-nhqw": _uob_rule,
}


def basis_rule(model: str, params, n: int) -> Callable:
    if model not in _RULES:
        raise ValidationError(f"unknown walk model {model!r}; expected one of {WALK_MODELS}")
    if n < 3:
        raise ValidationError(f"lattice needs N >= 3 sites, got {n}")
    return _RULES[model](params, n)


def oracle_step(model: str, params, n: int, amplitudes: dict) -> dict:
    """One step on a sparse ``{walk index: amplitude}`` state."""
    rule = basis_rule(model, params, n)
    out: dict = {}
    for j in sorted(amplitudes):
        aj = amplitudes[j]
        if aj == 0:
            continue
        for a, (x, v, m) in rule(*decode_basis(j, n)):
            i = encode_basis(x, v, m, n)
            out[i] = out.get(i, 0) + a * aj
    return out


def oracle_marginals(model: str, params, n: int, t: int, amplitudes: dict) -> np.ndarray:
    """Position marginals (rows 0..t) of the sparse reference evolution."""
    rows = []
    state = dict(amplitudes)
    for step in range(t + 1):
        row = np.zeros(n)
        for j, a in state.items():
            row[j // (2 << n)] += abs(a) ** 2
        rows.append(row)
        if step < t:
            state = oracle_step(model, params, n, state)
    return np.array(rows)


def centred_start(n: int) -> dict:
    c = n // 2
    r = 1 / math.sqrt(2)
    return {encode_basis(c, +1, 0, n): r, encode_basis(c, -1, 0, n): r}


# ---------------------------------------------------------------------------
# QCA rules in the nibble basis


def _nib(v0, v1, m0, m1) -> int:
    return v0 | (v1 << 1) | (m0 << 2) | (m1 << 3)


def _qca_l1_nibble(p) -> np.ndarray:
    """L1 on one cell; right-mover = (v0,v1)=(0,1), M1 = left memory, M0 = right."""
    u = np.eye(16, dtype=complex)
    for v in (+1, -1):
        for ml in (0, 1):
            for mr in (0, 1):
                vin = (0, 1) if v == +1 else (1, 0)
                col = np.zeros(16, dtype=complex)
                for a, (v2, ml2, mr2) in uob_local_terms(p, v, ml, mr):
                    vout = (0, 1) if v2 == +1 else (1, 0)
                    col[_nib(vout[0], vout[1], mr2, ml2)] += a
                u[:, _nib(vin[0], vin[1], mr, ml)] = col
    return u


def _qca_swap_nibble(vcontrol: tuple) -> np.ndarray:
    u = np.zeros((16, 16), dtype=complex)
    for c in range(16):
        v0, v1, m0, m1 = c & 1, (c >> 1) & 1, (c >> 2) & 1, (c >> 3) & 1
        out = _nib(v0, v1, m1, m0) if (v0, v1) == vcontrol else c
        u[out, c] = 1
    return u


def _qca_bit_move(n: int, moves: Iterable[tuple]) -> sp.csr_matrix:
    """Permutation matrix: bit at position ``src`` of each index goes to ``dst``."""
    moves = list(moves)
    dim = 1 << (4 * n)
    idx = np.arange(dim, dtype=np.int64)
    moved_srcs = {s for s, _ in moves}
    keep = ~sum((1 << s) for s in moved_srcs) & (dim - 1)
    out = idx & keep
    for src, dst in moves:
        out |= ((idx >> src) & 1) << dst
    return sp.csr_matrix((np.ones(dim), (out, idx)), shape=(dim, dim), dtype=complex)


def _qca_cellwise(n: int, local: np.ndarray) -> sp.csr_matrix:
    m = sp.identity(1, dtype=complex, format="csr")
    for _ in range(n):
        # cell n-1 is most significant
        m = sp.kron(sp.csr_matrix(local), m, format="csr")
    return m


def qca_stage_matrices(p, n: int) -> list:
    """[sigma1, S1, sigma2, S2, sigma3, S3] as sparse matrices, applied left to right."""
    def q(cell, role):
        return 4 * (cell % n) + role

    # cell k receives M0 (role 2) of k+1 and M1 (role 3) of k-1
    sigma1 = _qca_bit_move(n, [(q(k + 1, 2), q(k, 2)) for k in range(n)]
                           + [(q(k - 1, 3), q(k, 3)) for k in range(n)])
    sigma2 = _qca_bit_move(n, [(q(k, 2), q(k + 1, 2)) for k in range(n)]
                           + [(q(k, 3), q(k - 1, 3)) for k in range(n)])
    # cell k receives V0 (role 0) of k+1 and V1 (role 1) of k-1
    sigma3 = _qca_bit_move(n, [(q(k + 1, 0), q(k, 0)) for k in range(n)]
                           + [(q(k - 1, 1), q(k, 1)) for k in range(n)])
    return [
        sigma1,
        _qca_cellwise(n, _qca_l1_nibble(p)),
        sigma2,
        _qca_cellwise(n, _qca_swap_nibble((0, 1))),
        sigma3,
        _qca_cellwise(n, _qca_swap_nibble((1, 0))),
    ]


def qca_global_matrix(p, n: int) -> sp.csr_matrix:
    g = None
    for stage in qca_stage_matrices(p, n):
        g = stage if g is None else stage @ g
    return g.tocsr()


# ---------------------------------------------------------------------------
# public surface


def dense_step_matrix(model: str, params, n: int):
    """Explicit one-step matrix.

    Walk models return a dense ``ndarray`` (N <= 5).  ``"qca"`` returns the
    ``2**(4N)``-dimensional global step as a ``scipy.sparse`` CSR matrix
    (N <= 3); call ``.toarray()`` for dense storage.
    """
    if model == "qca":
        if n > MAX_QCA_CELLS:
            raise SizeLimitError(f"dense QCA matrix limited to N <= {MAX_QCA_CELLS}, got {n}")
        if n < 3:
            raise ValidationError(f"QCA needs at least 3 cells, got {n}")
        return qca_global_matrix(params, n)
    if n > MAX_WALK_SITES:
        raise SizeLimitError(
            f"dense walk matrix limited to N <= {MAX_WALK_SITES} "
            f"(dimension {walk_dim(MAX_WALK_SITES)}), got N={n}"
        )
    rule = basis_rule(model, params, n)
    dim = walk_dim(n)
    mat = np.zeros((dim, dim), dtype=complex)
    for j in range(dim):
        for a, (x, v, m) in rule(*decode_basis(j, n)):
            mat[encode_basis(x, v, m, n), j] += a
    return mat


def unitarity_error(mat) -> float:
    """``max |U^dag U - I|`` for dense or sparse ``mat``."""
    if sp.issparse(mat):
        prod = (mat.conj().T @ mat - sp.identity(mat.shape[0], format="csr")).tocoo()
        return float(np.abs(prod.data).max(initial=0.0))
    return float(np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])).max())


def random_unit_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def _structured_step(model: str):
    if model == "qca":
        from .qca import global_step

        return global_step
    from .walks import step_function

    return step_function(model)


def oracle_compare(model: str, params, n: int, trials: int, rng=None, step=None, matrix=None) -> float:
    """Max over random unit states of ``|structured(psi) - M psi|``.

    ``step`` overrides the structured step (used for negative controls);
    ``matrix`` reuses a prebuilt reference operator.
    """
    from .hilbert import QcaState, WalkState

    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials}")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    mat = dense_step_matrix(model, params, n) if matrix is None else matrix
    step = step or _structured_step(model)
    make = QcaState if model == "qca" else WalkState
    worst = 0.0
    for _ in range(trials):
        psi = make(random_unit_vector(mat.shape[0], rng), n)
        got = step(psi, params).amplitudes
        worst = max(worst, float(np.linalg.norm(got - mat @ psi.amplitudes)))
    return worst


def classical_rw_marginal(t: int, n: int, center: int, exact: bool = False):
    """Binomial distribution of a fair +-1 walk after ``t`` steps, no wrap."""
    if t < 0 or center - t < 0 or center + t > n - 1:
        raise RangeError(f"t={t} from site {center} would wrap on N={n}")
    probs = [Fraction(0)] * n
    for k in range(t + 1):
        probs[center - t + 2 * k] = Fraction(math.comb(t, k), 2 ** t)
    if exact:
        return probs
    return np.array([float(q) for q in probs])


def coined_qw_marginal(coin, t: int, n: int, center: int) -> np.ndarray:
    """Memoryless coined walk from (|c,+1> + |c,-1>)/sqrt(2), via its 2N x 2N matrix."""
    coin = np.asarray(coin, dtype=complex)
    dim = 2 * n
    mat = np.zeros((dim, dim), dtype=complex)
    for x in range(n):
        for vb, v in ((0, +1), (1, -1)):
            for vb2, v2 in ((0, +1), (1, -1)):
                mat[2 * _hop(x, v2, n) + vb2, 2 * x + vb] += coin[vb2, vb]
    psi = np.zeros(dim, dtype=complex)
    psi[2 * center] = psi[2 * center + 1] = 1 / cmath.sqrt(2)
    for _ in range(t):
        psi = mat @ psi
    return (np.abs(psi) ** 2).reshape(n, 2).sum(axis=1)
