"""Exact complex state-vector backend at desk scale.

Renders XP operators and groups as dense vectors and matrices, performs
Bell-fusion contraction of tensor-network states, and derives the full XP
symmetry group of a dense state when one exists.  Phases are computed from
integer exponents of the primitive root of unity, so group identities hold
to machine precision.

Operators act on basis kets through their sparse column structure (one
nonzero per column); full matrices are only materialized where a trace or
projector is genuinely needed.
"""

from __future__ import annotations

from functools import reduce
from typing import Sequence

import numpy as np

from .code_structure import (
    EmptyCodeError,
    XpGroup,
    canonical_form,
    lid_from_phase_table,
    phase_identity,
)
from .xp_algebra import XpOperator, multiply


class InvalidUnitaryError(ValueError):
    """A local factor fails the unitarity check."""


def omega_table(precision: int) -> np.ndarray:
    """All 2N powers of w = exp(i*pi/N)."""
    return np.exp(1j * np.pi * np.arange(2 * precision) / precision)


def _phase_exponents(op: XpOperator) -> np.ndarray:
    n = op.n
    idx = np.arange(2 ** n)
    expo = np.full(2 ** n, op.phase, dtype=np.int64)
    for i, zi in enumerate(op.z):
        if zi:
            expo += 2 * zi * ((idx >> (n - 1 - i)) & 1)
    return expo % (2 * op.precision)


def apply_operator(op: XpOperator, vec: np.ndarray) -> np.ndarray:
    """Sparse action |e> -> w^(p + 2 z.e) |e xor x| on a state vector."""
    if vec.shape[0] != 2 ** op.n:
        raise ValueError("state dimension does not match operator")
    table = omega_table(op.precision)
    phases = table[_phase_exponents(op)]
    out = np.zeros(vec.shape, dtype=complex)
    idx = np.arange(2 ** op.n)
    out[idx ^ op.x_mask] = phases * vec
    return out


def apply_operator_to_matrix(op: XpOperator, mat: np.ndarray) -> np.ndarray:
    """Left-multiply a dense matrix by the operator, column by column."""
    table = omega_table(op.precision)
    phases = table[_phase_exponents(op)]
    out = np.zeros(mat.shape, dtype=complex)
    idx = np.arange(mat.shape[0])
    out[idx ^ op.x_mask, :] = phases[:, None] * mat
    return out


def render_operator(op: XpOperator) -> np.ndarray:
    """Dense 2^n x 2^n matrix of the operator."""
    if op.n > 12:
        raise ValueError("dense rendering is capped at 12 qubits")
    return apply_operator_to_matrix(op, np.eye(2 ** op.n, dtype=complex))


def basis_state(e: int, n: int) -> np.ndarray:
    vec = np.zeros(2 ** n, dtype=complex)
    vec[e] = 1.0
    return vec


def state_from_pairs(pairs: Sequence[tuple[int, int]], n: int, precision: int) -> np.ndarray:
    """Unnormalized sum of w^phase |e> over (e, phase) pairs."""
    table = omega_table(precision)
    vec = np.zeros(2 ** n, dtype=complex)
    for e, ph in pairs:
        vec[e] += table[ph % (2 * precision)]
    return vec


def projector(g: XpGroup) -> np.ndarray:
    """Code projector in product form.

    Multiplies the averaged factors (1/2)(I + S) over the non-diagonal
    generators and (1/N) sum of powers over the diagonal ones.  Raises
    EmptyCodeError when the presentation is inconsistent or stabilizes
    nothing.
    """
    g = canonical_form(g)
    if phase_identity(g) is not None:
        raise EmptyCodeError("group contains a nontrivial phase times identity")
    dim = 2 ** g.n
    mat = np.eye(dim, dtype=complex)
    table = omega_table(g.precision)
    for op in reversed(g.generators):
        if op.is_diagonal:
            expo = _phase_exponents(op)
            diag = np.zeros(dim, dtype=complex)
            for l in range(g.precision):
                diag += table[(l * expo) % (2 * g.precision)]
            mat = (diag / g.precision)[:, None] * mat
        else:
            mat = (mat + apply_operator_to_matrix(op, mat)) / 2.0
    if abs(np.trace(mat)) < 0.5:
        raise EmptyCodeError("projector has vanishing trace")
    return mat


def group_elements(g: XpGroup, limit: int = 4096) -> list[XpOperator]:
    """Breadth-first closure of the generated group, for oracle checks."""
    gens = [op for op in g.generators]
    seen = {XpOperator.identity(g.n, g.precision)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                b = multiply(a, s)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
                    if len(seen) > limit:
                        raise ValueError(f"group larger than {limit}")
        frontier = nxt
    return sorted(seen, key=lambda o: (o.x, o.z, o.phase))


def stabilizes(op, state: np.ndarray, tol: float = 1e-9) -> bool:
    """True when op fixes the state: ||op s - s|| <= tol * ||s||."""
    if isinstance(op, XpOperator):
        moved = apply_operator(op, state)
    else:
        moved = np.asarray(op) @ state
    return bool(np.linalg.norm(moved - state) <= tol * np.linalg.norm(state))


def contract(states: Sequence[np.ndarray], bonds: Sequence[tuple[int, int]],
             insertions: Sequence[np.ndarray | None] | None = None,
             ) -> tuple[np.ndarray, list[int]]:
    """Bell-fusion contraction of a list of state vectors.

    Legs are numbered globally in tensor order.  Each bond (j, k) sums the
    two indices against the kernel <Phi|(I x U) with |Phi> = |00> + |11>
    unnormalized; U defaults to the identity.  Returns the contracted
    vector and the surviving global leg indices in order.
    """
    ns = [int(np.log2(s.shape[0])) for s in states]
    vec = reduce(np.kron, states) if len(states) > 1 else np.asarray(states[0], dtype=complex)
    total = sum(ns)
    tensor = vec.reshape((2,) * total) if total else vec.reshape(())
    if insertions is None:
        insertions = [None] * len(bonds)
    alive = list(range(total))
    for (j, k), ins in zip(bonds, insertions):
        if j == k:
            raise ValueError("bond endpoints must differ")
        if j not in alive or k not in alive:
            raise ValueError("bond endpoint already contracted")
        if ins is None:
            kernel = np.eye(2, dtype=complex)
        else:
            u = np.asarray(ins, dtype=complex)
            kernel = u.T.conj()
        aj, ak = alive.index(j), alive.index(k)
        tensor = np.tensordot(tensor, kernel, axes=([aj, ak], [0, 1]))
        alive = [leg for leg in alive if leg not in (j, k)]
    return tensor.reshape(-1), alive


def lu_conjugate(mat: np.ndarray, factors: Sequence[np.ndarray], tol: float = 1e-9) -> np.ndarray:
    """(U1 x ... x Un) mat (U1 x ... x Un)^dagger with unitarity checked."""
    for f in factors:
        f = np.asarray(f, dtype=complex)
        if np.linalg.norm(f.conj().T @ f - np.eye(f.shape[0])) > tol:
            raise InvalidUnitaryError("factor is not unitary")
    u = reduce(np.kron, [np.asarray(f, dtype=complex) for f in factors])
    return u @ mat @ u.conj().T


def xp_state_from_dense(vec: np.ndarray, precision: int, tol: float = 1e-9,
                        ) -> XpGroup | None:
    """Full XP symmetry group of a dense state, or None when it is not XP.

    A state is XP at the given precision when its support amplitudes share
    one magnitude, the support is an affine GF(2) space, the relative
    phases are powers of w, every support direction admits an XP completion
    consistent with those phases, and the resulting group fixes the state
    alone (one-dimensional stabilized space).
    """
    vec = np.asarray(vec, dtype=complex)
    n = int(np.log2(vec.shape[0]))
    amax = float(np.max(np.abs(vec)))
    if amax <= 0.0:
        return None
    support = [e for e in range(2 ** n) if abs(vec[e]) > 0.5 * amax]
    off = [e for e in range(2 ** n) if e not in support]
    if any(abs(vec[e]) > tol * amax for e in off):
        return None
    if any(abs(abs(vec[e]) - amax) > tol * amax for e in support):
        return None

    e0 = min(support)
    two_n = 2 * precision
    table = omega_table(precision)
    pairs: list[tuple[int, int]] = []
    for e in support:
        ratio = vec[e] / vec[e0]
        k = int(round(np.angle(ratio) / (np.pi / precision))) % two_n
        if abs(ratio - table[k]) > 10 * tol:
            return None
        pairs.append((e, k))

    group = lid_from_phase_table(pairs, n, precision)
    if group is None:
        return None
    for op in group.generators:
        if not stabilizes(op, vec, tol=1e-7):
            return None
    return group


# Common single-qubit unitaries, unnormalized Hadamard excluded on purpose.
def hadamard_unitary() -> np.ndarray:
    return np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)


def phase_unitary(precision: int, exponent: int) -> np.ndarray:
    """diag(1, w^exponent); exponent counts half-steps of P = diag(1, w^2)."""
    return np.diag([1.0, np.exp(1j * np.pi * exponent / precision)]).astype(complex)
