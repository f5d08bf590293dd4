"""Two-round syndrome extraction and maximum-likelihood decoding.

The first round measures the diagonal Pauli checks derived from the code's
Z-support.  The second round measures the non-diagonal checks conjugated
by the first-round representative error; inside the measured sector these
behave as commuting Hermitian observables with unit square, so the usual
ancilla circuit semantics apply and the rounds are simulated as exact
projections.  A correction is chosen by maximizing the joint weight

    p(L, s) = (b_scalar + a_scalar) / (K (K + 1))

over a transversal basis of logical classes, with both scalars evaluated
through the coset trace machinery of the enumerator module.  A Monte Carlo
harness samples i.i.d. single-qubit channels and scores logical success.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .code_structure import (
    XpGroup,
    canonical_form,
    codewords,
    diagonal_logical_operators,
    logical_x_operators,
    orbit_decomposition,
    r_z_generators,
)
from .dense_oracle import apply_operator, projector, render_operator, state_from_pairs
from .enumerator import PAULI_LIST, coset_scalars, xp_factors
from .xp_algebra import XpOperator, conjugate, inverse, multiply

TOL = 1e-9


class ChannelError(ValueError):
    """The Kraus list does not describe a trace-preserving channel."""


class NondeterministicMeasurementError(RuntimeError):
    """A measurement outcome was not definite and no sampler was supplied."""


class UnsupportedCodeError(ValueError):
    """Decoding needs a regular power-of-two-precision code with k = 1."""


@dataclass(frozen=True)
class Channel:
    """Single-qubit channel given by 2x2 Kraus operators."""

    kraus: tuple

    def __post_init__(self) -> None:
        total = np.zeros((2, 2), dtype=complex)
        for k in self.kraus:
            k = np.asarray(k, dtype=complex)
            if k.shape != (2, 2):
                raise ChannelError("Kraus operators must be 2x2")
            total += k.conj().T @ k
        if np.max(np.abs(total - np.eye(2))) > TOL:
            raise ChannelError("Kraus operators do not resolve the identity")


def depolarizing(p: float) -> Channel:
    if not 0 <= p <= 1:
        raise ChannelError("depolarizing strength must lie in [0, 1]")
    sq = np.sqrt
    return Channel((
        sq(1 - p) * PAULI_LIST[0],
        sq(p / 3) * PAULI_LIST[1],
        sq(p / 3) * PAULI_LIST[2],
        sq(p / 3) * PAULI_LIST[3],
    ))


def amplitude_damping(gamma: float) -> Channel:
    if not 0 <= gamma <= 1:
        raise ChannelError("damping strength must lie in [0, 1]")
    k0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex)
    k1 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex)
    return Channel((k0, k1))


def pauli_process_coeffs(channel: Channel) -> np.ndarray:
    """4x4 pairing table k[P, P'] = sum_m c_{m,P} conj(c_{m,P'}).

    The c coefficients expand each Kraus operator in the Pauli basis.  The
    table is Hermitian and its diagonal sums to one for a trace-preserving
    channel; both facts are validated.
    """
    cs = []
    for k in channel.kraus:
        k = np.asarray(k, dtype=complex)
        cs.append([np.trace(p @ k) / 2.0 for p in PAULI_LIST])
    coeffs = np.zeros((4, 4), dtype=complex)
    for c in cs:
        coeffs += np.outer(c, np.conj(c))
    if np.max(np.abs(coeffs - coeffs.conj().T)) > TOL:
        raise ChannelError("pairing table is not Hermitian")
    if abs(np.trace(coeffs).real - 1.0) > TOL:
        raise ChannelError("channel is not trace preserving")
    return coeffs


@dataclass(frozen=True)
class Syndrome:
    s_z: tuple[int, ...]
    s_x: tuple[int, ...]


@dataclass(frozen=True)
class DecodeResult:
    chosen: str
    logical: XpOperator
    correction: XpOperator
    probabilities: dict


class DecoderSetup:
    """Precomputed structure for decoding one code."""

    def __init__(self, code: XpGroup):
        code = canonical_form(code)
        if code.n > 12:
            raise UnsupportedCodeError("decoding is dense and capped at 12 qubits")
        if code.precision & (code.precision - 1):
            raise UnsupportedCodeError("precision must be a power of two")
        od = orbit_decomposition(code)
        if not od.regular:
            raise UnsupportedCodeError("code is not regular")
        self.code = code
        self.n = code.n
        self.precision = code.precision
        self.k = len(od.logical_x_dirs)
        self.r_z = r_z_generators(code)
        self.x_checks = list(code.x_block)
        self.projector = projector(code)
        self.dimension = int(round(float(np.trace(self.projector).real)))
        rz_group = XpGroup.from_generators(self.r_z, n=code.n, precision=code.precision)
        self.pi_z = projector(rz_group)
        self._z_reps = _min_weight_reps(
            [[1 if z else 0 for z in op.z] for op in self.r_z], code.n)
        self._x_reps = _min_weight_reps(
            [list(op.x) for op in self.x_checks], code.n)
        self._sector_cache: dict[tuple[int, ...], np.ndarray] = {}
        self.classes: list[tuple[str, XpOperator]] | None = None
        if self.k == 1:
            xbar = logical_x_operators(code)[0]
            zbar = diagonal_logical_operators(code)[0]
            self.classes = [
                ("I", XpOperator.identity(code.n, code.precision)),
                ("X", xbar),
                ("Z", zbar),
                ("XZ", multiply(xbar, zbar)),
            ]
        table = codewords(code)
        self.codeword_states = [
            state_from_pairs(cw, code.n, code.precision) for cw in table.entries
        ]

    def z_representative(self, s_z: Sequence[int]) -> XpOperator:
        bits = self._z_reps[tuple(s_z)]
        return XpOperator(self.precision, tuple(bits), (0,) * self.n, 0)

    def x_representative(self, s_x: Sequence[int]) -> XpOperator:
        bits = self._x_reps[tuple(s_x)]
        half = self.precision // 2
        return XpOperator(self.precision, (0,) * self.n,
                          tuple(half * b for b in bits), 0)

    def sector_projector(self, s_z: Sequence[int]) -> np.ndarray:
        key = tuple(s_z)
        if key not in self._sector_cache:
            e_sz = render_operator(self.z_representative(key))
            self._sector_cache[key] = e_sz @ self.pi_z @ e_sz.conj().T
        return self._sector_cache[key]


def _min_weight_reps(rows: list[list[int]], n: int) -> dict[tuple[int, ...], list[int]]:
    """Minimum-weight binary representative for every GF(2) syndrome.

    ``rows`` holds the binary check patterns; the syndrome of a candidate
    vector v is (rows . v mod 2).  Candidates are scanned in weight order,
    so the stored representative is minimal (ties resolve to the smaller
    index, which is lexicographic on the packed bits).
    """
    mat = np.array(rows, dtype=np.int64).reshape(len(rows), n)
    idx = np.arange(2 ** n)
    bits = ((idx[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1)
    syndromes = bits @ mat.T % 2
    weights = bits.sum(axis=1)
    order = np.argsort(weights, kind="stable")
    reps: dict[tuple[int, ...], list[int]] = {}
    for e in order:
        key = tuple(int(v) for v in syndromes[e])
        if key not in reps:
            reps[key] = [int(b) for b in bits[e]]
    return reps


@lru_cache(maxsize=32)
def decoder_setup(code: XpGroup) -> DecoderSetup:
    return DecoderSetup(code)


def _measure_pm(state: np.ndarray, plus: np.ndarray, minus: np.ndarray,
                rng, tol: float) -> tuple[int, np.ndarray]:
    """Resolve a two-outcome projective measurement, sampling if needed.

    The surviving branch is returned at the norm of the incoming state, so
    repeated collapses do not shrink the working vector.
    """
    scale = float(np.linalg.norm(state))
    wp = float(np.vdot(plus, plus).real)
    wm = float(np.vdot(minus, minus).real)
    total = wp + wm
    if total <= tol * scale ** 2:
        raise NondeterministicMeasurementError("state annihilated by the sector projector")
    if wm / total <= tol:
        return 0, plus * (scale / np.sqrt(wp))
    if wp / total <= tol:
        return 1, minus * (scale / np.sqrt(wm))
    if rng is None:
        raise NondeterministicMeasurementError(
            "measurement outcome is not definite; decoding needs a definite sector")
    if rng.random() < wp / total:
        return 0, plus * (scale / np.sqrt(wp))
    return 1, minus * (scale / np.sqrt(wm))


def measure_syndrome(state: np.ndarray, code: XpGroup, rng=None,
                     tol: float = 1e-7) -> tuple[Syndrome, np.ndarray]:
    """Two-round syndrome measurement; returns the collapsed state too.

    Round one measures the diagonal Pauli checks.  Round two measures the
    conjugated non-diagonal checks through the sector projector, which is
    where the Hermitian unit-square structure guarantees binary outcomes.
    Outcomes that are not definite are sampled with ``rng`` or raise.
    """
    setup = decoder_setup(canonical_form(code))
    state = np.asarray(state, dtype=complex)
    s_z = []
    for op in setup.r_z:
        moved = apply_operator(op, state)
        bit, state = _measure_pm(state, (state + moved) / 2.0, (state - moved) / 2.0,
                                 rng, tol)
        s_z.append(bit)
    e_sz = setup.z_representative(s_z)
    pi_sector = setup.sector_projector(s_z)
    projected = pi_sector @ state
    if np.linalg.norm(projected - state) > tol * max(np.linalg.norm(state), 1e-30):
        raise NondeterministicMeasurementError("state is not supported on its sector")
    s_x = []
    for op in setup.x_checks:
        conjugated = conjugate(e_sz, op)
        moved = pi_sector @ apply_operator(conjugated, state)
        bit, state = _measure_pm(state, (state + moved) / 2.0, (state - moved) / 2.0,
                                 rng, tol)
        s_x.append(bit)
    return Syndrome(tuple(s_z), tuple(s_x)), state


def extract_syndrome(state: np.ndarray, code: XpGroup) -> Syndrome:
    """Deterministic syndrome of a definite-sector corruption."""
    syndrome, _ = measure_syndrome(state, code, rng=None)
    return syndrome


def representative_errors(syndrome: Syndrome, code: XpGroup) -> tuple[XpOperator, XpOperator]:
    """Minimum-weight X-type and Z-type products with the given syndrome."""
    setup = decoder_setup(canonical_form(code))
    return setup.z_representative(syndrome.s_z), setup.x_representative(syndrome.s_x)


def _op_weight(op: XpOperator) -> int:
    return sum(1 for x, z in zip(op.x, op.z) if x or z)


def ml_decode(syndrome: Syndrome, coeffs: np.ndarray, code: XpGroup) -> DecodeResult:
    """Maximum-likelihood class choice for one syndrome.

    For each logical class L the residual operator E_sz E_sx L enters the
    two coset scalars; the joint weight is their sum over K(K+1).  Ties go
    to the lower-weight logical, then to class order.
    """
    setup = decoder_setup(canonical_form(code))
    if setup.classes is None:
        raise UnsupportedCodeError("maximum-likelihood classes need k = 1")
    e_sz, e_sx = representative_errors(syndrome, code)
    base = multiply(e_sz, e_sx)
    kdim = setup.dimension
    probabilities = {}
    scored = []
    for idx, (name, logical) in enumerate(setup.classes):
        e_tilde = multiply(base, logical)
        a_scalar, b_scalar = coset_scalars(coeffs, setup.projector, xp_factors(e_tilde))
        weight = (b_scalar.real + a_scalar.real) / (kdim * (kdim + 1))
        probabilities[name] = weight
        scored.append((-weight, _op_weight(logical), idx, name, logical, e_tilde))
    scored.sort()
    _, _, _, name, logical, e_tilde = scored[0]
    return DecodeResult(name, logical, inverse(e_tilde), probabilities)


@dataclass(frozen=True)
class MonteCarloResult:
    rate: float
    ci95: float
    shots: int
    failures: int
    per_syndrome: dict


def monte_carlo(code: XpGroup, channel: Channel, shots: int, seed: int,
                mode: str = "exact") -> MonteCarloResult:
    """Sampled logical error rate of the full decode-and-recover loop.

    Each shot prepares a random codeword superposition, corrupts it with
    the channel (exact Kraus branching, or its Pauli twirl), measures both
    syndrome rounds, applies the cached maximum-likelihood correction, and
    scores success when the recovered state matches the input up to a
    global phase.  Shots draw independent generators seeded by (seed,
    shot), so results do not depend on execution order.
    """
    if shots < 1:
        raise ValueError("shots must be positive")
    if mode not in ("exact", "twirl"):
        raise ValueError(f"unknown sampling mode {mode!r}")
    code = canonical_form(code)
    setup = decoder_setup(code)
    if setup.classes is None:
        raise UnsupportedCodeError("the harness decodes k = 1 codes")
    coeffs = pauli_process_coeffs(channel)
    twirl_probs = np.clip(np.real(np.diag(coeffs)), 0.0, None)
    twirl_probs = twirl_probs / twirl_probs.sum()
    corrections: dict[Syndrome, XpOperator] = {}
    per_syndrome: dict[tuple, list[int]] = {}
    failures = 0
    basis = [v / np.linalg.norm(v) for v in setup.codeword_states]
    kraus = [np.asarray(k, dtype=complex) for k in channel.kraus]
    n = setup.n
    for shot in range(shots):
        rng = np.random.default_rng([seed, shot])
        raw = rng.normal(size=2 * len(basis))
        amps = raw[::2] + 1j * raw[1::2]
        amps = amps / np.linalg.norm(amps)
        state = sum(a * v for a, v in zip(amps, basis))
        reference = state

        if mode == "twirl":
            for q in range(n):
                p = int(rng.choice(4, p=twirl_probs))
                if p:
                    op = XpOperator(
                        setup.precision,
                        tuple(1 if (q == i and p in (1, 2)) else 0 for i in range(n)),
                        tuple(setup.precision // 2 if (q == i and p in (2, 3)) else 0
                              for i in range(n)),
                        0)
                    state = apply_operator(op, state)
        else:
            for q in range(n):
                branches = []
                for k in kraus:
                    t = state.reshape((2,) * n)
                    t = np.tensordot(k, t, axes=([1], [q]))
                    branches.append(np.moveaxis(t, 0, q).reshape(-1))
                probs = np.array([float(np.vdot(b, b).real) for b in branches])
                probs = probs / probs.sum()
                pick = int(rng.choice(len(branches), p=probs))
                state = branches[pick] / np.linalg.norm(branches[pick])

        syndrome, state = measure_syndrome(state, code, rng=rng)
        if syndrome not in corrections:
            corrections[syndrome] = ml_decode(syndrome, coeffs, code).correction
        state = apply_operator(corrections[syndrome], state)
        fidelity = abs(np.vdot(reference, state)) ** 2 / float(
            np.vdot(state, state).real)
        ok = fidelity >= 1.0 - 1e-9
        if not ok:
            failures += 1
        key = syndrome.s_z + syndrome.s_x
        per_syndrome.setdefault(key, [0, 0])[0 if ok else 1] += 1

    rate = failures / shots
    ci95 = 1.96 * np.sqrt(max(rate * (1.0 - rate), 1e-12) / shots)
    stats = {"".join(map(str, k)): {"ok": v[0], "fail": v[1]}
             for k, v in sorted(per_syndrome.items())}
    return MonteCarloResult(rate, ci95, shots, failures, stats)
