"""Generator lists as codes: canonical form and structural analysis.

A group of XP operators is canonicalized into a block of non-diagonal
generators whose x parts form a reduced row echelon basis, followed by a
block of diagonal generators whose (2z|p) embedding over Z_2N is in Howell
form.  The non-diagonal rows have their diagonal content reduced against
the Howell basis, which makes the canonical form unique per group.

From the canonical form the module derives the Z-support of the stabilized
space, its orbit and core decomposition under the non-diagonal x action,
diagonal Pauli generators for the same support, logical operators for
regular codes, and the generator-counting certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .ring_linalg import ModMatrix, howell_form, kernel_mod, rref_gf2, solve_linear_mod
from .xp_algebra import (
    XpOperator,
    conjugate,
    inverse,
    multiply,
    power,
)


class EmptyCodeError(ValueError):
    """The generator list stabilizes no state."""


class PrecisionError(ValueError):
    """The operation needs a different precision (even, or a power of two)."""


class NonRegularError(ValueError):
    """Logical-structure extraction is only supported for regular codes."""


@dataclass(frozen=True)
class XpGroup:
    """An XP group presented by an ordered generator list."""

    precision: int
    n: int
    generators: tuple[XpOperator, ...]
    canonical: bool = False

    def __post_init__(self) -> None:
        for op in self.generators:
            if op.n != self.n or op.precision != self.precision:
                raise ValueError("generator does not match group qubit count / precision")

    @classmethod
    def from_generators(cls, generators: Sequence[XpOperator], n: int | None = None,
                        precision: int | None = None) -> "XpGroup":
        gens = tuple(generators)
        if not gens and (n is None or precision is None):
            raise ValueError("empty generator list needs explicit n and precision")
        return cls(precision or gens[0].precision, n if n is not None else gens[0].n, gens)

    @property
    def x_block(self) -> tuple[XpOperator, ...]:
        return tuple(op for op in self.generators if not op.is_diagonal)

    @property
    def z_block(self) -> tuple[XpOperator, ...]:
        return tuple(op for op in self.generators if op.is_diagonal)


def int_to_bits(e: int, n: int) -> tuple[int, ...]:
    """Big-endian bit tuple of a basis index."""
    return tuple((e >> (n - 1 - i)) & 1 for i in range(n))


def bits_to_int(bits: Sequence[int]) -> int:
    v = 0
    for b in bits:
        v = (v << 1) | (int(b) & 1)
    return v


def _diag_to_vec(op: XpOperator) -> tuple[int, ...]:
    """(2z|p) embedding of a diagonal operator over Z_2N."""
    two_n = 2 * op.precision
    return tuple((2 * zi) % two_n for zi in op.z) + (op.phase,)


def _vec_to_diag(vec: Sequence[int], n: int, precision: int) -> XpOperator:
    z = tuple(v // 2 for v in vec[:n])
    return XpOperator(precision, (0,) * n, z, vec[n])


def _diag_howell(ops: Sequence[XpOperator], n: int, precision: int) -> list[XpOperator]:
    if not ops:
        return []
    mat = ModMatrix.from_rows([_diag_to_vec(op) for op in ops], 2 * precision)
    return [_vec_to_diag(row, n, precision) for row in howell_form(mat).entries]


def _reduce_diag_part(op: XpOperator, basis: Sequence[XpOperator]) -> XpOperator:
    """Right-multiply by diagonal basis elements to canonicalize (2z|p)."""
    if not basis:
        return op
    two_n = 2 * op.precision
    vec = list(_diag_to_vec(op))
    for b in basis:
        bvec = _diag_to_vec(b)
        col = next(c for c, v in enumerate(bvec) if v)
        q = vec[col] // bvec[col]
        if q:
            vec = [(v - q * w) % two_n for v, w in zip(vec, bvec)]
    z = tuple(v // 2 for v in vec[: op.n])
    return XpOperator(op.precision, op.x, z, vec[op.n])


def canonical_form(g: XpGroup) -> XpGroup:
    """Unique canonical presentation of the generated group.

    The generated group is unchanged; generators are rewritten with the
    exact group law only, never plain row addition.
    """
    if g.canonical:
        return g
    n, precision = g.n, g.precision
    work = [op for op in g.generators if not op.is_identity]

    # Sweep the x block into RREF; every row operation is a group product.
    sx: list[XpOperator] = []
    for col in range(n):
        idx = next((i for i, op in enumerate(work) if op.x[col]), None)
        if idx is None:
            continue
        pivot = work.pop(idx)
        work = [multiply(op, pivot) if op.x[col] else op for op in work]
        sx = [multiply(op, pivot) if op.x[col] else op for op in sx]
        sx.append(pivot)

    # All remaining rows are diagonal.  Close the diagonal subgroup under
    # squares, pairwise commutators, and conjugation by the x block.
    pool: list[XpOperator] = [op for op in work]
    for s in sx:
        pool.append(power(s, 2))
    for i in range(len(sx)):
        for j in range(i + 1, len(sx)):
            ab = multiply(sx[i], sx[j])
            ba = multiply(sx[j], sx[i])
            pool.append(multiply(ab, inverse(ba)))
    basis = _diag_howell(pool, n, precision)
    while True:
        extra = [conjugate(s, d) for s in sx for d in basis]
        new_basis = _diag_howell(list(basis) + extra, n, precision)
        if new_basis == basis:
            break
        basis = new_basis

    sx = [_reduce_diag_part(op, basis) for op in sx]
    gens = tuple(sx) + tuple(basis)
    return XpGroup(precision, n, gens, canonical=True)


def phase_identity(g: XpGroup) -> XpOperator | None:
    """The derived w^p * I generator, if the group contains a nontrivial one."""
    g = canonical_form(g)
    for op in g.z_block:
        if not any(op.z) and op.phase:
            return op
    return None


def z_support(g: XpGroup) -> tuple[int, ...]:
    """Basis indices on which every diagonal generator acts with phase one.

    Raises:
        EmptyCodeError: when no basis string survives, or the group contains
            a phase-of-identity element (an inconsistent presentation).
    """
    g = canonical_form(g)
    if phase_identity(g) is not None:
        raise EmptyCodeError("group contains a nontrivial phase times identity")
    n = g.n
    idx = np.arange(2 ** n, dtype=np.int64)
    ok = np.ones(2 ** n, dtype=bool)
    for op in g.z_block:
        expo = np.full(2 ** n, op.phase, dtype=np.int64)
        for i, zi in enumerate(op.z):
            if zi:
                expo += 2 * zi * ((idx >> (n - 1 - i)) & 1)
        ok &= (expo % (2 * g.precision)) == 0
    support = np.flatnonzero(ok)
    if support.size == 0:
        raise EmptyCodeError("diagonal generators stabilize no basis string")
    return tuple(int(e) for e in support)


def _xor_span(dirs: Sequence[int]) -> list[int]:
    span = [0]
    for d in dirs:
        if d not in span:
            span = span + [s ^ d for s in span]
    # Deduplicate while keeping subset-product enumeration exact.
    return sorted(set(span))


@dataclass(frozen=True)
class OrbitDecomposition:
    """Z-support split into x-orbit representatives and the core."""

    e_m: tuple[int, ...]
    e_q: tuple[int, ...]
    regular: bool
    logical_x_dirs: tuple[int, ...]


def orbit_decomposition(g: XpGroup) -> OrbitDecomposition:
    g = canonical_form(g)
    support = z_support(g)
    dirs = [op.x_mask for op in g.x_block]
    span = _xor_span(dirs)
    rep = {e: min(e ^ s for s in span) for e in support}
    e_m = tuple(sorted(set(rep.values())))
    rep_set = set(e_m)
    # Sanity: orbits of stabilized strings stay inside the support.
    for e in support:
        assert all((e ^ s) in rep for s in span)

    m0 = e_m[0]
    def label(e: int) -> int:
        return min(e ^ s for s in span)

    candidates = {label(m0 ^ m) for m in e_m}
    invariant = [d for d in candidates if {label(m ^ d) for m in e_m} == rep_set]
    w_group = set(invariant)
    regular = len(w_group) == len(e_m)

    # Transversal of the representative set under the invariant shifts.
    seen: set[int] = set()
    core: list[int] = []
    for m in sorted(e_m):
        if m in seen:
            continue
        orbit = {label(m ^ d) for d in w_group}
        seen |= orbit
        core.append(min(orbit))

    # Independent direction basis modulo the x-block span.
    basis: list[int] = []
    v_basis = list(dirs)
    for d in sorted(w_group):
        if d == 0:
            continue
        pool = v_basis + basis
        mat = ModMatrix.from_rows([int_to_bits(v, g.n) for v in pool], 2)
        if pool and solve_linear_mod(mat, int_to_bits(d, g.n)) is not None:
            continue
        basis.append(d)
    assert 2 ** len(basis) == len(w_group)
    return OrbitDecomposition(e_m, tuple(sorted(core)), regular, tuple(basis))


def r_z_generators(g: XpGroup) -> list[XpOperator]:
    """Diagonal Pauli generators stabilizing exactly the Z-support.

    The z exponents are multiples of N/2 and the rows of their exponent
    pattern form the GF(2) annihilator of the support's difference span.
    """
    g = canonical_form(g)
    if g.precision % 2:
        raise PrecisionError("Pauli extraction needs even precision")
    support = z_support(g)
    e0 = support[0]
    diffs = sorted({e ^ e0 for e in support if e != e0})
    if diffs:
        dmat, _ = rref_gf2(ModMatrix.from_rows([int_to_bits(d, g.n) for d in diffs], 2))
        cols = ModMatrix.from_rows(
            [[row[i] for row in dmat.entries] for i in range(g.n)], 2)
        vs = kernel_mod(cols).entries
    else:
        vs = ModMatrix.identity(g.n, 2).entries
    half = g.precision // 2
    out = []
    for v in vs:
        sign = sum(b * ((e0 >> (g.n - 1 - i)) & 1) for i, b in enumerate(v)) % 2
        out.append(XpOperator(g.precision, (0,) * g.n,
                              tuple(half * b for b in v), g.precision * sign))
    return out


@dataclass(frozen=True)
class CodewordTable:
    """Symbolic codewords as (basis index, phase exponent) pair lists."""

    precision: int
    n: int
    entries: tuple[tuple[tuple[int, int], ...], ...]
    e_m: tuple[int, ...]
    e_q: tuple[int, ...]

    def phase_map(self) -> dict[int, int]:
        """Phase exponent per support string, over all codewords."""
        phases: dict[int, int] = {}
        for cw in self.entries:
            for e, ph in cw:
                phases[e] = ph
        return phases


def codewords(g: XpGroup) -> CodewordTable:
    """Orbit expansion of each representative under the x-block generators."""
    g = canonical_form(g)
    od = orbit_decomposition(g)
    sx = g.x_block
    entries = []
    for m in od.e_m:
        pairs = []
        for exps in product((0, 1), repeat=len(sx)):
            op = XpOperator.identity(g.n, g.precision)
            for e, s in zip(exps, sx):
                if e:
                    op = multiply(op, s)
            pairs.append((m ^ op.x_mask, op.action_phase(m)))
        seen = [e for e, _ in pairs]
        assert len(seen) == len(set(seen))
        entries.append(tuple(sorted(pairs)))
    return CodewordTable(g.precision, g.n, tuple(entries), od.e_m, od.e_q)


def _solve_diagonal_constraints(n: int, precision: int,
                                constraints: Sequence[tuple[int, int]]) -> XpOperator | None:
    """Find a diagonal operator with prescribed action phases.

    Each constraint (e, r) demands  p + 2 z . bits(e) == r (mod 2N).  The
    embedding unknowns are u_i = 2 z_i and p; auxiliary columns force u_i
    even.  Returns the operator, or None when the system is unsolvable.
    """
    two_n = 2 * precision
    rows = []
    for i in range(n):
        row = [int_to_bits(e, n)[i] for e, _ in constraints] + [0] * n
        row[len(constraints) + i] = precision
        rows.append(row)
    rows.append([1] * len(constraints) + [0] * n)
    mat = ModMatrix.from_rows(rows, two_n)
    rhs = [r % two_n for _, r in constraints] + [0] * n
    sol = solve_linear_mod(mat, rhs)
    if sol is None:
        return None
    z = tuple(sol[i] // 2 for i in range(n))
    return XpOperator(precision, (0,) * n, z, sol[n])


def _solve_orbit_constraints(g: XpGroup, rhs: dict[int, int],
                             orbit_of: dict[int, int], n_orbits: int,
                             ) -> tuple[XpOperator, tuple[int, ...]] | None:
    """Diagonal completion with a free constant phase per codeword orbit.

    Solves  p + 2 z . bits(e) + gamma_orbit(e) == rhs[e]  over Z_2N with
    gamma fixed to zero on the first orbit.  Returns the diagonal part and
    the per-orbit phases, or None.
    """
    n, precision = g.n, g.precision
    two_n = 2 * precision
    support = sorted(rhs)
    cols = len(support)
    n_aux = n  # evenness columns
    rows = []
    for i in range(n):
        row = [int_to_bits(e, n)[i] for e in support] + [0] * n_aux
        row[cols + i] = precision
        rows.append(row)
    rows.append([1] * cols + [0] * n_aux)
    for j in range(1, n_orbits):
        rows.append([1 if orbit_of[e] == j else 0 for e in support] + [0] * n_aux)
    mat = ModMatrix.from_rows(rows, two_n)
    b = [rhs[e] % two_n for e in support] + [0] * n_aux
    sol = solve_linear_mod(mat, b)
    if sol is None:
        return None
    z = tuple(sol[i] // 2 for i in range(n))
    gammas = (0,) + tuple(sol[n + 1 + j] for j in range(n_orbits - 1))
    return XpOperator(precision, (0,) * n, z, sol[n]), gammas


def logical_x_operators(g: XpGroup) -> list[XpOperator]:
    """Non-diagonal logical generators of a regular code.

    Each returned operator carries one direction of the representative
    space and a diagonal completion that maps every codeword to a codeword;
    the base orbit is mapped with phase one, the other orbits may pick up a
    constant phase each, which is all a valid logical needs.
    """
    g = canonical_form(g)
    if g.precision & (g.precision - 1):
        raise PrecisionError("logical extraction needs a power-of-two precision")
    od = orbit_decomposition(g)
    if not od.regular:
        raise NonRegularError("code core has more than one element")
    table = codewords(g)
    phases = table.phase_map()
    orbit_of = {}
    for idx, cw in enumerate(table.entries):
        for e, _ in cw:
            orbit_of[e] = idx
    out = []
    for w in od.logical_x_dirs:
        rhs = {e: phases[e ^ w] - phases[e] for e in phases}
        solved = _solve_orbit_constraints(g, rhs, orbit_of, len(table.entries))
        if solved is None:
            raise NonRegularError("no XP completion for a logical direction")
        diag, _ = solved
        out.append(XpOperator(g.precision, int_to_bits(w, g.n), diag.z, diag.phase))
    return out


def diagonal_logical_operators(g: XpGroup) -> list[XpOperator]:
    """Diagonal logicals, one per logical direction, acting as -1 on the
    codewords whose representative carries that direction."""
    g = canonical_form(g)
    od = orbit_decomposition(g)
    if not od.regular:
        raise NonRegularError("code core has more than one element")
    support = z_support(g)
    dirs = [op.x_mask for op in g.x_block]
    span = _xor_span(dirs)
    q0 = od.e_q[0]

    def coords(e: int) -> tuple[int, ...]:
        m = min(e ^ s for s in span)
        target = int_to_bits(m ^ q0, g.n)
        pool = [int_to_bits(v, g.n) for v in dirs] + \
               [int_to_bits(w, g.n) for w in od.logical_x_dirs]
        if not pool:
            return ()
        sol = solve_linear_mod(ModMatrix.from_rows(pool, 2), target)
        assert sol is not None
        return tuple(sol[len(dirs):])

    out = []
    for j in range(len(od.logical_x_dirs)):
        constraints = [(e, g.precision * coords(e)[j]) for e in support]
        op = _solve_diagonal_constraints(g.n, g.precision, constraints)
        if op is None:
            raise NonRegularError("no diagonal logical for a direction")
        out.append(op)
    return out


def diagonal_span_kernel(n: int, precision: int, support: Sequence[int]) -> list[XpOperator]:
    """All diagonal operators acting with phase one on every support string.

    Returns a Howell basis of the solution module of p + 2 z . bits(e) == 0
    (mod 2N) over the given strings; auxiliary columns keep the z slots even.
    """
    two_n = 2 * precision
    cols = len(support)
    rows = []
    for i in range(n):
        row = [int_to_bits(e, n)[i] for e in support] + [0] * n
        row[cols + i] = precision
        rows.append(row)
    rows.append([1] * cols + [0] * n)
    kern = kernel_mod(ModMatrix.from_rows(rows, two_n))
    return [
        XpOperator(precision, (0,) * n, tuple(v // 2 for v in krow[:n]), krow[n])
        for krow in kern.entries
        if any(krow[:n]) or krow[n] % two_n
    ]


def complete_lid(g: XpGroup) -> XpGroup:
    """The full logical identity group of the code presented by ``g``.

    The diagonal block is recomputed as every diagonal operator fixing the
    Z-support, and each x-block direction is re-completed so that it fixes
    every codeword exactly.  The input generators witness solvability, so
    the output always contains the input group.
    """
    g = canonical_form(g)
    table = codewords(g)
    phases = table.phase_map()
    support = sorted(phases)
    diag = diagonal_span_kernel(g.n, g.precision, support)
    xs = []
    for op in g.x_block:
        w = op.x_mask
        constraints = [(e, phases[e ^ w] - phases[e]) for e in support]
        d = _solve_diagonal_constraints(g.n, g.precision, constraints)
        assert d is not None, "stabilizer row lost its own completion"
        xs.append(XpOperator(g.precision, int_to_bits(w, g.n), d.z, d.phase))
    return canonical_form(XpGroup(g.precision, g.n, tuple(xs + diag)))


def lid_from_phase_table(pairs: Sequence[tuple[int, int]], n: int, precision: int,
                         ) -> XpGroup | None:
    """Full symmetry group of the uniform state sum of w^phase |e>.

    The pairs list one phase exponent per support string.  Returns None
    when no XP group pins the state alone: the support must be an affine
    GF(2) space, every support direction must admit a completion matching
    the phases, and the resulting group must stabilize a one-dimensional
    space.
    """
    if not pairs:
        return None
    phases = {e: ph % (2 * precision) for e, ph in pairs}
    support = sorted(phases)
    e0 = support[0]
    diffs = sorted({e ^ e0 for e in support if e != e0})
    if diffs:
        dmat, _ = rref_gf2(ModMatrix.from_rows([int_to_bits(d, n) for d in diffs], 2))
        dirs = [bits_to_int(row) for row in dmat.entries]
    else:
        dirs = []
    if len(support) != 2 ** len(dirs):
        return None
    span = {0}
    for d in dirs:
        span |= {s ^ d for s in span}
    if {e ^ e0 for e in support} != span:
        return None

    diag_gens = diagonal_span_kernel(n, precision, support)
    x_gens = []
    for d in dirs:
        constraints = [(e, phases[e ^ d] - phases[e]) for e in support]
        op = _solve_diagonal_constraints(n, precision, constraints)
        if op is None:
            return None
        x_gens.append(XpOperator(precision, int_to_bits(d, n), op.z, op.phase))
    group = canonical_form(XpGroup.from_generators(x_gens + diag_gens, n=n, precision=precision))
    if len(codewords(group).entries) != 1:
        return None
    return group


def counting_check(g: XpGroup, logical_dims: int | None = None) -> bool:
    """Generator-counting certificate |S_X| + |L_X| + |S_Z| == n.

    ``logical_dims`` is the number of logical directions the object is
    supposed to carry: pass 0 when the group should pin down a state, or
    leave it None to accept whatever the orbit structure provides (the
    check for a code).  This is a necessary condition for the group to be
    the full symmetry group at power-of-two precision, used as the fast
    screen after tracing.
    """
    g = canonical_form(g)
    try:
        od = orbit_decomposition(g)
    except EmptyCodeError:
        return False
    k = len(od.logical_x_dirs)
    if logical_dims is not None and k != logical_dims:
        return False
    n_x = len(g.x_block)
    n_z = len(g.z_block)
    return n_x + k + n_z == g.n


def permute_legs(g: XpGroup, order: Sequence[int]) -> XpGroup:
    """Reorder qubit columns; ``order[i]`` is the old index of new leg i."""
    gens = tuple(
        XpOperator(g.precision,
                   tuple(op.x[j] for j in order),
                   tuple(op.z[j] for j in order),
                   op.phase)
        for op in g.generators
    )
    return XpGroup(g.precision, g.n, gens, canonical=False)
