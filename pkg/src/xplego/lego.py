"""Quantum lego operations on check matrices.

A lego is a generator list over an ordered set of legs plus an optional
dense amplitude shadow.  Legos combine by tensor product and fuse by
self-trace, which glues two legs through an unnormalized Bell kernel.  The
symbolic side of a trace keeps exactly the generators that can be brought
to the matching form

    x[j] == x[k]  and  z[j] + z[k] == 0 (mod N)

by composing with diagonal generators supported on the traced legs; the
composition uses the exact group law, never plain row addition.  Before
matching, the group is restricted to the Bell sector the trace keeps and
completed to its full logical identity group, and support strings that
collide on the traced legs are combined exactly so that amplitude
cancellation cannot hide symmetries of the result.  Tracing with an X
inserted on the bond flips the diagonal condition to z[j] == z[k] and adds
2 z[j] to the surviving phase.

Re-designating a physical leg as logical shortens the code in place:
columns of the leg move to the front, rows supported on it are dropped
after canonicalization, then the columns are deleted.  The reverse
direction materializes one implicit logical qubit as a fresh physical leg
paired with its X and Z logical operators.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .code_structure import (
    EmptyCodeError,
    NonRegularError,
    XpGroup,
    _solve_orbit_constraints,
    canonical_form,
    codewords,
    complete_lid,
    diagonal_logical_operators,
    int_to_bits,
    lid_from_phase_table,
    orbit_decomposition,
    permute_legs,
)
from .dense_oracle import contract, state_from_pairs, stabilizes
from .ring_linalg import ModMatrix, kernel_mod, solve_linear_mod
from .xp_algebra import XpOperator, delete_legs, embed, multiply, power

PHYSICAL = "P"
LOGICAL = "L"

X_MATRIX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


class LegError(ValueError):
    """A trace or designation referenced an unusable leg."""


class NotIsometryError(ValueError):
    """The requested designation does not define an encoding isometry."""


@dataclass(frozen=True)
class Lego:
    """Check matrix plus leg metadata and an optional dense shadow."""

    group: XpGroup
    designation: tuple[str, ...]
    dense: np.ndarray | None = None
    warnings: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if len(self.designation) != self.group.n:
            raise LegError("designation length must equal the leg count")
        if self.dense is not None:
            if self.dense.shape[0] != 2 ** self.group.n:
                raise LegError("dense shadow dimension does not match leg count")
            if np.linalg.norm(self.dense) > 1e-12:
                for op in self.group.generators:
                    if not stabilizes(op, self.dense, tol=1e-9):
                        raise ValueError("dense shadow is not stabilized by the generators")

    @property
    def n(self) -> int:
        return self.group.n

    @property
    def precision(self) -> int:
        return self.group.precision


def lego_from_group(group: XpGroup, dense: np.ndarray | None = None,
                    designation: Sequence[str] | None = None) -> Lego:
    des = tuple(designation) if designation is not None else (PHYSICAL,) * group.n
    return Lego(group, des, dense)


def state_lego(group: XpGroup, with_dense: bool = True) -> Lego:
    """Lego for a group that pins a single state; shadow built symbolically."""
    dense = None
    if with_dense and group.n <= 12:
        table = codewords(group)
        if len(table.entries) == 1:
            dense = state_from_pairs(table.entries[0], group.n, group.precision)
    return lego_from_group(canonical_form(group), dense)


def tensor_product(a: Lego, b: Lego) -> Lego:
    """Disjoint union of legs; generators pad with identity on the other side."""
    if a.precision != b.precision:
        raise ValueError("tensor product needs equal precision")
    n = a.n + b.n
    gens = [embed(op, n, list(range(a.n))) for op in a.group.generators]
    gens += [embed(op, n, list(range(a.n, n))) for op in b.group.generators]
    group = XpGroup(a.precision, n, tuple(gens))
    dense = None
    if a.dense is not None and b.dense is not None:
        dense = np.kron(a.dense, b.dense)
    return Lego(group, a.designation + b.designation, dense, a.warnings + b.warnings)


def _traced_table_if_collisions(g: XpGroup):
    """Traced phase table of a one-codeword group whose strings collide.

    Returns None when matching needs no help (multiple codewords, or no two
    support strings differ exactly on the traced legs).  Otherwise returns
    ("empty", None) when everything cancels, ("table", pairs) with the
    combined phase table when the traced amplitudes stay uniform, or
    ("mixed", None) when they cannot belong to an XP state.
    """
    table = codewords(g)
    if len(table.entries) != 1:
        return None
    two_n = 2 * g.precision
    mask_rest = (1 << (g.n - 2)) - 1
    buckets: dict[int, list[int]] = {}
    for e, ph in table.entries[0]:
        buckets.setdefault(e & mask_rest, []).append(ph)
    if all(len(v) == 1 for v in buckets.values()):
        return None
    pairs: list[tuple[int, int]] = []
    classes: set = set()
    for e, phs in sorted(buckets.items()):
        if len(phs) == 1:
            classes.add("single")
            pairs.append((e, phs[0]))
        else:
            a, b = phs
            d = (b - a) % two_n
            if d == g.precision:
                continue  # the pair cancels
            dcls = min(d, two_n - d)
            classes.add(("pair", dcls))
            # Amplitude w^a (1 + w^d); dividing out the common pair factor
            # leaves exponent a, or a - dcls for the mirrored class.
            pairs.append((e, a if d == dcls else (a - dcls) % two_n))
    if not pairs:
        return ("empty", None)
    if len(classes) > 1:
        return ("mixed", None)
    return ("table", pairs)


def _matching_ok(op: XpOperator, mode: str) -> bool:
    n_mod = op.precision
    if op.x[0] != op.x[1]:
        return False
    if mode == "plain":
        return (op.z[0] + op.z[1]) % n_mod == 0
    return (op.z[0] - op.z[1]) % n_mod == 0


def _trace_front_two(group: XpGroup, mode: str, support_restriction: bool = True,
                     ) -> tuple[XpGroup, bool]:
    """Operator matching on the first two legs of a canonical group.

    Returns the post-trace group (columns 0 and 1 removed, canonical) and a
    flag telling whether any nontrivial generator survived.
    """
    precision = group.precision
    g = canonical_form(group)

    # Consolidate X support on the traced legs.  In canonical form at most
    # one row has X on leg 0 and at most one on leg 1: a pair merges into a
    # single row with X on both, an unpaired one can never match and is
    # dropped before the support restriction.
    rows = list(g.generators)
    only0 = next((r for r in rows if r.x[0] and not r.x[1]), None)
    only1 = next((r for r in rows if r.x[1] and not r.x[0]), None)
    if only0 is not None and only1 is not None:
        merged = multiply(only0, only1)
        rows = [merged if r == only0 else r for r in rows if r != only1]
    elif only0 is not None or only1 is not None:
        lone = only0 if only0 is not None else only1
        rows = [r for r in rows if r != lone]
    if support_restriction:
        # Restrict the support to the kept Bell sector, then rebuild the
        # full logical identity group: the restricted object can have
        # strictly finer symmetries than the presentation generates.
        restrict_z = [0] * g.n
        restrict_z[0] = 1
        restrict_z[1] = (precision - 1) if mode == "plain" else 1
        phase = 0 if mode == "plain" else -2
        rows = rows + [XpOperator(precision, (0,) * g.n, tuple(restrict_z), phase)]
        try:
            g = complete_lid(XpGroup(precision, g.n, tuple(rows)))
        except EmptyCodeError:
            return XpGroup(precision, g.n - 2, ()), False
    else:
        g = canonical_form(XpGroup(precision, g.n, tuple(rows)))

    # With the support restricted, distinct strings can land on the same
    # traced string when they differ exactly on the two traced legs.  Their
    # amplitudes then add and can cancel, which is invisible to operator
    # matching; in that situation a one-codeword result is rebuilt exactly
    # from its combined phase table.
    if support_restriction:
        collided = _traced_table_if_collisions(g)
        if collided is not None:
            status, pairs = collided
            if status == "empty":
                return XpGroup(precision, g.n - 2, ()), False
            if status == "table":
                lid = lid_from_phase_table(pairs, g.n - 2, precision)
                if lid is not None:
                    return lid, bool(lid.generators)

    m_rows = [r for r in g.z_block if r.z[0] or r.z[1]]
    sign = 1 if mode == "plain" else -1

    def column_sum(op: XpOperator) -> int:
        return (op.z[0] + sign * op.z[1]) % precision

    matched: list[XpOperator] = []

    # Diagonal combinations from the matched kernel of the column functional.
    if m_rows:
        cmat = ModMatrix.from_rows([[column_sum(r)] for r in m_rows], precision)
        for coeffs in kernel_mod(cmat).entries:
            op = XpOperator.identity(g.n, precision)
            for c, r in zip(coeffs, m_rows):
                if c:
                    op = multiply(op, power(r, c))
            if not op.is_identity:
                assert _matching_ok(op, mode)
                matched.append(op)

    for r in g.generators:
        if r in m_rows:
            continue
        if r.x[0] != r.x[1]:
            continue
        target = (-column_sum(r)) % precision
        if m_rows:
            cmat = ModMatrix.from_rows([[column_sum(mr)] for mr in m_rows], precision)
            sol = solve_linear_mod(cmat, (target,))
        else:
            sol = () if target == 0 else None
        if sol is None:
            continue
        op = r
        for c, mr in zip(sol, m_rows):
            if c:
                op = multiply(op, power(mr, c))
        assert _matching_ok(op, mode)
        matched.append(op)

    survivors = []
    for op in matched:
        phase_fix = 2 * op.z[0] if mode == "insert_x" else 0
        cut = delete_legs(op, (0, 1))
        cut = XpOperator(precision, cut.x, cut.z, cut.phase + phase_fix)
        if not cut.is_identity:
            survivors.append(cut)
    traced = canonical_form(XpGroup(precision, g.n - 2, tuple(survivors)))
    return traced, bool(traced.generators)


def _trace(lego: Lego, j: int, k: int, mode: str, kernel: np.ndarray | None) -> Lego:
    if j == k:
        raise LegError("trace legs must differ")
    for leg in (j, k):
        if not 0 <= leg < lego.n:
            raise LegError(f"leg {leg} out of range")
        if lego.designation[leg] != PHYSICAL:
            raise LegError(f"leg {leg} is not physical")

    order = [j, k] + [i for i in range(lego.n) if i not in (j, k)]
    front = permute_legs(lego.group, order)
    traced, nontrivial = _trace_front_two(front, mode)

    dense = None
    warnings = list(lego.warnings)
    if lego.dense is not None:
        dense, _ = contract([lego.dense], [(j, k)], [kernel])
        if np.linalg.norm(dense) < 1e-12:
            warnings.append("empty-trace")
    if not nontrivial and traced.n > 0:
        warnings.append("trivial-symbolic-group")

    keep = [i for i in range(lego.n) if i not in (j, k)]
    designation = tuple(lego.designation[i] for i in keep)
    return Lego(traced, designation, dense, tuple(dict.fromkeys(warnings)))


def self_trace(lego: Lego, j: int, k: int) -> Lego:
    """Bell fusion of two physical legs of the same lego."""
    return _trace(lego, j, k, "plain", None)


def trace_with_insertion(lego: Lego, j: int, k: int, insertion) -> Lego:
    """Trace two legs against (I x U)|Bell>.

    The check-matrix path supports U = identity and U = X; any other
    single-qubit unitary is applied on the dense shadow only, and the
    result carries a ``dense-only`` warning with an empty symbolic group.
    """
    if insertion is None:
        return self_trace(lego, j, k)
    if isinstance(insertion, str):
        if insertion.upper() == "X":
            return _trace(lego, j, k, "insert_x", X_MATRIX)
        if insertion.upper() in ("I", "ID", "IDENTITY"):
            return self_trace(lego, j, k)
        raise LegError(f"unknown named insertion {insertion!r}")
    if isinstance(insertion, XpOperator):
        if insertion.n != 1:
            raise LegError("insertion must act on a single qubit")
        if insertion.is_identity:
            return self_trace(lego, j, k)
        if not any(insertion.z) and insertion.phase == 0:
            return _trace(lego, j, k, "insert_x", X_MATRIX)
        from .dense_oracle import render_operator
        mat = render_operator(insertion)
    else:
        mat = np.asarray(insertion, dtype=complex)
    if np.allclose(mat, np.eye(2)):
        return self_trace(lego, j, k)
    if np.allclose(mat, X_MATRIX):
        return _trace(lego, j, k, "insert_x", X_MATRIX)
    if lego.dense is None:
        raise LegError("general insertions need a dense shadow")
    dense, _ = contract([lego.dense], [(j, k)], [mat])
    keep = [i for i in range(lego.n) if i not in (j, k)]
    designation = tuple(lego.designation[i] for i in keep)
    empty = XpGroup(lego.precision, lego.n - 2, ())
    warnings = lego.warnings + ("dense-only",)
    if np.linalg.norm(dense) < 1e-12:
        warnings += ("empty-trace",)
    return Lego(empty, designation, dense, tuple(dict.fromkeys(warnings)))


def conjoin(a: Lego, b: Lego, leg_a: int, leg_b: int) -> Lego:
    """Contraction of two distinct legos: tensor product then self-trace."""
    combined = tensor_product(a, b)
    return self_trace(combined, leg_a, a.n + leg_b)


def _check_shortening_isometry(lego: Lego, leg: int) -> None:
    """Maximal-entanglement precondition for making ``leg`` logical.

    The codeword block vectors split by the leg's bit value must form a
    scaled isometry; this is checked densely at desk scale.
    """
    group = canonical_form(lego.group)
    if group.n > 12:
        return
    table = codewords(group)
    vecs = []
    for cw in table.entries:
        for bit in (0, 1):
            sub = [(e, ph) for e, ph in cw if (e >> (group.n - 1 - leg)) & 1 == bit]
            vec = np.zeros(2 ** (group.n - 1), dtype=complex)
            if sub:
                from .dense_oracle import omega_table
                w = omega_table(group.precision)
                for e, ph in sub:
                    hi = e >> (group.n - leg)
                    lo = e & ((1 << (group.n - 1 - leg)) - 1)
                    vec[(hi << (group.n - 1 - leg)) | lo] += w[ph]
            vecs.append(vec)
    gram = np.array([[np.vdot(u, v) for v in vecs] for u in vecs])
    scale = np.trace(gram).real / len(vecs)
    if scale < 1e-12 or np.max(np.abs(gram - scale * np.eye(len(vecs)))) > 1e-9 * max(scale, 1.0):
        raise NotIsometryError(f"leg {leg} is not maximally entangled with the rest")


def shorten_to_logical(lego: Lego, leg: int) -> Lego:
    """Re-designate a physical leg as logical by code shortening."""
    if not 0 <= leg < lego.n:
        raise LegError(f"leg {leg} out of range")
    if lego.designation[leg] != PHYSICAL:
        raise LegError(f"leg {leg} is not physical")
    _check_shortening_isometry(lego, leg)
    order = [leg] + [i for i in range(lego.n) if i != leg]
    front = canonical_form(permute_legs(lego.group, order))
    kept = [op for op in front.generators if op.x[0] == 0 and op.z[0] == 0]
    cut = tuple(delete_legs(op, (0,)) for op in kept)
    group = canonical_form(XpGroup(lego.precision, lego.n - 1, cut))
    designation = tuple(d for i, d in enumerate(lego.designation) if i != leg)
    return Lego(group, designation, None, lego.warnings)


def materialize_logical(lego: Lego, logical_index: int = 0) -> Lego:
    """Re-designate one implicit logical qubit as a new trailing physical leg.

    The new leg pairs the chosen non-diagonal logical with X and the
    matching diagonal logical with Z, so the enlarged group stabilizes the
    channel state of the encoding map.
    """
    group = canonical_form(lego.group)
    od = orbit_decomposition(group)
    if not od.regular:
        raise NonRegularError("only regular codes carry a logical basis")
    k = len(od.logical_x_dirs)
    if not 0 <= logical_index < k:
        raise LegError(f"logical index {logical_index} out of range for k={k}")
    precision = group.precision
    n = group.n

    table = codewords(group)
    phases = table.phase_map()
    orbit_of = {e: idx for idx, cw in enumerate(table.entries) for e, _ in cw}
    w = od.logical_x_dirs[logical_index]
    rhs = {e: phases[e ^ w] - phases[e] for e in phases}
    solved = _solve_orbit_constraints(group, rhs, orbit_of, len(table.entries))
    if solved is None:
        raise NonRegularError("no XP completion for the logical direction")
    diag, gammas = solved
    xbar = XpOperator(precision, int_to_bits(w, n), diag.z, diag.phase)
    zbar = diagonal_logical_operators(group)[logical_index]

    # The per-orbit phases must be constant on each slice of the chosen
    # logical bit and differ by an even amount between the slices.
    span = [op.x_mask for op in group.x_block]
    coords_cache: dict[int, int] = {}

    def bit_of(orbit_idx: int) -> int:
        m = table.e_m[orbit_idx]
        if m not in coords_cache:
            target = int_to_bits(m ^ od.e_q[0], n)
            pool = [int_to_bits(v, n) for v in span] + \
                   [int_to_bits(v, n) for v in od.logical_x_dirs]
            sol = solve_linear_mod(ModMatrix.from_rows(pool, 2), target)
            assert sol is not None
            coords_cache[m] = sol[len(span) + logical_index]
        return coords_cache[m]

    slice_phase = {0: None, 1: None}
    for idx in range(len(table.entries)):
        b = bit_of(idx)
        if slice_phase[b] is None:
            slice_phase[b] = gammas[idx]
        elif slice_phase[b] != gammas[idx]:
            raise NonRegularError("logical phase does not factor through the chosen qubit")
    gamma0 = slice_phase[0] or 0
    gamma1 = slice_phase[1] or 0
    if (gamma1 - gamma0) % 2:
        raise NonRegularError("logical phase needs a half step; no XP leg operator")

    # The solved logical sends codeword b to omega^(-gamma_b) times its
    # image, so the leg factor X P^s with phase t must supply t = gamma_0
    # and t + 2s = gamma_1.
    two_n = 2 * precision
    leg_phase = gamma0 % two_n
    leg_z = ((gamma1 - gamma0) // 2) % precision
    x_pair = multiply(embed(xbar, n + 1, list(range(n))),
                      XpOperator(precision, (0,) * n + (1,), (0,) * n + (leg_z,), leg_phase))
    z_pair = multiply(embed(zbar, n + 1, list(range(n))),
                      XpOperator(precision, (0,) * (n + 1), (0,) * n + (precision // 2,), 0))

    gens = [embed(op, n + 1, list(range(n))) for op in group.generators]
    gens += [x_pair, z_pair]
    new_group = canonical_form(XpGroup(precision, n + 1, tuple(gens)))
    return Lego(new_group, lego.designation + (PHYSICAL,), None, lego.warnings)


def redesignate(lego: Lego, leg: int, role: str) -> Lego:
    """Flip a leg designation: ``role`` is the new role of the leg.

    Physical to logical removes the leg by shortening; logical to physical
    materializes implicit logical qubit number ``leg`` as a new trailing leg.
    """
    if role == LOGICAL:
        return shorten_to_logical(lego, leg)
    if role == PHYSICAL:
        return materialize_logical(lego, leg)
    raise LegError(f"unknown role {role!r}")


# ---------------------------------------------------------------------------
# Network files: a list of named legos plus bonds between (lego, leg) pairs.

def run_network(doc: dict) -> Lego:
    """Contract a lego network description.

    Schema: {"legos": [{"name": ...} | {"matrix": {...}}, ...],
             "bonds": [[legoA, legA, legoB, legB] or
                       [legoA, legA, legoB, legB, insertion], ...],
             "designate": [post-trace leg index, ...],
             "order": [final leg order, ...]}

    Legs are numbered globally in lego order; bonds consume legs but the
    global numbering is preserved until the end, when surviving legs are
    packed in order.  Designation indices refer to the packed result, and
    the optional "order" relabels the legs that remain after designation
    (entry i is the leg that becomes position i).
    """
    from .registry import group_from_json, lookup

    legos: list[Lego] = []
    for spec in doc["legos"]:
        if "name" in spec:
            entry = lookup(spec["name"])
            legos.append(state_lego(entry.group))
        else:
            group, designation = group_from_json(spec["matrix"])
            legos.append(lego_from_group(canonical_form(group), designation=designation))
    combined = legos[0]
    for item in legos[1:]:
        combined = tensor_product(combined, item)

    offsets = np.cumsum([0] + [l.n for l in legos]).tolist()
    alive = list(range(combined.n))
    current = combined
    for bond in doc.get("bonds", []):
        la, ja, lb, jb, *rest = bond
        a = offsets[la] + ja
        b = offsets[lb] + jb
        if a not in alive or b not in alive:
            raise LegError("bond endpoint already contracted")
        insertion = rest[0] if rest else None
        current = trace_with_insertion(current, alive.index(a), alive.index(b), insertion)
        alive = [leg for leg in alive if leg not in (a, b)]
    for leg in sorted(doc.get("designate", []), reverse=True):
        current = shorten_to_logical(current, leg)
    order = doc.get("order")
    if order is not None:
        if sorted(order) != list(range(current.n)):
            raise LegError("order must be a permutation of the surviving legs")
        group = canonical_form(permute_legs(current.group, order))
        designation = tuple(current.designation[i] for i in order)
        dense = None
        if current.dense is not None:
            t = current.dense.reshape((2,) * current.n)
            dense = np.transpose(t, axes=order).reshape(-1)
        current = Lego(group, designation, dense, current.warnings)
    return current
