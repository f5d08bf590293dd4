"""Lego fusion tests: tracing, insertions, designation, and network files.

The dense oracle double-checks every symbolic claim: traced check matrices
must stabilize the contracted shadow, and whenever the contraction is an
XP state the matched group must equal its full symmetry group.
"""

from __future__ import annotations

import json
import random
from importlib import resources

import numpy as np
import pytest

from xplego.code_structure import (
    XpGroup,
    canonical_form,
    codewords,
    counting_check,
    orbit_decomposition,
)
from xplego.dense_oracle import (
    contract,
    omega_table,
    projector,
    render_operator,
    stabilizes,
    state_from_pairs,
    xp_state_from_dense,
)
from xplego.lego import (
    LegError,
    NotIsometryError,
    lego_from_group,
    materialize_logical,
    run_network,
    self_trace,
    shorten_to_logical,
    state_lego,
    tensor_product,
    trace_with_insertion,
)
from xplego.lego import _trace_front_two
from xplego.registry import group_from_rows, lookup
from xplego.xp_algebra import XpOperator


def entry_lego(name: str, with_dense: bool = True):
    return state_lego(lookup(name).group, with_dense=with_dense)


def test_tensor_product_with_empty_lego():
    a = entry_lego("bell")
    empty = lego_from_group(XpGroup(8, 0, ()), dense=np.ones(1, dtype=complex))
    t = tensor_product(a, empty)
    assert t.n == 2
    assert canonical_form(t.group).generators == canonical_form(a.group).generators


def test_tensor_product_of_plus_states():
    plus = state_lego(XpGroup.from_generators([XpOperator(2, (1,), (0,), 0)]))
    t = tensor_product(plus, plus)
    assert {op.x for op in canonical_form(t.group).generators} == {(1, 0), (0, 1)}
    assert np.allclose(t.dense, np.ones(4))


def test_tensor_product_counting():
    block = entry_lego("lego6-second", with_dense=False)
    both = tensor_product(block, block)
    assert both.n == 12
    assert len(canonical_form(both.group).generators) == 12
    assert counting_check(both.group, logical_dims=0)


def test_worked_seven_qubit_self_trace():
    code = lego_from_group(canonical_form(lookup("722").group))
    traced = self_trace(code, 0, 1)
    want = canonical_form(lookup("722-traced").group)
    assert traced.group.generators == want.generators


def test_bell_full_self_trace_gives_scalar_two():
    bell = entry_lego("bell")
    scalar = self_trace(bell, 0, 1)
    assert scalar.n == 0
    assert abs(scalar.dense[0] - 2.0) < 1e-12
    assert "empty-trace" not in scalar.warnings


def test_counterexample_trace_is_flagged_non_xp():
    block = entry_lego("lego6-second")
    traced = self_trace(block, 0, 1)
    assert len(traced.group.generators) == 3
    assert not counting_check(traced.group, logical_dims=0)
    # The shadow is the exact contraction; one pair of amplitudes keeps the
    # two distinct phase factors on separate strings.
    w = omega_table(8)
    expect = np.zeros(16, dtype=complex)
    expect[0b0000] = 1
    expect[0b0010] = 1
    expect[0b1110] = w[1]
    expect[0b1100] = w[13]
    assert np.max(np.abs(traced.dense - expect)) < 1e-9
    assert xp_state_from_dense(traced.dense, 8) is None
    for op in traced.group.generators:
        assert stabilizes(op, traced.dense, tol=1e-9)


def test_trace_matches_full_symmetry_group_of_xp_contraction():
    for name in ("lego6-steane", "lego6-second"):
        block = entry_lego(name)
        both = tensor_product(block, block)
        t1 = self_trace(both, 0, 6)
        t2 = self_trace(t1, 0, 5)
        derived = xp_state_from_dense(t2.dense, 8)
        assert derived is not None
        assert canonical_form(t2.group).generators == derived.generators


def test_support_restriction_is_required_for_completeness():
    # Without restricting the support before matching, the second fusion of
    # the first building block loses a finer diagonal symmetry.
    block = entry_lego("lego6-steane")
    both = tensor_product(block, block)
    t1 = self_trace(both, 0, 6)
    front = canonical_form(
        __import__("xplego.code_structure", fromlist=["permute_legs"]).permute_legs(
            t1.group, [0, 5] + [i for i in range(10) if i not in (0, 5)]))
    with_restriction, _ = _trace_front_two(front, "plain", support_restriction=True)
    without, _ = _trace_front_two(front, "plain", support_restriction=False)
    assert with_restriction.generators != without.generators
    vec, _ = contract([t1.dense], [(0, 5)])
    derived = xp_state_from_dense(vec, 8)
    assert with_restriction.generators == derived.generators


def test_identity_insertion_equals_plain_trace():
    code = lego_from_group(canonical_form(lookup("722").group))
    a = self_trace(code, 0, 1)
    b = trace_with_insertion(code, 0, 1, "I")
    c = trace_with_insertion(code, 0, 1, np.eye(2))
    assert a.group.generators == b.group.generators == c.group.generators


def test_bell_trace_with_x_insertion_is_empty():
    bell = entry_lego("bell")
    traced = trace_with_insertion(bell, 0, 1, "X")
    assert traced.n == 0
    assert abs(traced.dense[0]) < 1e-12
    assert "empty-trace" in traced.warnings


def test_x_insertion_matches_dense_oracle():
    from tests_support import random_xp_state_vec

    rng = random.Random(21)
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    checked = 0
    while checked < 20:
        n = rng.randint(2, 4)
        precision = rng.choice((2, 4, 8))
        vec = random_xp_state_vec(rng, n, precision)
        group = xp_state_from_dense(vec, precision)
        if group is None:
            continue
        lego = lego_from_group(group, dense=vec)
        j, k = rng.sample(range(n), 2)
        traced = trace_with_insertion(lego, j, k, "X")
        dense, _ = contract([vec], [(j, k)], [x])
        assert np.max(np.abs(traced.dense - dense)) < 1e-9
        for op in traced.group.generators:
            assert stabilizes(op, dense, tol=1e-8) or np.linalg.norm(dense) < 1e-9
        derived = xp_state_from_dense(dense, traced.precision) \
            if np.linalg.norm(dense) > 1e-9 else None
        if derived is not None:
            assert canonical_form(traced.group).generators == derived.generators
        checked += 1


def test_general_insertion_falls_back_to_dense():
    bell = entry_lego("bell")
    t_gate = np.diag([1.0, np.exp(1j * np.pi / 4)])
    traced = trace_with_insertion(bell, 0, 1, t_gate)
    assert "dense-only" in traced.warnings
    assert traced.group.generators == ()
    assert abs(traced.dense[0] - (1 + np.exp(-1j * np.pi / 4))) < 1e-12


def test_shorten_to_logical_on_code_families():
    code422 = lego_from_group(canonical_form(lookup("422").group))
    trivial = shorten_to_logical(code422, 0)
    assert trivial.n == 3 and trivial.group.generators == ()

    sec = lego_from_group(canonical_form(lookup("second-713").group))
    c622 = shorten_to_logical(sec, 1)
    assert c622.n == 6
    assert len(c622.group.generators) == 4
    od = orbit_decomposition(c622.group)
    assert len(od.logical_x_dirs) == 2
    assert counting_check(c622.group)
    # The removed stabilizer row acts as a logical on the shortened code.
    logical = XpOperator(8, (0, 1, 0, 0, 1, 1), (0, 6, 0, 4, 3, 2), 2)
    pi = projector(c622.group)
    mat = render_operator(logical)
    assert np.max(np.abs(mat @ pi @ mat.conj().T - pi)) < 1e-9
    assert np.max(np.abs(mat @ pi - pi)) > 1e-6


def test_shorten_rejects_unentangled_leg():
    product_state = state_lego(XpGroup.from_generators(
        [XpOperator(8, (0, 0), (1, 0), 0), XpOperator(8, (0, 0), (0, 1), 0)]))
    with pytest.raises(NotIsometryError):
        shorten_to_logical(product_state, 0)


def test_materialize_logical_gives_five_qubit_code():
    code = lego_from_group(canonical_form(lookup("422").group))
    five = materialize_logical(code, 0)
    want = group_from_rows(
        [((1, 1, 1, 1, 0), (0, 0, 0, 0, 0), 0),
         ((0, 0, 0, 0, 0), (1, 1, 1, 1, 0), 0),
         ((1, 1, 0, 0, 1), (0, 0, 0, 0, 0), 0),
         ((0, 0, 0, 0, 0), (1, 0, 1, 0, 1), 0)], 5, 2)
    assert five.group.generators == canonical_form(want).generators


def test_materialize_logical_keeps_code_consistent():
    for name in ("steane-xp", "second-713", "711", "812"):
        code = lego_from_group(canonical_form(lookup(name).group))
        choi = materialize_logical(code, 0)
        assert len(choi.group.generators) == choi.n
        assert counting_check(choi.group, logical_dims=0)
        # Shortening the fresh leg undoes the materialization.
        back = shorten_to_logical(choi, choi.n - 1)
        assert back.group.generators == code.group.generators


def test_leg_errors():
    bell = entry_lego("bell")
    with pytest.raises(LegError):
        self_trace(bell, 0, 0)
    with pytest.raises(LegError):
        self_trace(bell, 0, 5)
    with pytest.raises(LegError):
        trace_with_insertion(bell, 0, 1, "Q")


@pytest.mark.parametrize("fname,target", [
    ("722_selftrace.json", "722-traced"),
    ("steane_xp_from_blocks.json", "steane-xp"),
    ("second_713_from_blocks.json", "second-713"),
])
def test_shipped_networks_reproduce_printed_codes(fname, target):
    doc = json.loads(resources.files("xplego").joinpath("data/networks").joinpath(fname).read_text())
    result = run_network(doc)
    want = canonical_form(lookup(target).group)
    assert result.group.generators == want.generators


def test_precision_two_traces_stay_pauli():
    # At precision 2 the matched lego is always a Pauli stabilizer object:
    # bucket collisions either cancel or align, so the contraction of a
    # stabilizer state is a stabilizer state or zero.
    from tests_support import random_xp_state_vec

    rng = random.Random(77)
    seen = 0
    while seen < 40:
        n = rng.randint(2, 5)
        vec = random_xp_state_vec(rng, n, 2)
        group = xp_state_from_dense(vec, 2)
        if group is None:
            continue
        lego = lego_from_group(group, dense=vec)
        j, k = rng.sample(range(n), 2)
        traced = self_trace(lego, j, k)
        seen += 1
        if np.linalg.norm(traced.dense) < 1e-9:
            continue
        assert xp_state_from_dense(traced.dense, 2) is not None
        for op in traced.group.generators:
            assert all(z in (0, 1) for z in op.z)


def test_eight_qubit_code_from_spider_concatenation():
    # Fusing the leg carrying the weight-one diagonal logical of the
    # seven-qubit transversal-T code with one leg of the three-leg
    # even-parity tensor concatenates that qubit with the two-qubit
    # repetition code and lands exactly on the printed eight-qubit matrix.
    from xplego.registry import atomic_legos

    code711 = lego_from_group(canonical_form(lookup("711").group))
    spider = next(state_lego(e.group, with_dense=False)
                  for e in atomic_legos(2) if e.name == "xspider")
    fused = self_trace(tensor_product(code711, spider), 2, 9)
    want = canonical_form(lookup("812").group)
    assert fused.group.generators == want.generators

    doc = json.loads(resources.files("xplego")
                     .joinpath("data/networks/812_from_711.json").read_text())
    assert run_network(doc).group.generators == want.generators


def test_conjoin_is_tensor_then_trace():
    from xplego.lego import conjoin

    bell = entry_lego("bell")
    ghz = entry_lego("ghz")
    joined = conjoin(bell, ghz, 1, 0)
    manual = self_trace(tensor_product(bell, ghz), 1, 2)
    assert joined.group.generators == manual.group.generators
    # Fusing a Bell pair into one leg of the repetition tensor leaves the
    # repetition tensor (teleportation through the bond).
    want = canonical_form(entry_lego("ghz").group)
    assert joined.group.generators == want.generators


def test_counting_plus_stabilization_implies_space_match():
    # Whenever the traced group passes the state counting certificate and
    # its generators stabilize the dense contraction, the symbolic and
    # dense spaces must coincide.
    from tests_support import random_xp_state_vec

    rng = random.Random(99)
    confirmed = 0
    while confirmed < 25:
        n = rng.randint(2, 5)
        precision = rng.choice((2, 4, 8))
        vec = random_xp_state_vec(rng, n, precision)
        group = xp_state_from_dense(vec, precision)
        if group is None:
            continue
        lego = lego_from_group(group, dense=vec)
        j, k = rng.sample(range(n), 2)
        traced = self_trace(lego, j, k)
        if np.linalg.norm(traced.dense) < 1e-9 or traced.n == 0:
            continue
        if not counting_check(traced.group, logical_dims=0):
            continue
        assert all(stabilizes(op, traced.dense, tol=1e-8)
                   for op in traced.group.generators)
        pi = projector(traced.group)
        w = traced.dense
        assert np.max(np.abs(pi - np.outer(w, w.conj()) / np.vdot(w, w).real)) < 1e-8
        confirmed += 1


def test_code_trace_soundness():
    # Tracing a code matrix keeps only true symmetries: every traced
    # codeword is fixed by every generator of the matched output.
    from tests_support import random_xp_state_vec

    rng = random.Random(555)
    checked = 0
    while checked < 15:
        n = rng.randint(3, 5)
        precision = rng.choice((2, 4, 8))
        vec = random_xp_state_vec(rng, n, precision)
        group = xp_state_from_dense(vec, precision)
        if group is None:
            continue
        try:
            code = shorten_to_logical(lego_from_group(group, dense=vec), rng.randrange(n))
        except Exception:
            continue
        if code.n < 2:
            continue
        table = codewords(code.group)
        j, k = rng.sample(range(code.n), 2)
        traced = self_trace(lego_from_group(code.group), j, k)
        for cw in table.entries:
            cvec = state_from_pairs(cw, code.n, precision)
            tvec, _ = contract([cvec], [(j, k)])
            if np.linalg.norm(tvec) < 1e-9:
                continue
            for op in traced.group.generators:
                assert stabilizes(op, tvec, tol=1e-8)
        checked += 1
