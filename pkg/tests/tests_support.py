"""Shared helpers: random XP states built from twisted stabilizer states."""

from __future__ import annotations

import random

import numpy as np

from xplego.dense_oracle import basis_state, hadamard_unitary


def random_clifford_state_vec(rng: random.Random, n: int) -> np.ndarray:
    """Random stabilizer state from a short H/S/CZ/X circuit on |0...0>."""
    vec = basis_state(0, n)
    h = hadamard_unitary()
    s = np.diag([1.0, 1.0j])
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    for _ in range(4 * n + 2):
        kind = rng.choice(["h", "s", "cz", "x"])
        if kind == "cz" and n >= 2:
            a, b = rng.sample(range(n), 2)
            idx = np.arange(2 ** n)
            mask = (((idx >> (n - 1 - a)) & 1) & ((idx >> (n - 1 - b)) & 1)).astype(bool)
            vec = vec.copy()
            vec[mask] *= -1.0
        else:
            q = rng.randrange(n)
            gate = {"h": h, "s": s, "x": x, "cz": h}[kind]
            t = vec.reshape((2,) * n)
            t = np.tensordot(gate, t, axes=([1], [q]))
            vec = np.moveaxis(t, 0, q).reshape(-1)
    return vec


def random_xp_state_vec(rng: random.Random, n: int, precision: int) -> np.ndarray:
    """Random stabilizer state twisted by random single-qubit phase gates."""
    vec = random_clifford_state_vec(rng, n)
    for q in range(n):
        k = rng.randrange(precision)
        idx = np.arange(2 ** n)
        on = ((idx >> (n - 1 - q)) & 1).astype(bool)
        vec = vec.copy()
        vec[on] *= np.exp(2j * np.pi * k / (2 * precision))
    return vec
