"""Computational-basis product states and pseudopure mixtures."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import ConfigError


def basis_index(bits: Sequence[int]) -> int:
    """Integer index of ``|b1 b2 ... bN>``; bit value 1 means spin up.

    Spin up is basis vector 0 of each factor, so the index digits are the
    complements of ``bits`` read with site 1 most significant.
    """
    idx = 0
    for b in bits:
        if b not in (0, 1):
            raise ConfigError(f"product state bits must be 0 or 1, got {b!r}")
        idx = (idx << 1) | (1 - int(b))
    return idx


def product_state(bits: Sequence[int]) -> np.ndarray:
    """Projector onto ``|b1> x |b2> x ... x |bN>`` (1 = up, 0 = down)."""
    bits = list(bits)
    if not bits:
        raise ConfigError("product state needs at least one site")
    dim = 2 ** len(bits)
    rho = np.zeros((dim, dim), dtype=np.complex128)
    i = basis_index(bits)
    rho[i, i] = 1.0
    return rho


def rho_plus(n: int) -> np.ndarray:
    """All spins up."""
    return product_state([1] * n)


def rho_minus(n: int) -> np.ndarray:
    """All spins up except site 1."""
    return product_state([0] + [1] * (n - 1))


def parse_bits(text: str) -> list[int]:
    text = text.strip()
    if not text or set(text) - {"0", "1"}:
        raise ConfigError(f"initial: expected 'plus', 'minus' or a 0/1 string, got {text!r}")
    return [int(c) for c in text]


def initial_state(label: str, n: int) -> np.ndarray:
    if label == "plus":
        return rho_plus(n)
    if label == "minus":
        return rho_minus(n)
    bits = parse_bits(label)
    if len(bits) != n:
        raise ConfigError(f"initial: bitstring {label!r} has {len(bits)} sites, chain has {n}")
    return product_state(bits)


def pseudopure(rho, epsilon: float) -> np.ndarray:
    """Mix a pure state with the maximally mixed state.

    Returns ``(1 - epsilon) / d * I + epsilon * rho``.  The identity part is
    invariant under unitary evolution and traceless observables do not see
    it, so dynamics are always run on ``rho`` itself; this helper only builds
    the full mixture for inspection.
    """
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    rho = np.asarray(rho, dtype=np.complex128)
    d = rho.shape[0]
    return (1.0 - epsilon) / d * np.eye(d) + epsilon * rho
