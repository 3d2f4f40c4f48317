"""Exact arithmetic on square matrices over Z/ell^n.

Single matrices are immutable `ModMatrix` values (tuple-of-tuples entries,
canonical representatives in [0, ell^n)).  Bulk operations used by group
closure work on numpy int64 stacks; everything stays exact because entries
and their products fit comfortably in 64 bits at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .errors import NotInvertible


def _as_tuple(entries):
    return tuple(tuple(int(x) for x in row) for row in entries)


@dataclass(frozen=True)
class ModMatrix:
    """An invertible r x r matrix over Z/ell^n, entries reduced to [0, ell^n)."""

    entries: tuple
    prime: int
    level: int

    def __post_init__(self):
        m = self.modulus
        ent = _as_tuple(self.entries)
        r = len(ent)
        if any(len(row) != r for row in ent):
            raise ValueError("matrix must be square")
        ent = tuple(tuple(x % m for x in row) for row in ent)
        object.__setattr__(self, "entries", ent)
        if gcd(det_mod(ent, m), self.prime) != 1:
            raise NotInvertible(
                f"determinant not a unit mod {self.prime}: {ent}"
            )

    @property
    def modulus(self):
        return self.prime ** self.level

    @property
    def rank(self):
        return len(self.entries)

    def __mul__(self, other):
        if (self.prime, self.level) != (other.prime, other.level):
            raise ValueError("mixed moduli")
        return ModMatrix(
            mat_mul(self.entries, other.entries, self.modulus),
            self.prime,
            self.level,
        )

    def inverse(self):
        return ModMatrix(
            mat_inv(self.entries, self.prime, self.level), self.prime, self.level
        )

    def reduce(self, level):
        """Image under reduction mod ell^level."""
        if level > self.level:
            raise ValueError("cannot lift to a higher level")
        m = self.prime ** level
        return ModMatrix(
            tuple(tuple(x % m for x in row) for row in self.entries),
            self.prime,
            level,
        )

    def is_identity(self):
        return self.entries == identity_entries(self.rank)

    def array(self):
        return np.array(self.entries, dtype=np.int64)


def identity_entries(r):
    return tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))


def identity_matrix(prime, level, r):
    return ModMatrix(identity_entries(r), prime, level)


def mat_mul(a, b, m):
    r = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(r)) % m for j in range(r))
        for i in range(r)
    )


def mat_pow(a, k, m):
    r = len(a)
    out = identity_entries(r)
    base = a
    while k:
        if k & 1:
            out = mat_mul(out, base, m)
        base = mat_mul(base, base, m)
        k >>= 1
    return out


def det_mod(a, m):
    """Determinant modulo m, by fraction-free (Bareiss) elimination over Z."""
    r = len(a)
    w = [list(map(int, row)) for row in a]
    sign = 1
    prev = 1
    for k in range(r - 1):
        if w[k][k] == 0:
            for i in range(k + 1, r):
                if w[i][k]:
                    w[k], w[i] = w[i], w[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, r):
            for j in range(k + 1, r):
                w[i][j] = (w[i][j] * w[k][k] - w[i][k] * w[k][j]) // prev
            w[i][k] = 0
        prev = w[k][k]
    return (sign * w[r - 1][r - 1]) % m


def _inv_mod_prime(a, ell):
    """Inverse of a matrix over the field F_ell by Gauss-Jordan."""
    r = len(a)
    w = [[a[i][j] % ell for j in range(r)] + [1 if i == j else 0 for j in range(r)]
         for i in range(r)]
    for col in range(r):
        piv = next((i for i in range(col, r) if w[i][col] % ell), None)
        if piv is None:
            raise NotInvertible("singular mod ell")
        w[col], w[piv] = w[piv], w[col]
        inv = pow(w[col][col], -1, ell)
        w[col] = [(x * inv) % ell for x in w[col]]
        for i in range(r):
            if i != col and w[i][col]:
                c = w[i][col]
                w[i] = [(x - c * y) % ell for x, y in zip(w[i], w[col])]
    return tuple(tuple(row[r:]) for row in w)


def mat_inv(a, ell, n):
    """Inverse mod ell^n: invert over F_ell, then Hensel-lift."""
    m = ell ** n
    x = _inv_mod_prime(a, ell)
    k = 1
    while k < n:
        k *= 2
        mm = min(ell ** k, m)
        ax = mat_mul(a, x, mm)
        r = len(a)
        two_minus = tuple(
            tuple((2 * (1 if i == j else 0) - ax[i][j]) % mm for j in range(r))
            for i in range(r)
        )
        x = mat_mul(x, two_minus, mm)
    return tuple(tuple(v % m for v in row) for row in x)


# ---------------------------------------------------------------------------
# bulk (numpy) helpers for group closure


def key_fits_int64(modulus, r):
    """Whether an r x r matrix mod `modulus` packs into a single int64."""
    return modulus ** (r * r) < 2 ** 62


def encode(mats, modulus):
    """Pack a (k, r, r) int64 stack into (k,) int64 keys, big-endian.

    Integer order of keys equals lexicographic order on flattened entries.
    """
    k = mats.reshape(mats.shape[0], -1)
    out = np.zeros(mats.shape[0], dtype=np.int64)
    for col in range(k.shape[1]):
        out *= modulus
        out += k[:, col]
    return out


def decode(keys, modulus, r):
    """Inverse of `encode`."""
    keys = np.asarray(keys, dtype=np.int64)
    flat = np.zeros((keys.shape[0], r * r), dtype=np.int64)
    w = keys.copy()
    for col in range(r * r - 1, -1, -1):
        flat[:, col] = w % modulus
        w //= modulus
    return flat.reshape(-1, r, r)


def batch_mul(stack, single, modulus):
    """(k, r, r) @ (r, r) mod modulus, exact in int64."""
    return np.einsum("kij,jl->kil", stack, single) % modulus


def batch_mul_left(single, stack, modulus):
    return np.einsum("ij,kjl->kil", single, stack) % modulus
