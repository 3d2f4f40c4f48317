"""Finite groups with 0-based element indices, and exact subgroup machinery.

The concrete carriers are matrix groups over Z/ell^n (`MatGroup`, built by
breadth-first closure of generators) and quotients of such groups
(`QuotientGroup`).  All algorithms (closure, normal cores, Frattini
subgroups, abelianizations, subgroup lattices) work through the abstract
`FiniteGroup` index interface, so they apply to permutation groups too.

Element indices are canonical: for matrix groups, index order is
lexicographic on the matrix entries; quotients order cosets by their
minimal parent index.  Every operation is deterministic.
"""

from __future__ import annotations

import numpy as np

from . import DEFAULT_GROUP_CAP, DEFAULT_LATTICE_CAP
from .errors import CapExceeded, LevelOutOfRange, NotASubgroup, NotNormal
from .modmat import (
    ModMatrix,
    batch_mul,
    batch_mul_left,
    encode,
    identity_matrix,
    key_fits_int64,
)


# ---------------------------------------------------------------------------
# abstract carrier


class FiniteGroup:
    """A finite group whose elements are the indices 0..order-1."""

    order: int
    identity: int

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def gens(self):
        """Indices of a generating set (identity never included)."""
        raise NotImplementedError

    def label(self, a):
        return str(a)

    # -- bulk helpers; subclasses override with vectorized versions

    def mul_many(self, a_idx, b_idx):
        a_idx = np.asarray(a_idx, dtype=np.int64)
        b_idx = np.asarray(b_idx, dtype=np.int64)
        return np.array(
            [self.mul(int(a), int(b)) for a, b in zip(a_idx, b_idx)],
            dtype=np.int64,
        )

    def right_perm(self, g):
        """Permutation array p with p[i] = i * g."""
        idx = np.arange(self.order, dtype=np.int64)
        return self.mul_many(idx, np.full(self.order, g, dtype=np.int64))

    def left_perm(self, g):
        idx = np.arange(self.order, dtype=np.int64)
        return self.mul_many(np.full(self.order, g, dtype=np.int64), idx)

    def conj_perm(self, g):
        """Permutation i -> g * i * g^-1."""
        gi = self.inv(g)
        return self.right_perm(gi)[self.left_perm(g)]

    def element_order(self, a):
        n = 1
        x = a
        while x != self.identity:
            x = self.mul(x, a)
            n += 1
        return n

    def power(self, a, k):
        out = self.identity
        base = a
        if k < 0:
            base = self.inv(a)
            k = -k
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def is_abelian(self):
        gs = self.gens()
        return all(
            self.mul(a, b) == self.mul(b, a) for a in gs for b in gs
        )


# ---------------------------------------------------------------------------
# matrix groups over Z/ell^n


class MatGroup(FiniteGroup):
    """A finite group of invertible r x r matrices over Z/ell^n.

    Stored as the full element stack in canonical (lexicographic) order,
    plus the generator indices and the inversion permutation.
    """

    def __init__(self, prime, level, rank, mats, inv_mats):
        self.prime = int(prime)
        self.level = int(level)
        self.rank = int(rank)
        self.modulus = self.prime ** self.level
        order = np.argsort(encode_or_keys(mats, self.modulus), kind="stable")
        self.mats = np.ascontiguousarray(mats[order])
        inv_sorted = inv_mats[order]
        self.order = int(self.mats.shape[0])
        self._int_keys = None
        self._byte_index = None
        if key_fits_int64(self.modulus, self.rank):
            self._int_keys = encode(self.mats, self.modulus)
        else:
            self._byte_index = {
                self.mats[i].tobytes(): i for i in range(self.order)
            }
        self.inv_perm = self.lookup_many(inv_sorted)
        self.identity = int(
            self.lookup(identity_matrix(self.prime, self.level, self.rank).array())
        )
        self._gens = ()
        self._perm_cache = {}

    def _set_gens_from_mats(self, gen_stack):
        idx = self.lookup_many(np.asarray(gen_stack, dtype=np.int64))
        self._gens = tuple(
            sorted({int(g) for g in idx.tolist() if int(g) != self.identity})
        )

    # -- lookups

    def lookup_many(self, stack):
        stack = np.asarray(stack, dtype=np.int64)
        if self._int_keys is not None:
            keys = encode(stack, self.modulus)
            pos = np.searchsorted(self._int_keys, keys)
            pos = np.minimum(pos, self.order - 1)
            if not np.array_equal(self._int_keys[pos], keys):
                raise KeyError("matrix not in group")
            return pos.astype(np.int64)
        out = np.empty(stack.shape[0], dtype=np.int64)
        for i in range(stack.shape[0]):
            out[i] = self._byte_index[np.ascontiguousarray(stack[i]).tobytes()]
        return out

    def lookup(self, mat):
        return int(self.lookup_many(np.asarray(mat, dtype=np.int64)[None])[0])

    def element(self, i):
        return ModMatrix(tuple(map(tuple, self.mats[i].tolist())), self.prime, self.level)

    def label(self, i):
        return repr(self.mats[i].tolist())

    # -- group ops

    def mul(self, a, b):
        prod = (self.mats[a] @ self.mats[b]) % self.modulus
        return int(self.lookup(prod))

    def inv(self, a):
        return int(self.inv_perm[a])

    def gens(self):
        return self._gens

    def mul_many(self, a_idx, b_idx):
        a_idx = np.asarray(a_idx, dtype=np.int64)
        b_idx = np.asarray(b_idx, dtype=np.int64)
        prod = np.einsum("kij,kjl->kil", self.mats[a_idx], self.mats[b_idx]) % self.modulus
        return self.lookup_many(prod)

    def right_perm(self, g):
        key = ("r", int(g))
        if key not in self._perm_cache:
            prod = batch_mul(self.mats, self.mats[g], self.modulus)
            self._put_perm(key, self.lookup_many(prod))
        return self._perm_cache[key]

    def left_perm(self, g):
        key = ("l", int(g))
        if key not in self._perm_cache:
            prod = batch_mul_left(self.mats[g], self.mats, self.modulus)
            self._put_perm(key, self.lookup_many(prod))
        return self._perm_cache[key]

    def _put_perm(self, key, perm):
        if len(self._perm_cache) > 64:
            self._perm_cache.clear()
        self._perm_cache[key] = perm

    # -- matrix-level extras

    def congruence_level_mask(self, m):
        """Boolean mask of elements congruent to the identity mod ell^m."""
        if not 0 <= m <= self.level:
            raise LevelOutOfRange(f"level {m} not in [0, {self.level}]")
        mm = self.prime ** m
        eye = np.eye(self.rank, dtype=np.int64) % mm
        return np.all(self.mats % mm == eye, axis=(1, 2))


def encode_or_keys(mats, modulus):
    """Sort keys for a matrix stack: packed int64 if possible, else lexsort ranks."""
    r = mats.shape[1]
    if key_fits_int64(modulus, r):
        return encode(mats, modulus)
    flat = mats.reshape(mats.shape[0], -1)
    order = np.lexsort(flat[:, ::-1].T)
    ranks = np.empty(mats.shape[0], dtype=np.int64)
    ranks[order] = np.arange(mats.shape[0])
    return ranks


def close_generate(gens, cap=DEFAULT_GROUP_CAP, _extra_track=None):
    """Breadth-first closure of generating matrices into a `MatGroup`.

    All generators must share (ell, n, r) and be invertible.  Raises
    CapExceeded when the closure passes `cap` elements.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if not gens:
        raise ValueError("need at least one generator (use the identity)")
    gens = [g if isinstance(g, ModMatrix) else ModMatrix(g[0], g[1], g[2]) for g in gens]
    prime, level, rank = gens[0].prime, gens[0].level, gens[0].rank
    for g in gens:
        if (g.prime, g.level, g.rank) != (prime, level, rank):
            raise ValueError("generators do not share (ell, n, r)")
    modulus = prime ** level
    gen_stack = np.stack([g.array() for g in gens])
    inv_stack = np.stack([g.inverse().array() for g in gens])
    # multiply by generators and their inverses: same closure, smaller diameter
    mults = np.concatenate([gen_stack, inv_stack])
    mult_invs = np.concatenate([inv_stack, gen_stack])

    eye = np.eye(rank, dtype=np.int64)[None] % modulus
    use_int = key_fits_int64(modulus, rank)

    def keys_of(stack):
        if use_int:
            return encode(stack, modulus).tolist()
        return [np.ascontiguousarray(stack[i]).tobytes() for i in range(stack.shape[0])]

    seen = set()
    chunks = []
    inv_chunks = []

    def admit(stack, invs):
        fresh = []
        for pos, key in enumerate(keys_of(stack)):
            if key not in seen:
                seen.add(key)
                fresh.append(pos)
        if not fresh:
            return None, None
        fresh = np.array(fresh, dtype=np.int64)
        chunks.append(stack[fresh])
        inv_chunks.append(invs[fresh])
        if len(seen) > cap:
            raise CapExceeded(f"group closure exceeded cap {cap}")
        return stack[fresh], invs[fresh]

    frontier, frontier_inv = admit(
        np.concatenate([eye, gen_stack]), np.concatenate([eye, inv_stack])
    )
    while frontier is not None:
        cands = []
        cand_invs = []
        for k in range(mults.shape[0]):
            cands.append(batch_mul(frontier, mults[k], modulus))
            cand_invs.append(batch_mul_left(mult_invs[k], frontier_inv, modulus))
        frontier, frontier_inv = admit(
            np.concatenate(cands), np.concatenate(cand_invs)
        )

    mats = np.concatenate(chunks)
    inv_mats = np.concatenate(inv_chunks)
    group = MatGroup(prime, level, rank, mats, inv_mats)
    group._set_gens_from_mats(np.stack([g.array() for g in gens]))
    return group


def congruence_kernel(group, m):
    """The subgroup of elements congruent to the identity mod ell^m."""
    mask = group.congruence_level_mask(m)
    return Subgroup(group, np.flatnonzero(mask).astype(np.int64), _trusted=True)


def reduction_image(group, m, cap=DEFAULT_GROUP_CAP):
    """Reduce a `MatGroup` mod ell^m.  Returns (image group, index map)."""
    if not 1 <= m <= group.level:
        raise LevelOutOfRange(f"target level {m} not in [1, {group.level}]")
    if m == group.level:
        return group, np.arange(group.order, dtype=np.int64)
    mm = group.prime ** m
    red = group.mats % mm
    red_inv = group.mats[group.inv_perm] % mm
    keys = encode_or_keys(red, mm)
    _, first = np.unique(keys, return_index=True)
    image = MatGroup(group.prime, m, group.rank, red[first], red_inv[first])
    if group.gens():
        image._set_gens_from_mats(np.stack([group.mats[g] % mm for g in group.gens()]))
    return image, image.lookup_many(red)


# ---------------------------------------------------------------------------
# subgroups


class Subgroup:
    """A subgroup of a `FiniteGroup`, stored as a sorted index array."""

    def __init__(self, group, idx, _trusted=False, name=None):
        self.group = group
        idx = np.unique(np.asarray(idx, dtype=np.int64))
        self.idx = idx
        self.order = int(idx.shape[0])
        self.name = name
        if self.order == 0 or group.order % self.order != 0:
            raise NotASubgroup(
                f"order {self.order} does not divide group order {group.order}"
            )
        self._gens = None
        if not _trusted:
            self._validate()

    def _validate(self):
        if self.group.identity not in self:
            raise NotASubgroup("identity missing")
        gens = self.generating_set()
        closed = closure_indices(self.group, gens)
        if not np.array_equal(closed, self.idx):
            raise NotASubgroup("element set is not closed")

    def __contains__(self, i):
        pos = int(np.searchsorted(self.idx, i))
        return pos < self.order and int(self.idx[pos]) == int(i)

    def contains_all(self, other_idx):
        other_idx = np.asarray(other_idx, dtype=np.int64)
        pos = np.searchsorted(self.idx, other_idx)
        pos = np.minimum(pos, self.order - 1)
        return bool(np.all(self.idx[pos] == other_idx))

    def key(self):
        return self.idx.tobytes()

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and other.group is self.group
            and np.array_equal(other.idx, self.idx)
        )

    def __hash__(self):
        return hash((id(self.group), self.key()))

    def __repr__(self):
        tag = self.name or "subgroup"
        return f"<{tag} of order {self.order} in group of order {self.group.order}>"

    def generating_set(self):
        """A small generating list, found greedily in canonical order."""
        if self._gens is not None:
            return self._gens
        if self.order == self.group.order:
            base = list(self.group.gens())
            self._gens = base if base else [self.group.identity]
            return self._gens
        gens = []
        current = np.array([self.group.identity], dtype=np.int64)
        for i in self.idx:
            i = int(i)
            pos = int(np.searchsorted(current, i))
            if pos < current.shape[0] and current[pos] == i:
                continue
            gens.append(i)
            current = closure_indices(self.group, gens)
            if current.shape[0] == self.order:
                break
        if not np.array_equal(current, self.idx):
            raise NotASubgroup("element set is not closed")
        self._gens = gens if gens else [self.group.identity]
        return self._gens

    def is_normal(self):
        return is_normal_under(self.group, self.idx, self.group.gens())

    def index(self):
        return self.group.order // self.order


def trivial_subgroup(group):
    return Subgroup(group, [group.identity], _trusted=True)


def full_subgroup(group):
    return Subgroup(group, np.arange(group.order, dtype=np.int64), _trusted=True)


def subgroup_from_elements(group, idx, name=None):
    """Validating public constructor: raises NotASubgroup on bad input."""
    return Subgroup(group, idx, _trusted=False, name=name)


def subgroup_generated(group, seed, cap=None):
    idx = closure_indices(group, seed, cap=cap)
    return Subgroup(group, idx, _trusted=True)


def closure_indices(group, seed, cap=None):
    """Sorted indices of the subgroup generated by `seed` indices."""
    seed = [int(s) for s in seed]
    seen = {group.identity}
    seen.update(seed)
    mult = sorted(set(seed) | {group.inv(s) for s in seed})
    frontier = np.array(sorted(seen), dtype=np.int64)
    while frontier.shape[0]:
        cands = []
        for g in mult:
            cands.append(group.mul_many(frontier, np.full(frontier.shape[0], g, dtype=np.int64)))
        cand = np.unique(np.concatenate(cands))
        fresh = [int(c) for c in cand.tolist() if int(c) not in seen]
        if cap is not None and len(seen) + len(fresh) > cap:
            raise CapExceeded(f"subgroup closure exceeded cap {cap}")
        seen.update(fresh)
        frontier = np.array(fresh, dtype=np.int64)
    return np.array(sorted(seen), dtype=np.int64)


def is_normal_under(group, idx, conjugators):
    """Whether the index set is stable under conjugation by the given elements."""
    sub = np.asarray(idx, dtype=np.int64)
    for g in conjugators:
        conj = group.conj_perm(g)[sub]
        if not np.array_equal(np.sort(conj), sub):
            return False
    return True


def normal_core(group, sub, ambient=None):
    """Largest subgroup of `sub` normal in `ambient` (default: whole group).

    Iterates K <- K  intersect  g K g^-1 over the ambient's generators to a
    fixed point; at the fixed point K is stable under every generator, hence
    normal in the ambient, and it contains every subgroup of `sub` normal in
    the ambient because those survive each intersection.
    """
    conjugators = group.gens() if ambient is None else ambient.generating_set()
    if ambient is not None and not ambient.contains_all(sub.idx):
        raise NotASubgroup("core requested inside an ambient not containing H")
    core = sub.idx
    changed = True
    while changed:
        changed = False
        for g in conjugators:
            conj = np.sort(group.conj_perm(g)[core])
            inter = np.intersect1d(core, conj, assume_unique=True)
            if inter.shape[0] != core.shape[0]:
                core = inter
                changed = True
    return Subgroup(group, core, _trusted=True)


# ---------------------------------------------------------------------------
# orbit labelling (shared by coset spaces, conjugacy scans, lattices)


def orbit_labels(n, perms):
    """Minimum orbit representative for each point under the given perms.

    Inverse permutations are added automatically, so labels converge to the
    true orbit minimum of the generated group action.
    """
    lab = np.arange(n, dtype=np.int64)
    allp = []
    for p in perms:
        allp.append(np.asarray(p, dtype=np.int64))
        allp.append(np.argsort(p).astype(np.int64))
    while True:
        changed = False
        for p in allp:
            m = np.minimum(lab, lab[p])
            if not np.array_equal(m, lab):
                lab = m
                changed = True
        while True:
            m = lab[lab]
            if np.array_equal(m, lab):
                break
            lab = m
            changed = True
        if not changed:
            return lab


# ---------------------------------------------------------------------------
# quotient groups


class QuotientGroup(FiniteGroup):
    """The quotient domain/kernel of subgroups of a common parent.

    Elements are cosets of `kernel` inside `domain`, represented by their
    minimal parent index and ordered by it.
    """

    def __init__(self, parent, domain, kernel):
        if not domain.contains_all(kernel.idx):
            raise NotASubgroup("kernel not inside domain")
        if not is_normal_under(parent, kernel.idx, domain.generating_set()):
            raise NotNormal("kernel is not normal in domain")
        self.parent = parent
        self.domain = domain
        self.kernel = kernel
        n = domain.order
        local = {int(v): i for i, v in enumerate(domain.idx.tolist())}
        perms = []
        for g in kernel.generating_set():
            rp = parent.right_perm(g)[domain.idx]
            perms.append(
                np.array([local[int(x)] for x in rp.tolist()], dtype=np.int64)
            )
        lab = orbit_labels(n, perms) if perms else np.arange(n, dtype=np.int64)
        # lab values are positions within domain.idx; map to parent indices
        rep_parent = domain.idx[lab]
        reps = np.unique(rep_parent)
        pos_of_rep = {int(v): i for i, v in enumerate(reps.tolist())}
        self.reps = reps
        self.order = int(reps.shape[0])
        coset_of = np.full(parent.order, -1, dtype=np.int64)
        coset_of[domain.idx] = np.array(
            [pos_of_rep[int(v)] for v in rep_parent.tolist()], dtype=np.int64
        )
        self.coset_of = coset_of
        self.identity = int(coset_of[parent.identity])
        gens = sorted(
            {
                int(coset_of[g])
                for g in domain.generating_set()
                if int(coset_of[g]) != self.identity
            }
        )
        self._gens = tuple(gens)
        self._perm_cache = {}

    def mul(self, a, b):
        return int(self.coset_of[self.parent.mul(int(self.reps[a]), int(self.reps[b]))])

    def inv(self, a):
        return int(self.coset_of[self.parent.inv(int(self.reps[a]))])

    def gens(self):
        return self._gens

    def mul_many(self, a_idx, b_idx):
        a_idx = np.asarray(a_idx, dtype=np.int64)
        b_idx = np.asarray(b_idx, dtype=np.int64)
        prod = self.parent.mul_many(self.reps[a_idx], self.reps[b_idx])
        return self.coset_of[prod]

    def right_perm(self, g):
        key = ("r", int(g))
        if key not in self._perm_cache:
            prod = self.parent.mul_many(
                self.reps, np.full(self.order, self.reps[g], dtype=np.int64)
            )
            self._perm_cache[key] = self.coset_of[prod]
        return self._perm_cache[key]

    def left_perm(self, g):
        key = ("l", int(g))
        if key not in self._perm_cache:
            prod = self.parent.mul_many(
                np.full(self.order, self.reps[g], dtype=np.int64), self.reps
            )
            self._perm_cache[key] = self.coset_of[prod]
        return self._perm_cache[key]

    def label(self, a):
        return f"{self.parent.label(int(self.reps[a]))} mod K"

    def image_of(self, parent_idx):
        """Image in the quotient of a set of parent indices (must lie in domain)."""
        vals = self.coset_of[np.asarray(parent_idx, dtype=np.int64)]
        if np.any(vals < 0):
            raise NotASubgroup("element outside quotient domain")
        return np.unique(vals)

    def preimage_of(self, quot_idx):
        """Sorted parent indices mapping onto the given quotient indices."""
        quot_idx = np.asarray(quot_idx, dtype=np.int64)
        mask = np.isin(self.coset_of[self.domain.idx], quot_idx)
        return self.domain.idx[mask]


class GroupHom:
    """A homomorphism between finite groups, stored as an index map."""

    def __init__(self, src, dst, mapping, check=True):
        self.src = src
        self.dst = dst
        self.mapping = np.asarray(mapping, dtype=np.int64)
        if check:
            if int(self.mapping[src.identity]) != dst.identity:
                raise ValueError("map does not send identity to identity")
            idx = np.arange(src.order, dtype=np.int64)
            for g in src.gens():
                left = self.mapping[src.left_perm(g)]
                right = dst.left_perm(int(self.mapping[g]))[self.mapping]
                if not np.array_equal(left, right):
                    raise ValueError("map is not a homomorphism")

    def __call__(self, i):
        return int(self.mapping[i])

    def image_of(self, idx):
        return np.unique(self.mapping[np.asarray(idx, dtype=np.int64)])

    def kernel(self):
        mask = self.mapping == self.dst.identity
        return Subgroup(self.src, np.flatnonzero(mask), _trusted=True)


# ---------------------------------------------------------------------------
# derived subgroups, abelianization, Frattini


def derived_subgroup(group, sub=None):
    """The commutator subgroup of `sub` (default: the whole group)."""
    amb = sub if sub is not None else full_subgroup(group)
    gens = amb.generating_set()
    comm_gens = []
    for a in gens:
        for b in gens:
            c = group.mul(group.mul(group.inv(a), group.inv(b)), group.mul(a, b))
            if c != group.identity:
                comm_gens.append(c)
    comm_gens = sorted(set(comm_gens))
    current_gens = list(comm_gens)
    current = closure_indices(group, current_gens)
    # saturate: the derived subgroup is the normal closure of the generator
    # commutators inside the ambient
    changed = True
    while changed:
        changed = False
        for g in gens:
            conj = np.sort(group.conj_perm(g)[current])
            extra = np.setdiff1d(conj, current, assume_unique=True)
            if extra.shape[0]:
                current_gens.extend(int(x) for x in extra.tolist())
                current = closure_indices(group, current_gens)
                changed = True
    return Subgroup(group, current, _trusted=True)


def _partition_from_counts(counts, p):
    """Recover cyclic p-group multiplicities from s_k = #{x : x^(p^k) = e}."""
    logs = []
    for s in counts:
        k = 0
        while p ** k < s:
            k += 1
        logs.append(k)
    parts = []
    for k in range(1, len(logs)):
        t_k = logs[k] - logs[k - 1]
        t_next = logs[k + 1] - logs[k] if k + 1 < len(logs) else 0
        parts.extend([k] * (t_k - t_next))
    return sorted(parts, reverse=True)


def abelian_invariant_factors(group):
    """Invariant factors of a finite abelian group given as a FiniteGroup."""
    n = group.order
    if n == 1:
        return []
    primes = _prime_factors(n)
    per_prime = {}
    for p in primes:
        counts = [1]
        k = 1
        while True:
            c = 0
            for x in range(group.order):
                if group.power(x, p ** k) == group.identity:
                    c += 1
            counts.append(c)
            if counts[-1] == counts[-2]:
                break
            k += 1
        per_prime[p] = _partition_from_counts(counts, p)
    width = max(len(v) for v in per_prime.values())
    factors = []
    for j in range(width):
        f = 1
        for p, parts in per_prime.items():
            if j < len(parts):
                f *= p ** parts[j]
        factors.append(f)
    factors.sort()
    return factors


def abelianization(group, sub=None):
    """Invariant factors of sub/[sub, sub] (default sub = whole group)."""
    amb = sub if sub is not None else full_subgroup(group)
    der = derived_subgroup(group, amb)
    if der.order == amb.order:
        return []
    quot = QuotientGroup(group, amb, der)
    return abelian_invariant_factors(quot)


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power_base(n):
    """Return p if n = p^k for a prime p and k >= 1, else None."""
    if n <= 1:
        return None
    ps = _prime_factors(n)
    return ps[0] if len(ps) == 1 else None


def frattini(group, sub=None, lattice_cap=DEFAULT_LATTICE_CAP):
    """Frattini subgroup: G^p [G,G] for p-groups, else maximal intersection."""
    amb = sub if sub is not None else full_subgroup(group)
    p = prime_power_base(amb.order)
    if amb.order == 1:
        return trivial_subgroup(group)
    if p is not None:
        der = derived_subgroup(group, amb)
        seed = list(der.generating_set())
        for g in amb.generating_set():
            seed.append(group.power(g, p))
        return subgroup_generated(group, seed)
    return frattini_via_maximals(group, amb, lattice_cap)


def frattini_via_maximals(group, sub=None, lattice_cap=DEFAULT_LATTICE_CAP):
    """Frattini subgroup by enumerating maximal subgroups and intersecting."""
    amb = sub if sub is not None else full_subgroup(group)
    if amb.order > lattice_cap:
        raise CapExceeded(
            f"subgroup-lattice Frattini needs order <= {lattice_cap}, got {amb.order}"
        )
    maxima = maximal_subgroups(group, amb)
    if not maxima:
        return Subgroup(group, amb.idx, _trusted=True)
    inter = maxima[0].idx
    for m in maxima[1:]:
        inter = np.intersect1d(inter, m.idx, assume_unique=True)
    return Subgroup(group, inter, _trusted=True)


def maximal_subgroups(group, sub=None):
    """All maximal proper subgroups of `sub`, from the full subgroup scan."""
    amb = sub if sub is not None else full_subgroup(group)
    subs = all_subgroups_of(group, amb)
    proper = [s for s in subs if s.order < amb.order]
    out = []
    for s in proper:
        is_max = True
        for t in proper:
            if t.order > s.order and t.order % s.order == 0 and t.contains_all(s.idx):
                is_max = False
                break
        if is_max:
            out.append(s)
    return out


# ---------------------------------------------------------------------------
# subgroup lattices


def _conjugacy_canonical(group, idx, want_orbit=False):
    """Canonical (lexicographically minimal) conjugate of a subgroup index set."""
    start = np.sort(np.asarray(idx, dtype=np.int64))
    seen = {start.tobytes(): start}
    frontier = [start]
    conj_perms = [group.conj_perm(g) for g in group.gens()]
    while frontier:
        nxt = []
        for cur in frontier:
            for cp in conj_perms:
                cand = np.sort(cp[cur])
                key = cand.tobytes()
                if key not in seen:
                    seen[key] = cand
                    nxt.append(cand)
        frontier = nxt
    orbit = sorted(seen.values(), key=lambda a: a.tolist())
    if want_orbit:
        return orbit[0], orbit
    return orbit[0]


def subgroup_classes(group, sub=None, cap=DEFAULT_LATTICE_CAP):
    """All subgroups of `sub` up to conjugacy (in the whole group), sorted.

    Enumeration is by repeated extension H -> <H, g> over elements g of
    prime-power order; every subgroup arises along a chain of such
    extensions, so the scan is exhaustive.
    """
    amb = sub if sub is not None else full_subgroup(group)
    if amb.order > cap:
        raise CapExceeded(f"subgroup enumeration cap {cap} exceeded by {amb.order}")
    pp_elements = [
        int(i)
        for i in amb.idx.tolist()
        if int(i) != group.identity
        and prime_power_base(group.element_order(int(i))) is not None
    ]
    triv = np.array([group.identity], dtype=np.int64)
    classes = {triv.tobytes(): triv}
    frontier = [triv]
    while frontier:
        nxt = []
        for base in frontier:
            base_set = set(base.tolist())
            base_gens = Subgroup(group, base, _trusted=True).generating_set()
            # one candidate per orbit of H-conjugation keeps duplicates down
            tried = set()
            for g in pp_elements:
                if g in base_set or g in tried:
                    continue
                orb = {g}
                stack = [g]
                while stack:
                    x = stack.pop()
                    for h in base_gens:
                        y = int(group.mul(group.mul(h, x), group.inv(h)))
                        if y not in orb:
                            orb.add(y)
                            stack.append(y)
                tried.update(orb)
                ext = closure_indices(group, list(base_gens) + [g])
                if not amb.contains_all(ext):
                    continue
                canon = _conjugacy_canonical(group, ext)
                key = canon.tobytes()
                if key not in classes:
                    classes[key] = canon
                    nxt.append(canon)
        frontier = nxt
    reps = sorted(classes.values(), key=lambda a: (a.shape[0], a.tolist()))
    return [Subgroup(group, r, _trusted=True) for r in reps]


def all_subgroups_of(group, sub=None, cap=DEFAULT_LATTICE_CAP):
    """Every subgroup of `sub` (not just up to conjugacy), sorted."""
    amb = sub if sub is not None else full_subgroup(group)
    classes = subgroup_classes(group, amb, cap=cap)
    seen = {}
    for cls in classes:
        _, orbit = _conjugacy_canonical(group, cls.idx, want_orbit=True)
        for member in orbit:
            if amb.contains_all(member):
                seen.setdefault(member.tobytes(), member)
    reps = sorted(seen.values(), key=lambda a: (a.shape[0], a.tolist()))
    return [Subgroup(group, r, _trusted=True) for r in reps]


def subgroup_lattice(group, cap=DEFAULT_LATTICE_CAP):
    """Spec operation: subgroups up to conjugacy, deterministic order."""
    return subgroup_classes(group, cap=cap)


def is_cyclic(group, sub=None):
    amb = sub if sub is not None else full_subgroup(group)
    return any(
        group.element_order(int(i)) == amb.order for i in amb.idx.tolist()
    )
