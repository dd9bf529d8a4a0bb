"""Exact combinatorics of the rank-2 affine Weyl group of the triangle tiling.

The group is W = Q ⋊ W0 where Q = Z·a1 + Z·a2 is the coroot lattice of the
A2 root system and W0 ≅ S3 is its finite Weyl group.  Elements are kept in
the normal form t_mu · u with mu in Q and u in W0, so equality, inversion
and the semidirect-product law are all O(1).  Lattice vectors are integer
pairs (m, n) of coordinates in the simple-coroot basis; roots are integer
pairs (a, b) of coordinates in the simple-root basis.

All geometry (alcove barycenters, wall crossings) is done in exact rational
arithmetic: crossing signs feed exact algebra downstream and must never be
decided by floating point.

>>> length(GEN[0])
1
>>> length(translation((1, 1)))
4
>>> reduced_word(multiply(GEN[1], GEN[2]))
(1, 2)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

__all__ = [
    "AffineElement", "IDENTITY", "GEN", "W0_WORDS", "W0_LONGEST", "W0_ORDER",
    "PHI_VEE", "RHO_VEE", "POS_ROOTS", "SIMPLE_ROOTS",
    "pairing", "w0_mult", "w0_inv", "w0_length", "w0_apply", "w0_apply_root",
    "w0_from_word", "inversion_set",
    "multiply", "inverse", "right_mul_gen", "translation", "finite",
    "length", "reduced_word", "from_word", "is_reduced",
    "bruhat_leq", "bruhat_leq_bruteforce", "dominance_leq",
    "barycenter", "crossing_data", "ball",
]

# ---------------------------------------------------------------------------
# The finite Weyl group W0 = S3, indexed 0..5.
# ---------------------------------------------------------------------------

W0_WORDS = ((), (1,), (2,), (1, 2), (2, 1), (1, 2, 1))

# Simple reflections on coroot coordinates (m, n):
#   s1: (m, n) -> (n - m, n)        s2: (m, n) -> (m, m - n)
_M1 = ((-1, 1), (0, 1))
_M2 = ((1, 0), (1, -1))
_MID = ((1, 0), (0, 1))


def _matmul(x, y):
    return (
        (x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]),
        (x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]),
    )


def _build_w0():
    mats = []
    for word in W0_WORDS:
        m = _MID
        for i in word:
            m = _matmul(m, _M1 if i == 1 else _M2)
        mats.append(m)
    index = {m: k for k, m in enumerate(mats)}
    mult = tuple(
        tuple(index[_matmul(mats[a], mats[b])] for b in range(6)) for a in range(6)
    )
    inv = tuple(next(b for b in range(6) if mult[a][b] == 0) for a in range(6))
    return tuple(mats), mult, inv


W0_MATS, W0_MULT, W0_INV = _build_w0()
W0_LONGEST = 5          # s1 s2 s1, the reflection through the highest root
W0_ORDER = 6

SIMPLE_ROOTS = ((1, 0), (0, 1))
POS_ROOTS = ((1, 0), (0, 1), (1, 1))
PHI_VEE = (1, 1)        # highest coroot
RHO_VEE = (1, 1)        # half-sum of positive coroots


def w0_mult(a: int, b: int) -> int:
    return W0_MULT[a][b]


def w0_inv(a: int) -> int:
    return W0_INV[a]


def w0_length(a: int) -> int:
    return len(W0_WORDS[a])


def w0_from_word(word) -> int:
    u = 0
    for i in word:
        u = W0_MULT[u][1 if i == 1 else 2]
    return u


def w0_apply(u: int, vec):
    """Apply u in W0 to a lattice/rational vector in coroot coordinates."""
    m = W0_MATS[u]
    return (m[0][0] * vec[0] + m[0][1] * vec[1], m[1][0] * vec[0] + m[1][1] * vec[1])


# The coefficient action on root pairs coincides with the coroot-coordinate
# action: the root system is simply laced and a_i, a_i^vee share coordinates.
w0_apply_root = w0_apply


def pairing(vec, root) -> int:
    """<vec, root> with vec in coroot coordinates and root = a*a1 + b*a2."""
    a, b = root
    m, n = vec
    return a * (2 * m - n) + b * (2 * n - m)


def _is_negative_root(root) -> bool:
    return root[0] <= 0 and root[1] <= 0


def inversion_set(u: int) -> frozenset:
    """Positive roots sent to negative roots by u^{-1}; size equals w0_length."""
    return frozenset(
        r for r in POS_ROOTS if _is_negative_root(w0_apply_root(W0_INV[u], r))
    )


# ---------------------------------------------------------------------------
# Affine elements in normal form t_mu * u.
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class AffineElement:
    """Normal form (mu, u) of the affine group element t_mu * u."""

    mu: tuple
    u: int

    def __repr__(self):
        return f"Aff(mu={self.mu}, u={''.join(map(str, W0_WORDS[self.u])) or 'e'})"


IDENTITY = AffineElement((0, 0), 0)

# s0 is the affine reflection through the wall <x, phi> = 1: t_{phi^vee} s_phi.
GEN = (
    AffineElement(PHI_VEE, W0_LONGEST),
    AffineElement((0, 0), 1),
    AffineElement((0, 0), 2),
)


def multiply(a: AffineElement, b: AffineElement) -> AffineElement:
    """Semidirect product: (t_l u)(t_m v) = t_{l + u m} (uv)."""
    um = w0_apply(a.u, b.mu)
    return AffineElement((a.mu[0] + um[0], a.mu[1] + um[1]), W0_MULT[a.u][b.u])


def inverse(a: AffineElement) -> AffineElement:
    ui = W0_INV[a.u]
    mi = w0_apply(ui, a.mu)
    return AffineElement((-mi[0], -mi[1]), ui)


def right_mul_gen(a: AffineElement, i: int) -> AffineElement:
    if i == 0:
        shift = w0_apply(a.u, PHI_VEE)
        return AffineElement(
            (a.mu[0] + shift[0], a.mu[1] + shift[1]), W0_MULT[a.u][W0_LONGEST]
        )
    return AffineElement(a.mu, W0_MULT[a.u][i])


def translation(mu) -> AffineElement:
    return AffineElement((mu[0], mu[1]), 0)


def finite(u: int) -> AffineElement:
    return AffineElement((0, 0), u)


def length(w: AffineElement) -> int:
    """Hyperplane-count length: sum over positive roots a of
    |<mu, a> - [u^{-1}a < 0]|.  Cross-checked against the Cayley-graph
    metric in the test suite before being trusted anywhere."""
    ui = W0_INV[w.u]
    total = 0
    for root in POS_ROOTS:
        k = pairing(w.mu, root)
        if _is_negative_root(w0_apply_root(ui, root)):
            k -= 1
        total += k if k >= 0 else -k
    return total


def _descent(w: AffineElement, i: int) -> bool:
    return length(right_mul_gen(w, i)) < length(w)


def reduced_word(w: AffineElement) -> tuple:
    """Reduced word over {0,1,2}, lexicographically smallest descent first
    when read from the right (so the result is deterministic)."""
    letters = []
    cur = w
    cur_len = length(cur)
    while cur_len > 0:
        for i in (0, 1, 2):
            nxt = right_mul_gen(cur, i)
            nxt_len = length(nxt)
            if nxt_len < cur_len:
                letters.append(i)
                cur, cur_len = nxt, nxt_len
                break
        else:  # pragma: no cover - impossible for a nontrivial element
            raise AssertionError("element of positive length with no descent")
    letters.reverse()
    return tuple(letters)


def from_word(word, start: AffineElement = IDENTITY) -> AffineElement:
    w = start
    for i in word:
        w = right_mul_gen(w, i)
    return w


def is_reduced(word) -> bool:
    return length(from_word(word)) == len(word)


def bruhat_leq(v: AffineElement, w: AffineElement) -> bool:
    """Subword order, by the standard one-pass lifting algorithm: eat the
    reduced word of w from the right, following descents of the candidate."""
    if length(v) > length(w):
        return False
    x = v
    for i in reversed(reduced_word(w)):
        if _descent(x, i):
            x = right_mul_gen(x, i)
    return x == IDENTITY


def bruhat_leq_bruteforce(v: AffineElement, w: AffineElement) -> bool:
    """Reference implementation: enumerate all subwords of reduced_word(w)."""
    word = reduced_word(w)
    for mask in range(1 << len(word)):
        sub = from_word(i for k, i in enumerate(word) if mask >> k & 1)
        if sub == v:
            return True
    return False


def dominance_leq(mu, lam) -> bool:
    """mu dominance-below lam: the difference has nonnegative coroot coords."""
    return lam[0] - mu[0] >= 0 and lam[1] - mu[1] >= 0


# ---------------------------------------------------------------------------
# Exact alcove geometry.
# ---------------------------------------------------------------------------

_BARY0 = (Fraction(1, 3), Fraction(1, 3))

# Wall of the fundamental alcove crossed by the generator i, as (root, k)
# describing the hyperplane <x, root> + k = 0.
_WALLS0 = {0: ((1, 1), -1), 1: ((1, 0), 0), 2: ((0, 1), 0)}


def barycenter(a: AffineElement):
    """Exact barycenter of the alcove a(c0)."""
    img = w0_apply(a.u, _BARY0)
    return (img[0] + a.mu[0], img[1] + a.mu[1])


def crossing_data(a: AffineElement, i: int):
    """The hyperplane ((root, k) with root positive) separating the alcoves
    of a and a*s_i, and the crossing sign: +1 when the step a -> a*s_i goes
    from the negative to the positive side of the wall.

    The positive side of a wall is the one containing a far subcone of the
    dominant sector, concretely {x : <x, root> + k >= 0} for a positive root.
    """
    root0, k0 = _WALLS0[i]
    root = w0_apply_root(a.u, root0)
    k = k0 - pairing(a.mu, root)
    if _is_negative_root(root):
        root = (-root[0], -root[1])
        k = -k
    val = pairing(barycenter(a), root) + k
    assert val != 0
    return (root, k), (1 if val < 0 else -1)


def ball(radius: int):
    """Cayley-graph ball: dict element -> distance from the identity, BFS
    over right multiplication by the three generators."""
    dist = {IDENTITY: 0}
    frontier = [IDENTITY]
    for d in range(1, radius + 1):
        nxt = []
        for w in frontier:
            for i in (0, 1, 2):
                y = right_mul_gen(w, i)
                if y not in dist:
                    dist[y] = d
                    nxt.append(y)
        frontier = nxt
    return dist


def lattice_points_with_length_leq(radius: int):
    """Geometric enumeration of all group elements with length <= radius,
    scanning a lattice box and using the closed-form length."""
    out = []
    b = radius + 2
    for m, n in product(range(-b, b + 1), repeat=2):
        for u in range(6):
            w = AffineElement((m, n), u)
            if length(w) <= radius:
                out.append(w)
    return out
