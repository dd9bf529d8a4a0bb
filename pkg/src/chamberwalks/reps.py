"""The three finite-dimensional modules entering the spectral decomposition.

* a 6-dimensional family induced from the lattice character t = (t1, t2),
  constructed on the basis [1, T1, T2, T12, T21, T121] (tensored with the
  cyclic vector) from the generator action rules;
* a 3-dimensional family induced from a one-dimensional module of the
  subalgebra generated by T1 and the lattice, parametrized by u; and
* the one-dimensional sign character T_i -> -q^(-1/2).

Generator matrices are kept in the standard (T) normalization; divide by
sqrt(q) for the averaging-operator normalization, which is Hermitian on the
torus.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield

import numpy as np

from . import hecke, weyl

__all__ = [
    "Representation", "principal_series", "induced_three_dim", "sign_character",
    "evaluate", "character", "p_matrix", "a_normalized",
    "is_principal_irreducible", "max_relation_residual",
]


@dataclass
class Representation:
    """Generator images pi(T_0), pi(T_1), pi(T_2) plus bookkeeping."""

    q: float
    gens: tuple
    label: str
    _words: dict = dfield(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return self.gens[0].shape[0]

    def word_matrix(self, w: weyl.AffineElement) -> np.ndarray:
        m = self._words.get(w)
        if m is None:
            m = np.eye(self.dim, dtype=complex)
            for i in weyl.reduced_word(w):
                m = m @ self.gens[i]
            self._words[w] = m
        return m


def principal_series(q, t) -> Representation:
    """The 6-dimensional module with central character t = (t1, t2).

    Columns are images of the basis vectors.  T1, T2 act by the finite
    subalgebra multiplication; the affine generator sends the basis vector
    of w to t^(-w^-1 phi) times the vector of s_phi w, plus a diagonal
    (q^(1/2)-q^(-1/2)) term when the highest root is not an inversion of w.
    """
    t1, t2 = complex(t[0]), complex(t[1])
    if t1 == 0 or t2 == 0:
        raise ValueError("central character components must be nonzero")
    q = float(q)
    quad = q ** 0.5 - q ** -0.5

    def tpow(e):
        return t1 ** e[0] * t2 ** e[1]

    m1 = np.zeros((6, 6), dtype=complex)
    m2 = np.zeros((6, 6), dtype=complex)
    m0 = np.zeros((6, 6), dtype=complex)
    phi = (1, 1)
    for u in range(6):
        for i, m in ((1, m1), (2, m2)):
            su = weyl.w0_mult(i, u)
            m[su, u] += 1
            if weyl.w0_length(su) < weyl.w0_length(u):
                m[u, u] += quad
        # affine generator
        e = weyl.w0_apply(weyl.w0_inv(u), phi)
        target = weyl.w0_mult(weyl.W0_LONGEST, u)
        m0[target, u] += tpow((-e[0], -e[1]))
        if not weyl._is_negative_root(e):  # phi not an inversion of u
            m0[u, u] += quad
    return Representation(q, (m0, m1, m2), label=f"principal(t={t1:.4g},{t2:.4g})")


def induced_three_dim(q, u) -> Representation:
    """The 3-dimensional module with parameter u (nonzero complex)."""
    u = complex(u)
    if u == 0:
        raise ValueError("parameter must be nonzero")
    q = float(q)
    r = q ** -0.5
    quad = q ** 0.5 - r
    m1 = np.array([[-r, 0, 0], [0, 0, 1], [0, 1, quad]], dtype=complex)
    m2 = np.array([[0, 1, 0], [1, quad, 0], [0, 0, -r]], dtype=complex)
    m0 = np.array([[quad, 0, -u], [0, -r, 0], [-1 / u, 0, 0]], dtype=complex)
    return Representation(q, (m0, m1, m2), label=f"induced(u={u:.4g})")


def sign_character(q) -> Representation:
    """The one-dimensional module T_i -> -q^(-1/2)."""
    q = float(q)
    m = np.array([[-(q ** -0.5)]], dtype=complex)
    return Representation(q, (m, m, m), label="sign")


def evaluate(rep: Representation, h: hecke.HeckeElement) -> np.ndarray:
    """Image of a T-basis element: sum of coefficients times word matrices."""
    if h.basis != "T":
        raise ValueError("evaluate expects the T-basis; convert with x_to_t")
    out = np.zeros((rep.dim, rep.dim), dtype=complex)
    for w, c in h.terms.items():
        out += h.field.to_complex(c) * rep.word_matrix(w)
    return out


def character(rep: Representation, h: hecke.HeckeElement) -> complex:
    return complex(np.trace(evaluate(rep, h)))


def a_normalized(rep: Representation, i: int) -> np.ndarray:
    """pi(A_i) = q^(-1/2) pi(T_i)."""
    return rep.gens[i] / rep.q ** 0.5


def p_matrix(rep: Representation) -> np.ndarray:
    """Image of the uniform nearest-neighbour walk (A_0 + A_1 + A_2)/3."""
    return (rep.gens[0] + rep.gens[1] + rep.gens[2]) / (3 * rep.q ** 0.5)


def is_principal_irreducible(q, t, tol: float = 1e-12) -> bool:
    """Kato's criterion: irreducible iff t^(a) avoids q and 1/q for every
    root a, i.e. none of t1, t2, t1*t2 equals q or 1/q."""
    q = float(q)
    vals = (complex(t[0]), complex(t[1]), complex(t[0]) * complex(t[1]))
    for v in vals:
        for bad in (q, 1.0 / q):
            if abs(v - bad) <= tol * max(1.0, q):
                return False
    return True


def max_relation_residual(rep: Representation) -> float:
    """Largest entrywise violation of the quadratic and braid relations."""
    m0, m1, m2 = rep.gens
    quad = rep.q ** 0.5 - rep.q ** -0.5
    eye = np.eye(rep.dim)
    worst = 0.0
    for m in rep.gens:
        worst = max(worst, np.abs(m @ m - eye - quad * m).max())
    for a, b in ((m0, m1), (m1, m2), (m0, m2)):
        worst = max(worst, np.abs(a @ b @ a - b @ a @ b).max())
    return float(worst)
