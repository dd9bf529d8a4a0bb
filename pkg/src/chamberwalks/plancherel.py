"""Spectral-side trace computations: c-functions, torus quadrature for the
three-component trace decomposition, the small-parameter trace generating
series, and the normalized coefficient functional.

The quadrature grid offsets every node by half a step so no node meets a
wall character (t^a = 1); the integrands are smooth and periodic, so the
product trapezoid rule converges faster than any power of 1/N.
"""

from __future__ import annotations

import numpy as np

from . import hecke, reps, weyl

__all__ = [
    "c_value", "c1_value", "w0_poincare_float", "QuadratureGrid",
    "char_on_grid", "plancherel_trace", "simple_walk_spectral_traces",
    "f_series", "f_value", "central_trace_integral", "mass_components",
]


def w0_poincare_float(q: float) -> float:
    return 1 + 2 * q + 2 * q * q + q ** 3


def c_value(q, t) -> complex:
    """Macdonald c-function: product over the three positive coroots of
    (1 - q^-1 t^-a) / (1 - t^-a).  Raises on the pole set."""
    q = float(q)
    num, den = 1 + 0j, 1 + 0j
    for a, b in weyl.POS_ROOTS:
        ta = t[0] ** (-a) * t[1] ** (-b)
        num *= 1 - ta / q
        den *= 1 - ta
    if den == 0:
        raise ZeroDivisionError("c-function pole: t^a = 1 for some root a")
    return num / den


def c1_value(q, u) -> complex:
    """Boundary c-function for the 3-dimensional family."""
    q = float(q)
    return (1 - q ** -1.5 / u) / (1 - q ** 0.5 / u)


class QuadratureGrid:
    """N offset nodes exp(2*pi*i*(k+1/2)/N) per circle, weight 1/N each."""

    def __init__(self, n: int):
        if n < 16:
            raise ValueError("grid must have at least 16 nodes per circle")
        self.n = n
        self.nodes = np.exp(2j * np.pi * (np.arange(n) + 0.5) / n)

    def torus_pairs(self):
        t1 = np.repeat(self.nodes, self.n)
        t2 = np.tile(self.nodes, self.n)
        return t1, t2


def _principal_generators(q: float, t1, t2):
    """Vectorized 6x6 generator images over arrays of torus points: returns
    (g0, g1, g2) with shape (len(t1), 6, 6); g1 and g2 are constant."""
    npts = len(t1)
    quad = q ** 0.5 - q ** -0.5
    m1 = np.zeros((6, 6), dtype=complex)
    m2 = np.zeros((6, 6), dtype=complex)
    g0 = np.zeros((npts, 6, 6), dtype=complex)
    for u in range(6):
        for i, m in ((1, m1), (2, m2)):
            su = weyl.w0_mult(i, u)
            m[su, u] += 1
            if weyl.w0_length(su) < weyl.w0_length(u):
                m[u, u] += quad
        e = weyl.w0_apply(weyl.w0_inv(u), (1, 1))
        target = weyl.w0_mult(weyl.W0_LONGEST, u)
        g0[:, target, u] += t1 ** (-e[0]) * t2 ** (-e[1])
        if not weyl._is_negative_root(e):
            g0[:, u, u] += quad
    g1 = np.broadcast_to(m1, (npts, 6, 6))
    g2 = np.broadcast_to(m2, (npts, 6, 6))
    return g0, g1, g2


def _induced_generators(q: float, u):
    npts = len(u)
    r = q ** -0.5
    quad = q ** 0.5 - r
    m1 = np.array([[-r, 0, 0], [0, 0, 1], [0, 1, quad]], dtype=complex)
    m2 = np.array([[0, 1, 0], [1, quad, 0], [0, 0, -r]], dtype=complex)
    g0 = np.zeros((npts, 3, 3), dtype=complex)
    g0[:, 0, 0] = quad
    g0[:, 1, 1] = -r
    g0[:, 0, 2] = -u
    g0[:, 2, 0] = -1 / u
    return g0, np.broadcast_to(m1, (npts, 3, 3)), np.broadcast_to(m2, (npts, 3, 3))


def _char_words(h: hecke.HeckeElement, gens):
    """Characters of a T-basis element over a batch of generator-matrix
    triples, sharing matrix products along common word prefixes."""
    npts, d = gens[0].shape[0], gens[0].shape[1]
    words = sorted(
        ((weyl.reduced_word(w), h.field.to_complex(c)) for w, c in h.terms.items()),
    )
    chars = np.zeros(npts, dtype=complex)
    eye = np.broadcast_to(np.eye(d, dtype=complex), (npts, d, d))
    stack = [eye]
    path = []

    for word, coeff in words:
        k = 0
        while k < len(path) and k < len(word) and path[k] == word[k]:
            k += 1
        del stack[k + 1:]
        del path[k:]
        for i in word[k:]:
            stack.append(stack[-1] @ gens[i])
            path.append(i)
        chars += coeff * np.trace(stack[-1], axis1=1, axis2=2)
    return chars


def char_on_grid(h: hecke.HeckeElement, q: float, t1, t2):
    """chi_t(h) for the 6-dimensional family at arrays of torus points."""
    return _char_words(h, _principal_generators(q, t1, t2))


def sign_char(h: hecke.HeckeElement, q: float) -> complex:
    val = 0j
    r = -(q ** -0.5)
    for w, c in h.terms.items():
        val += h.field.to_complex(c) * r ** weyl.length(w)
    return val


def _principal_weight(q: float, t1, t2):
    return 1.0 / np.abs(c_value(q, (t1, t2))) ** 2 if np.ndim(t1) == 0 else None


def _c_abs2(q: float, t1, t2):
    num = np.ones_like(t1)
    den = np.ones_like(t1)
    for a, b in weyl.POS_ROOTS:
        ta = t1 ** (-a) * t2 ** (-b)
        num = num * np.abs(1 - ta / q) ** 2
        den = den * np.abs(1 - ta) ** 2
    return num / den


def _c1_abs2(q: float, u):
    return np.abs(1 - q ** -1.5 / u) ** 2 / np.abs(1 - q ** 0.5 / u) ** 2


def plancherel_trace(h: hecke.HeckeElement, n_grid: int = 256,
                     chunk: int = 8192) -> complex:
    """Canonical trace through the three-component spectral decomposition:

        (1/(6 q^3)) * avg over T^2 of chi_t(h)/|c(t)|^2
      + (q-1)^2/(q^2(q^2-1)) * avg over T of chi_u(h)/|c1(u)|^2
      + (q-1)^3/(q^3-1) * chi_sign(h)

    with all averages over offset trapezoid grids.
    """
    if h.basis != "T":
        raise ValueError("plancherel_trace expects the T-basis")
    q = float(h.field.q)
    grid = QuadratureGrid(n_grid)

    total = 0j
    t1_all, t2_all = grid.torus_pairs()
    for lo in range(0, len(t1_all), chunk):
        t1 = t1_all[lo:lo + chunk]
        t2 = t2_all[lo:lo + chunk]
        chars = char_on_grid(h, q, t1, t2)
        total += np.sum(chars / _c_abs2(q, t1, t2))
    part6 = total / len(t1_all) / (6 * q ** 3)

    u = grid.nodes
    chars3 = _char_words(h, _induced_generators(q, u))
    part3 = (
        (q - 1) ** 2
        / (q ** 2 * (q ** 2 - 1))
        * np.mean(chars3 / _c1_abs2(q, u))
    )

    part1 = (q - 1) ** 3 / (q ** 3 - 1) * sign_char(h, q)
    return complex(part6 + part3 + part1)


def mass_components(q: float, n_grid: int = 256):
    """Plancherel masses of the three spectral components (sum to 1)."""
    grid = QuadratureGrid(n_grid)
    t1, t2 = grid.torus_pairs()
    m6 = np.mean(1.0 / _c_abs2(q, t1, t2)) / q ** 3
    m3 = 3 * (q - 1) ** 2 / (q ** 2 * (q ** 2 - 1)) * np.mean(
        1.0 / _c1_abs2(q, grid.nodes)
    )
    m1 = (q - 1) ** 3 / (q ** 3 - 1)
    return float(m6.real), float(m3.real), float(m1)


def simple_walk_spectral_traces(q: float, n_max: int, n_grid: int = 256,
                                chunk: int = 8192):
    """Tr(P^n) for n = 0..n_max through the spectral decomposition, with the
    n-th power evaluated pointwise on the grid (the generator images are a
    homomorphism, so chi_t(P^n) = tr(pi_t(P)^n))."""
    q = float(q)
    grid = QuadratureGrid(n_grid)
    out6 = np.zeros(n_max + 1, dtype=complex)
    t1_all, t2_all = grid.torus_pairs()
    for lo in range(0, len(t1_all), chunk):
        t1 = t1_all[lo:lo + chunk]
        t2 = t2_all[lo:lo + chunk]
        g0, g1, g2 = _principal_generators(q, t1, t2)
        m = (g0 + g1 + g2) / (3 * q ** 0.5)
        weight = 1.0 / _c_abs2(q, t1, t2)
        cur = np.broadcast_to(np.eye(6, dtype=complex), m.shape).copy()
        for n in range(n_max + 1):
            out6[n] += np.sum(np.trace(cur, axis1=1, axis2=2) * weight)
            if n < n_max:
                cur = cur @ m
    out6 /= len(t1_all) * 6 * q ** 3

    u = grid.nodes
    g0, g1, g2 = _induced_generators(q, u)
    m3mat = (g0 + g1 + g2) / (3 * q ** 0.5)
    w3 = 1.0 / _c1_abs2(q, u)
    cur = np.broadcast_to(np.eye(3, dtype=complex), m3mat.shape).copy()
    out3 = np.zeros(n_max + 1, dtype=complex)
    for n in range(n_max + 1):
        out3[n] += np.mean(np.trace(cur, axis1=1, axis2=2) * w3)
        if n < n_max:
            cur = cur @ m3mat
    out3 *= (q - 1) ** 2 / (q ** 2 * (q ** 2 - 1))

    atom = (q - 1) ** 3 / (q ** 3 - 1) * (-1 / q) ** np.arange(n_max + 1)
    return np.real(out6 + out3 + atom)


# ---------------------------------------------------------------------------
# Trace generating series at small parameters.
# ---------------------------------------------------------------------------

_TABLES = {}


def _trace_table(q) -> hecke.TraceTable:
    key = str(q)
    tab = _TABLES.get(key)
    if tab is None:
        _TABLES[key] = tab = hecke.TraceTable(q)
    return tab


def f_series(h: hecke.HeckeElement, t, depth: int):
    """Sum of t^-mu Tr(x^mu h) over antidominant mu with coordinates at most
    depth, with exact traces; returns (value, reported_tail_bound).

    The tail bound is the crude coefficient bound |Tr(x_v)| <= 2^l(v) q_v^(1/2)
    summed over the omitted shells; it may be infinite even where the series
    converges (the bound is exponentially loose), in which case inf is
    reported.
    """
    q = float(h.field.q)
    if max(abs(complex(t[0])), abs(complex(t[1]))) >= 1 / q:
        raise ValueError("parameters outside the convergence domain |t_i| < 1/q")
    hx = hecke.t_to_x(h) if h.basis == "T" else h
    table = _trace_table(h.field.q)

    support = list(hx.terms.items())
    offs_m = [nu[0] for (nu, _), _ in support] + [0]
    offs_n = [nu[1] for (nu, _), _ in support] + [0]
    table.ensure_box(
        (-depth + min(offs_m), max(offs_m)), (-depth + min(offs_n), max(offs_n))
    )

    t1, t2 = complex(t[0]), complex(t[1])
    total = 0j
    for a in range(depth + 1):
        for b in range(depth + 1):
            mu = (-a, -b)
            acc = 0j
            for (nu, u), c in support:
                row = table.trace_row((mu[0] + nu[0], mu[1] + nu[1]))
                ra, rb = row[u]
                if ra or rb:
                    acc += complex(c) * (float(ra) + float(rb) * q ** 0.5)
            if acc:
                total += t1 ** a * t2 ** b * acc

    rho = max(abs(t1), abs(t2)) * (2 * q ** 0.5) ** 4
    if rho < 1:
        tail = (
            sum(abs(complex(c)) for _, c in support)
            * (depth + 2)
            * rho ** (depth + 1)
            / (1 - rho) ** 2
        )
    else:
        tail = float("inf")
    return complex(total), tail


f_value = hecke.f_value


def central_trace_integral(p: hecke.HeckeElement, n_grid: int = 256) -> complex:
    """Trace of p(x) 1_0 for symmetric p, by torus quadrature:
    (1/(6 q^3)) avg of p(t)/(c(t) c(1/t)).  Asymmetric input is rejected."""
    if p.basis != "X" or any(u != 0 for (_, u) in p.terms):
        raise ValueError("expected a symmetric element of the lattice subalgebra")
    field = p.field
    for (e, _), c in p.terms.items():
        for u in range(6):
            if p.terms.get((weyl.w0_apply(u, e), 0)) != c:
                raise ValueError("input is not symmetric under the finite group")
    q = float(field.q)
    grid = QuadratureGrid(n_grid)
    t1, t2 = grid.torus_pairs()
    vals = np.zeros(len(t1), dtype=complex)
    for (e, _), c in p.terms.items():
        vals += field.to_complex(c) * t1 ** e[0] * t2 ** e[1]
    return complex(np.mean(vals / _c_abs2(q, t1, t2)) / (6 * q ** 3))
