"""Exact arithmetic in the affine Hecke algebra of the triangle tiling.

Two coefficient modes share one element type:

* exact  -- elements of the real quadratic field Q(sqrt(q)) for a fixed
  rational q > 1, stored as a + b*sqrt(q) with Fraction components, and
* numeric -- complex doubles (used for evaluation at torus points).

Two bases share one element type as well:

* the standard basis T_w indexed by affine group elements, with the
  quadratic relation T_i^2 = 1 + (q^(1/2) - q^(-1/2)) T_i, and
* the Bernstein basis x^mu T_u indexed by (lattice vector, finite part),
  multiplied through the Bernstein commutation relation with the quotient
  expanded as an explicit finite geometric sum.

The conversion T -> X is done by straightening against the Bernstein
relation; X -> T replays the unfolded gallery of t_mu with exact crossing
signs.  The two directions are mutually inverse and are cross-checked in
the tests against an independent folded-gallery expansion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import weyl
from .weyl import (
    IDENTITY,
    AffineElement,
    POS_ROOTS,
    SIMPLE_ROOTS,
    W0_WORDS,
    length,
    pairing,
    reduced_word,
    right_mul_gen,
    w0_apply,
    w0_length,
    w0_mult,
    w0_inv,
)

__all__ = [
    "QSqrt", "ScalarField", "ComplexField",
    "HeckeElement", "t_element", "x_element", "t_generator", "unit",
    "rmul_gen", "mul", "trace", "star", "simple_walk",
    "t_to_x", "x_to_t", "x_monomial_t_expansion",
    "w0_poincare", "symmetrizer_one", "intertwiner_tau", "tau_element",
    "macdonald_p", "poly_n", "poly_d", "apply_w0_to_poly",
    "tau_expansion_at", "f_value", "orbit_characters",
    "TraceTable",
]


# ---------------------------------------------------------------------------
# Scalars.
# ---------------------------------------------------------------------------


class QSqrt:
    """a + b*sqrt(q) with rational a, b.  Created through a ScalarField,
    which canonicalizes the representation when q is a perfect square."""

    __slots__ = ("a", "b", "field")

    def __init__(self, a, b, field):
        self.a = a
        self.b = b
        self.field = field

    def __repr__(self):
        return f"({self.a} + {self.b}*sqrt({self.field.q}))"

    def __eq__(self, other):
        if isinstance(other, QSqrt):
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def _coerce(self, other):
        if isinstance(other, QSqrt):
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.make(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.field.make(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt(-self.a, -self.b, self.field)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.field.make(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        q = self.field.q
        return self.field.make(
            self.a * o.a + self.b * o.b * q, self.a * o.b + self.b * o.a
        )

    __rmul__ = __mul__

    def inv(self):
        q = self.field.q
        nrm = self.a * self.a - self.b * self.b * q
        if nrm == 0:
            raise ZeroDivisionError("scalar is zero")
        return self.field.make(self.a / nrm, -self.b / nrm)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __complex__(self):
        return complex(self.a + self.b * self.field.sqrt_q_float)

    def __float__(self):
        return float(self.a + self.b * self.field.sqrt_q_float)


def _rational_sqrt(q: Fraction):
    """sqrt(q) as a Fraction if q is a square of a rational, else None."""
    from math import isqrt

    pn, pd = q.numerator, q.denominator
    rn, rd = isqrt(pn), isqrt(pd)
    if rn * rn == pn and rd * rd == pd:
        return Fraction(rn, rd)
    return None


class ScalarField:
    """Exact coefficient field Q(sqrt(q)) for a fixed rational q > 1."""

    exact = True

    def __init__(self, q):
        q = Fraction(q)
        if q <= 1:
            raise ValueError("thickness q must exceed 1")
        self.q = q
        self.rational_root = _rational_sqrt(q)
        self.sqrt_q_float = float(q) ** 0.5
        self.zero = self.make(0)
        self.one = self.make(1)
        self.sqrt_q = self.make(0, 1)
        self.inv_sqrt_q = self.make(0, 1 / q)
        # the coefficient q^(1/2) - q^(-1/2) from the quadratic relation
        self.quad = self.sqrt_q - self.inv_sqrt_q
        self._tx_cache = {}
        self._xw_cache = {}
        self._tux_cache = {}
        self._fin_inv_cache = {}

    def make(self, a, b=0):
        a, b = Fraction(a), Fraction(b)
        if b and self.rational_root is not None:
            a, b = a + b * self.rational_root, Fraction(0)
        return QSqrt(a, b, self)

    def half_pow(self, k: int):
        """q^(k/2) as an exact scalar, any integer k."""
        if k % 2 == 0:
            return self.make(self.q ** (k // 2))
        return self.make(0, self.q ** ((k - 1) // 2))

    def is_zero(self, c) -> bool:
        return not c

    def to_complex(self, c) -> complex:
        return complex(c)

    def conj(self, c):
        return c


class ComplexField:
    """Numeric twin of ScalarField with complex-double coefficients."""

    exact = False

    def __init__(self, q):
        self.q = Fraction(q)
        qf = float(self.q)
        self.sqrt_q_float = qf ** 0.5
        self.zero = 0j
        self.one = 1 + 0j
        self.sqrt_q = complex(qf ** 0.5)
        self.inv_sqrt_q = complex(qf ** -0.5)
        self.quad = self.sqrt_q - self.inv_sqrt_q
        self._tx_cache = {}
        self._xw_cache = {}
        self._tux_cache = {}
        self._fin_inv_cache = {}

    def make(self, a, b=0):
        return complex(float(Fraction(a)) + float(Fraction(b)) * self.sqrt_q_float)

    def half_pow(self, k: int):
        return complex(self.sqrt_q_float ** k)

    def is_zero(self, c) -> bool:
        return c == 0

    def to_complex(self, c) -> complex:
        return complex(c)

    def conj(self, c):
        return c.conjugate() if isinstance(c, complex) else c


# ---------------------------------------------------------------------------
# Elements.
# ---------------------------------------------------------------------------


@dataclass
class HeckeElement:
    """Finitely supported coefficient map in either basis.

    basis 'T': keys are AffineElement.
    basis 'X': keys are ((m, n), u) for x^mu T_u.
    """

    basis: str
    terms: dict
    field: object

    def __eq__(self, other):
        return (
            isinstance(other, HeckeElement)
            and self.basis == other.basis
            and self.field.q == other.field.q
            and self.terms == other.terms
        )

    def __add__(self, other):
        if self.basis != other.basis:
            raise ValueError("cannot add elements in different bases")
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c, self.field)
        return HeckeElement(self.basis, out, self.field)

    def __sub__(self, other):
        return self + other.scaled(-self.field.one)

    def __mul__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        if self.basis != other.basis:
            raise ValueError("mixed-basis product; convert explicitly first")
        if self.basis == "T":
            return mul(self, other)
        return bernstein_mul(self, other)

    def scaled(self, c):
        if self.field.is_zero(c):
            return HeckeElement(self.basis, {}, self.field)
        return HeckeElement(
            self.basis, {k: v * c for k, v in self.terms.items()}, self.field
        )

    def coeff(self, key):
        return self.terms.get(key, self.field.zero)

    def is_zero(self):
        return not self.terms


def _acc(terms: dict, key, c, field):
    cur = terms.get(key)
    new = c if cur is None else cur + c
    if field.is_zero(new):
        terms.pop(key, None)
    else:
        terms[key] = new


def unit(field, basis="T") -> HeckeElement:
    key = IDENTITY if basis == "T" else ((0, 0), 0)
    return HeckeElement(basis, {key: field.one}, field)


def t_element(field, pairs) -> HeckeElement:
    terms = {}
    for w, c in pairs:
        _acc(terms, w, c, field)
    return HeckeElement("T", terms, field)


def x_element(field, pairs) -> HeckeElement:
    terms = {}
    for (mu, u), c in pairs:
        _acc(terms, ((mu[0], mu[1]), u), c, field)
    return HeckeElement("X", terms, field)


def t_generator(field, i: int) -> HeckeElement:
    return HeckeElement("T", {weyl.GEN[i]: field.one}, field)


def simple_walk(field) -> HeckeElement:
    """The uniform nearest-neighbour walk (A_0 + A_1 + A_2)/3 written in the
    T-basis, A_i = q^(-1/2) T_i."""
    c = field.inv_sqrt_q * field.make(Fraction(1, 3))
    return t_element(field, [(weyl.GEN[i], c) for i in range(3)])


# ---------------------------------------------------------------------------
# T-basis arithmetic.
# ---------------------------------------------------------------------------


def rmul_gen(h: HeckeElement, i: int, inverse: bool = False) -> HeckeElement:
    """h * T_i (or h * T_i^(-1), using T_i^(-1) = T_i - quad)."""
    field = h.field
    quad = field.quad
    out = {}
    for w, c in h.terms.items():
        ws = right_mul_gen(w, i)
        up = length(ws) > length(w)
        if up:
            _acc(out, ws, c, field)
            if inverse:
                _acc(out, w, -(c * quad), field)
        else:
            _acc(out, ws, c, field)
            if not inverse:
                _acc(out, w, c * quad, field)
    return HeckeElement("T", out, field)


def rmul_word(h: HeckeElement, word, signs=None) -> HeckeElement:
    for k, i in enumerate(word):
        h = rmul_gen(h, i, inverse=(signs is not None and signs[k] < 0))
    return h


def mul(h1: HeckeElement, h2: HeckeElement) -> HeckeElement:
    """Product in the T-basis: the right factor is expanded one generator at
    a time along its reduced words."""
    if h1.basis != "T" or h2.basis != "T":
        raise ValueError("mul expects both factors in the T-basis")
    field = h1.field
    out = HeckeElement("T", {}, field)
    for w, c in h2.terms.items():
        out = out + rmul_word(h1, reduced_word(w)).scaled(c)
    return out


def trace(h: HeckeElement):
    """Coefficient of the identity (the canonical trace on the T-basis)."""
    if h.basis != "T":
        raise ValueError("trace expects the T-basis; convert with x_to_t")
    return h.coeff(IDENTITY)


def star(h: HeckeElement) -> HeckeElement:
    """Conjugate-linear involution (sum c_w T_w)^* = sum conj(c_w) T_{w^-1}."""
    if h.basis != "T":
        raise ValueError("star expects the T-basis")
    field = h.field
    out = {}
    for w, c in h.terms.items():
        _acc(out, weyl.inverse(w), field.conj(c), field)
    return HeckeElement("T", out, field)


def power(h: HeckeElement, n: int) -> HeckeElement:
    out = unit(h.field, h.basis)
    for _ in range(n):
        out = out * h
    return out


# ---------------------------------------------------------------------------
# Finite subalgebra (span of T_u, u in W0) helpers.
# ---------------------------------------------------------------------------


def _w0_rmul_gen(terms: dict, j: int, field, inverse=False) -> dict:
    quad = field.quad
    out = {}
    for u, c in terms.items():
        us = w0_mult(u, j)
        up = w0_length(us) > w0_length(u)
        if up:
            _acc(out, us, c, field)
            if inverse:
                _acc(out, u, -(c * quad), field)
        else:
            _acc(out, us, c, field)
            if not inverse:
                _acc(out, u, c * quad, field)
    return out


def finite_inverse(field, u: int) -> dict:
    """Expansion of (T_u)^(-1) over the finite T-basis, as dict u' -> coeff."""
    cached = field._fin_inv_cache.get(u)
    if cached is None:
        terms = {0: field.one}
        for j in reversed(W0_WORDS[u]):
            terms = _w0_rmul_gen(terms, j, field, inverse=True)
        field._fin_inv_cache[u] = cached = terms
    return cached


# ---------------------------------------------------------------------------
# Bernstein basis arithmetic.
# ---------------------------------------------------------------------------

_COROOT = ((1, 0), (0, 1))


def _geometric_terms(mu, i):
    """(x^mu - x^{s_i mu}) / (1 - x^(-a_i^vee)) as a signed monomial list.

    For k = <mu, a_i> the sum is x^(mu - j a_i^vee), j = 0..k-1 when k > 0,
    and -x^(mu + j a_i^vee), j = 1..-k when k < 0; empty when k = 0.
    """
    k = pairing(mu, SIMPLE_ROOTS[i - 1])
    av = _COROOT[i - 1]
    if k > 0:
        return [((mu[0] - j * av[0], mu[1] - j * av[1]), 1) for j in range(k)]
    return [((mu[0] + j * av[0], mu[1] + j * av[1]), -1) for j in range(1, -k + 1)]


def _left_mul_gen_x(terms: dict, i: int, field) -> dict:
    """T_i * (sum over x^mu T_z terms), i in {1, 2}."""
    quad = field.quad
    out = {}
    for (mu, z), c in terms.items():
        smu = w0_apply(i, mu)
        sz = w0_mult(i, z)
        _acc(out, (smu, sz), c, field)
        if w0_length(sz) < w0_length(z):
            _acc(out, (smu, z), c * quad, field)
        for e, sign in _geometric_terms(mu, i):
            _acc(out, (e, z), c * quad if sign > 0 else -(c * quad), field)
    return out


def _rmul_fin_gen_x(terms: dict, j: int, field) -> dict:
    quad = field.quad
    out = {}
    for (mu, z), c in terms.items():
        zs = w0_mult(z, j)
        _acc(out, (mu, zs), c, field)
        if w0_length(zs) < w0_length(z):
            _acc(out, (mu, z), c * quad, field)
    return out


def _tu_times_xmonomial(field, u: int, nu) -> dict:
    """T_u * x^nu in the Bernstein basis (cached)."""
    key = (u, nu)
    cached = field._tux_cache.get(key)
    if cached is None:
        terms = {(nu, 0): field.one}
        for i in reversed(W0_WORDS[u]):
            terms = _left_mul_gen_x(terms, i, field)
        field._tux_cache[key] = cached = terms
    return cached


def bernstein_mul(h1: HeckeElement, h2: HeckeElement) -> HeckeElement:
    """Product in the Bernstein basis."""
    if h1.basis != "X" or h2.basis != "X":
        raise ValueError("bernstein_mul expects both factors in the X-basis")
    field = h1.field
    out = {}
    for (mu, u), c1 in h1.terms.items():
        for (nu, v), c2 in h2.terms.items():
            c = c1 * c2
            if field.is_zero(c):
                continue
            mid = _tu_times_xmonomial(field, u, nu)
            if v:
                mid = dict(mid)
                for j in W0_WORDS[v]:
                    mid = _rmul_fin_gen_x(mid, j, field)
            for (gamma, z), cm in mid.items():
                _acc(out, ((gamma[0] + mu[0], gamma[1] + mu[1]), z), c * cm, field)
    return HeckeElement("X", out, field)


# ---------------------------------------------------------------------------
# Basis conversion.
# ---------------------------------------------------------------------------


def _gen_x_form(field, i: int) -> HeckeElement:
    """Generator T_i written in the Bernstein basis.

    For i in {1, 2} this is x^0 T_i.  The affine generator equals the
    gallery element x_{s0} = x^(phi^vee) (T_{s_phi})^(-1), because the single
    step of its unfolded gallery is a positive crossing.
    """
    if i in (1, 2):
        return HeckeElement("X", {((0, 0), i): field.one}, field)
    inv = finite_inverse(field, weyl.W0_LONGEST)
    return HeckeElement(
        "X", {(weyl.PHI_VEE, z): c for z, c in inv.items()}, field
    )


def _t_word_to_x(field, w: AffineElement) -> HeckeElement:
    cached = field._tx_cache.get(w)
    if cached is None:
        word = reduced_word(w)
        if not word:
            cached = unit(field, "X")
        else:
            prefix = weyl.from_word(word[:-1])
            cached = bernstein_mul(
                _t_word_to_x(field, prefix), _gen_x_form(field, word[-1])
            )
        field._tx_cache[w] = cached
    return cached


def t_to_x(h: HeckeElement) -> HeckeElement:
    """Rewrite a T-basis element in the Bernstein basis by straightening."""
    if h.basis != "T":
        raise ValueError("t_to_x expects the T-basis")
    field = h.field
    out = HeckeElement("X", {}, field)
    for w, c in h.terms.items():
        out = out + _t_word_to_x(field, w).scaled(c)
    return out


def x_monomial_t_expansion(field, mu) -> HeckeElement:
    """x^mu in the T-basis: replay the unfolded gallery of t_mu, taking each
    generator with the exponent given by its exact crossing sign."""
    mu = (mu[0], mu[1])
    cached = field._xw_cache.get(mu)
    if cached is None:
        h = unit(field, "T")
        cur = IDENTITY
        for i in reduced_word(weyl.translation(mu)):
            _, sign = weyl.crossing_data(cur, i)
            h = rmul_gen(h, i, inverse=(sign < 0))
            cur = right_mul_gen(cur, i)
        field._xw_cache[mu] = cached = h
    return cached


def x_to_t(h: HeckeElement) -> HeckeElement:
    """Rewrite a Bernstein-basis element in the T-basis."""
    if h.basis != "X":
        raise ValueError("x_to_t expects the X-basis")
    field = h.field
    out = HeckeElement("T", {}, field)
    for (mu, u), c in h.terms.items():
        piece = x_monomial_t_expansion(field, mu)
        piece = rmul_word(piece, W0_WORDS[u])
        out = out + piece.scaled(c)
    return out


# ---------------------------------------------------------------------------
# Symmetrizer, intertwiners, spherical functions.
# ---------------------------------------------------------------------------


def w0_poincare(field):
    """W0(q) = sum over the finite group of q^length = 1 + 2q + 2q^2 + q^3."""
    q = field.q if field.exact else float(field.q)
    return field.make(1 + 2 * q + 2 * q * q + q * q * q) if field.exact else (
        1 + 2 * q + 2 * q * q + q ** 3
    )


def symmetrizer_one(field) -> HeckeElement:
    """The idempotent (1/W0(q)) sum of q_u^(1/2) T_u over the finite group."""
    wq = w0_poincare(field)
    inv = wq.inv() if field.exact else 1 / wq
    return t_element(
        field,
        [
            (weyl.finite(u), field.half_pow(w0_length(u)) * inv)
            for u in range(6)
        ],
    )


def intertwiner_tau(field, i: int) -> HeckeElement:
    """tau_i = (1 - x^(-a_i^vee)) T_i - (q^(1/2) - q^(-1/2)), in the X-basis."""
    av = _COROOT[i - 1]
    return x_element(
        field,
        [
            (((0, 0), i), field.one),
            (((-av[0], -av[1]), i), -field.one),
            (((0, 0), 0), -field.quad),
        ],
    )


def tau_element(field, u: int) -> HeckeElement:
    """tau_u = product of tau_i along a reduced word of u (X-basis)."""
    out = unit(field, "X")
    for i in W0_WORDS[u]:
        out = bernstein_mul(out, intertwiner_tau(field, i))
    return out


def poly_d(field) -> dict:
    """d(x) = prod over positive coroots of (1 - x^(-a^vee)), as exponent->coeff."""
    poly = {(0, 0): field.one}
    for a, b in POS_ROOTS:
        out = {}
        for e, c in poly.items():
            _acc(out, e, c, field)
            _acc(out, (e[0] - a, e[1] - b), -c, field)
        poly = out
    return poly


def poly_n(field) -> dict:
    """n(x) = prod over positive coroots of (1 - q^(-1) x^(-a^vee))."""
    qinv = field.half_pow(-2)
    poly = {(0, 0): field.one}
    for a, b in POS_ROOTS:
        out = {}
        for e, c in poly.items():
            _acc(out, e, c, field)
            _acc(out, (e[0] - a, e[1] - b), -(c * qinv), field)
        poly = out
    return poly


def apply_w0_to_poly(u: int, poly: dict, field) -> dict:
    out = {}
    for e, c in poly.items():
        _acc(out, w0_apply(u, e), c, field)
    return out


def _poly_shift(poly: dict, mu, field) -> dict:
    return {(e[0] + mu[0], e[1] + mu[1]): c for e, c in poly.items()}


def _lead_key(e):
    return (e[0] + e[1], e[0], e[1])


def macdonald_p(field, mu) -> HeckeElement:
    """Symmetric spherical polynomial P_mu(x) as an X-basis element.

    Computed exactly by clearing the common denominator: with rho the
    half-sum of positive coroots,

        P_mu = (q_w0 / W0(q)) * N / D,
        N = sum_u (-1)^l(u) u( x^(mu+rho) n(x) ),   D = sum_u (-1)^l(u) x^(u rho),

    and the division N / D is exact in the Laurent ring (checked; a nonzero
    remainder raises).
    """
    rho = weyl.RHO_VEE
    n_shift = _poly_shift(poly_n(field), (mu[0] + rho[0], mu[1] + rho[1]), field)
    num = {}
    den = {}
    for u in range(6):
        sgn = -1 if w0_length(u) % 2 else 1
        for e, c in apply_w0_to_poly(u, n_shift, field).items():
            _acc(num, e, c if sgn > 0 else -c, field)
        _acc(den, w0_apply(u, rho), field.make(sgn), field)

    quot = {}
    lead_d = max(den, key=_lead_key)
    cd = den[lead_d]
    guard = 0
    bound = 40 * (abs(mu[0]) + abs(mu[1]) + 2) ** 2 + 1000
    while num:
        guard += 1
        if guard > bound:
            raise ArithmeticError("spherical-function division did not terminate")
        lead_n = max(num, key=_lead_key)
        g = (lead_n[0] - lead_d[0], lead_n[1] - lead_d[1])
        c = num[lead_n] / cd
        _acc(quot, g, c, field)
        for e, ce in den.items():
            _acc(num, (e[0] + g[0], e[1] + g[1]), -(ce * c), field)

    scale = field.half_pow(6) * (
        w0_poincare(field).inv() if field.exact else 1 / w0_poincare(field)
    )
    return HeckeElement(
        "X", {(e, 0): c * scale for e, c in quot.items()}, field
    )


# ---------------------------------------------------------------------------
# Localized intertwiner-basis evaluation (numeric).
# ---------------------------------------------------------------------------


def _char_pow(t, e) -> complex:
    return t[0] ** e[0] * t[1] ** e[1]


def _w0_on_character(u: int, t):
    """The character w.t with (w.t)^mu = t^(w^-1 mu)."""
    ui = w0_inv(u)
    e1 = w0_apply(ui, (1, 0))
    e2 = w0_apply(ui, (0, 1))
    return (_char_pow(t, e1), _char_pow(t, e2))


def d_at(q: float, t) -> complex:
    out = 1.0 + 0j
    for a, b in POS_ROOTS:
        out *= 1 - t[0] ** (-a) * t[1] ** (-b)
    return out


def n_at(q: float, t) -> complex:
    out = 1.0 + 0j
    for a, b in POS_ROOTS:
        out *= 1 - (t[0] ** (-a) * t[1] ** (-b)) / q
    return out


def _as_numeric_x_terms(h: HeckeElement):
    if h.basis == "T":
        h = t_to_x(h)
    field = h.field
    return [((mu, u), field.to_complex(c)) for (mu, u), c in h.terms.items()]


def _component_char(t, z: int, e) -> complex:
    """Value of x^e on the tau_z component: t^(z^-1 e)."""
    return _char_pow(t, w0_apply(w0_inv(z), e))


def _tau_module_apply(terms, q: float, t, vec):
    """Apply an X-basis element (numeric term list) to a vector in the
    localized rank-6 module with basis indexed by the finite group."""
    import numpy as np

    sq = q ** 0.5
    quad = sq - 1 / sq
    out = np.zeros(6, dtype=complex)
    for (mu, u), c in terms:
        cur = np.array(vec, dtype=complex)
        # T_u: apply generators right-to-left
        for i in reversed(W0_WORDS[u]):
            av = _COROOT[i - 1]
            nxt = np.zeros(6, dtype=complex)
            for z in range(6):
                comp = cur[z]
                if comp == 0:
                    continue
                sz = w0_mult(i, z)
                up = w0_length(sz) > w0_length(z)
                pole_new = 1 - _component_char(t, sz, (-av[0], -av[1]))
                pole_old = 1 - _component_char(t, z, (-av[0], -av[1]))
                if up:
                    nxt[sz] += comp / pole_new
                else:
                    g = q * (1 - _component_char(t, sz, (-av[0], -av[1])) / q) * (
                        1 - _component_char(t, sz, av) / q
                    )
                    nxt[sz] += comp * g / pole_new
                nxt[z] += comp * quad / pole_old
            cur = nxt
        for z in range(6):
            if cur[z] != 0:
                cur[z] *= _component_char(t, z, mu)
        out += c * cur
    return out


def tau_expansion_at(h: HeckeElement, t, singular_tol: float = 1e-10):
    """Coefficients (p_u(t)/d(t))_u of h in the intertwiner basis, evaluated
    at a generic character t = (t1, t2).

    Raises ValueError near the singular set d(t) = 0; perturb t instead.
    """
    import numpy as np

    q = float(h.field.q)
    if abs(d_at(q, t)) < singular_tol:
        raise ValueError(
            "character too close to the singular set d(t)=0; evaluate at a "
            "perturbed point"
        )
    terms = _as_numeric_x_terms(h)
    basis_vec = [0] * 6
    basis_vec[0] = 1
    out = np.zeros(6, dtype=complex)
    for u in range(6):
        s = _w0_on_character(w0_inv(u), t)
        out[u] = _tau_module_apply(terms, q, s, basis_vec)[u]
    return out


def f_value(h: HeckeElement, t, singular_tol: float = 1e-10) -> complex:
    """The normalized trace-generating-function coefficient f_t(h): the
    identity component of h in the localized intertwiner basis."""
    q = float(h.field.q)
    if abs(d_at(q, t)) < singular_tol:
        raise ValueError(
            "character too close to the singular set d(t)=0; evaluate at a "
            "perturbed point"
        )
    terms = _as_numeric_x_terms(h)
    basis_vec = [0] * 6
    basis_vec[0] = 1
    return complex(_tau_module_apply(terms, q, t, basis_vec)[0])


def orbit_characters(t):
    """The six characters w.t in the finite-group orbit of t."""
    return [_w0_on_character(u, t) for u in range(6)]


# ---------------------------------------------------------------------------
# Fast exact trace table for the generating-function series.
# ---------------------------------------------------------------------------

_PACK_OFF = 1 << 10
_PACK_U = 6
_PACK_N = 6 * (1 << 11)

# diagram automorphism on the finite group: swaps the two simple reflections
_OMEGA = (0, 2, 1, 4, 3, 5)


def _pack(m, n, u):
    return ((m + _PACK_OFF) * (1 << 11) + (n + _PACK_OFF)) * _PACK_U + u


class TraceTable:
    """Exact canonical traces Tr(x^mu T_u) tabulated over a lattice box.

    Expansions of x^mu in the T-basis are built incrementally along unit
    lattice steps (each step is four generator multiplications), with packed
    integer keys and, for integer q, coefficients (A + B*sqrt(q)) / sqrt(q)^e
    held as integer triples.  For non-integer rational q the same chain runs
    on Fraction pairs.  Traces are read off as the six coefficients at the
    finite-group elements.
    """

    def __init__(self, q):
        self.q = Fraction(q)
        self.int_q = self.q.denominator == 1
        self._traces = {}
        self._gen_tables = _build_gen_tables()
        self._step_ops = {
            (1, 0): _step_ops_for((1, 0)),
            (-1, 0): _step_ops_for((-1, 0)),
            (0, 1): _step_ops_for((0, 1)),
            (0, -1): _step_ops_for((0, -1)),
        }
        self._state_mu = (0, 0)
        one = (1, 0, 0) if self.int_q else (Fraction(1), Fraction(0))
        self._state = {_pack(0, 0, 0): one}
        self._record((0, 0))

    # -- scalar helpers on the packed representation -----------------------

    def _record(self, mu):
        row = []
        for u in range(6):
            # Tr(a T_u) is the coefficient of a at the finite element u^-1
            c = self._state.get(_pack(0, 0, w0_inv(u)))
            row.append(self._to_pair(c))
        self._traces[mu] = tuple(row)

    def _to_pair(self, c):
        if c is None:
            return (Fraction(0), Fraction(0))
        if not self.int_q:
            return c
        a, b, e = c
        q = self.q
        if e % 2:
            a, b, e = b * q, a, e + 1
        scale = q ** (e // 2)
        return (Fraction(a, 1) / scale, Fraction(b, 1) / scale)

    def _rmul_gen_packed(self, state, i, inverse):
        q = self.q
        intq = self.int_q
        if intq:
            qi = q.numerator
            qm1 = qi - 1
        gen = self._gen_tables[i]
        out = {}
        for key, c in state.items():
            tgt, up = gen(key)
            if intq:
                a, b, e = c
            # main term: coefficient c at tgt
            cur = out.get(tgt)
            if cur is None:
                out[tgt] = c
            else:
                out[tgt] = _cadd(cur, c, q, intq)
            # quad term
            if up == (not inverse):
                continue
            if intq:
                qc = (a * qm1, b * qm1, e + 1)
                if inverse:
                    qc = (-qc[0], -qc[1], qc[2])
            else:
                a2, b2 = c
                qc = (b2 * (q - 1), a2 * (1 - 1 / q))
                if inverse:
                    qc = (-qc[0], -qc[1])
            cur = out.get(key)
            if cur is None:
                out[key] = qc
            else:
                out[key] = _cadd(cur, qc, q, intq)
        # prune zeros
        if intq:
            return {k: v for k, v in out.items() if v[0] or v[1]}
        return {k: v for k, v in out.items() if v[0] or v[1]}

    def _step(self, direction):
        for i, inv in self._step_ops[direction]:
            self._state = self._rmul_gen_packed(self._state, i, inv)
        self._state_mu = (
            self._state_mu[0] + direction[0],
            self._state_mu[1] + direction[1],
        )
        self._record(self._state_mu)

    def _reset(self):
        one = (1, 0, 0) if self.int_q else (Fraction(1), Fraction(0))
        self._state = {_pack(0, 0, 0): one}
        self._state_mu = (0, 0)

    def _walk_to(self, m, n):
        while self._state_mu[0] != m:
            self._step((1, 0) if m > self._state_mu[0] else (-1, 0))
        while self._state_mu[1] != n:
            self._step((0, 1) if n > self._state_mu[1] else (0, -1))

    def ensure_box(self, m_range, n_range):
        """Tabulate traces for all mu in the given inclusive ranges.

        For a square box symmetric in the two coordinates only the closed
        lower triangle is walked; the mirror image follows from the diagram
        automorphism (swap the two simple reflections and the two lattice
        coordinates), which fixes the trace.
        """
        m0, m1 = m_range
        n0, n1 = n_range
        have = self._traces
        if all(
            (m, n) in have
            for m in range(m0, m1 + 1)
            for n in range(n0, n1 + 1)
        ):
            return
        if self._state_mu != (0, 0):
            self._reset()
        if (m0, m1) == (n0, n1) and m1 <= 0:
            # triangle sweep {n >= m} top-down, mirrored on the fly
            up = False
            self._walk_to(m1, n1)
            for m in range(m1, m0 - 1, -1):
                ns = range(m, n1 + 1) if up else range(n1, m - 1, -1)
                for n in ns:
                    self._walk_to(m, n)
                up = not up
            for (m, n), row in list(self._traces.items()):
                if (n, m) not in self._traces:
                    self._traces[(n, m)] = tuple(row[_OMEGA[u]] for u in range(6))
            return
        self._walk_to(m0, n0)
        up = True
        for m in range(m0, m1 + 1):
            ns = range(n0, n1 + 1) if up else range(n1, n0 - 1, -1)
            for n in ns:
                self._walk_to(m, n)
            up = not up

    def trace_row(self, mu):
        """(a, b)-pairs of Tr(x^mu T_u) for the six finite elements."""
        row = self._traces.get((mu[0], mu[1]))
        if row is None:
            raise KeyError(f"trace table does not cover {mu}; call ensure_box")
        return row


def _cadd(c1, c2, q, intq):
    if intq:
        a1, b1, e1 = c1
        a2, b2, e2 = c2
        if e1 == e2:
            return (a1 + a2, b1 + b2, e1)
        if e1 < e2:
            a1, b1, e1, a2, b2, e2 = a2, b2, e2, a1, b1, e1
        # bring (a2, b2, e2) up to exponent e1
        d = e1 - e2
        qi = q.numerator
        if d % 2:
            a2, b2 = b2 * qi, a2
            d -= 1
        scale = qi ** (d // 2)
        return (a1 + a2 * scale, b1 + b2 * scale, e1)
    return (c1[0] + c2[0], c1[1] + c2[1])


def _build_gen_tables():
    """For each generator, a function packed-key -> (target key, length up?)."""

    def make(i):
        def step(key):
            u = key % _PACK_U
            rest = key // _PACK_U
            n = rest % (1 << 11) - _PACK_OFF
            m = rest // (1 << 11) - _PACK_OFF
            w = AffineElement((m, n), u)
            ws = right_mul_gen(w, i)
            return (
                _pack(ws.mu[0], ws.mu[1], ws.u),
                length(ws) > length(w),
            )

        cache = {}

        def cached_step(key):
            r = cache.get(key)
            if r is None:
                cache[key] = r = step(key)
            return r

        return cached_step

    return {i: make(i) for i in (0, 1, 2)}


def _step_ops_for(direction):
    """Generator/sign sequence realizing right multiplication by x^direction,
    read off the unfolded gallery of the corresponding translation."""
    ops = []
    cur = IDENTITY
    for i in reduced_word(weyl.translation(direction)):
        _, sign = weyl.crossing_data(cur, i)
        ops.append((i, sign < 0))
        cur = right_mul_gen(cur, i)
    return ops
