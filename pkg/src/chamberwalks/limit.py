"""n-step distributions of radial chamber walks, Monte Carlo simulation,
closed-form spectral data of the uniform nearest-neighbour walk, and the
n^-4 local limit estimate.

The exact n-step distribution follows the averaging-operator recursion: a
step from w splits uniformly over the three wall types; an ascent moves to
ws_i, a descent moves there with probability 1/q and stays otherwise.  The
same kernel drives the Monte Carlo chain, so the two are independent only
in implementation (sparse linear algebra vs sampled trajectories), while
the spectral route goes through the trace decomposition instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from . import reps, weyl
from .weyl import IDENTITY, AffineElement

__all__ = [
    "StateSpace", "state_space", "WalkDistribution",
    "simple_walk_spec", "exact_distribution", "mc_simulate",
    "SpectralData", "spectral_data", "c_w_value", "llt_estimate",
    "eigen_surface", "lemma34_check", "perturbation_eigenvalues",
    "determinant_probe",
]


# ---------------------------------------------------------------------------
# State space and transition structure.
# ---------------------------------------------------------------------------


@dataclass
class StateSpace:
    """Ball of the Cayley graph with integer-indexed transition tables."""

    radius: int
    elems: list
    index: dict
    lengths: np.ndarray
    target: np.ndarray   # target[s, i] = index of elems[s] * s_i, -1 if outside
    ascent: np.ndarray   # ascent[s, i] = length goes up


_SPACES = {}


def state_space(radius: int) -> StateSpace:
    cached = _SPACES.get(radius)
    if cached is not None:
        return cached
    dist = weyl.ball(radius)
    elems = sorted(dist, key=lambda w: (dist[w], w.mu, w.u))
    index = {w: k for k, w in enumerate(elems)}
    n = len(elems)
    target = np.full((n, 3), -1, dtype=np.int64)
    ascent = np.zeros((n, 3), dtype=bool)
    lengths = np.array([dist[w] for w in elems], dtype=np.int64)
    for s, w in enumerate(elems):
        lw = dist[w]
        for i in range(3):
            y = weyl.right_mul_gen(w, i)
            k = index.get(y)
            target[s, i] = -1 if k is None else k
            ascent[s, i] = (k is None) or lengths[k] > lw
    space = StateSpace(radius, elems, index, lengths, target, ascent)
    _SPACES[radius] = space
    return space


@dataclass
class WalkDistribution:
    """Sparse mass assignment after n steps of a radial walk."""

    n: int
    space: StateSpace
    masses: np.ndarray

    def mass(self, w: AffineElement) -> float:
        k = self.space.index.get(w)
        return 0.0 if k is None else float(self.masses[k])

    def p_value(self, w: AffineElement, q: float) -> float:
        """Transition probability to a fixed chamber at relative position w:
        the basis mass divided by the sphere size q^length."""
        k = self.space.index.get(w)
        if k is None:
            return 0.0
        return float(self.masses[k]) / q ** int(self.space.lengths[k])

    def items(self):
        for k, m in enumerate(self.masses):
            if m:
                yield self.space.elems[k], m

    def total(self) -> float:
        return float(np.sum(self.masses))


def simple_walk_spec():
    """The uniform nearest-neighbour walk as basis-coefficient map."""
    return {weyl.GEN[i]: Fraction(1, 3) for i in range(3)}


def _validate_spec(walk: dict):
    total = Fraction(0)
    for w, a in walk.items():
        a = Fraction(a)
        if a < 0:
            raise ValueError("radial walk coefficients must be nonnegative")
        total += a
    if total != 1:
        raise ValueError("radial walk coefficients must sum to one")


def _gen_step_matrix(space: StateSpace, i: int, q: float) -> sp.csr_matrix:
    """Column-stochastic one-generator averaging step: entry [t, s] is the
    mass flowing from state s to t under right averaging on wall type i."""
    n = len(space.elems)
    rows, cols, data = [], [], []
    for s in range(n):
        t = space.target[s, i]
        if space.ascent[s, i]:
            if t >= 0:
                rows.append(t), cols.append(s), data.append(1.0)
            # ascents leaving the ball never carry mass within the horizon
        else:
            rows.append(t), cols.append(s), data.append(1.0 / q)
            rows.append(s), cols.append(s), data.append(1.0 - 1.0 / q)
    return sp.csr_matrix((data, (rows, cols)), shape=(n, n))


def _walk_matrix(space: StateSpace, walk: dict, q: float) -> sp.csr_matrix:
    gen_mats = [_gen_step_matrix(space, i, q) for i in range(3)]
    n = len(space.elems)
    out = sp.csr_matrix((n, n))
    for w, a in walk.items():
        m = sp.identity(n, format="csr")
        for i in weyl.reduced_word(w):
            m = gen_mats[i] @ m
        out = out + float(a) * m
    return out


def exact_distribution(walk: dict, n: int, q, snapshots=None):
    """Distribution after n steps, double precision via sparse matvec.

    With snapshots=[n1, n2, ...] returns {ni: WalkDistribution} capturing the
    distribution at each requested step count (all <= n).
    """
    _validate_spec(walk)
    q = float(q)
    horizon = n * max((weyl.length(w) for w in walk), default=1)
    space = state_space(max(horizon, 1))
    mat = _walk_matrix(space, walk, q)
    masses = np.zeros(len(space.elems))
    masses[space.index[IDENTITY]] = 1.0
    wanted = set(snapshots or ())
    out = {}
    if 0 in wanted:
        out[0] = WalkDistribution(0, space, masses.copy())
    for k in range(1, n + 1):
        masses = mat @ masses
        if k in wanted:
            out[k] = WalkDistribution(k, space, masses.copy())
    if snapshots is None:
        return WalkDistribution(n, space, masses)
    return out


def exact_distribution_rational(walk: dict, n: int, q) -> dict:
    """Reference recursion with Fraction masses (dict element -> mass)."""
    _validate_spec(walk)
    q = Fraction(q)
    dist = {IDENTITY: Fraction(1)}
    word_cache = {w: weyl.reduced_word(w) for w in walk}
    for _ in range(n):
        new = {}
        for start, mass in dist.items():
            for w, a in walk.items():
                pieces = {start: mass * Fraction(a)}
                for i in word_cache[w]:
                    nxt = {}
                    for v, m in pieces.items():
                        vs = weyl.right_mul_gen(v, i)
                        if weyl.length(vs) > weyl.length(v):
                            nxt[vs] = nxt.get(vs, Fraction(0)) + m
                        else:
                            nxt[vs] = nxt.get(vs, Fraction(0)) + m / q
                            nxt[v] = nxt.get(v, Fraction(0)) + m * (1 - 1 / q)
                    pieces = nxt
                for v, m in pieces.items():
                    new[v] = new.get(v, Fraction(0)) + m
        dist = {v: m for v, m in new.items() if m}
    return dist


def mc_simulate(n: int, trials: int, seed: int, q) -> WalkDistribution:
    """Empirical distribution of the uniform nearest-neighbour radial chain.

    Counter-based Philox stream keyed by the seed; step k consumes the k-th
    block of (type, acceptance) draws, so trial j always sees the same
    deterministic stream positions regardless of batching.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    q = float(q)
    space = state_space(max(n, 1))
    rng = np.random.Generator(np.random.Philox(key=seed))
    state = np.full(trials, space.index[IDENTITY], dtype=np.int64)
    for _ in range(n):
        pick = rng.integers(0, 3, size=trials)
        accept = rng.random(trials) < 1.0 / q
        asc = space.ascent[state, pick]
        move = asc | accept
        tgt = space.target[state, pick]
        state = np.where(move, tgt, state)
    counts = np.bincount(state, minlength=len(space.elems))
    return WalkDistribution(n, space, counts / trials)


# ---------------------------------------------------------------------------
# Closed-form spectral data for the uniform nearest-neighbour walk.
# ---------------------------------------------------------------------------


@dataclass
class SpectralData:
    """Eigendata of the 6- and 3-dimensional modules at the trivial character."""

    q: float
    discriminant_root: float      # sqrt(q^2 + 34q + 1)
    eigenvalues: tuple            # six values, descending, with multiplicity
    top_vector_entry: float       # the 'a' in the unnormalized top vector
    bottom_vector_entry: float    # the 'b' in the unnormalized bottom vector
    top_vector: np.ndarray        # unit top eigenvector
    beta: float                   # quadratic decay rate of the top eigenvalue
    induced_eigenvalues: tuple    # (repeated value, simple value)

    @property
    def spectral_radius(self) -> float:
        return self.eigenvalues[0]


def spectral_data(q) -> SpectralData:
    q = float(q)
    if q <= 1:
        raise ValueError("thickness q must exceed 1")
    s = (q * q + 34 * q + 1) ** 0.5
    lam1 = (3 * (q - 1) + s) / (6 * q)
    lam2 = 2 * (q - 1) / (3 * q)
    lam4 = (q - 1) / (3 * q)
    lam6 = (3 * (q - 1) - s) / (6 * q)
    a = (s - (q - 1)) / (6 * q ** 0.5)
    b = (q - 1 + s) / (6 * q ** 0.5)
    v = np.array([a, 1, 1, a, a, 1], dtype=float)
    v /= np.linalg.norm(v)
    beta = 2 / (9 * lam1 * s)
    rq = q ** 0.5
    mu_rep = (rq - 2 / rq + 1) / (3 * rq)
    mu_simple = (rq - 2 / rq - 2) / (3 * rq)
    return SpectralData(
        q=q,
        discriminant_root=s,
        eigenvalues=(lam1, lam2, lam2, lam4, lam4, lam6),
        top_vector_entry=a,
        bottom_vector_entry=b,
        top_vector=v,
        beta=beta,
        induced_eigenvalues=(mu_rep, mu_simple),
    )


def _principal_at_angles(q: float, theta) -> reps.Representation:
    t = (np.exp(1j * theta[0]), np.exp(1j * theta[1]))
    return reps.principal_series(q, t)


def c_w_value(w: AffineElement, q) -> float:
    """Quadratic form of the unit top eigenvector against the averaging
    operator of w^-1 in the 6-dimensional module at the trivial character."""
    q = float(q)
    rep = _principal_at_angles(q, (0.0, 0.0))
    m = rep.word_matrix(weyl.inverse(w)) / q ** (0.5 * weyl.length(w))
    v = spectral_data(q).top_vector
    return float(np.real(v @ m @ v))


def llt_estimate(w: AffineElement, n: int, q) -> float:
    """Leading-order n-step transition probability to relative position w:

        C_w q^(3 - 2 l(w)) / (27 sqrt(3) beta^4 pi (q-1)^6) * lam1^n n^-4.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    q = float(q)
    data = spectral_data(q)
    lw = weyl.length(w)
    const = (
        c_w_value(w, q)
        * q ** (3 - 2 * lw)
        / (27 * np.sqrt(3.0) * data.beta ** 4 * np.pi * (q - 1) ** 6)
    )
    return float(const * data.spectral_radius ** n * float(n) ** -4.0)


def eigen_surface(theta, q):
    """Six eigenvalues of the walk operator in the 6-dimensional module at
    the unit-torus character e^(i theta), sorted descending."""
    rep = _principal_at_angles(float(q), theta)
    m = reps.p_matrix(rep)
    assert np.abs(m - m.conj().T).max() < 1e-12
    vals = np.linalg.eigvalsh(m)
    return vals[::-1]


def induced_eigen_curve(phi: float, q):
    """Three eigenvalues of the walk operator in the 3-dimensional module."""
    rep = reps.induced_three_dim(float(q), np.exp(1j * phi))
    m = reps.p_matrix(rep)
    vals = np.linalg.eigvalsh(m)
    return vals[::-1]


def lemma34_check(theta, q) -> float:
    """Relative error of the sixth-order small-angle expansion of the
    principal spectral density:

        1/|c(e^(i theta))|^2  ~  q^6/(q-1)^6 t1^2 t2^2 (t1+t2)^2.

    Raises on the degenerate directions where the comparison polynomial
    vanishes."""
    from . import plancherel

    q = float(q)
    t1, t2 = theta
    g = t1 * t1 * t2 * t2 * (t1 + t2) ** 2
    if g == 0:
        raise ValueError("angle lies on the zero set of the comparison term")
    t = (np.exp(1j * t1), np.exp(1j * t2))
    exact = 1.0 / abs(plancherel.c_value(q, t)) ** 2
    approx = q ** 6 / (q - 1) ** 6 * g
    return abs(exact / approx - 1.0)


def perturbation_eigenvalues(theta, q):
    """Closed-form eigenvalues of the difference between the walk operator
    at e^(i theta) and at the trivial character: three plus-minus pairs
    (2/(3 sqrt(q))) |sin(x/2)| for x in {theta1, theta2, theta1+theta2}."""
    q = float(q)
    out = []
    for x in (theta[0], theta[1], theta[0] + theta[1]):
        v = 2 / (3 * q ** 0.5) * abs(np.sin(x / 2))
        out.extend([v, -v])
    return np.array(sorted(out, reverse=True))


def determinant_probe(q, grid: int = 24, normalized: bool = True):
    """Least-squares fit of the shifted determinant of the walk operator
    against the trigonometric basis [1, sum of first-shell cosines, sum of
    second-shell cosines]; returns (coefficients, max residual).

    With normalized=True the determinant is scaled by (3 sqrt(q))^6 (the
    determinant of the entrywise-displayed matrix), and the fit recovers the
    constants (150, -48, -2) exactly and q-independently; the source display
    carries prefactor 3 sqrt(q), which is the typo the fit documents."""
    q = float(q)
    lam1 = spectral_data(q).spectral_radius
    scale = (3 * q ** 0.5) ** 6 if normalized else 3 * q ** 0.5
    thetas = np.linspace(-np.pi, np.pi, grid, endpoint=False)
    rows, vals = [], []
    for th1 in thetas:
        for th2 in thetas:
            rep = _principal_at_angles(q, (th1, th2))
            m = reps.p_matrix(rep)
            d = np.linalg.det(m - lam1 * np.eye(6))
            shell1 = np.cos(th1) + np.cos(th2) + np.cos(th1 + th2)
            shell2 = (
                np.cos(th1 + 2 * th2) + np.cos(2 * th1 + th2) + np.cos(th1 - th2)
            )
            rows.append([1.0, shell1, shell2])
            vals.append(scale * np.real(d))
    rows = np.array(rows)
    vals = np.array(vals)
    coef, *_ = np.linalg.lstsq(rows, vals, rcond=None)
    resid = np.abs(rows @ coef - vals).max()
    return coef, float(resid)
