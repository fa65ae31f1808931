"""Maximization of homogeneous polynomials over the standard simplex.

Every solve is a batch of projected gradient ascent runs (random Dirichlet
starts, coordinate vertices, barycenter, and starts confined to faces),
followed by a damped Newton polish of the stationarity system on the
support of each promising end point.  Global optimality is not proven; the
number of restarts that reach the best value is reported as confidence.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from .pattern import Pattern
from .polynomial import HomogeneousPolynomial
from .symmetry import active_count_vectors, equivalence_classes, reduce

ARMIJO = 1e-4
MAX_HALVINGS = 50
STEP_TOL = 1e-15
LEX_DIGITS = 9
# ascent hands over to Newton once first-order violation is this small
ASCENT_KKT_TOL = 1e-5
AGREE_RTOL = 1e-6


@dataclass(frozen=True)
class OptConfig:
    restarts: int = 200
    max_iters: int = 5000
    kkt_tol: float = 1e-10
    value_tol: float = 1e-9
    seed: int = 0
    rational_max_denominator: int = 10**6
    exact_mode: bool = False
    support_threshold: float = 1e-7
    face_starts: int = 3

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if min(self.kkt_tol, self.value_tol, self.support_threshold) <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class Certification:
    weights: tuple[Fraction, ...]
    value: Fraction
    exact_kkt_verified: bool


@dataclass(frozen=True)
class LagrangianRecord:
    value: float
    witness: tuple[float, ...]
    support: tuple[int, ...]
    kkt_residual: float
    restarts_agreeing: int
    converged: bool
    certified: Certification | None = None
    alternatives: tuple[tuple[float, ...], ...] = ()
    full_value: float | None = None
    reduced_value: float | None = None

    @property
    def consistent(self) -> bool:
        if self.full_value is None or self.reduced_value is None:
            return True
        return abs(self.full_value - self.reduced_value) <= OptConfig.value_tol

    def optimal_weightings(self) -> list[tuple]:
        out = [self.witness, *self.alternatives]
        if self.certified is not None:
            out.append(self.certified.weights)
        return out


@dataclass(frozen=True)
class BlowupDensityRecord:
    lagrangian: LagrangianRecord
    density: float
    exact_density: Fraction | None = None


@dataclass
class _Candidate:
    x: np.ndarray
    value: float
    main: bool = field(default=False)
    kkt: float = math.inf


def project_rows(Y: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Euclidean projection of each row onto the simplex face selected by its mask row."""
    n = Y.shape[1]
    Z = np.where(mask, Y, -np.inf)
    U = -np.sort(-Z, axis=1)
    css = np.cumsum(np.where(np.isfinite(U), U, 0.0), axis=1) - 1.0
    ind = np.arange(1, n + 1)
    cond = U - css / ind > 0
    rho = n - 1 - np.argmax(cond[:, ::-1], axis=1)
    theta = css[np.arange(Y.shape[0]), rho] / (rho + 1)
    return np.where(mask, np.maximum(Y - theta[:, None], 0.0), 0.0)


def _ascend(poly: HomogeneousPolynomial, X: np.ndarray, mask: np.ndarray, max_iters: int):
    """Projected gradient ascent with Armijo backtracking from step 1, batched over rows."""
    X = project_rows(X, mask)
    vals = poly.batch_value(X)
    active = np.arange(X.shape[0])
    converged = np.zeros(X.shape[0], dtype=bool)
    for _ in range(max_iters):
        if active.size == 0:
            break
        x0 = X[active]
        m0 = mask[active]
        v0, g = poly.batch_value_and_gradient(x0)
        g = np.where(m0, g, 0.0)
        step = np.ones(active.size)
        new_x = x0.copy()
        new_v = v0.copy()
        accepted = np.zeros(active.size, dtype=bool)
        pending = np.arange(active.size)
        for _ in range(MAX_HALVINGS):
            cand = project_rows(x0[pending] + step[pending, None] * g[pending], m0[pending])
            cv = poly.batch_value(cand)
            gain = np.einsum("ij,ij->i", g[pending], cand - x0[pending])
            ok = cv >= v0[pending] + ARMIJO * gain
            hit = pending[ok]
            new_x[hit] = cand[ok]
            new_v[hit] = cv[ok]
            accepted[hit] = True
            pending = pending[~ok]
            if pending.size == 0:
                break
            step[pending] *= 0.5
        moved = np.max(np.abs(new_x - x0), axis=1)
        done = ~accepted | (moved <= STEP_TOL) | (new_v - v0 <= 0)
        done |= _batch_kkt(x0, g, m0) <= ASCENT_KKT_TOL
        X[active] = new_x
        vals[active] = new_v
        converged[active[done]] = True
        active = active[~done]
    return X, vals, converged


def _batch_kkt(X: np.ndarray, G: np.ndarray, mask: np.ndarray, threshold: float = 1e-7) -> np.ndarray:
    supp = X > threshold
    count = np.maximum(supp.sum(axis=1), 1)
    hi = np.where(supp, G, -np.inf).max(axis=1)
    lo = np.where(supp, G, np.inf).min(axis=1)
    mean = np.where(supp, G, 0.0).sum(axis=1) / count
    off = np.where(mask & ~supp, G - mean[:, None], 0.0).max(axis=1)
    return np.maximum(hi - lo, off)


def _newton(poly: HomogeneousPolynomial, x: np.ndarray, support: np.ndarray, iters: int = 60) -> np.ndarray | None:
    """Solve grad_S p = mu, sum x_S = 1 by damped Newton; None if it leaves the simplex."""
    S = np.flatnonzero(support)
    k = S.size
    x = np.where(support, x, 0.0)
    x = x / x.sum()
    mu = float(np.mean(poly.float_gradient(x)[S]))

    def residual(xv, muv):
        g = poly.float_gradient(xv)
        return np.concatenate([g[S] - muv, [xv[S].sum() - 1.0]])

    F = residual(x, mu)
    for _ in range(iters):
        norm = np.linalg.norm(F, np.inf)
        if norm < 1e-16:
            break
        H = poly.hessian(x)
        J = np.zeros((k + 1, k + 1))
        J[:k, :k] = H[np.ix_(S, S)]
        J[:k, k] = -1.0
        J[k, :k] = 1.0
        d = np.linalg.lstsq(J, -F, rcond=None)[0]
        t = 1.0
        while t > 1e-6:
            xt = x.copy()
            xt[S] = x[S] + t * d[:k]
            mut = mu + t * d[k]
            Ft = residual(xt, mut)
            if np.linalg.norm(Ft, np.inf) < norm:
                break
            t *= 0.5
        else:
            break
        x, mu, F = xt, mut, Ft
    if np.any(x[S] < 0):
        return None
    x = np.clip(x, 0.0, None)
    return x / x.sum()


def kkt_residual_poly(poly: HomogeneousPolynomial, x: Sequence, support_threshold: float = 1e-7):
    """Largest violation of first-order optimality on the simplex.

    Support partials must coincide; partials off the support must not exceed
    their mean.  Exact when x holds Fractions.
    """
    if any(isinstance(v, Fraction) for v in x):
        g = poly.gradient(list(x))
    else:
        g = [float(v) for v in poly.float_gradient(x)]
    supp = [i for i, xi in enumerate(x) if xi > support_threshold]
    if not supp:
        return math.inf
    on = [g[i] for i in supp]
    res = max(on) - min(on)
    mu = sum(on) / len(on)
    for i in range(len(x)):
        if i not in supp:
            res = max(res, g[i] - mu)
    return res


def kkt_residual(P: Pattern, x: Sequence, support_threshold: float = 1e-7):
    return kkt_residual_poly(P.polynomial, x, support_threshold)


def _polish(poly: HomogeneousPolynomial, x: np.ndarray, cfg: OptConfig) -> tuple[np.ndarray, float, float]:
    base_v = poly.float_value(x)
    base_k = float(kkt_residual_poly(poly, x, cfg.support_threshold))
    best = (x, base_v, base_k)
    if base_k <= 1e-15:
        return best
    support = x > cfg.support_threshold
    # Newton on the current support, then on ever smaller supports obtained
    # by dropping the lightest member
    while support.any():
        y = _newton(poly, x, support)
        if y is not None:
            small = (y > 0) & (y <= cfg.support_threshold)
            if small.any():
                y = _newton(poly, y, y > cfg.support_threshold)
        if y is not None:
            v = poly.float_value(y)
            kk = float(kkt_residual_poly(poly, y, cfg.support_threshold))
            if v >= base_v - cfg.value_tol * 1e-2 and kk < best[2]:
                best = (y, v, kk)
                if kk <= cfg.kkt_tol:
                    break
        idx = np.flatnonzero(support)
        if idx.size <= 1:
            break
        support = support.copy()
        support[idx[np.argmin(x[idx])]] = False
    return best


def _lex_key(x: Sequence[float]) -> tuple:
    return tuple(round(float(v), LEX_DIGITS) for v in x)


def _starts(dim: int, cfg: OptConfig, rng: np.random.Generator):
    main = [np.full(dim, 1.0 / dim)]
    main += list(np.eye(dim))
    main += list(rng.dirichlet(np.ones(dim), size=cfg.restarts))
    return np.array(main)


def _face_starts(faces: list[np.ndarray], cfg: OptConfig, rng: np.random.Generator):
    rows, masks = [], []
    for face in faces:
        k = int(face.sum())
        bary = np.where(face, 1.0 / k, 0.0)
        rows.append(bary)
        masks.append(face)
        for w in rng.dirichlet(np.ones(k), size=cfg.face_starts):
            x = np.zeros(face.size)
            x[face] = w
            rows.append(x)
            masks.append(face)
    return np.array(rows), np.array(masks, dtype=bool)


def _faces(dim: int, best_support: np.ndarray) -> list[np.ndarray]:
    if dim <= 6:
        out = []
        for k in range(2, dim):
            for sub in itertools.combinations(range(dim), k):
                m = np.zeros(dim, dtype=bool)
                m[list(sub)] = True
                out.append(m)
        return out
    idx = np.flatnonzero(best_support)
    out = []
    for k in (1, 2):
        if idx.size - k < 2:
            continue
        for drop in itertools.combinations(idx, k):
            m = best_support.copy()
            m[list(drop)] = False
            out.append(m)
    return out


def maximize_on_simplex(poly: HomogeneousPolynomial, dim: int, cfg: OptConfig, stream: int = 0) -> LagrangianRecord:
    if poly.dim != dim:
        raise ValueError(f"objective has {poly.dim} variables, expected {dim}")
    rng = np.random.default_rng([cfg.seed, stream])

    X = _starts(dim, cfg, rng)
    mask = np.ones_like(X, dtype=bool)
    X, vals, conv = _ascend(poly, X, mask, cfg.max_iters)
    best_row = X[int(np.argmax(vals))]
    faces = _faces(dim, best_row > cfg.support_threshold)
    if faces:
        FX, FM = _face_starts(faces, cfg, rng)
        FX, fvals, fconv = _ascend(poly, FX, FM, cfg.max_iters)
        all_X = np.vstack([X, FX])
        all_v = np.concatenate([vals, fvals])
        all_conv = np.concatenate([conv, fconv])
    else:
        all_X, all_v, all_conv = X, vals, conv
    n_main = X.shape[0]

    top = float(all_v.max())
    cutoff = top - 1e-6 * max(1.0, abs(top))
    order = np.lexsort((np.arange(all_v.size), -all_v))
    seen = {}
    # best end point of every support pattern first, so that faces survive
    # when a continuum of interior optima floods the shortlist
    supports = {}
    for i in order:
        if all_v[i] < cutoff:
            break
        supports.setdefault(tuple(all_X[i] > cfg.support_threshold), i)
    for i in [*supports.values(), *order]:
        if all_v[i] < cutoff or len(seen) >= 64 + len(supports):
            break
        key = tuple(np.round(all_X[i], 7))
        if key not in seen:
            seen[key] = i
    polished: list[_Candidate] = []
    for key, i in seen.items():
        x, v, kk = _polish(poly, all_X[i].copy(), cfg)
        polished.append(_Candidate(x, v, i < n_main, kk))

    best = _choose(polished, cfg)
    agreeing = int(np.sum(all_v[:n_main] >= best.value - AGREE_RTOL * max(abs(best.value), 1e-300)))
    return _record(best, polished, cfg, agreeing, bool(all_conv.all()))


def _choose(cands: list[_Candidate], cfg: OptConfig) -> _Candidate:
    good = [c for c in cands if c.kkt <= max(cfg.kkt_tol, 1e-8)] or cands
    top = max(c.value for c in good)
    tied = [c for c in good if c.value >= top - 1e-12 * max(1.0, abs(top))]
    return min(tied, key=lambda c: _lex_key(c.x))


def _record(best: _Candidate, cands: list[_Candidate], cfg: OptConfig, agreeing: int, pga_converged: bool) -> LagrangianRecord:
    alts = []
    keys = {_lex_key(best.x)}
    for c in sorted(cands, key=lambda c: _lex_key(c.x)):
        if c.value >= best.value - cfg.value_tol and c.kkt <= 1e-8:
            k = _lex_key(c.x)
            if k not in keys:
                keys.add(k)
                alts.append(tuple(float(v) for v in c.x))
    witness = tuple(float(v) for v in best.x)
    support = tuple(i + 1 for i, v in enumerate(witness) if v > cfg.support_threshold)
    return LagrangianRecord(
        value=best.value,
        witness=witness,
        support=support,
        kkt_residual=best.kkt,
        restarts_agreeing=agreeing,
        converged=best.kkt <= cfg.kkt_tol,
        alternatives=tuple(alts[:32]),
    )


def rational_certify_poly(poly: HomogeneousPolynomial, x: Sequence[float], cfg: OptConfig) -> Certification | None:
    q = [Fraction(float(v)).limit_denominator(cfg.rational_max_denominator) if v > 0 else Fraction(0) for v in x]
    total = sum(q)
    if total <= 0:
        return None
    q = [v / total for v in q]
    if max(abs(float(a) - float(b)) for a, b in zip(q, x)) > 1e-6:
        return None
    g = poly.gradient(q)
    supp = [i for i, v in enumerate(q) if v > 0]
    common = g[supp[0]]
    if any(g[i] != common for i in supp):
        return None
    if any(g[i] > common for i in range(len(q)) if q[i] == 0):
        return None
    value = poly.value(q)
    if abs(float(value) - float(poly.value([float(v) for v in x]))) > cfg.value_tol:
        return None
    return Certification(tuple(q), Fraction(value), True)


def rational_certify(P: Pattern, x: Sequence[float], cfg: OptConfig) -> Certification | None:
    """Round a KKT point to small rationals and check stationarity exactly.

    Success certifies an exact critical value, hence an exact lower bound on
    the Lagrangian.  Returns None when the weights are not near rationals
    with denominator at most ``cfg.rational_max_denominator``.
    """
    return rational_certify_poly(P.polynomial, x, cfg)


def lagrangian(P: Pattern, cfg: OptConfig = OptConfig()) -> LagrangianRecord:
    """Maximum of the blowup polynomial of P over the simplex.

    Both the full objective and the symmetry-reduced objectives (one per
    choice of active members per equivalence class) are maximized.
    """
    poly = P.polynomial
    full = maximize_on_simplex(poly, P.n, cfg, stream=0)
    cands = [_Candidate(np.array(full.witness), full.value, True, full.kkt_residual)]
    cands += [_Candidate(np.array(a), poly.float_value(a), True, float(kkt_residual_poly(poly, a, cfg.support_threshold)))
              for a in full.alternatives]

    part = equivalence_classes(P)
    reduced_value = None
    if not part.is_trivial and P.edges:
        for s, counts in enumerate(active_count_vectors(part), start=1):
            ro = reduce(P, part, counts)
            rec = maximize_on_simplex(ro.polynomial, len(part.classes), cfg, stream=s)
            for y in [rec.witness, *rec.alternatives]:
                x = np.array(ro.lift(list(y)), dtype=float)
                v = poly.float_value(x)
                kk = float(kkt_residual_poly(poly, x, cfg.support_threshold))
                if kk > cfg.kkt_tol:
                    x, v, kk = _polish(poly, x, cfg)
                cands.append(_Candidate(x, v, False, kk))
                reduced_value = v if reduced_value is None else max(reduced_value, v)

    best = _choose(cands, cfg)
    record = _record(best, cands, cfg, full.restarts_agreeing, full.converged)
    record = replace(record, full_value=full.value, reduced_value=reduced_value)
    if cfg.exact_mode:
        for w in record.optimal_weightings():
            cert = rational_certify(P, w, cfg)
            if cert is not None:
                record = replace(record, certified=cert)
                break
    return record


def blowup_density(P: Pattern, cfg: OptConfig = OptConfig()) -> BlowupDensityRecord:
    rec = lagrangian(P, cfg)
    scale = math.factorial(P.r)
    exact = scale * rec.certified.value if rec.certified is not None else None
    return BlowupDensityRecord(rec, scale * rec.value, exact)
