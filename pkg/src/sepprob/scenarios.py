"""Low-dimensional two-qubit scenarios with closed-form separability functions.

A scenario keeps the four diagonal entries free and lets one or two
off-diagonal entries vary over a field of Dyson index beta. Its volume
element factors into a diagonal part D(rho11, rho22, mu) and one radial
factor per free entry, so separable and total volumes are

    V = int D(rho11, rho22, mu) S(mu) d rho11 d rho22 d mu,

with S the off-diagonal integral over the PPT region (separable) or over
the whole feasible region (total). rho33 is eliminated in favour of
mu = sqrt(rho11 rho44 / (rho22 rho33)).
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .numerics import CATALAN, Box, integrate_adaptive

PI = math.pi
_TRUNC_CONST = 4.0 - math.sqrt(2.0) * math.log(3.0 + 2.0 * math.sqrt(2.0))

NAMES = ("hs-23-real", "hs-23-complex", "hs-23-trunc", "hs-23-quat",
         "hs-1423-real", "hs-1423-complex",
         "bures-23-real", "bures-23-complex", "bures-23-trunc", "bures-23-quat",
         "bures-1423-real", "bures-1423-complex", "bures-1423-quat")


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    entries: tuple
    beta: int
    metric: str
    offdiag_weight: float = 1.0
    has_element: bool = True

    @property
    def symmetric(self):
        return (1, 4) in self.entries


_BETA = {"real": 1, "complex": 2, "trunc": 3, "quat": 4}


def _spec(name):
    if name not in NAMES:
        raise ValidationError(f"unknown scenario {name!r}")
    metric, pairs, field = name.split("-")
    entries = ((2, 3),) if pairs == "23" else ((1, 4), (2, 3))
    weight = 1.0
    element = True
    if name == "bures-1423-complex":
        weight = 2.0  # per entry; see closed form for this scenario
    if name == "bures-23-trunc":
        weight = _TRUNC_CONST / 8.0
        element = False
    return ScenarioSpec(name, entries, _BETA[field], metric, weight, element)


CATALOG = {n: _spec(n) for n in NAMES}


def get_spec(name):
    try:
        return CATALOG[name]
    except KeyError:
        raise ValidationError(f"unknown scenario {name!r}") from None


# --------------------------------------------------------- closed forms

def _closed_23(metric, beta, mu):
    m = min(mu, 1.0)
    if metric == "hs":
        return {1: 2.0 * m, 2: PI * m ** 2, 3: 4.0 * PI * m ** 3 / 3.0,
                4: PI ** 2 * m ** 4 / 2.0}[beta]
    if mu >= 1.0:
        return {1: PI, 2: 2.0 * PI, 3: PI ** 2 * _TRUNC_CONST / 8.0,
                4: 4.0 * PI ** 2 / 3.0}[beta]
    c = math.sqrt(1.0 - mu * mu)
    if beta == 1:
        return 2.0 * math.asin(mu)
    if beta == 2:
        return 2.0 * PI * (1.0 - c)
    if beta == 3:
        return 0.25 * PI * (math.asin(mu) - mu * c) * _TRUNC_CONST
    return (2.0 / 3.0) * PI ** 2 * (2.0 - c * (mu * mu + 2.0))


def _closed_1423(metric, beta, mu):
    if metric == "hs":
        m = mu if mu <= 1.0 else 1.0 / mu
        return 4.0 * m if beta == 1 else PI ** 2 * m ** 2
    if mu == 1.0:
        return {1: PI ** 2, 2: 16.0 * PI ** 2, 4: 16.0 * PI ** 4 / 9.0}[beta]
    if mu > 1.0:
        s = math.sqrt(mu * mu - 1.0)
        if beta == 1:
            return 2.0 * PI * math.asin(1.0 / mu)
        if beta == 2:
            return 16.0 * PI ** 2 * (1.0 - s / mu)
        return -8.0 * PI ** 4 * (2.0 * (s - mu) * mu ** 2 + s) / (9.0 * mu ** 3)
    c = math.sqrt(1.0 - mu * mu)
    if beta == 1:
        return 2.0 * PI * math.asin(mu)
    if beta == 2:
        return 16.0 * PI ** 2 * (1.0 - c)
    return (8.0 / 9.0) * PI ** 4 * (2.0 - c * (mu * mu + 2.0))


def closed_sepfunc(name, mu, normalized=False):
    """Closed-form separability function of a scenario at mu > 0.

    Values for mu > 1 follow the piecewise forms (constant beyond mu = 1 for
    single-entry scenarios, S(mu) = S(1/mu) for the (1,4),(2,3) ones).
    ``normalized`` divides by the value at mu = 1.
    """
    spec = get_spec(name)
    mus = np.atleast_1d(np.asarray(mu, dtype=float))
    if np.any(~(mus > 0)) or np.any(~np.isfinite(mus)):
        raise ValidationError("mu must be positive and finite")
    fn = _closed_23 if spec.entries == ((2, 3),) else _closed_1423
    out = np.array([fn(spec.metric, spec.beta, float(m)) for m in mus])
    if normalized:
        out = out / fn(spec.metric, spec.beta, 1.0)
    return float(out[0]) if np.ndim(mu) == 0 else out


# ------------------------------------------------- numeric re-derivation

def _unit_sphere_area(dim):
    return 2.0 * PI ** (dim / 2.0) / math.gamma(dim / 2.0)


def ball_integral(metric, beta, radius, rel_tol=1e-12):
    """Integral of the per-entry off-diagonal factor over a radius-a ball.

    HS: the ball volume. Bures: int (1 - |x|^2)^(-1/2) dx, computed after
    the substitution r = sin t, which removes the endpoint singularity.
    """
    a = min(float(radius), 1.0)
    if a <= 0:
        return 0.0
    area = _unit_sphere_area(beta)
    if metric == "hs":
        f, top = (lambda r: r ** (beta - 1)), a
    else:
        f, top = (lambda t: math.sin(t) ** (beta - 1)), math.asin(a)
    res = integrate_adaptive(f, Box((0.0,), (top,)), rel_tol=rel_tol, abs_tol=1e-300)
    return area * res.value


def _radii(spec, mu):
    out = []
    for entry in spec.entries:
        out.append(min(mu, 1.0) if entry == (2, 3) else min(1.0, 1.0 / mu))
    return out


def derive_sepfunc_numeric(name, mu_grid, rel_tol=1e-12):
    """Separability function from direct integration over the PPT region.

    The PPT constraints reduce to |w23| <= mu and |w14| <= 1/mu, next to the
    feasibility constraints |w| <= 1, so each free entry contributes a ball
    integral of its off-diagonal factor.
    """
    spec = get_spec(name)
    mus = np.asarray(mu_grid, dtype=float)
    if np.any(~(mus > 0)):
        raise ValidationError("mu grid must be positive")
    out = np.empty(mus.shape)
    for i, mu in enumerate(mus.ravel()):
        val = 1.0
        for a in _radii(spec, float(mu)):
            val *= spec.offdiag_weight * ball_integral(spec.metric, spec.beta, a, rel_tol)
        out.flat[i] = val
    return out


# --------------------------------------------------- volume elements

def _diag(r11, r22, mu, c=None):
    """(rho33, rho44, |d rho33 / d mu|) at fixed rho11, rho22.

    ``c`` = rho33 + rho44 may be passed when it is known more accurately
    than 1 - rho11 - rho22.
    """
    if c is None:
        c = 1.0 - r11 - r22
    den = mu * mu * r22 + r11
    r33 = r11 * c / den
    r44 = mu * mu * r22 * c / den
    return r33, r44, 2.0 * mu * r11 * r22 * c / (den * den)


def diagonal_factor(name, r11, r22, mu, rest=None):
    """Diagonal part of the scenario volume element in (rho11, rho22, mu).

    Accepts scalars or broadcastable arrays; points outside the feasible
    region get weight zero. ``rest`` optionally supplies rho33 + rho44.
    """
    spec = get_spec(name)
    if not spec.has_element:
        raise ValidationError(f"no volume element is available for {name}")
    if rest is None:
        rest = 1.0 - np.asarray(r11, dtype=float) - np.asarray(r22, dtype=float)
    r11, r22, mu, c = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (r11, r22, mu, rest)))
    with np.errstate(all="ignore"):
        out = _diag_weight(spec, r11, r22, mu, c)
        ok = (r11 > 0) & (r22 > 0) & (c > 0) & (mu > 0)
        out = np.where(ok & np.isfinite(out), out, 0.0)
    return float(out) if out.ndim == 0 else out


def _diag_weight(spec, r11, r22, mu, c):
    r33, r44, dmu = _diag(r11, r22, mu, c)
    b = spec.beta
    if spec.metric == "hs":
        w = (r22 * r33) ** (0.5 * b)
        if spec.symmetric:
            w = w * (r11 * r44) ** (0.5 * b)
        return w * dmu
    if not spec.symmetric:
        den = mu * mu * r22 + r11
        q = mu * mu * r22 * r22 + (r22 + c) * r11
        if b == 1:
            return np.sqrt(r11 * c * r22) / (4.0 * den * np.sqrt(q))
        if b == 2:
            return r11 * r22 * c / (4.0 * den * q)
        return (r11 * r22 * c) ** 2 / (4.0 * den * q * q)
    g = (r22 + r33) * (r11 + r44)
    if b == 1:
        return 0.125 / np.sqrt(g) * dmu
    prod = r11 * r22 * r33 * r44
    if b == 2:
        return 0.125 * np.sqrt(prod) / g * dmu
    return 0.125 * prod ** 1.5 / (g * g) * dmu


def element_12_23_real(r11, r22, x12, x23, mu):
    """Bures volume element of the real [(1,2),(2,3)] scenario (no report).

    The element does not factor into diagonal and off-diagonal parts, so no
    univariate separability function is derived from it.
    """
    m2 = mu * mu
    den = r22 * m2 + r11
    q = -r11 * r11 + r11 + m2 * r22 * r22
    k = (m2 - 1.0) * r22 + 1.0
    A = -r11 ** 2 * r22 ** 2 * (r11 + r22 - 1.0) * k
    B = den ** 2
    C = x12 ** 2 + x23 ** 2 - 1.0
    D = (r11 + r22) * (x12 ** 2 * r22 * den ** 2 - k * q)
    E = -x23 ** 2 * r22 * (r11 + r22 - 1.0) * q
    val = A / (B * C * (D + E))
    return 0.25 * math.sqrt(val) if val > 0 else float("nan")


# ------------------------------------------------------------ reports

@dataclass(frozen=True)
class ScenarioReport:
    name: str
    total_volume: float
    total_error: float
    separable_volume: float
    separable_error: float
    probability: float
    probability_error: float

    def as_dict(self):
        return dict(self.__dict__)


def _tanh_sinh(h, t_max=5.0):
    """Tanh-sinh nodes on (0, 1) as (x, 1 - x, weight), all computed stably."""
    t = np.arange(-int(round(t_max / h)), int(round(t_max / h)) + 1) * h
    s = 0.5 * PI * np.sinh(t)
    with np.errstate(over="ignore"):
        x = 1.0 / (1.0 + np.exp(-2.0 * s))
        y = 1.0 / (1.0 + np.exp(2.0 * s))
    w = h * 0.5 * PI * np.cosh(t) * x * y * 2.0
    return x, y, w


def _integrate_mu(fn, h=1.0 / 16.0):
    """int_0^inf over mu and the (rho11, rho22) triangle of fn(r11, r22, mu).

    ``fn(r11, r22, mu, rest)`` is vectorized, with rest = 1 - r11 - r22
    supplied without cancellation. The triangle is mapped to the unit square
    (r11 = a, r22 = (1 - a) b), mu > 1 is folded onto (0, 1) with nu = 1/mu,
    and every axis uses tanh-sinh nodes, which absorb the algebraic endpoint
    singularities. The error estimate is the change from step 2h to h.
    """
    def level(step):
        x, y, w = _tanh_sinh(step)
        a, b = x[:, None], x[None, :]
        r11 = np.broadcast_to(a, (len(x), len(x)))
        r22 = y[:, None] * b
        rest = y[:, None] * y[None, :]
        wab = (w[:, None] * y[:, None]) * w[None, :]
        total = 0.0
        for k in range(len(x)):
            for mu, jac in ((x[k], 1.0), (1.0 / x[k], x[k] ** -2.0)):
                with np.errstate(all="ignore"):
                    vals = jac * fn(r11, r22, mu, rest)
                vals = np.where(np.isfinite(vals), vals, 0.0)
                total += w[k] * float(np.sum(wab * vals))
        return total

    fine = level(h)
    coarse = level(2.0 * h)
    return fine, abs(fine - coarse)


def scenario_volumes(name):
    """(total, total error, separable, separable error)."""
    spec = get_spec(name)
    if not spec.has_element:
        raise ValidationError(f"no volume element is available for {name}")
    full = float(np.prod([spec.offdiag_weight * ball_integral(spec.metric, spec.beta, 1.0)
                          for _ in spec.entries]))

    def sep(r11, r22, mu, rest):
        return diagonal_factor(name, r11, r22, mu, rest) * closed_sepfunc(name, mu)

    tot, tot_err = _integrate_mu(
        lambda r11, r22, mu, rest: diagonal_factor(name, r11, r22, mu, rest))
    sv, sv_err = _integrate_mu(sep)
    return full * tot, full * tot_err, sv, sv_err


def scenario_report(name):
    """Total and separable volumes and the separability probability."""
    tot, tot_err, sv, sv_err = scenario_volumes(name)
    p = sv / tot
    p_err = p * (sv_err / abs(sv) + tot_err / abs(tot)) if sv else tot_err
    return ScenarioReport(name, tot, tot_err, sv, sv_err, p, p_err)


# pinned high-precision values printed alongside the closed forms
EXPECTED = {
    "hs-23-real": {"probability": 3 * PI / 16},
    "hs-23-complex": {"probability": 1 / 3},
    "hs-23-quat": {"probability": 1 / 10},
    "bures-23-real": {"total": PI ** 2 / 12, "separable": 0.3658435525,
                      "probability": 0.4448124200},
    "bures-23-complex": {"total": PI ** 3 / 64,
                         "separable": PI ** 2 * (4 * CATALAN - 6 + PI) / 64,
                         "probability": (4 * CATALAN - 6 + PI) / PI},
    "bures-23-quat": {"total": PI ** 4 / 768, "separable": 0.012954754466,
                      "probability": 0.10213883862},
    "bures-1423-real": {"total": PI ** 3 / 64, "separable": 0.1473885131,
                        "probability": 0.3042243652},
    "bures-1423-complex": {"total": PI ** 4 / 192, "separable": 0.096915844,
                           "probability": 0.19102778},
    "bures-1423-quat": {"total": PI ** 6 / 245760, "separable": 0.000471134100,
                        "probability": 0.120436049},
}
