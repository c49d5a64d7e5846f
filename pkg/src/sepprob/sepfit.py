"""Reference separability-function models, Dyson-index comparisons and fits."""
import json
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .errors import ValidationError

MODELS = ("dyson-2qubit", "qq-candidate", "qq-family")
FAMILIES = ("qq-one-param", "qq-two-param", "dyson-power", "r-power", "vad-power")
QQ_START = (2.5, 1.0)


def _check_unit(x, name):
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x < 0):
        raise ValidationError(f"{name} must be finite and nonnegative")
    return x


def dyson_base(mu):
    """(3 - mu^2) mu / 2, the normalized beta=1 two-qubit reference."""
    mu = np.asarray(mu, dtype=float)
    return 0.5 * (3.0 - mu * mu) * mu


def qq_family(eta, gamma, theta=1.0):
    """1 - (1 - eta^theta)^gamma on [0, 1]."""
    eta = np.asarray(eta, dtype=float)
    return 1.0 - (1.0 - eta ** theta) ** gamma


def reference_sepfunc(model, point, beta=1, gamma=2.5, theta=1.0, extend=False):
    """Evaluate a normalized reference separability function.

    ``dyson-2qubit`` is ((3 - mu^2) mu / 2)^beta; ``qq-candidate`` is
    1 - (1 - eta)^(5/2); ``qq-family`` is 1 - (1 - eta^theta)^gamma. With
    ``extend`` the argument may exceed 1 and the value is taken at its
    reciprocal (S(x) = S(1/x)).
    """
    x = _check_unit(point, "ratio variable")
    if extend:
        with np.errstate(divide="ignore"):
            x = np.where(x > 1.0, 1.0 / x, x)
    elif np.any(x > 1.0):
        raise ValidationError("ratio variable must lie in [0, 1] (or pass extend=True)")
    if model == "dyson-2qubit":
        if beta <= 0:
            raise ValidationError("beta must be positive")
        out = dyson_base(x) ** beta
    elif model == "qq-candidate":
        out = qq_family(x, 2.5, 1.0)
    elif model == "qq-family":
        if gamma <= 0 or theta <= 0:
            raise ValidationError("gamma and theta must be positive")
        out = qq_family(x, gamma, theta)
    else:
        raise ValidationError(f"unknown model {model!r}")
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class DysonCheck:
    rms: float
    max_abs: float


def _normalized(table):
    return np.asarray(table.normalized if hasattr(table, "normalized") else table, float)


def dyson_check(table_low, table_high, power):
    """Compare normalized ``table_high`` with (normalized ``table_low``)^power."""
    g_low = getattr(table_low, "grid", None)
    g_high = getattr(table_high, "grid", None)
    if g_low is not None and g_high is not None:
        if np.shape(g_low) != np.shape(g_high) or not np.allclose(g_low, g_high):
            raise ValidationError("tables are on different grids")
    low, high = _normalized(table_low), _normalized(table_high)
    if low.shape != high.shape:
        raise ValidationError("tables are on different grids")
    diff = high - low ** power
    return DysonCheck(float(np.sqrt(np.mean(diff ** 2))), float(np.max(np.abs(diff))))


@dataclass
class FitParams:
    family: str
    params: tuple
    sum_of_squares: float
    grid_size: int
    table_metadata: dict = field(default_factory=dict)

    def as_dict(self):
        return {"family": self.family, "params": list(self.params),
                "ss": self.sum_of_squares, "grid_size": self.grid_size,
                "table_metadata": self.table_metadata}

    def to_json(self):
        return json.dumps(self.as_dict(), sort_keys=True, indent=2, default=str)


def _fit_data(table, family):
    """(argument, target) arrays for the requested family.

    For the eigenvalue families the argument is the (points, rank) pair of
    the eigen-grid table.
    """
    if family in ("r-power", "vad-power"):
        points = np.asarray(table.points, dtype=float)
        return (points, table.rank), np.asarray(table.sep_fraction, dtype=float)
    grid = np.asarray(table.grid, dtype=float)
    values = _normalized(table)
    if family.startswith("qq"):
        if grid.ndim != 2:
            raise ValidationError("qq families need a (nu1, nu2) table")
        return grid[:, 0] * grid[:, 1], values
    if family == "dyson-power":
        if grid.ndim != 1:
            raise ValidationError("dyson-power needs a mu table")
        return grid, values
    raise ValidationError(f"unknown family {family!r}")


def family_model(family, arg, params):
    """Model values of a fit family at the given arguments."""
    if family == "qq-one-param":
        return qq_family(arg, params[0])
    if family == "qq-two-param":
        return qq_family(arg, params[0], params[1])
    if family == "dyson-power":
        return dyson_base(arg) ** params[0]
    if family in ("r-power", "vad-power"):
        from .eigenspace import model_values
        points, rank = arg
        return model_values(family, points, params[0], rank)
    raise ValidationError(f"unknown family {family!r}")


def sum_of_squares(table, family, params):
    arg, y = _fit_data(table, family)
    with np.errstate(invalid="ignore", over="ignore"):
        resid = y - family_model(family, arg, params)
    ss = float(np.sum(resid ** 2))
    return ss if np.isfinite(ss) else np.inf


def ss_curve(table, family, param_grid):
    """Sum of squares at each parameter value (or parameter tuple)."""
    return np.array([sum_of_squares(table, family, np.atleast_1d(p)) for p in param_grid])


def fit_family(table, family, start=None):
    """Least-squares fit with golden section (one parameter) or Nelder-Mead (two)."""
    if family not in FAMILIES:
        raise ValidationError(f"unknown family {family!r}")
    arg, y = _fit_data(table, family)
    if not np.any(y):
        raise ValidationError("table is identically zero")
    meta = dict(getattr(table, "metadata", {}) or {})
    if family == "qq-two-param":
        x0 = np.asarray(start if start is not None else QQ_START, dtype=float)

        def f2(p):
            if np.any(p <= 0):
                return np.inf
            return sum_of_squares(table, family, p)

        res = optimize.minimize(f2, x0, method="Nelder-Mead",
                                options={"xatol": 1e-9, "fatol": 1e-15, "maxiter": 4000})
        params = tuple(float(v) for v in res.x)
        return FitParams(family, params, float(res.fun), len(y), meta)
    x0 = float(start if start is not None else (QQ_START[0] if family.startswith("qq") else 1.0))

    def f1(p):
        return sum_of_squares(table, family, (p,)) if p > 0 else np.inf

    res = optimize.minimize_scalar(f1, bracket=(0.5 * x0, x0), method="golden",
                                   options={"xtol": 1e-10})
    return FitParams(family, (float(res.x),), float(res.fun), len(y), meta)
