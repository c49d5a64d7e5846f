"""Closed-form constants, conjectures, exact volumes and R1 x R2 pipelines."""
import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy as sp
from scipy import integrate, special

from . import bloore
from .errors import QuadratureError, ValidationError
from .scans import EstimateSummary

STATUSES = ("paper-conjecture", "paper-exact", "paper-estimate")
_NAMESPACE = {"pi": sp.pi, "log": sp.log, "sqrt": sp.sqrt, "catalan": sp.Catalan}


def exact_value(expression, digits=30):
    """High-precision value of an expression string (rationals, pi, log, sqrt, catalan)."""
    expr = sp.sympify(expression, locals=_NAMESPACE, rational=True)
    return float(expr.evalf(digits))


@dataclass(frozen=True)
class ConjectureEntry:
    name: str
    expression: str
    value: float
    context: str
    status: str

    def as_dict(self):
        return {"name": self.name, "expression": self.expression, "value": self.value,
                "context": self.context, "status": self.status}


def _entry(name, expression, context, status):
    if status not in STATUSES:
        raise ValidationError(f"unknown status {status!r}")
    return ConjectureEntry(name, expression, exact_value(expression), context, status)


_QQ_R2 = {
    1: "1 - 4194304/(4849845*pi)",
    2: "(-44632342463 + 68578836480*log(2))/4190140110",
    3: ("-967504709/552123 - 18446744073709551616*(-67294453713397888"
        " + 5638997741091*pi)/(71729672378917671400466262753675*pi**2)"),
    4: ("(192210846322598002116984324520591"
        " - 277301145703236210250598232096768*log(2))/501570554133080277487570824"),
}
_TQ_R2 = {1: "1024/(135*pi**2)", 2: "71/99",
          3: "726923214848/(106376244975*pi**2)", 4: "125769/185725"}
_TQ_R1 = {1: "135*pi**2/2176", 2: "24/71", 3: "160446825*pi**2/5679087616",
          4: "(24/71)**2"}
_TQ_P = {1: "8/17", 2: "8/33", 3: "128/663", 4: "72442944/936239725"}
_QQ_P = {1: "0.164125", 2: "0.0330446"}

ENTRIES = tuple(
    [_entry(f"two-qubit/R2/beta={b}", e, "two-qubit HS diagonal ratio R2", "paper-exact")
     for b, e in _TQ_R2.items()]
    + [_entry(f"two-qubit/R1/beta={b}", e, "two-qubit HS off-diagonal ratio R1 at mu = 1",
              "paper-estimate" if b == 3 else "paper-conjecture")
       for b, e in _TQ_R1.items()]
    + [_entry(f"two-qubit/P/beta={b}", e, "two-qubit HS separability probability",
              "paper-estimate" if b == 3 else "paper-conjecture")
       for b, e in _TQ_P.items()]
    + [_entry(f"qubit-qutrit/R2/beta={b}", e,
              "qubit-qutrit HS R2 under 1-(1-eta)^(5/2) with S(eta)=S(1/eta)", "paper-exact")
       for b, e in _QQ_R2.items()]
    + [_entry("qubit-qutrit/R1/beta=1", "0.226468", "qubit-qutrit R1 sample estimate",
              "paper-estimate"),
       _entry("qubit-qutrit/R1/beta=2", "0.047679", "qubit-qutrit R1 sample estimate",
              "paper-estimate")]
    + [_entry(f"qubit-qutrit/P/beta={b}", e, "qubit-qutrit HS separability probability",
              "paper-estimate") for b, e in _QQ_P.items()]
    + [_entry("two-qubit/bures/P", "1680*(sqrt(2) - 1)/pi**8",
              "two-qubit Bures separability probability", "paper-conjecture"),
       _entry("two-qubit/bures/P/degenerate", "0.0396214",
              "rank-three two-qubit Bures probability estimate", "paper-estimate"),
       _entry("two-qubit/eigen/P", "0.242021", "eigenvalue-grid HS estimate",
              "paper-estimate"),
       _entry("two-qubit/eigen/P/degenerate", "0.12119",
              "rank-three eigenvalue-grid HS estimate", "paper-estimate"),
       _entry("scenario/bures-23-complex/P", "(4*catalan - 6 + pi)/pi",
              "Bures complex (2,3) scenario probability", "paper-exact"),
       _entry("two-qubit/quat/feasible-volume", "pi**12/7776000",
              "volume of quaternionic unit-diagonal W", "paper-exact")]
)


def list_entries():
    return list(ENTRIES)


def get_entry(name):
    for e in ENTRIES:
        if e.name == name:
            return e
    raise ValidationError(f"unknown registry entry {name!r}")


def registry_json():
    return json.dumps([e.as_dict() for e in ENTRIES], indent=2)


# ------------------------------------------------------------- volumes

def _gamma_exact(x2):
    """Gamma(x2 / 2) for a positive integer x2 as (Fraction, power of pi)."""
    if x2 <= 0:
        raise ValidationError("argument must be positive")
    if x2 % 2 == 0:
        return Fraction(math.factorial(x2 // 2 - 1)), Fraction(0)
    m = (x2 - 1) // 2  # Gamma(m + 1/2) = (2m)! / (4^m m!) sqrt(pi)
    return Fraction(math.factorial(2 * m), 4 ** m * math.factorial(m)), Fraction(1, 2)


@dataclass(frozen=True)
class ExactPi:
    """coefficient * pi**power with a rational coefficient and power."""
    coefficient: Fraction
    power: Fraction

    def log(self):
        """Natural logarithm; finite even when the float value underflows."""
        c = self.coefficient
        return (math.log(c.numerator) - math.log(c.denominator)
                + float(self.power) * math.log(math.pi))

    def __float__(self):
        return math.exp(self.log())

    def __mul__(self, other):
        return ExactPi(self.coefficient * other.coefficient, self.power + other.power)

    def __truediv__(self, other):
        return ExactPi(self.coefficient / other.coefficient, self.power - other.power)

    def expression(self):
        c = self.coefficient
        p = self.power
        if p == 0:
            return str(c)
        pi = "pi" if p == 1 else f"pi**({p})" if p.denominator != 1 else f"pi**{p}"
        if c.numerator == 1:
            return f"{pi}/{c.denominator}" if c.denominator != 1 else pi
        return f"{c.numerator}*{pi}/{c.denominator}" if c.denominator != 1 \
            else f"{c.numerator}*{pi}"


def _check_n_beta(n, beta):
    if int(n) != n or n < 1:
        raise ValidationError("n must be a positive integer")
    if beta not in bloore.BETAS:
        raise ValidationError("beta must be 1, 2, 3 or 4")


def andai_volume(n, beta):
    """Total HS volume of n x n density matrices with Dyson index beta, exactly."""
    _check_n_beta(n, beta)
    out = ExactPi(Fraction(1), Fraction(beta * n * (n - 1), 4))
    for i in range(1, n):
        out = out * ExactPi(*_gamma_exact(i * beta + 2))
    return out / ExactPi(*_gamma_exact(beta * n * (n - 1) + 2 * n))


def dirichlet_norm(n, beta, exact=False):
    """Integral of (prod rho_ii)^((n - 1) beta / 2) over the (n - 1)-simplex."""
    if n not in (4, 6):
        raise ValidationError("n must be 4 or 6")
    _check_n_beta(n, beta)
    a2 = (n - 1) * beta  # twice the exponent
    num = ExactPi(Fraction(1), Fraction(0))
    for _ in range(n):
        num = num * ExactPi(*_gamma_exact(a2 + 2))
    val = num / ExactPi(*_gamma_exact(n * a2 + 2 * n))
    return val if exact else float(val)


# ------------------------------------------------------------------ R2

def _logistic_beta_logpdf(y, a):
    return a * y - 2.0 * a * np.logaddexp(0.0, y) - special.betaln(a, a)


def _qq_r2_quad(beta, rel_tol=1e-11):
    """E[S(eta)^beta] with eta a product of two beta-prime(a, a) variables.

    Under the Dirichlet weight (prod rho)^(5 beta / 2), the scale-free ratio
    eta = rho11 rho66 / (rho33 rho44) is X1 X2 / (X3 X4) with i.i.d.
    Gamma(a) variables, a = 5 beta / 2 + 1, so log eta is the sum of two
    independent logistic-beta variables.
    """
    a = 2.5 * beta + 1.0

    def conv(z):
        res = integrate.quad(lambda y: math.exp(_logistic_beta_logpdf(y, a)
                                                + _logistic_beta_logpdf(z - y, a)),
                             -np.inf, np.inf, epsabs=0.0, epsrel=rel_tol, limit=200)
        return res[0]

    def sep(z):  # z = |log eta|, S symmetric under eta -> 1/eta
        return (1.0 - (-math.expm1(-z)) ** 2.5) ** beta

    val, err = integrate.quad(lambda z: sep(z) * conv(z), 0.0, np.inf,
                              epsabs=0.0, epsrel=rel_tol, limit=200)
    if not np.isfinite(val):
        raise QuadratureError("qubit-qutrit R2 quadrature failed")
    return 2.0 * val, 2.0 * err


def _qq_r2_qmc(beta, n_points, seed):
    from .numerics import integrate_simplex_qmc
    from .sepfit import reference_sepfunc
    a = 2.5 * beta

    def weight(x):
        full = np.column_stack([x, 1.0 - x.sum(axis=1)])
        return np.prod(np.clip(full, 0.0, None), axis=1) ** a, full

    def num(x):
        w, d = weight(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            eta = d[:, 0] * d[:, 5] / (d[:, 2] * d[:, 3])
        s = reference_sepfunc("qq-candidate", np.nan_to_num(eta, nan=1.0), extend=True)
        return w * s ** beta

    top = integrate_simplex_qmc(num, 5, n_points, seed=seed)
    bottom = integrate_simplex_qmc(lambda x: weight(x)[0], 5, n_points, seed=seed)
    value = top.value / bottom.value
    return value, value * (top.abs_error_estimate / top.value
                           + bottom.abs_error_estimate / bottom.value)


def r2_constant(system, beta, method="quad", n_points=2 ** 20, seed=0):
    """R2 from the reference separability function and the diagonal weight.

    Two-qubit: 2 int J_beta(mu) ((3 - mu^2) mu / 2)^beta d mu over its
    normalization. Qubit-qutrit: the Dirichlet average of the candidate
    1 - (1 - eta)^(5/2) to the power beta, extended by S(eta) = S(1/eta);
    ``method`` is ``quad`` (beta-prime reduction) or ``qmc`` (direct
    5-simplex integral).
    """
    beta = bloore.check_beta(beta)
    meta = {"system": system, "beta": beta, "method": method}
    if system == "two-qubit":
        from .sepfit import dyson_base
        num, err = bloore.jacobian_integral(beta, lambda mu: dyson_base(mu) ** beta)
        norm = bloore.jacobian_normalization(beta)
        value, se = num / norm, err / norm
        conj = _TQ_R2[beta]
    elif system == "qubit-qutrit":
        meta["eta_extension"] = "S(eta) = S(1/eta) for eta > 1"
        if method == "quad":
            value, se = _qq_r2_quad(beta)
        elif method == "qmc":
            value, se = _qq_r2_qmc(beta, n_points, seed)
            meta.update(n_points=n_points, seed=seed)
        else:
            raise ValidationError(f"unknown method {method!r}")
        conj = _QQ_R2[beta]
    else:
        bloore.system_shape(system)
    return EstimateSummary(f"R2/{system}/beta={beta}", float(value), float(se),
                           conj, exact_value(conj), meta)


def pipeline_probability(system, beta, r1):
    """R1 x R2 with the R1 standard error propagated (R2 error is negligible)."""
    beta = bloore.check_beta(beta)
    conj_table = _TQ_P if system == "two-qubit" else _QQ_P
    if isinstance(r1, EstimateSummary):
        if r1.name.startswith("R1/") and r1.name != f"R1/{system}/beta={beta}":
            raise ValidationError(f"R1 estimate {r1.name!r} does not match {system} beta={beta}")
        r1_value, r1_se, meta = r1.value, r1.std_error, dict(r1.metadata)
    else:
        r1_value, r1_se, meta = float(r1), 0.0, {}
    r2 = r2_constant(system, beta)
    conj = conj_table.get(beta)
    meta.update(r1=r1_value, r2=r2.value, r2_metadata=r2.metadata)
    return EstimateSummary(f"P/{system}/beta={beta}", r1_value * r2.value,
                           abs(r2.value) * r1_se + abs(r1_value) * r2.std_error,
                           conj, exact_value(conj) if conj else None, meta)
