"""The blind branching model of square-free digit walks.

Treats each child b*n + d as independently square-free with probability
rho = 6/pi^2. Under that model the probability P_k that a walk tree rooted
at a square-free integer dies within k generations satisfies

    P_1 = (1 - rho)^b,      P_{k+1} = ((1 - rho) + rho * P_k)^b,

whose limit ell is the model's extinction probability, and the model's
predicted dead-end density is rho * (1 - rho)^b. The toolkit's headline
comparison is this prediction against the true constant from `euler` --
they disagree by orders of magnitude, which is the point.

rho is computed from the pi^2 closed form here, independently of the Euler
product machinery, so the model path and the truth path share no code; the
test suite cross-checks the two values of rho against each other.

All arithmetic is interval-based, as in `euler`. The fixed point is
certified a posteriori via the contraction bound: the iteration map f has
f'(x) = b*rho*((1-rho) + rho*x)^(b-1), so once an enclosure X containing
ell gives sup |f'| = lam < 1, the truth lies within |f(m) - m|/(1 - lam)
of any point m in X.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import mpmath
from mpmath import iv

from . import euler
from .euler import HPReal, _hp_from_iv, _iv_dps

__all__ = [
    "ModelParams",
    "ModelTrace",
    "model_params",
    "rho",
    "p1",
    "iterate_p",
    "predicted_density",
    "model_gap",
]

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 200


@dataclass(frozen=True)
class ModelParams:
    base: int
    rho: HPReal

    def __post_init__(self) -> None:
        if not (0 < self.rho.value < 1):
            raise ValueError(f"rho must lie in (0, 1), got {self.rho.value}")


@dataclass(frozen=True)
class ModelTrace:
    """The recorded iteration P_1, P_2, ..., its convergence status, and the
    certified fixed point (None when not certified)."""

    values: tuple[HPReal, ...]
    converged: bool
    ell: Optional[HPReal]
    tol: float


def _rho_iv():
    return iv.mpf(6) / iv.pi**2


def rho(precision: int = 30) -> HPReal:
    """rho = 6/pi^2, the density of the square-free integers."""
    with _iv_dps(precision + 10):
        hp = _hp_from_iv(_rho_iv(), precision)
    return euler._certify(hp, precision, "rho")


def model_params(base: int, precision: int = 30) -> ModelParams:
    if base < 1:
        raise ValueError(f"base must be >= 1, got {base}")
    return ModelParams(base, rho(precision))


def p1(base: int, precision: int = 30) -> HPReal:
    """P_1 = (1 - rho)^base: the model's chance that every child of the root
    is non-square-free."""
    if base < 1:
        raise ValueError(f"base must be >= 1, got {base}")
    with _iv_dps(precision + 10):
        val = (iv.mpf(1) - _rho_iv()) ** base
        hp = _hp_from_iv(val, precision)
    return euler._certify(hp, precision, f"p1({base})")


def predicted_density(base: int, precision: int = 30) -> HPReal:
    """The model's dead-end density: rho * (1 - rho)^base."""
    if base < 1:
        raise ValueError(f"base must be >= 1, got {base}")
    with _iv_dps(precision + 10):
        r = _rho_iv()
        val = r * (iv.mpf(1) - r) ** base
        hp = _hp_from_iv(val, precision)
    return euler._certify(hp, precision, f"predicted_density({base})")


def iterate_p(
    base: int,
    k_max: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
    precision: int = 30,
) -> ModelTrace:
    """Iterate P_{k+1} = ((1-rho) + rho*P_k)^base from P_1 until successive
    midpoints differ by less than tol (or k_max is reached). On convergence
    the fixed point ell is certified by the contraction bound; otherwise the
    trace reports converged=False with ell=None."""
    if base < 1:
        raise ValueError(f"base must be >= 1, got {base}")
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    if not tol > 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    with _iv_dps(precision + 10):
        r = _rho_iv()
        one = iv.mpf(1)
        p = (one - r) ** base
        values = [_hp_from_iv(p, precision)]
        converged = False
        for _ in range(2, k_max + 1):
            nxt = ((one - r) + r * p) ** base
            hp_next = _hp_from_iv(nxt, precision)
            if hp_next.value < values[-1].value - mpmath.mpf(10) ** (-(precision + 5)):
                raise AssertionError("P_k iteration must be nondecreasing")
            values.append(hp_next)
            delta = abs(hp_next.value - values[-2].value)
            p = nxt
            if delta < tol:
                converged = True
                break
        ell: Optional[HPReal] = None
        if converged:
            m = values[-1].value
            m_iv = iv.mpf(m)
            fm = ((one - r) + r * m_iv) ** base - m_iv
            fm_hp = _hp_from_iv(fm, precision)
            resid = abs(fm_hp.value) + fm_hp.err
            margin = resid * mpmath.mpf(10) ** 6 + mpmath.mpf(10) ** (-(precision + 5))
            enclosure = m_iv + iv.mpf([-1, 1]) * iv.mpf(margin)
            lam = iv.mpf(base) * r * ((one - r) + r * enclosure) ** (base - 1)
            lam_hp = _hp_from_iv(lam, precision)
            lam_up = lam_hp.value + lam_hp.err
            if lam_up < 1:
                err_ell = resid / (1 - lam_up) * mpmath.mpf("1.001")
                if err_ell <= margin:
                    ell = HPReal(m, err_ell, precision)
            if ell is None:
                converged = False
    return ModelTrace(tuple(values), converged, ell, tol)


def model_gap(base: int, precision: int = 12) -> HPReal:
    """predicted_density(base) / dead_end_constant(base), with the error
    bounds of both propagated through interval division."""
    pred = predicted_density(base, precision + 6)
    truth = euler.dead_end_constant(base, precision)
    return euler.hp_div(pred, truth, precision)
