"""Exact integration-by-parts identities used by the energy bookkeeping.

Each catalog entry evaluates both sides of an identity that holds exactly for
trigonometric polynomials; the reported residual is |LHS - RHS| relative to
the largest participating term, so near-total cancellation cannot masquerade
as success.  All pairings are exact integrals of products of band-limited
fields (3x padded), so residuals sit at rounding level when the identity is
true.
"""

from __future__ import annotations

from typing import Callable

from ..grid import (
    ConfigError,
    Field,
    dealiased_product,
    deriv,
    frac_deriv,
    hilbert,
    inner,
    integral,
)
from .report import CheckReport

__all__ = ["IDENTITY_IDS", "check_identity"]

_REL_TOL = 1e-9


def _commutator_h(a: Field, b: Field) -> Field:
    """[H, a] b = H(ab) - a Hb on the retained band."""
    return hilbert(dealiased_product([a, b])) - dealiased_product([a, hilbert(b)])


def _fourth_order_triple(f: Field, g: Field, h: Field, s: float | None):
    """Triple pairing of H d^4 against products vs its lower-order resolution.

    <H f'''' , g h> + <f H g'''', h> + <f g, H h''''> equals
    -<[H,h] f'''', g> - <[H,f] h'''', g> + 4<f''' Hg, h'> - 4<f' Hg', h''>
    + 2<f'' Hg, h''>.
    """
    f4, g4, h4 = deriv(f, 4), deriv(g, 4), deriv(h, 4)
    lhs_terms = [
        integral([hilbert(f4), g, h]),
        integral([f, hilbert(g4), h]),
        integral([f, g, hilbert(h4)]),
    ]
    rhs_terms = [
        -inner(_commutator_h(h, f4), g),
        -inner(_commutator_h(f, h4), g),
        4.0 * integral([deriv(f, 3), hilbert(g), deriv(h, 1)]),
        -4.0 * integral([deriv(f, 1), hilbert(deriv(g, 1)), deriv(h, 2)]),
        2.0 * integral([deriv(f, 2), hilbert(g), deriv(h, 2)]),
    ]
    return sum(lhs_terms), sum(rhs_terms), lhs_terms + rhs_terms


def _require_s(s: float | None) -> float:
    if s is None:
        raise ConfigError("this identity needs the Sobolev order s")
    if s < 1.0:
        raise ConfigError(f"identity checks need s >= 1, got {s}")
    return float(s)


def _second_order_reduction(u: Field, w: Field, _unused: Field | None, s: float | None):
    """<u D^s w'', D^s w> = 1/2 <u'', (D^s w)^2> - <u, (D^s w')^2>."""
    s = _require_s(s)
    dsw = frac_deriv(w, s)
    lhs = integral([u, deriv(dsw, 2), dsw])
    t1 = 0.5 * integral([deriv(u, 2), dsw, dsw])
    t2 = -integral([u, deriv(dsw, 1), deriv(dsw, 1)])
    return lhs, t1 + t2, [lhs, t1, t2]


def _third_order_reduction(u: Field, w: Field, _unused: Field | None, s: float | None):
    """<u D^s w''', D^s w> = -<u' D^s w'', D^s w> + 1/2 <u', (D^s w')^2>."""
    s = _require_s(s)
    dsw = frac_deriv(w, s)
    lhs = integral([u, deriv(dsw, 3), dsw])
    t1 = -integral([deriv(u, 1), deriv(dsw, 2), dsw])
    t2 = 0.5 * integral([deriv(u, 1), deriv(dsw, 1), deriv(dsw, 1)])
    return lhs, t1 + t2, [lhs, t1, t2]


def _hilbert_pair_split(u: Field, w: Field, _unused: Field | None, s: float | None):
    """<u, (H D^s w')^2> = <H(u' H D^s w'), D^s w> + <H(u H D^s w''), D^s w>."""
    s = _require_s(s)
    dsw = frac_deriv(w, s)
    b = hilbert(deriv(dsw, 1))
    lhs = integral([u, b, b])
    t1 = inner(hilbert(dealiased_product([deriv(u, 1), b])), dsw)
    t2 = inner(hilbert(dealiased_product([u, hilbert(deriv(dsw, 2))])), dsw)
    return lhs, t1 + t2, [lhs, t1, t2]


_CATALOG: dict[str, tuple[int, Callable]] = {
    "fourth_order_triple": (3, _fourth_order_triple),
    "second_order_reduction": (2, _second_order_reduction),
    "third_order_reduction": (2, _third_order_reduction),
    "hilbert_pair_split": (2, _hilbert_pair_split),
}

IDENTITY_IDS = tuple(_CATALOG)


def check_identity(identity: str, fields: list[Field], s: float | None = None) -> CheckReport:
    """Evaluate one catalog identity on the given fields.

    Returns a CheckReport whose measured value is the residual relative to
    the largest term; passes at 1e-9.
    """
    if identity not in _CATALOG:
        raise ConfigError(f"unknown identity {identity!r}; known: {sorted(_CATALOG)}")
    arity, fn = _CATALOG[identity]
    if len(fields) != arity:
        raise ConfigError(f"identity {identity!r} takes {arity} fields, got {len(fields)}")
    args = list(fields) + [None] * (3 - len(fields))
    lhs, rhs, terms = fn(args[0], args[1], args[2], s)
    scale = max(max(abs(t) for t in terms), 1e-300)
    residual = abs(lhs - rhs) / scale
    return CheckReport.le(
        f"identity:{identity}",
        residual,
        _REL_TOL,
        details={"lhs": lhs, "rhs": rhs, "scale": scale, "s": s},
    )
