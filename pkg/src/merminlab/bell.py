"""Three-party Mermin expression: quantum value, exact LHV bound, parity paradox.

The local-hidden-variable side is handled by exhaustive enumeration of the
64 deterministic strategies with pure integer arithmetic.  That keeps the
bound exact and doubles as the oracle for the certificate logic: a set of
perfect correlations admits a GHZ-type paradox exactly when no strategy
reproduces all four correlator signs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

from .hilbert import AngleTheta, StateVector, _as_radians, expectation, tensor
from .observables import SettingsTable

__all__ = [
    "BellExpression",
    "BellTerm",
    "DeterministicStrategy",
    "LhvBound",
    "ParadoxCertificate",
    "all_strategies",
    "correlator",
    "evaluate_quantum",
    "lhv_bound",
    "mermin_closed_form",
    "mermin_expression",
    "nlwi_certificate",
    "parity_contradiction_check",
]

MERMIN_CHOICES = ("EEE", "EUU", "UEU", "UUE")
MERMIN_COEFFICIENTS = (1, -1, -1, -1)


@dataclass(frozen=True)
class BellTerm:
    """One signed full correlator: coefficient times a per-party E/U choice."""

    coefficient: float
    choices: str

    def __post_init__(self) -> None:
        if len(self.choices) != 3 or any(c not in "EU" for c in self.choices):
            raise ValueError(f"choices must be a 3-character E/U string, got {self.choices!r}")


@dataclass(frozen=True)
class DeterministicStrategy:
    """Pre-assigned +/-1 outcomes (e_i, u_i) for each party."""

    e: tuple[int, int, int]
    u: tuple[int, int, int]

    def __post_init__(self) -> None:
        for v in self.e + self.u:
            if v not in (1, -1):
                raise ValueError(f"strategy values must be +/-1, got {v}")

    def term_value(self, choices: str) -> int:
        value = 1
        for party, choice in enumerate(choices):
            value *= self.e[party] if choice == "E" else self.u[party]
        return value

    def value(self, expr: "BellExpression") -> float:
        """Expression value under this strategy; exact int for integer coefficients."""
        if all(float(t.coefficient).is_integer() for t in expr.terms):
            return sum(int(t.coefficient) * self.term_value(t.choices) for t in expr.terms)
        return sum(t.coefficient * self.term_value(t.choices) for t in expr.terms)


def all_strategies() -> Iterator[DeterministicStrategy]:
    """All 64 deterministic strategies, in a fixed canonical order."""
    for bits in itertools.product((1, -1), repeat=6):
        yield DeterministicStrategy(e=bits[0:3], u=bits[3:6])


@dataclass(frozen=True)
class BellExpression:
    """Signed combination of full correlators with its cached LHV bound.

    The ``lhv_bound`` field is always derived from the terms by strategy
    enumeration; passing an inconsistent value is rejected.
    """

    terms: tuple[BellTerm, ...]
    lhv_bound: float = field(default=math.nan)

    def __post_init__(self) -> None:
        if not self.terms:
            raise ValueError("expression needs at least one term")
        bound = max(s.value(self) for s in all_strategies())
        if not math.isnan(self.lhv_bound) and self.lhv_bound != bound:
            raise ValueError(
                f"lhv_bound {self.lhv_bound!r} does not match enumerated bound {bound!r}"
            )
        object.__setattr__(self, "lhv_bound", bound)


def mermin_expression() -> BellExpression:
    """The four-term Mermin combination <EEE> - <EUU> - <UEU> - <UUE>, bound 2."""
    terms = tuple(
        BellTerm(coefficient, choices)
        for coefficient, choices in zip(MERMIN_COEFFICIENTS, MERMIN_CHOICES)
    )
    return BellExpression(terms)


def mermin_closed_form(theta: AngleTheta | float) -> float:
    """Quantum prediction for the Mermin value at the reconstructed settings."""
    t = _as_radians(theta)
    s2, c2 = math.sin(2 * t), math.cos(2 * t)
    return s2**4 - c2**4 + 3 * s2**2


def correlator(state: StateVector, table: SettingsTable, choices: str) -> float:
    """Full three-party correlator for one E/U choice string, e.g. 'EUU'."""
    ops = [table.observable(p, choices[p - 1]).matrix for p in (1, 2, 3)]
    return expectation(state, tensor(*ops))


def evaluate_quantum(
    expr: BellExpression, state: StateVector, table: SettingsTable
) -> float:
    """Quantum value of the expression on a state with the given settings."""
    return sum(t.coefficient * correlator(state, table, t.choices) for t in expr.terms)


class LhvBound(NamedTuple):
    bound: float
    maximizers: tuple[DeterministicStrategy, ...]


def lhv_bound(expr: BellExpression) -> LhvBound:
    """Exact deterministic-strategy maximum and every strategy attaining it."""
    values = [(s.value(expr), s) for s in all_strategies()]
    bound = max(v for v, _ in values)
    maximizers = tuple(s for v, s in values if v == bound)
    return LhvBound(bound, maximizers)


def parity_contradiction_check(product_values: tuple[int, int, int]) -> bool:
    """True iff three pairwise-product values are jointly unrealizable.

    The arguments are the claimed values of (U2*U3, U1*U3, U1*U2).  Any
    assignment of individual values U_i = +/-1 forces their product to
    (U1*U2*U3)^2 = +1, so the triple is contradictory exactly when the
    product of the three claimed values is -1.
    """
    if len(product_values) != 3:
        raise ValueError(f"expected three product values, got {len(product_values)}")
    for v in product_values:
        if v not in (1, -1):
            raise ValueError(f"product values must be +/-1, got {v}")
    return math.prod(product_values) == -1


@dataclass(frozen=True)
class ParadoxCertificate:
    """Machine-checkable record of a perfect-correlation parity paradox.

    ``correlators`` follow the expression's term order (EEE, EUU, UEU,
    UUE for the Mermin instance); ``product_values`` are the pairwise
    U-product values implied by the three mixed correlators when the
    corresponding E outcome is +1.
    """

    correlators: tuple[float, ...]
    choices: tuple[str, ...]
    signs: tuple[int, ...]
    product_values: tuple[int, int, int]
    lhv_reproducible: bool
    valid: bool
    tol: float
    transcript: tuple[str, ...]


def nlwi_certificate(
    state: StateVector, table: SettingsTable, tol: float = 1e-10
) -> ParadoxCertificate | None:
    """Nonlocality-without-inequalities certificate, or None when it cannot exist.

    A certificate requires every Mermin correlator to be perfect
    (modulus >= 1 - tol) and the four correlator signs to be jointly
    unreachable by all 64 deterministic strategies.  Perfectness is a
    measure-zero condition, so away from maximal entanglement this
    returns None for any reasonable tolerance.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    expr = mermin_expression()
    correlators = tuple(correlator(state, table, t.choices) for t in expr.terms)
    if any(abs(c) < 1.0 - tol for c in correlators):
        return None
    signs = tuple(1 if c > 0 else -1 for c in correlators)

    reproducible = any(
        all(s.term_value(t.choices) == sign for t, sign in zip(expr.terms, signs))
        for s in all_strategies()
    )
    # Mixed-term signs are the conditional product values: <E1 U2 U3> = s
    # and perfectness mean U2*U3 = s whenever E1 = +1, and cyclically.
    product_values = (signs[1], signs[2], signs[3])
    contradiction = parity_contradiction_check(product_values)
    if reproducible or not contradiction:
        return None

    transcript = (
        f"perfect correlators (tol {tol:g}): "
        + ", ".join(f"<{c}> = {s:+d}" for c, s in zip(MERMIN_CHOICES, signs)),
        f"given E1 = +1, the correlator <EUU> = {signs[1]:+d} forces U2*U3 = {signs[1]:+d}",
        f"given E2 = +1, the correlator <UEU> = {signs[2]:+d} forces U1*U3 = {signs[2]:+d}",
        f"given E3 = +1, the correlator <UUE> = {signs[3]:+d} forces U1*U2 = {signs[3]:+d}",
        f"product of the three assigned values: {math.prod(product_values):+d}",
        "individual assignments U_i = +/-1 force (U2*U3)(U1*U3)(U1*U2) = +1",
        "no deterministic strategy reproduces all four correlator signs "
        "(exhaustive enumeration over 64 strategies)",
    )
    return ParadoxCertificate(
        correlators=correlators,
        choices=MERMIN_CHOICES,
        signs=signs,
        product_values=product_values,
        lhv_reproducible=reproducible,
        valid=True,
        tol=tol,
        transcript=transcript,
    )
