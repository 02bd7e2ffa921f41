"""Joint, marginal, and conditional outcome probabilities for commuting settings.

Probabilities are computed by projector algebra, never by sampling: every
claim the workbench checks is exact, and Monte Carlo noise would only
obscure the residuals.  Conditioning below the 1e-12 event floor is
treated as impossible rather than rare and raises
``DegenerateConditioningError``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .hilbert import AngleTheta, StateVector, _as_radians, ghz_state, lift
from .observables import SettingsTable, SETTING_LABELS

__all__ = [
    "CertaintyRow",
    "ConditionalQuery",
    "DegenerateConditioningError",
    "EVENT_FLOOR",
    "MeasurementEvent",
    "OutcomeSpec",
    "ProductTarget",
    "certainty_sweep",
    "conditional_probability",
    "joint_probability",
]

EVENT_FLOOR = 1e-12


class DegenerateConditioningError(ValueError):
    """Raised when a conditional is requested on an impossible event."""

    def __init__(self, condition_probability: float):
        self.condition_probability = condition_probability
        super().__init__(
            f"conditioning event has probability {condition_probability!r} "
            f"<= {EVENT_FLOOR}; the conditional is undefined"
        )


@dataclass(frozen=True)
class OutcomeSpec:
    """One fixed outcome: party (1-based), setting label 'E' or 'U', value +/-1."""

    party: int
    setting: str
    outcome: int

    def __post_init__(self) -> None:
        if not 1 <= self.party <= 3:
            raise ValueError(f"party must be in 1..3, got {self.party}")
        if self.setting not in SETTING_LABELS:
            raise ValueError(f"setting must be one of {SETTING_LABELS}, got {self.setting!r}")
        if self.outcome not in (1, -1):
            raise ValueError(f"outcome must be +1 or -1, got {self.outcome}")


@dataclass(frozen=True)
class MeasurementEvent:
    """A nonempty set of fixed outcomes, one per party at most."""

    outcomes: tuple[OutcomeSpec, ...]

    def __post_init__(self) -> None:
        if not self.outcomes:
            raise ValueError("measurement event must be nonempty")
        parties = [spec.party for spec in self.outcomes]
        if len(set(parties)) != len(parties):
            raise ValueError(f"duplicate party in event: {sorted(parties)}")

    @classmethod
    def of(cls, *specs: tuple[int, str, int]) -> "MeasurementEvent":
        return cls(tuple(OutcomeSpec(*s) for s in specs))

    @property
    def parties(self) -> frozenset[int]:
        return frozenset(spec.party for spec in self.outcomes)


@dataclass(frozen=True)
class ProductTarget:
    """Target on the product of several parties' outcomes for one setting label.

    Only the product is constrained, never the individual outcomes; the
    distinction is the whole point of the conditional-certainty checks,
    so it is structural rather than a convention on events.
    """

    parties: tuple[int, ...]
    setting: str
    product: int

    def __post_init__(self) -> None:
        if len(self.parties) < 2 or len(set(self.parties)) != len(self.parties):
            raise ValueError(f"product target needs distinct parties, got {self.parties}")
        if self.setting not in SETTING_LABELS:
            raise ValueError(f"setting must be one of {SETTING_LABELS}, got {self.setting!r}")
        if self.product not in (1, -1):
            raise ValueError(f"product must be +1 or -1, got {self.product}")


@dataclass(frozen=True)
class ConditionalQuery:
    condition: MeasurementEvent
    target: MeasurementEvent | ProductTarget

    def __post_init__(self) -> None:
        if isinstance(self.target, ProductTarget):
            target_parties = frozenset(self.target.parties)
        else:
            target_parties = self.target.parties
        overlap = self.condition.parties & target_parties
        if overlap:
            raise ValueError(f"condition and target share parties {sorted(overlap)}")


def _apply_event(state: StateVector, table: SettingsTable, event: MeasurementEvent) -> np.ndarray:
    """Apply the commuting outcome projectors of an event to the state vector."""
    vec = state.amplitudes
    for spec in event.outcomes:
        op = lift(table.observable(spec.party, spec.setting).matrix, spec.party, state.n_qubits)
        vec = 0.5 * (vec + spec.outcome * (op.entries @ vec))
    return vec


def joint_probability(
    state: StateVector, table: SettingsTable, event: MeasurementEvent
) -> float:
    """Born-rule probability of a joint outcome event (order-independent)."""
    vec = _apply_event(state, table, event)
    return float(np.vdot(vec, vec).real)


def conditional_probability(
    state: StateVector, table: SettingsTable, query: ConditionalQuery
) -> float:
    """P(target | condition), with ProductTarget summed over matching outcome tuples."""
    p_condition = joint_probability(state, table, query.condition)
    if p_condition <= EVENT_FLOOR:
        raise DegenerateConditioningError(p_condition)
    if isinstance(query.target, MeasurementEvent):
        combined = MeasurementEvent(query.condition.outcomes + query.target.outcomes)
        return joint_probability(state, table, combined) / p_condition

    target = query.target
    p_joint = 0.0
    for outcomes in itertools.product((1, -1), repeat=len(target.parties)):
        if math.prod(outcomes) != target.product:
            continue
        specs = tuple(
            OutcomeSpec(party, target.setting, outcome)
            for party, outcome in zip(target.parties, outcomes)
        )
        combined = MeasurementEvent(query.condition.outcomes + specs)
        p_joint += joint_probability(state, table, combined)
    return p_joint / p_condition


@dataclass(frozen=True)
class CertaintyRow:
    """Residual of one conditional-certainty constraint at one angle."""

    theta: float
    constraint: str
    residual: float
    applicable: bool = True


# One constraint per conditioned party: conditioned on E_i = +1, the U
# outcomes of the two other parties must multiply to -1 with certainty.
CERTAINTY_CONSTRAINTS = (
    (1, (2, 3), "U2U3=-1|E1=+1"),
    (2, (1, 3), "U1U3=-1|E2=+1"),
    (3, (1, 2), "U1U2=-1|E3=+1"),
)


def certainty_sweep(
    table_builder: Callable[[float], SettingsTable],
    theta_grid: Iterable[AngleTheta | float] | Sequence[float],
) -> list[CertaintyRow]:
    """Residuals |1 - P| of the three conditional certainties over a theta grid.

    Degenerate conditioning events yield not-applicable rows instead of
    raising, so boundary angles can sit on the grid.
    """
    rows: list[CertaintyRow] = []
    for theta in theta_grid:
        t = _as_radians(theta)
        state = ghz_state(t, 3)
        table = table_builder(t)
        for conditioned, others, label in CERTAINTY_CONSTRAINTS:
            condition = MeasurementEvent.of((conditioned, "E", 1))
            query = ConditionalQuery(condition, ProductTarget(others, "U", -1))
            try:
                p = conditional_probability(state, table, query)
            except DegenerateConditioningError:
                rows.append(CertaintyRow(t, label, math.nan, applicable=False))
                continue
            rows.append(CertaintyRow(t, label, abs(1.0 - p)))
    return rows
