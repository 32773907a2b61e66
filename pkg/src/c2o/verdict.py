"""Per-step verdicts shared by the interpreter and the reference evaluator."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class StepVerdict:
    assumes: dict[str, bool]
    proves: dict[str, bool]
    vacuous: bool  # some assume failed at this or an earlier step

    @property
    def ok(self) -> bool:
        return self.vacuous or all(self.proves.values())


def with_vacuity(raw: list[tuple[dict[str, bool], dict[str, bool]]]) -> list[StepVerdict]:
    out = []
    vacuous = False
    for assumes, proves in raw:
        vacuous = vacuous or not all(assumes.values())
        out.append(StepVerdict(assumes, proves, vacuous))
    return out


def first_failure(verdicts: list[StepVerdict]):
    """(step, label) of the first failed prove outside a vacuous suffix."""
    for i, v in enumerate(verdicts):
        if v.vacuous:
            return None
        for label, ok in v.proves.items():
            if not ok:
                return i, label
    return None
