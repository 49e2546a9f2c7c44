"""Batch evaluation of intent phrases against expected actions.

A cases file is a JSON list of objects:

.. code-block:: json

    [{"setup": ["travel to the bar"],
      "intent": "get hammered",
      "expected_summary": "order a beer",
      "expect_top1": true}]

Each case starts a fresh session, performs the setup actions by summary,
submits the intent, and records the rank of the expected action. A case
whose setup or expected summary is not offered is *invalid* (an
authoring error), reported separately from ranking failures.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .domain import Domain
from .errors import InvalidCaseError
from .service import PlayService


@dataclass(frozen=True)
class EvalCase:
    setup: tuple[str, ...]
    intent: str
    expected_summary: str
    expect_top1: bool = True


@dataclass(frozen=True)
class CaseResult:
    case: EvalCase
    rank: int | None  # None when the case is invalid
    similarity: float | None
    invalid_reason: str | None = None

    @property
    def valid(self) -> bool:
        return self.rank is not None


@dataclass(frozen=True)
class EvalReport:
    results: tuple[CaseResult, ...]
    k: int

    @property
    def invalid(self) -> int:
        return sum(1 for r in self.results if not r.valid)

    @property
    def top1_accuracy(self) -> float:
        valid = [r for r in self.results if r.valid]
        if not valid:
            return 0.0
        return sum(1 for r in valid if r.rank == 1) / len(valid)

    @property
    def topk_accuracy(self) -> float:
        valid = [r for r in self.results if r.valid]
        if not valid:
            return 0.0
        return sum(1 for r in valid if r.rank <= self.k) / len(valid)

    def passed(self) -> bool:
        """True when every valid expect_top1 case ranked first."""
        return all(
            r.rank == 1
            for r in self.results
            if r.valid and r.case.expect_top1
        )

    def to_dict(self) -> dict:
        return {
            "cases": [
                {
                    "intent": r.case.intent,
                    "expected_summary": r.case.expected_summary,
                    "rank": r.rank,
                    "similarity": r.similarity,
                }
                for r in self.results
            ],
            "top1_accuracy": self.top1_accuracy,
            "topk_accuracy": self.topk_accuracy,
            "invalid": self.invalid,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2) + "\n"


def parse_cases(document: bytes | str | list) -> list[EvalCase]:
    if isinstance(document, (bytes, str)):
        try:
            obj = json.loads(document)
        except json.JSONDecodeError as exc:
            raise InvalidCaseError(f"cases file is not valid JSON: {exc}") from exc
    else:
        obj = document
    if not isinstance(obj, list):
        raise InvalidCaseError("cases file must be a JSON list")
    cases = []
    for i, raw in enumerate(obj):
        if not isinstance(raw, dict):
            raise InvalidCaseError(f"case {i} must be an object")
        unknown = set(raw) - {"setup", "intent", "expected_summary", "expect_top1"}
        if unknown:
            raise InvalidCaseError(f"case {i} has unknown fields {sorted(unknown)}")
        try:
            setup = raw.get("setup", [])
            if not isinstance(setup, list):
                raise TypeError("setup must be a list")
            cases.append(
                EvalCase(
                    setup=tuple(str(s) for s in setup),
                    intent=str(raw["intent"]),
                    expected_summary=str(raw["expected_summary"]),
                    expect_top1=bool(raw.get("expect_top1", True)),
                )
            )
        except (KeyError, TypeError) as exc:
            raise InvalidCaseError(f"case {i} is malformed: {exc}") from exc
    return cases


def _run_case(service: PlayService, domain: Domain, case: EvalCase, k: int) -> CaseResult:
    session = service.create_session(domain.name)
    for summary in case.setup:
        actions = service.available_actions(session)
        match = [a for a in actions if a.summary == summary]
        if not match:
            return CaseResult(
                case, None, None,
                invalid_reason=f"setup action {summary!r} not available",
            )
        service.perform_action(session.session_id, match[0].action_id)
    ranked = service.submit_intent(session.session_id, case.intent)
    for position, entry in enumerate(ranked, start=1):
        if entry.action.summary == case.expected_summary:
            return CaseResult(case, position, entry.similarity)
    return CaseResult(
        case, None, None,
        invalid_reason=f"expected action {case.expected_summary!r} not offered",
    )


def run_eval(
    domain: Domain,
    cases: list[EvalCase],
    provider=None,
    k: int = 3,
) -> EvalReport:
    service = PlayService({domain.name: domain}, provider=provider, k=k)
    results = tuple(_run_case(service, domain, case, k) for case in cases)
    return EvalReport(results=results, k=k)
