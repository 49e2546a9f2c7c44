"""Action grounding and effect application.

``enumerate_actions`` instantiates every schema against the current
database: role variables range over the cast, the rest are bound by
precondition matching. ``apply_action`` re-checks preconditions (clients
may hold stale offers) and replays the effect list in order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .domain import ActionSchema, Domain, render_summary
from .errors import StaleActionError
from .logic import Binding, Database

ACTION_ID_SEP = ("(", ")")


def action_id_for(schema_id: str, binding: Binding) -> str:
    """Stable id: schema id plus the binding in canonical variable order.

    Injective over (schema_id, binding) because variable names and
    tokens cannot contain ``=`` or ``,``.
    """
    body = ",".join(f"{var}={binding[var]}" for var in sorted(binding))
    return f"{schema_id}({body})"


@dataclass(frozen=True)
class GroundedAction:
    """A schema instantiated with concrete tokens, ready to perform."""

    action_id: str
    schema_id: str
    binding: Binding
    summary: str
    schema: ActionSchema = field(repr=False, compare=False)

    def __hash__(self):  # binding is a dict; hash by identity fields
        return hash(self.action_id)


@dataclass(frozen=True)
class TranscriptEvent:
    step: int
    action_id: str
    summary: str
    intent_text: str | None = None

    def to_dict(self) -> dict:
        return {
            "step": self.step,
            "action_id": self.action_id,
            "summary": self.summary,
            "intent_text": self.intent_text,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "TranscriptEvent":
        return cls(
            step=obj["step"],
            action_id=obj["action_id"],
            summary=obj["summary"],
            intent_text=obj.get("intent_text"),
        )


def _schema_bindings(db: Database, schema: ActionSchema, cast) -> list[Binding]:
    """All complete bindings for one schema, in canonical order."""
    patterns = list(schema.preconditions)
    bindings: list[Binding] = []
    for assignment in itertools.product(cast, repeat=len(schema.roles)):
        seed = dict(zip(schema.roles, assignment))
        bindings.extend(db.query(patterns, seed))
    bindings.sort(key=lambda b: tuple(b[v] for v in sorted(b)))
    return bindings


def enumerate_actions(
    db: Database,
    schemas,
    cast,
) -> list[GroundedAction]:
    """Ground every schema whose preconditions hold.

    Deterministic: schema order, then bindings sorted lexicographically
    by bound values.
    """
    actions: list[GroundedAction] = []
    for schema in schemas:
        for binding in _schema_bindings(db, schema, cast):
            actions.append(
                GroundedAction(
                    action_id=action_id_for(schema.id, binding),
                    schema_id=schema.id,
                    binding=binding,
                    summary=render_summary(schema.summary_template, binding),
                    schema=schema,
                )
            )
    return actions


def enumerate_domain_actions(db: Database, domain: Domain) -> list[GroundedAction]:
    return enumerate_actions(db, domain.schemas, domain.cast)


def apply_action(
    db: Database,
    action: GroundedAction,
    step: int = 0,
    intent_text: str | None = None,
) -> tuple[Database, TranscriptEvent]:
    """Re-check preconditions, then apply effects in listed order.

    Raises StaleActionError when the preconditions no longer hold (the
    offer raced a state change).
    """
    still_valid = db.query(list(action.schema.preconditions), action.binding)
    if not still_valid:
        raise StaleActionError(
            f"preconditions of {action.action_id} no longer hold"
        )
    for effect in action.schema.effects:
        ground = effect.pattern.substitute(action.binding)
        if effect.op == "insert":
            db = db.insert(ground.to_fact())
        else:
            db = db.retract(ground)
    event = TranscriptEvent(
        step=step,
        action_id=action.action_id,
        summary=action.summary,
        intent_text=intent_text,
    )
    return db, event
