"""Session lifecycle: the intent -> rank -> choose -> apply loop.

The one rule that matters: submitting an intent phrase NEVER executes
anything. Ranking is a pure query so the player can correct a
misclassified intent by clicking a different button; only an explicit
perform call advances the world.

Offers are step-tagged: an action list served at step N can only be
performed against step N, so a button click can never fire against a
database that has since changed.
"""

from __future__ import annotations

import hashlib
import json
import threading
import uuid
from dataclasses import dataclass, field

import numpy as np

from .domain import Domain, domain_to_dict, load_domain
from .embedding import CachingEmbedder, provider_from_env
from .engine import (
    GroundedAction,
    TranscriptEvent,
    apply_action,
    enumerate_domain_actions,
)
from .errors import (
    CorruptSaveError,
    EmptyIntentError,
    NoSessionError,
    StaleActionError,
    UnknownActionError,
    UnknownDomainError,
)
from .logic import Database, check_exclusion_invariant, parse_fact
from .ranking import RankedAction, RankingConfig, rank_actions

SAVE_FORMAT = "pwim-session"
SAVE_VERSION = 1


@dataclass
class Session:
    """One live playthrough."""

    session_id: str
    domain: Domain
    db: Database
    transcript: list[TranscriptEvent] = field(default_factory=list)
    summary_embeddings: dict[str, np.ndarray] = field(default_factory=dict)
    step: int = 0
    offered_ids: set[str] = field(default_factory=set, repr=False)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def state_digest(self) -> str:
        """Hash of (facts, step, transcript); caches excluded on purpose."""
        payload = {
            "facts": self.db.render(),
            "step": self.step,
            "transcript": [e.to_dict() for e in self.transcript],
        }
        blob = json.dumps(payload, sort_keys=True).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()


class PlayService:
    """Binds the engine, embedding provider, and ranker into sessions.

    Thread model: the sessions map has its own lock; each session's
    mutations are serialized by a per-session lock.
    """

    def __init__(
        self,
        domains: dict[str, Domain] | None = None,
        provider=None,
        k: int = 3,
        cache_capacity: int = 4096,
    ):
        self.domains = dict(domains or {})
        self.provider = CachingEmbedder(
            provider if provider is not None else provider_from_env(),
            capacity=cache_capacity,
        )
        self.config = RankingConfig(k=k)
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def add_domain(self, domain: Domain) -> None:
        self.domains[domain.name] = domain

    def get_session(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise NoSessionError(f"no session {session_id!r}")
        return session

    def available_actions(self, session: Session) -> list[GroundedAction]:
        actions = enumerate_domain_actions(session.db, session.domain)
        # Remember everything ever offered so a later perform can tell a
        # stale button (offered once, preconditions gone) from a bogus id.
        session.offered_ids.update(a.action_id for a in actions)
        return actions

    def _precompute_summaries(self, session: Session, actions) -> None:
        missing = []
        for action in actions:
            if action.summary not in session.summary_embeddings:
                if action.summary not in missing:
                    missing.append(action.summary)
        if missing:
            vectors = self.provider.embed_batch(missing)
            for summary, vector in zip(missing, vectors):
                session.summary_embeddings[summary] = vector

    def create_session(self, domain_ref: str) -> Session:
        domain = self.domains.get(domain_ref)
        if domain is None:
            raise UnknownDomainError(f"unknown domain {domain_ref!r}")
        db = Database(frozenset(domain.initial_facts))
        session = Session(
            session_id=uuid.uuid4().hex,
            domain=domain,
            db=db,
        )
        self._precompute_summaries(session, self.available_actions(session))
        with self._lock:
            self._sessions[session.session_id] = session
        return session

    def submit_intent(self, session_id: str, text: str) -> list[RankedAction]:
        """Rank the currently available actions against an intent phrase.

        Pure query: the database, transcript, and step are untouched.
        """
        session = self.get_session(session_id)
        if not text or not text.strip():
            raise EmptyIntentError("intent text is empty")
        with session.lock:
            actions = self.available_actions(session)
            if not actions:
                return []
            self._precompute_summaries(session, actions)
            intent_vec = self.provider.embed(text)
            pairs = [
                (action, session.summary_embeddings[action.summary])
                for action in actions
            ]
            return rank_actions(intent_vec, pairs, self.config)

    def perform_action(
        self,
        session_id: str,
        action_id: str,
        step: int | None = None,
        intent_text: str | None = None,
    ) -> tuple[TranscriptEvent, list[GroundedAction]]:
        """Apply one offered action and advance the session one step.

        ``step`` is the step the offer was served against; a mismatch
        means the client raced a state change and gets stale-action.
        """
        session = self.get_session(session_id)
        with session.lock:
            if step is not None and step != session.step:
                raise StaleActionError(
                    f"offer was for step {step}, session is at {session.step}"
                )
            actions = {a.action_id: a for a in self.available_actions(session)}
            action = actions.get(action_id)
            if action is None:
                if action_id in session.offered_ids:
                    raise StaleActionError(
                        f"action {action_id!r} is no longer available"
                    )
                raise UnknownActionError(f"unknown action {action_id!r}")
            new_db, event = apply_action(
                session.db, action, step=session.step, intent_text=intent_text
            )
            session.db = new_db
            session.transcript.append(event)
            session.step += 1
            fresh = self.available_actions(session)
            self._precompute_summaries(session, fresh)
            return event, fresh

    def save_session(self, session_id: str) -> dict:
        session = self.get_session(session_id)
        with session.lock:
            return {
                "format": SAVE_FORMAT,
                "version": SAVE_VERSION,
                "session_id": session.session_id,
                "step": session.step,
                "domain": domain_to_dict(session.domain),
                "facts": session.db.render(),
                "transcript": [e.to_dict() for e in session.transcript],
            }

    def save_session_json(self, session_id: str) -> str:
        return json.dumps(self.save_session(session_id), ensure_ascii=False)

    def load_session(self, document: bytes | str | dict) -> Session:
        """Restore a saved session; summary embeddings are recomputed."""
        if isinstance(document, (bytes, str)):
            try:
                obj = json.loads(document)
            except json.JSONDecodeError as exc:
                raise CorruptSaveError(f"invalid JSON: {exc}") from exc
        else:
            obj = document
        try:
            if obj["format"] != SAVE_FORMAT or obj["version"] != SAVE_VERSION:
                raise CorruptSaveError("unrecognized save format")
            domain = load_domain(obj["domain"])
            parsed = [parse_fact(text) for text in obj["facts"]]
            check_exclusion_invariant(set(parsed))
            facts = Database(frozenset(parsed))
            transcript = [TranscriptEvent.from_dict(e) for e in obj["transcript"]]
            step = obj["step"]
            session_id = obj["session_id"]
        except CorruptSaveError:
            raise
        except Exception as exc:
            raise CorruptSaveError(f"bad save document: {exc}") from exc
        if step != len(transcript):
            raise CorruptSaveError(
                f"step {step} does not match transcript length {len(transcript)}"
            )
        for i, event in enumerate(transcript):
            if event.step != i:
                raise CorruptSaveError(f"transcript steps not contiguous at {i}")
        session = Session(
            session_id=session_id,
            domain=domain,
            db=facts,
            transcript=transcript,
            step=step,
        )
        self._precompute_summaries(session, self.available_actions(session))
        with self._lock:
            self._sessions[session.session_id] = session
        return session

    def replay_transcript(self, domain: Domain, action_ids: list[str]) -> Database:
        """Re-run a recorded list of action ids from the initial state."""
        db = Database(frozenset(domain.initial_facts))
        for i, action_id in enumerate(action_ids):
            actions = {
                a.action_id: a for a in enumerate_domain_actions(db, domain)
            }
            action = actions.get(action_id)
            if action is None:
                raise UnknownActionError(
                    f"transcript action {action_id!r} not available at step {i}"
                )
            db, _ = apply_action(db, action, step=i)
        return db
