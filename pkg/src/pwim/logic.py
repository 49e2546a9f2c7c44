"""Exclusion-logic fact database.

Facts are dotted paths of lowercase tokens, e.g. ``at.player!bar``. The
separator before each token matters:

* ``.`` (child) — plain structural nesting.
* ``!`` (exclusive) — the token fills a single-valued slot.

A fact's *exclusion slot* is its deepest ``!`` separator: the prefix up
to that separator names the slot, the token right after it is the slot's
value. The database keeps at most one value per slot, so inserting
``mood.player!drunk`` on top of ``mood.player!sober`` displaces the old
fact. Facts without any ``!`` separator behave as a plain set.

Patterns are facts whose tokens may be variables (leading uppercase,
e.g. ``at.Person!bar``) and may be negated by a leading ``not ``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from .errors import MalformedFactError, UnsafePatternError

CHILD = "."
EXCLUSIVE = "!"

_KEY_RE = re.compile(r"[a-z0-9_]+\Z")
_VAR_RE = re.compile(r"[A-Z][A-Za-z0-9_]*\Z")
_NEGATION_PREFIX = "not "

# A segment is (separator, token); the first segment's separator is
# always CHILD so rendering can drop it.
Segment = tuple[str, str]

Binding = dict[str, str]
"""Map from variable name to ground token."""


def is_variable(token: str) -> bool:
    return bool(_VAR_RE.match(token))


def _split_segments(text: str, *, what: str) -> list[Segment]:
    """Tokenize ``a.b!c`` into [('.', 'a'), ('.', 'b'), ('!', 'c')]."""
    segments: list[Segment] = []
    sep = CHILD
    start = 0
    for i, ch in enumerate(text):
        if ch in (CHILD, EXCLUSIVE):
            segments.append((sep, text[start:i]))
            sep = ch
            start = i + 1
    segments.append((sep, text[start:]))
    for _, key in segments:
        if not key:
            raise MalformedFactError(f"empty segment in {what} {text!r}")
    return segments


@dataclass(frozen=True)
class Fact:
    """A ground statement: a non-empty path of (separator, token) segments."""

    segments: tuple[Segment, ...]

    def __post_init__(self):
        if not self.segments:
            raise MalformedFactError("fact has no segments")
        if self.segments[0][0] != CHILD:
            raise MalformedFactError("fact starts with a separator")
        for sep, key in self.segments:
            if sep not in (CHILD, EXCLUSIVE):
                raise MalformedFactError(f"bad separator {sep!r}")
            if not _KEY_RE.match(key):
                raise MalformedFactError(f"bad token {key!r} (want [a-z0-9_]+)")

    def render(self) -> str:
        head = self.segments[0][1]
        return head + "".join(sep + key for sep, key in self.segments[1:])

    def exclusion_slot(self) -> tuple[tuple[Segment, ...], str] | None:
        """(prefix-before-deepest-``!``, value) or None for pure-child facts."""
        for i in range(len(self.segments) - 1, 0, -1):
            if self.segments[i][0] == EXCLUSIVE:
                return self.segments[:i], self.segments[i][1]
        return None

    def __str__(self) -> str:
        return self.render()

    def __lt__(self, other: "Fact") -> bool:
        return self.render() < other.render()


def parse_fact(text: str) -> Fact:
    """Parse the text form of a fact.

    Raises MalformedFactError for empty segments, illegal characters,
    leading separators, or variable (uppercase) tokens.
    """
    text = text.strip()
    if not text:
        raise MalformedFactError("empty fact")
    segments = _split_segments(text, what="fact")
    for _, key in segments:
        if not _KEY_RE.match(key):
            raise MalformedFactError(f"bad token {key!r} in fact {text!r}")
    return Fact(tuple(segments))


@dataclass(frozen=True)
class Pattern:
    """A fact shape with variables; negative patterns constrain only."""

    segments: tuple[Segment, ...]
    negative: bool = False

    def variables(self) -> set[str]:
        return {key for _, key in self.segments if is_variable(key)}

    def is_ground(self) -> bool:
        return not any(is_variable(key) for _, key in self.segments)

    def render(self) -> str:
        head = self.segments[0][1]
        body = head + "".join(sep + key for sep, key in self.segments[1:])
        return (_NEGATION_PREFIX + body) if self.negative else body

    def substitute(self, binding: Binding) -> "Pattern":
        """Replace bound variables with their tokens; unbound ones stay."""
        segs = tuple(
            (sep, binding.get(key, key) if is_variable(key) else key)
            for sep, key in self.segments
        )
        return Pattern(segs, self.negative)

    def to_fact(self) -> Fact:
        """Convert a ground positive pattern into a Fact."""
        if self.negative:
            raise MalformedFactError("negative pattern is not a fact")
        if not self.is_ground():
            unbound = ", ".join(sorted(self.variables()))
            raise MalformedFactError(f"pattern has unbound variables: {unbound}")
        return Fact(self.segments)

    def match(self, fact: Fact, binding: Binding) -> Binding | None:
        """Structurally match against a fact, extending ``binding``.

        Shapes must agree exactly: same segment count and identical
        separators. Returns the extended binding or None.
        """
        if len(self.segments) != len(fact.segments):
            return None
        out = dict(binding)
        for (psep, pkey), (fsep, fkey) in zip(self.segments, fact.segments):
            if psep != fsep:
                return None
            if is_variable(pkey):
                bound = out.get(pkey)
                if bound is None:
                    out[pkey] = fkey
                elif bound != fkey:
                    return None
            elif pkey != fkey:
                return None
        return out

    def __str__(self) -> str:
        return self.render()


def parse_pattern(text: str) -> Pattern:
    """Parse a pattern; a leading ``not `` marks negative polarity."""
    text = text.strip()
    negative = False
    if text.startswith(_NEGATION_PREFIX):
        negative = True
        text = text[len(_NEGATION_PREFIX):].strip()
    if not text:
        raise MalformedFactError("empty pattern")
    segments = _split_segments(text, what="pattern")
    if segments[0][0] != CHILD:
        raise MalformedFactError(f"pattern {text!r} starts with a separator")
    for _, key in segments:
        if not (_KEY_RE.match(key) or _VAR_RE.match(key)):
            raise MalformedFactError(f"bad token {key!r} in pattern {text!r}")
    return Pattern(tuple(segments), negative)


def _conflicts(new: Fact, old: Fact) -> bool:
    """True when ``old`` passes through ``new``'s exclusion slot with a
    different value: same segments up to the deepest ``!`` of ``new``,
    an ``!`` separator at that depth, and a differing token after it."""
    slot = new.exclusion_slot()
    if slot is None:
        return False
    prefix, value = slot
    d = len(prefix)
    if len(old.segments) <= d:
        return False
    if old.segments[:d] != prefix:
        return False
    osep, okey = old.segments[d]
    return osep == EXCLUSIVE and okey != value


def check_exclusion_invariant(facts: set[Fact] | frozenset[Fact]) -> None:
    """Assert every exclusion slot holds at most one value.

    Scans all facts independently of insert's conflict logic: groups
    facts by (prefix-before-deepest-``!``) and requires a single value
    per group. Raises AssertionError on violation.
    """
    slots: dict[tuple[Segment, ...], set[str]] = {}
    for fact in facts:
        slot = fact.exclusion_slot()
        if slot is None:
            continue
        prefix, value = slot
        slots.setdefault(prefix, set()).add(value)
    for prefix, values in slots.items():
        if len(values) > 1:
            head = prefix[0][1] + "".join(s + k for s, k in prefix[1:])
            raise AssertionError(
                f"exclusion slot {head}! holds {sorted(values)}"
            )


@dataclass(frozen=True)
class Database:
    """Immutable set of facts; all mutators return a new Database."""

    facts: frozenset[Fact] = field(default_factory=frozenset)

    @classmethod
    def from_texts(cls, texts) -> "Database":
        db = cls()
        for text in texts:
            db = db.insert(parse_fact(text))
        return db

    def facts_sorted(self) -> list[Fact]:
        return sorted(self.facts, key=Fact.render)

    def render(self) -> list[str]:
        return [f.render() for f in self.facts_sorted()]

    def __contains__(self, fact: Fact) -> bool:
        return fact in self.facts

    def __len__(self) -> int:
        return len(self.facts)

    def insert(self, fact: Fact) -> "Database":
        """Add a fact, displacing whatever currently fills its exclusion
        slot. Idempotent on duplicates; pure-child facts never conflict."""
        kept = {f for f in self.facts if not _conflicts(fact, f)}
        kept.add(fact)
        return Database(frozenset(kept))

    def retract(self, pattern: Pattern) -> "Database":
        """Remove every fact the (positive) pattern matches; no-op when
        nothing matches."""
        if pattern.negative:
            raise UnsafePatternError("cannot retract a negative pattern")
        kept = {f for f in self.facts if pattern.match(f, {}) is None}
        return Database(frozenset(kept))

    def query(
        self,
        patterns: list[Pattern],
        binding: Binding | None = None,
    ) -> list[Binding]:
        """Solve a conjunctive query.

        Returns every binding (extending the optional seed ``binding``)
        under which all positive patterns match some fact and no
        negative pattern matches any fact. Results are deduplicated and
        ordered lexicographically by bound values (variables in name
        order).

        Raises UnsafePatternError when a negative pattern uses a
        variable no positive pattern (or the seed binding) binds.
        """
        seed: Binding = dict(binding) if binding else {}
        positives = [p for p in patterns if not p.negative]
        negatives = [p for p in patterns if p.negative]

        bound_vars = set(seed)
        for p in positives:
            bound_vars |= p.variables()
        for p in negatives:
            loose = p.variables() - bound_vars
            if loose:
                raise UnsafePatternError(
                    f"negative pattern {p.render()!r} leaves "
                    f"{sorted(loose)} unbound"
                )

        facts = self.facts_sorted()
        solutions: list[Binding] = []

        def extend(i: int, binding: Binding) -> None:
            if i == len(positives):
                solutions.append(binding)
                return
            for fact in facts:
                extended = positives[i].match(fact, binding)
                if extended is not None:
                    extend(i + 1, extended)

        extend(0, seed)

        def rejected(binding: Binding) -> bool:
            for neg in negatives:
                ground = neg.substitute(binding)
                if any(ground.match(f, {}) is not None for f in facts):
                    return True
            return False

        unique: dict[tuple, Binding] = {}
        for sol in solutions:
            if rejected(sol):
                continue
            key = tuple(sol[v] for v in sorted(sol))
            unique.setdefault(key, sol)
        return [unique[k] for k in sorted(unique)]
