"""Domain documents: JSON-authored action schemas plus starting state.

A domain file is strict UTF-8 JSON:

.. code-block:: json

    {
      "name": "bar",
      "cast": ["player", "isaac"],
      "player": "player",
      "initial_facts": ["at.player!street"],
      "schemas": [
        {
          "id": "order_drink",
          "roles": [],
          "preconditions": ["at.player!bar", "menu.bar.drink.D",
                            "not holding!player!D"],
          "effects": [{"op": "insert", "fact": "holding!player!D"}],
          "summary_template": "order a {D}"
        }
      ]
    }

Schema variables come from two places: ``roles`` range over the cast,
everything else is bound by precondition matching. Effects and summary
placeholders may only use bound variables. Unknown fields are rejected
unless ``lax`` loading is requested.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .errors import MissingBindingError, SchemaError
from .logic import (
    Binding,
    Fact,
    Pattern,
    check_exclusion_invariant,
    is_variable,
    parse_fact,
    parse_pattern,
)

_TOKEN_RE = re.compile(r"[a-z0-9_]+\Z")
_PLACEHOLDER_RE = re.compile(r"\{([A-Z][A-Za-z0-9_]*)\}")

EFFECT_OPS = ("insert", "retract")


@dataclass(frozen=True)
class Effect:
    op: str  # "insert" | "retract"
    pattern: Pattern


@dataclass(frozen=True)
class ActionSchema:
    id: str
    roles: tuple[str, ...]
    preconditions: tuple[Pattern, ...]
    effects: tuple[Effect, ...]
    summary_template: str

    def positive_variables(self) -> set[str]:
        out = set(self.roles)
        for p in self.preconditions:
            if not p.negative:
                out |= p.variables()
        return out


@dataclass(frozen=True)
class Domain:
    name: str
    cast: tuple[str, ...]
    player: str
    initial_facts: tuple[Fact, ...]
    schemas: tuple[ActionSchema, ...]

    def schema_by_id(self, schema_id: str) -> ActionSchema | None:
        for schema in self.schemas:
            if schema.id == schema_id:
                return schema
        return None


def render_summary(template: str, binding: Binding) -> str:
    """Expand every ``{Var}`` placeholder from the binding.

    Raises MissingBindingError when a placeholder has no binding. All
    non-placeholder text is preserved byte for byte.
    """

    def expand(match: re.Match) -> str:
        name = match.group(1)
        if name not in binding:
            raise MissingBindingError(f"no binding for placeholder {{{name}}}")
        return binding[name]

    return _PLACEHOLDER_RE.sub(expand, template)


def _require(condition: bool, path: str, reason: str) -> None:
    if not condition:
        raise SchemaError(path, reason)


def _check_fields(obj: dict, path: str, required: tuple[str, ...], lax: bool) -> None:
    for name in required:
        _require(name in obj, path, f"missing field {name!r}")
    if not lax:
        unknown = sorted(set(obj) - set(required))
        _require(not unknown, path, f"unknown fields {unknown}")


def _parse_schema(obj, path: str, lax: bool) -> ActionSchema:
    _require(isinstance(obj, dict), path, "schema must be an object")
    _check_fields(
        obj, path,
        ("id", "roles", "preconditions", "effects", "summary_template"),
        lax,
    )

    schema_id = obj["id"]
    _require(isinstance(schema_id, str) and bool(_TOKEN_RE.match(schema_id)),
             f"{path}/id", "id must be a lowercase token")

    roles = obj["roles"]
    _require(isinstance(roles, list), f"{path}/roles", "roles must be a list")
    for i, role in enumerate(roles):
        _require(isinstance(role, str) and is_variable(role),
                 f"{path}/roles/{i}",
                 "role must be a variable name ([A-Z][A-Za-z0-9_]*)")
    _require(len(set(roles)) == len(roles), f"{path}/roles", "duplicate role")

    raw_pre = obj["preconditions"]
    _require(isinstance(raw_pre, list), f"{path}/preconditions",
             "preconditions must be a list")
    preconditions = []
    for i, src in enumerate(raw_pre):
        ppath = f"{path}/preconditions/{i}"
        _require(isinstance(src, str), ppath, "precondition must be a string")
        try:
            preconditions.append(parse_pattern(src))
        except Exception as exc:
            raise SchemaError(ppath, str(exc)) from exc

    bound = set(roles)
    for p in preconditions:
        if not p.negative:
            bound |= p.variables()
    for i, p in enumerate(preconditions):
        if p.negative:
            loose = p.variables() - bound
            _require(not loose, f"{path}/preconditions/{i}",
                     f"negative pattern leaves {sorted(loose)} unbound")

    raw_effects = obj["effects"]
    _require(isinstance(raw_effects, list), f"{path}/effects",
             "effects must be a list")
    effects = []
    for i, eff in enumerate(raw_effects):
        epath = f"{path}/effects/{i}"
        _require(isinstance(eff, dict), epath, "effect must be an object")
        _check_fields(eff, epath, ("op", "fact"), lax)
        _require(eff["op"] in EFFECT_OPS, f"{epath}/op",
                 f"op must be one of {list(EFFECT_OPS)}")
        _require(isinstance(eff["fact"], str), f"{epath}/fact",
                 "fact must be a string")
        try:
            pattern = parse_pattern(eff["fact"])
        except Exception as exc:
            raise SchemaError(f"{epath}/fact", str(exc)) from exc
        _require(not pattern.negative, f"{epath}/fact",
                 "effect patterns cannot be negative")
        loose = pattern.variables() - bound
        _require(not loose, f"{epath}/fact",
                 f"effect uses unbound variables {sorted(loose)}")
        effects.append(Effect(eff["op"], pattern))

    template = obj["summary_template"]
    tpath = f"{path}/summary_template"
    _require(isinstance(template, str), tpath, "summary_template must be a string")
    stripped = _PLACEHOLDER_RE.sub("", template)
    _require("{" not in stripped and "}" not in stripped, tpath,
             "stray braces outside {Variable} placeholders")
    for name in _PLACEHOLDER_RE.findall(template):
        _require(name in bound, tpath,
                 f"placeholder {{{name}}} is not a role or precondition variable")

    return ActionSchema(
        id=schema_id,
        roles=tuple(roles),
        preconditions=tuple(preconditions),
        effects=tuple(effects),
        summary_template=template,
    )


def load_domain(document: bytes | str | dict, *, lax: bool = False) -> Domain:
    """Parse and fully validate a domain document.

    Accepts raw JSON (bytes/str) or an already-decoded object. Every
    failure raises SchemaError with a JSON path; no partially built
    Domain ever escapes.
    """
    if isinstance(document, (bytes, str)):
        try:
            obj = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError("/", f"invalid JSON: {exc}") from exc
    else:
        obj = document

    _require(isinstance(obj, dict), "/", "domain must be a JSON object")
    _check_fields(obj, "/",
                  ("name", "cast", "player", "initial_facts", "schemas"), lax)

    _require(isinstance(obj["name"], str) and obj["name"] != "",
             "/name", "name must be a non-empty string")

    cast = obj["cast"]
    _require(isinstance(cast, list) and cast, "/cast",
             "cast must be a non-empty list")
    for i, entity in enumerate(cast):
        _require(isinstance(entity, str) and bool(_TOKEN_RE.match(entity)),
                 f"/cast/{i}", "cast entry must be a lowercase token")
    _require(len(set(cast)) == len(cast), "/cast", "duplicate cast entry")

    player = obj["player"]
    _require(player in cast, "/player", "player must be a cast member")

    raw_facts = obj["initial_facts"]
    _require(isinstance(raw_facts, list), "/initial_facts",
             "initial_facts must be a list")
    facts = []
    for i, src in enumerate(raw_facts):
        fpath = f"/initial_facts/{i}"
        _require(isinstance(src, str), fpath, "fact must be a string")
        try:
            facts.append(parse_fact(src))
        except Exception as exc:
            raise SchemaError(fpath, str(exc)) from exc
    try:
        check_exclusion_invariant(set(facts))
    except AssertionError as exc:
        raise SchemaError("/initial_facts", str(exc)) from exc

    raw_schemas = obj["schemas"]
    _require(isinstance(raw_schemas, list), "/schemas", "schemas must be a list")
    schemas = []
    seen_ids = set()
    for i, raw in enumerate(raw_schemas):
        schema = _parse_schema(raw, f"/schemas/{i}", lax)
        _require(schema.id not in seen_ids, f"/schemas/{i}/id",
                 f"duplicate schema id {schema.id!r}")
        seen_ids.add(schema.id)
        schemas.append(schema)

    return Domain(
        name=obj["name"],
        cast=tuple(cast),
        player=player,
        initial_facts=tuple(facts),
        schemas=tuple(schemas),
    )


def domain_to_dict(domain: Domain) -> dict:
    return {
        "name": domain.name,
        "cast": list(domain.cast),
        "player": domain.player,
        "initial_facts": [f.render() for f in domain.initial_facts],
        "schemas": [
            {
                "id": s.id,
                "roles": list(s.roles),
                "preconditions": [p.render() for p in s.preconditions],
                "effects": [
                    {"op": e.op, "fact": e.pattern.render()} for e in s.effects
                ],
                "summary_template": s.summary_template,
            }
            for s in domain.schemas
        ],
    }


def serialize_domain(domain: Domain) -> str:
    """Emit canonical JSON; load_domain(serialize_domain(d)) == d."""
    return json.dumps(domain_to_dict(domain), ensure_ascii=False, indent=2) + "\n"


def load_domain_path(path, *, lax: bool = False) -> Domain:
    with open(path, "rb") as fh:
        return load_domain(fh.read(), lax=lax)
