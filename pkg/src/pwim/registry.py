"""Locate bundled and on-disk domain files."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .domain import Domain, load_domain, load_domain_path

DOMAIN_SUFFIX = ".domain.json"


def bundled_dir():
    return resources.files("pwim") / "domains"


def bundled_domains() -> dict[str, Domain]:
    domains = {}
    for entry in bundled_dir().iterdir():
        if entry.name.endswith(DOMAIN_SUFFIX):
            domain = load_domain(entry.read_bytes())
            domains[domain.name] = domain
    return domains


def bundled_cases_path() -> Path:
    return Path(str(bundled_dir() / "bar_intents.cases.json"))


def bundled_domain_path(name: str) -> Path:
    return Path(str(bundled_dir() / f"{name}{DOMAIN_SUFFIX}"))


def load_domain_dir(path: str | Path, *, lax: bool = False) -> dict[str, Domain]:
    """Load every *.domain.json under a directory, keyed by domain name."""
    domains = {}
    for file in sorted(Path(path).glob(f"*{DOMAIN_SUFFIX}")):
        domain = load_domain_path(file, lax=lax)
        domains[domain.name] = domain
    return domains
