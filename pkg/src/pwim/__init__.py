"""Play What I Mean: map free-text player intents onto a ranked list of
conditionally available game actions, and let the player pick."""

from .domain import ActionSchema, Domain, load_domain, render_summary, serialize_domain
from .embedding import CachingEmbedder, FallbackEmbedder, RemoteEmbedder, provider_from_env
from .engine import GroundedAction, TranscriptEvent, apply_action, enumerate_actions
from .evaluation import EvalCase, EvalReport, parse_cases, run_eval
from .logic import Binding, Database, Fact, Pattern, parse_fact, parse_pattern
from .ranking import RankedAction, RankingConfig, cosine, display_intensities, rank_actions
from .service import PlayService, Session

__version__ = "0.1.0"

__all__ = [
    "ActionSchema",
    "Binding",
    "CachingEmbedder",
    "Database",
    "Domain",
    "EvalCase",
    "EvalReport",
    "Fact",
    "FallbackEmbedder",
    "GroundedAction",
    "Pattern",
    "PlayService",
    "RankedAction",
    "RankingConfig",
    "RemoteEmbedder",
    "Session",
    "TranscriptEvent",
    "apply_action",
    "cosine",
    "display_intensities",
    "enumerate_actions",
    "load_domain",
    "parse_cases",
    "parse_fact",
    "parse_pattern",
    "provider_from_env",
    "rank_actions",
    "render_summary",
    "run_eval",
    "serialize_domain",
    "__version__",
]
