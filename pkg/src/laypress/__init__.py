"""laypress: zero-shot lay-summarisation pipeline and evaluation harness."""

from . import agreement, corpus, gateway, judges, metrics, pipeline, service, textproc
from .errors import LaypressError

__all__ = [
    "agreement",
    "corpus",
    "gateway",
    "judges",
    "metrics",
    "pipeline",
    "service",
    "textproc",
    "LaypressError",
]

__version__ = "0.1.0"
