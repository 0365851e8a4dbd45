"""Uniform chat-completion access with deterministic test backends.

Four backends share one interface: ``live`` speaks an OpenAI-compatible
HTTP contract, ``record`` tees any inner backend into a cassette,
``replay`` serves recorded responses by request fingerprint, and
``scripted`` returns canned responses for fully offline runs.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import threading
import time
from dataclasses import dataclass
from pathlib import Path

import requests

from .errors import BackendRefused, GatewayError, ReplayMiss, TransientBackendError

API_KEY_ENV = "LAYPRESS_API_KEY"
ROLES = ("system", "user", "assistant")
FINISH_REASONS = ("stop", "length", "error")


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}")
        if self.role in ("system", "user") and not self.content:
            raise ValueError(f"{self.role} message must not be empty")


@dataclass(frozen=True)
class CompletionRequest:
    model_id: str
    messages: tuple[ChatMessage, ...]
    temperature: float = 0.0
    max_tokens: int = 1024
    seed: int | None = None

    def __post_init__(self):
        if not self.messages:
            raise ValueError("request needs at least one message")
        if self.messages[-1].role != "user":
            raise ValueError("last message must be from the user")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_tokens <= 0:
            raise ValueError("max_tokens must be positive")


@dataclass(frozen=True)
class CompletionResponse:
    text: str
    finish_reason: str = "stop"
    prompt_tokens: int | None = None
    completion_tokens: int | None = None

    def __post_init__(self):
        if self.finish_reason not in FINISH_REASONS:
            raise ValueError(f"unknown finish_reason {self.finish_reason!r}")
        if not self.text and self.finish_reason != "error":
            raise ValueError("empty text requires finish_reason == 'error'")

    def to_json(self) -> dict:
        return {
            "text": self.text,
            "finish_reason": self.finish_reason,
            "prompt_tokens": self.prompt_tokens,
            "completion_tokens": self.completion_tokens,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CompletionResponse":
        return cls(
            text=obj["text"],
            finish_reason=obj.get("finish_reason", "stop"),
            prompt_tokens=obj.get("prompt_tokens"),
            completion_tokens=obj.get("completion_tokens"),
        )


def fingerprint(req: CompletionRequest) -> str:
    """Stable hex digest of the canonical request serialization."""
    canonical = json.dumps(
        {
            "model_id": req.model_id,
            "messages": [{"role": m.role, "content": m.content} for m in req.messages],
            "temperature": req.temperature,
            "max_tokens": req.max_tokens,
            "seed": req.seed,
        },
        sort_keys=True,
        ensure_ascii=False,
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class Cassette:
    """Recorded responses keyed by request fingerprint.

    Repeated identical requests map to an ordered list consumed FIFO on
    replay; the recorded entries themselves are never mutated.
    """

    def __init__(self, entries: dict[str, list[CompletionResponse]] | None = None):
        self.entries: dict[str, list[CompletionResponse]] = entries or {}

    def append(self, digest: str, response: CompletionResponse) -> None:
        self.entries.setdefault(digest, []).append(response)

    @classmethod
    def load(cls, path: str | Path) -> "Cassette":
        raw = json.loads(Path(path).read_text("utf-8"))
        return cls(
            {
                digest: [CompletionResponse.from_json(obj) for obj in responses]
                for digest, responses in raw.items()
            }
        )

    def save(self, path: str | Path) -> None:
        payload = {
            digest: [resp.to_json() for resp in responses]
            for digest, responses in self.entries.items()
        }
        Path(path).write_text(
            json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n", "utf-8"
        )


class ScriptedBackend:
    """Canned responses for tests and demos.

    Rules are (substring, responses) pairs matched against the last user
    message; per-rule response lists are consumed FIFO and the final entry
    repeats. ``default`` answers anything unmatched.
    """

    def __init__(self, default: str = "OK", rules: list[tuple[str, list[str]]] | None = None):
        self.default = default
        self.rules = [(needle, list(responses)) for needle, responses in (rules or [])]
        self._lock = threading.Lock()

    @classmethod
    def from_script(cls, obj: dict) -> "ScriptedBackend":
        rules = [
            (rule["contains"], list(rule["responses"]))
            for rule in obj.get("rules", [])
        ]
        return cls(default=obj.get("default", "OK"), rules=rules)

    def complete(self, req: CompletionRequest) -> CompletionResponse:
        prompt = req.messages[-1].content
        with self._lock:
            for needle, responses in self.rules:
                if needle in prompt:
                    text = responses.pop(0) if len(responses) > 1 else responses[0]
                    return CompletionResponse(text=text)
        return CompletionResponse(text=self.default)


class ReplayBackend:
    """Serves recorded responses; a miss names the offending digest."""

    def __init__(self, cassette: Cassette):
        self.cassette = cassette
        self._cursor: dict[str, int] = {}
        self._lock = threading.Lock()

    def complete(self, req: CompletionRequest) -> CompletionResponse:
        digest = fingerprint(req)
        with self._lock:
            position = self._cursor.get(digest, 0)
            recorded = self.cassette.entries.get(digest, [])
            if position >= len(recorded):
                raise ReplayMiss(digest)
            self._cursor[digest] = position + 1
            return recorded[position]


class RecordBackend:
    """Tees an inner backend's responses into a cassette file."""

    def __init__(self, inner, cassette_path: str | Path, cassette: Cassette | None = None):
        self.inner = inner
        self.cassette_path = Path(cassette_path)
        if cassette is None:
            # append to an existing cassette rather than clobbering it
            cassette = Cassette.load(self.cassette_path) if self.cassette_path.exists() else Cassette()
        self.cassette = cassette
        self._lock = threading.Lock()

    def complete(self, req: CompletionRequest) -> CompletionResponse:
        response = self.inner.complete(req)
        with self._lock:
            self.cassette.append(fingerprint(req), response)
            self.cassette.save(self.cassette_path)
        return response


class LiveBackend:
    """OpenAI-compatible chat-completions client with bounded retries."""

    def __init__(
        self,
        base_url: str,
        api_key: str | None = None,
        max_attempts: int = 3,
        backoff_base: float = 0.5,
        timeout: float = 120.0,
        session: requests.Session | None = None,
    ):
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV, "")
        self.max_attempts = max_attempts
        self.backoff_base = backoff_base
        self.timeout = timeout
        self.session = session or requests.Session()

    def _payload(self, req: CompletionRequest) -> dict:
        body = {
            "model": req.model_id,
            "messages": [{"role": m.role, "content": m.content} for m in req.messages],
            "temperature": req.temperature,
            "max_tokens": req.max_tokens,
        }
        if req.seed is not None:
            body["seed"] = req.seed
        return body

    def complete(self, req: CompletionRequest) -> CompletionResponse:
        url = f"{self.base_url}/chat/completions"
        headers = {"Authorization": f"Bearer {self.api_key}"}
        last_error: Exception | None = None
        for attempt in range(self.max_attempts):
            if attempt:
                delay = self.backoff_base * (2 ** (attempt - 1))
                time.sleep(delay + random.uniform(0, delay / 4))
            try:
                resp = self.session.post(
                    url, json=self._payload(req), headers=headers, timeout=self.timeout
                )
            except (requests.Timeout, requests.ConnectionError) as exc:
                last_error = exc
                continue
            if 400 <= resp.status_code < 500:
                raise BackendRefused(resp.status_code, resp.text[:200])
            if resp.status_code >= 500:
                last_error = GatewayError(f"server error {resp.status_code}")
                continue
            return self._parse(resp.json())
        raise TransientBackendError(f"gave up after {self.max_attempts} attempts: {last_error}")

    @staticmethod
    def _parse(obj: dict) -> CompletionResponse:
        try:
            choice = obj["choices"][0]
            text = choice["message"]["content"] or ""
            finish = choice.get("finish_reason", "stop")
        except (KeyError, IndexError, TypeError) as exc:
            raise BackendRefused(200, f"malformed completion body: {exc}") from exc
        if finish not in FINISH_REASONS:
            finish = "stop"
        if not text:
            finish = "error"
        usage = obj.get("usage") or {}
        return CompletionResponse(
            text=text,
            finish_reason=finish,
            prompt_tokens=usage.get("prompt_tokens"),
            completion_tokens=usage.get("completion_tokens"),
        )


class Gateway:
    """Thread-safe facade bounding in-flight requests over one backend."""

    def __init__(self, backend, max_in_flight: int = 4):
        self.backend = backend
        self._slots = threading.Semaphore(max_in_flight)

    def complete(self, req: CompletionRequest) -> CompletionResponse:
        with self._slots:
            return self.backend.complete(req)


def user_message(content: str) -> ChatMessage:
    return ChatMessage(role="user", content=content)
