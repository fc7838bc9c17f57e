"""Generation backends behind a single ``complete(prompt) -> text`` call.

Three implementations: a remote HTTP chat endpoint, a fixture-replay mock
keyed by prompt hash (the whole primary test suite runs offline on it),
and a scripted backend for unit-testing controllers.
"""

from __future__ import annotations

import hashlib
import os
import time
from pathlib import Path

import requests

from ..errors import BackendError


def prompt_digest(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()[:16]


class ScriptedBackend:
    """Returns canned completions; accepts a list or a callable."""

    backend_id = "scripted"

    def __init__(self, completions):
        self._fn = completions if callable(completions) else None
        self._queue = None if callable(completions) else list(completions)
        self.calls = 0

    def complete(self, prompt: str) -> str:
        self.calls += 1
        if self._fn is not None:
            return self._fn(prompt)
        if not self._queue:
            raise BackendError("scripted backend ran out of completions")
        return self._queue.pop(0)


class MockBackend:
    """Replays completions from a directory of fixture files.

    Fixtures are named ``<first 16 hex chars of sha256(prompt)>.txt``; a
    missing fixture is a hard error that names the digest so the fixture
    can be recorded.
    """

    backend_id = "mock"

    def __init__(self, fixture_dir):
        self.fixture_dir = Path(fixture_dir)
        self.calls = 0

    def complete(self, prompt: str) -> str:
        self.calls += 1
        digest = prompt_digest(prompt)
        path = self.fixture_dir / f"{digest}.txt"
        if not path.exists():
            head = prompt.splitlines()[0] if prompt else ""
            raise BackendError(
                f"no fixture {digest}.txt in {self.fixture_dir} "
                f"(prompt starts: {head[:80]!r})"
            )
        return path.read_text(encoding="utf-8")


class RecordingBackend:
    """Wraps another backend and writes mock fixtures as it goes."""

    def __init__(self, inner, fixture_dir):
        self.inner = inner
        self.fixture_dir = Path(fixture_dir)
        self.fixture_dir.mkdir(parents=True, exist_ok=True)

    @property
    def backend_id(self) -> str:
        return self.inner.backend_id

    def complete(self, prompt: str) -> str:
        completion = self.inner.complete(prompt)
        path = self.fixture_dir / f"{prompt_digest(prompt)}.txt"
        path.write_text(completion, encoding="utf-8")
        return completion


class HttpBackend:
    """Chat-completion endpoint speaking the common messages schema."""

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key_env: str = "LLM_API_KEY",
        timeout: float = 120.0,
        max_retries: int = 2,
        retry_wait: float = 2.0,
    ):
        self.endpoint = endpoint
        self.model = model
        self.api_key_env = api_key_env
        self.timeout = timeout
        self.max_retries = max_retries
        self.retry_wait = retry_wait
        self.backend_id = f"http:{model}"

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.api_key_env, "")
        if key:
            headers["Authorization"] = f"Bearer {key}"
        return headers

    def complete(self, prompt: str) -> str:
        body = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
        }
        last_error = None
        for attempt in range(self.max_retries + 1):
            if attempt:
                time.sleep(self.retry_wait * attempt)
            try:
                response = requests.post(
                    self.endpoint,
                    json=body,
                    headers=self._headers(),
                    timeout=self.timeout,
                )
            except requests.RequestException as exc:
                last_error = f"request failed: {exc}"
                continue
            if response.status_code >= 500:
                last_error = f"server error {response.status_code}"
                continue
            if response.status_code != 200:
                raise BackendError(
                    f"endpoint returned {response.status_code}: "
                    f"{response.text[:200]}"
                )
            try:
                return response.json()["choices"][0]["message"]["content"]
            except (KeyError, IndexError, TypeError, ValueError) as exc:
                raise BackendError(f"unexpected response shape: {exc}")
        raise BackendError(
            f"backend unavailable after {self.max_retries + 1} attempts: "
            f"{last_error}"
        )
