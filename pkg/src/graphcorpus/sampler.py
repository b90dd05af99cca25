"""Sampling backends and the caching batch driver.

Two backends share one interface: `StubBackend` fabricates reasoning paths
offline from the ground truth (deterministic per prompt and sample index),
`HttpBackend` talks to an OpenAI-compatible chat endpoint. `sample` fans a
prompt list out over a thread pool and keeps an append-only JSONL cache so
re-runs never pay for the same prompt twice.
"""

from __future__ import annotations

import hashlib
import json
import random
import re
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import requests

from .errors import BackendError, CacheError, InvalidSpecError
from .textgen import Problem
from .transcripts import make_transcript


@dataclass(frozen=True)
class SampleProfile:
    name: str
    n: int
    temperature: float
    max_tokens: int = 2048


PROFILES = {
    "initial": SampleProfile("initial", 3, 0.9),
    "augment": SampleProfile("augment", 30, 0.9),
    "dpo": SampleProfile("dpo", 20, 0.9),
    "eval": SampleProfile("eval", 1, 0.0, 1024),
}


def get_profile(name: str) -> SampleProfile:
    try:
        return PROFILES[name]
    except KeyError:
        raise InvalidSpecError(f"unknown sampling profile: {name}") from None


def prompt_sha(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


_INSTRUCTION = re.compile(r"### Instruction:\n(.*?)\n\n### Response:", re.DOTALL)


def _question_of(prompt: str) -> str | None:
    """Recover the problem text embedded in a prompt."""
    m = None
    for m in _INSTRUCTION.finditer(prompt):
        pass
    if m is not None:
        return m.group(1)
    # few-shot form: the final "Q: ...\nA:" block
    idx = prompt.rfind("\nQ: ")
    if idx >= 0:
        start = idx + 4
    elif prompt.startswith("Q: "):
        start = 3
    else:
        return None
    end = prompt.find("\nA:", start)
    if end >= 0:
        return prompt[start:end]
    return None


class StubBackend:
    """Offline sampler that writes reasoning paths from the ground truth.

    error_rate is the chance a sampled path argues for a wrong answer; the
    draw is a pure function of (seed, prompt, sample index), so runs are
    reproducible across processes.
    """

    def __init__(self, problems: list[Problem], *, error_rate: float = 0.0,
                 seed: int = 0):
        if not 0.0 <= error_rate <= 1.0:
            raise InvalidSpecError("error_rate must be within [0, 1]")
        self.error_rate = error_rate
        self.seed = seed
        self._by_text = {p.text: p for p in problems}
        self.requests = 0

    def _lookup(self, prompt: str) -> Problem:
        text = _question_of(prompt)
        if text is not None and text in self._by_text:
            return self._by_text[text]
        # tolerate prompt formats we did not build ourselves
        hits = [p for t, p in self._by_text.items() if t and t in prompt]
        if hits:
            return max(hits, key=lambda p: len(p.text))
        raise BackendError("stub backend knows no problem for this prompt")

    def generate(self, prompt: str, profile: SampleProfile) -> list[str]:
        problem = self._lookup(prompt)
        self.requests += 1
        sha = prompt_sha(prompt)
        out = []
        for i in range(profile.n):
            digest = hashlib.sha256(
                f"{self.seed}:{sha}:{i}".encode()).digest()
            rng = random.Random(int.from_bytes(digest[:8], "big"))
            correct = rng.random() >= self.error_rate
            out.append(make_transcript(problem, correct=correct, rng=rng))
        return out


class HttpBackend:
    """OpenAI-compatible chat completions client with retry and backoff."""

    RETRY_STATUSES = frozenset({429, 500, 502, 503, 504})

    def __init__(self, base_url: str, model: str, *, api_key: str | None = None,
                 timeout: float = 120.0, max_retries: int = 4,
                 max_concurrency: int = 8, backoff: float = 0.5):
        self.url = base_url.rstrip("/") + "/v1/chat/completions"
        self.model = model
        self.api_key = api_key
        self.timeout = timeout
        self.max_retries = max_retries
        self.backoff = backoff
        self._gate = threading.Semaphore(max_concurrency)
        self.requests = 0

    def generate(self, prompt: str, profile: SampleProfile) -> list[str]:
        payload = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": profile.temperature,
            "max_tokens": profile.max_tokens,
            "n": profile.n,
        }
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        last = "no attempt made"
        for attempt in range(self.max_retries + 1):
            if attempt:
                time.sleep(self.backoff * 2 ** (attempt - 1))
            try:
                with self._gate:
                    self.requests += 1
                    resp = requests.post(self.url, json=payload,
                                         headers=headers, timeout=self.timeout)
            except requests.RequestException as exc:
                last = f"connection error: {exc}"
                continue
            if resp.status_code == 200:
                try:
                    choices = resp.json()["choices"]
                    texts = [c["message"]["content"] or "" for c in choices]
                except (ValueError, KeyError, TypeError) as exc:
                    raise BackendError(f"malformed response body: {exc}") from exc
                texts = texts[: profile.n]
                texts += [""] * (profile.n - len(texts))
                return texts
            if resp.status_code in self.RETRY_STATUSES:
                last = f"status {resp.status_code}"
                continue
            raise BackendError(
                f"backend rejected the request: {resp.text[:200]}",
                status=resp.status_code)
        raise BackendError(f"retries exhausted ({last})")


class Cache:
    """Append-only JSONL completion cache keyed by (prompt sha, profile)."""

    def __init__(self, path: str):
        self.path = path
        self._store: dict[tuple[str, str], list[str]] = {}
        self._lock = threading.Lock()
        try:
            fh = open(path, "r", encoding="utf-8")
        except FileNotFoundError:
            return
        with fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                    key = (rec["prompt_sha"], rec["profile"])
                    texts = rec["texts"]
                except (ValueError, KeyError, TypeError):
                    raise CacheError(f"{path}:{lineno}: unreadable cache line")
                if not isinstance(texts, list):
                    raise CacheError(f"{path}:{lineno}: texts is not a list")
                self._store[key] = texts      # last write wins

    def lookup(self, sha: str, profile: SampleProfile) -> list[str] | None:
        got = self._store.get((sha, profile.name))
        if got is None or len(got) < profile.n:
            return None
        return got[: profile.n]

    def put(self, sha: str, profile: SampleProfile, texts: list[str]) -> None:
        rec = {"prompt_sha": sha, "profile": profile.name, "texts": texts}
        line = json.dumps(rec, ensure_ascii=False)
        with self._lock:
            self._store[(sha, profile.name)] = texts
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")


def sample(prompts: list[str], profile: SampleProfile, backend, *,
           cache: Cache | None = None, jobs: int = 1,
           max_requests: int | None = None) -> list[list[str]]:
    """Collect profile.n completions per prompt, using the cache when it can.

    max_requests caps the number of backend calls (cache hits are free); the
    cap is checked up front so a too-large batch fails before spending money.
    """
    if profile.n < 1:
        raise InvalidSpecError("profile.n must be at least 1")
    if jobs < 1:
        raise InvalidSpecError("jobs must be at least 1")
    if not prompts:
        return []
    results: list[list[str] | None] = [None] * len(prompts)
    misses: list[int] = []
    shas = [prompt_sha(p) for p in prompts]
    for i, sha in enumerate(shas):
        hit = cache.lookup(sha, profile) if cache is not None else None
        if hit is not None:
            results[i] = hit
        else:
            misses.append(i)
    if max_requests is not None and len(misses) > max_requests:
        raise BackendError(
            f"batch needs {len(misses)} requests but only {max_requests} allowed")

    def fetch(i: int) -> None:
        texts = backend.generate(prompts[i], profile)
        if cache is not None:
            cache.put(shas[i], profile, texts)
        results[i] = texts

    if misses:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for _ in pool.map(fetch, misses):
                pass
    return [r for r in results if r is not None]
