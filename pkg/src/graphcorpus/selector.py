"""Reasoning-path selection and the DPO preference objective.

Path selection works on plain strings. Four similarity metrics (token edit
ratio, Jaccard, tf-idf cosine, hashed-embedding cosine) nominate candidates
that disagree with an anchor path; a seeded k-means over the hashed
embeddings adds cluster medoids. Everything is deterministic for a fixed
seed: all ties break on (similarity, text, index).
"""

from __future__ import annotations

import hashlib
import math
import re

import numpy as np

from .errors import InvalidSpecError

METRICS = ("edit", "jaccard", "tfidf", "embedding")

_TOKEN = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    return _TOKEN.findall(text.lower())


def edit_similarity(a: str, b: str) -> float:
    """1 - normalized Levenshtein distance over token sequences."""
    ta, tb = tokenize(a), tokenize(b)
    if not ta and not tb:
        return 1.0
    if len(ta) < len(tb):
        ta, tb = tb, ta
    prev = list(range(len(tb) + 1))
    for i, x in enumerate(ta, 1):
        cur = [i]
        for j, y in enumerate(tb, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1,
                           prev[j - 1] + (x != y)))
        prev = cur
    return 1.0 - prev[-1] / len(ta)


def jaccard_similarity(a: str, b: str) -> float:
    sa, sb = set(tokenize(a)), set(tokenize(b))
    if not sa and not sb:
        return 1.0
    return len(sa & sb) / len(sa | sb)


class TfidfModel:
    """Tiny tf-idf fit on one candidate set; cosine over l2-normed vectors."""

    def __init__(self, corpus: list[str]):
        docs = [tokenize(t) for t in corpus]
        vocab: dict[str, int] = {}
        df: dict[str, int] = {}
        for tokens in docs:
            for tok in set(tokens):
                df[tok] = df.get(tok, 0) + 1
        for tok in sorted(df):
            vocab[tok] = len(vocab)
        n = len(docs)
        self.vocab = vocab
        self.idf = np.zeros(len(vocab))
        for tok, j in vocab.items():
            self.idf[j] = math.log((1 + n) / (1 + df[tok])) + 1.0

    def vector(self, text: str) -> np.ndarray:
        v = np.zeros(len(self.vocab))
        for tok in tokenize(text):
            j = self.vocab.get(tok)
            if j is not None:
                v[j] += 1.0
        v *= self.idf
        norm = np.linalg.norm(v)
        return v / norm if norm > 0 else v

    def similarity(self, a: str, b: str) -> float:
        return float(np.dot(self.vector(a), self.vector(b)))


class HashingEmbedder:
    """Deterministic bag-of-words embedding via md5 token hashing."""

    def __init__(self, dim: int = 256):
        if dim < 1:
            raise InvalidSpecError("embedding dim must be positive")
        self.dim = dim

    def _bucket(self, token: str) -> int:
        digest = hashlib.md5(token.encode("utf-8")).digest()
        return int.from_bytes(digest[:8], "big") % self.dim

    def embed(self, text: str) -> np.ndarray:
        v = np.zeros(self.dim)
        for tok in tokenize(text):
            v[self._bucket(tok)] += 1.0
        norm = np.linalg.norm(v)
        return v / norm if norm > 0 else v

    def similarity(self, a: str, b: str) -> float:
        cos = float(np.dot(self.embed(a), self.embed(b)))
        return (1.0 + cos) / 2.0


def similarity(a: str, b: str, metric: str, *,
               tfidf: TfidfModel | None = None,
               embedder: HashingEmbedder | None = None) -> float:
    if metric == "edit":
        return edit_similarity(a, b)
    if metric == "jaccard":
        return jaccard_similarity(a, b)
    if metric == "tfidf":
        if tfidf is None:
            raise InvalidSpecError("tfidf metric needs a fitted model")
        return tfidf.similarity(a, b)
    if metric == "embedding":
        return (embedder or HashingEmbedder()).similarity(a, b)
    raise InvalidSpecError(f"unknown similarity metric: {metric}")


def _kmeans_medoids(vectors: np.ndarray, k: int, seed: int) -> list[int]:
    """Seeded k-means++ then Lloyd; returns one medoid index per cluster."""
    n = len(vectors)
    rng = np.random.default_rng(seed)
    centers = [vectors[int(rng.integers(n))]]
    for _ in range(1, k):
        d2 = np.min(
            [((vectors - c) ** 2).sum(axis=1) for c in centers], axis=0)
        total = d2.sum()
        if total <= 0:
            centers.append(vectors[int(rng.integers(n))])
            continue
        centers.append(vectors[int(rng.choice(n, p=d2 / total))])
    cents = np.array(centers)
    assign = np.full(n, -1, dtype=int)
    for _ in range(50):
        dists = ((vectors[:, None, :] - cents[None, :, :]) ** 2).sum(axis=2)
        new_assign = dists.argmin(axis=1)
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for j in range(k):
            members = vectors[assign == j]
            if len(members):
                cents[j] = members.mean(axis=0)
    medoids = []
    for j in range(k):
        idx = np.flatnonzero(assign == j)
        if len(idx) == 0:
            continue
        d = ((vectors[idx] - cents[j]) ** 2).sum(axis=1)
        medoids.append(int(idx[int(d.argmin())]))
    return medoids


def _anchor_index(texts: list[str]) -> int:
    """Longest text wins; ties break on lexicographic order, then index."""
    order = sorted(range(len(texts)), key=lambda i: (-len(texts[i]), texts[i], i))
    return order[0]


def select_diverse(texts: list[str], *, cap: int = 5, seed: int = 0) -> list[int]:
    """Pick up to cap diverse paths from one problem's correct samples.

    The longest path anchors the set. Each metric nominates the candidate
    least similar to the anchor, then k-means medoids over the hashed
    embeddings fill in cluster representatives. Duplicated texts are kept
    once. Returns indices into texts, anchor first.
    """
    if cap < 1:
        raise InvalidSpecError("cap must be at least 1")
    if not texts:
        return []
    anchor = _anchor_index(texts)
    candidates = [i for i in range(len(texts)) if i != anchor]
    nominations: list[int] = []
    if candidates:
        tfidf = TfidfModel(texts)
        embedder = HashingEmbedder()
        for metric in METRICS:
            best = min(candidates, key=lambda i: (
                similarity(texts[i], texts[anchor], metric,
                           tfidf=tfidf, embedder=embedder), texts[i], i))
            nominations.append(best)
        vectors = np.array([embedder.embed(t) for t in texts])
        nominations.extend(
            _kmeans_medoids(vectors, min(5, len(texts)), seed))
    picked: list[int] = []
    seen_text: set[str] = set()
    for i in [anchor] + nominations:
        if texts[i] in seen_text:
            continue
        seen_text.add(texts[i])
        picked.append(i)
        if len(picked) >= cap:
            break
    return picked


def select_dispreferred(texts: list[str], anchor: str) -> int:
    """Pick the wrong path most similar to the anchor (hardest negative).

    Each metric votes for its argmax-similarity candidate; majority wins.
    Vote ties prefer the longer text, then the lexicographically smaller.
    """
    if not texts:
        raise InvalidSpecError("no candidates to select from")
    tfidf = TfidfModel(texts + [anchor])
    embedder = HashingEmbedder()
    votes: dict[int, int] = {}
    for metric in METRICS:
        best = min(range(len(texts)), key=lambda i: (
            -similarity(texts[i], anchor, metric,
                        tfidf=tfidf, embedder=embedder), texts[i], i))
        votes[best] = votes.get(best, 0) + 1
    ranked = sorted(votes, key=lambda i: (-votes[i], -len(texts[i]), texts[i], i))
    return ranked[0]


def build_dpo_pair(texts: list[str], correct: list[bool], *,
                   seed: int = 0) -> tuple[int, int] | None:
    """Chosen/rejected indices for one problem, or None when one side is empty."""
    del seed        # reserved for future stochastic variants
    if len(texts) != len(correct):
        raise InvalidSpecError("texts and correctness flags differ in length")
    good = [i for i, ok in enumerate(correct) if ok]
    bad = [i for i, ok in enumerate(correct) if not ok]
    if not good or not bad:
        return None
    anchor_local = _anchor_index([texts[i] for i in good])
    chosen = good[anchor_local]
    rejected_local = select_dispreferred([texts[i] for i in bad], texts[chosen])
    return chosen, bad[rejected_local]


# ---------------------------------------------------------------------------
# DPO objective
# ---------------------------------------------------------------------------

def _softplus(x: float) -> float:
    return max(x, 0.0) + math.log1p(math.exp(-abs(x)))


def _sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def dpo_loss(policy_chosen: float, policy_rejected: float,
             ref_chosen: float, ref_rejected: float, beta: float) -> float:
    """-log sigmoid(beta * ((pc - pr) - (rc - rr))), numerically stable."""
    if beta <= 0:
        raise InvalidSpecError("beta must be positive")
    z = beta * ((policy_chosen - policy_rejected) - (ref_chosen - ref_rejected))
    return _softplus(-z)


def dpo_loss_grad(policy_chosen: float, policy_rejected: float,
                  ref_chosen: float, ref_rejected: float,
                  beta: float) -> tuple[float, float, float, float]:
    """Partial derivatives of dpo_loss in argument order."""
    if beta <= 0:
        raise InvalidSpecError("beta must be positive")
    z = beta * ((policy_chosen - policy_rejected) - (ref_chosen - ref_rejected))
    s = _sigmoid(-z)
    return (-beta * s, beta * s, beta * s, -beta * s)
