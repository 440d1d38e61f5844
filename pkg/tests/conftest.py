"""Shared fixtures and helpers for the arena test suite."""

from __future__ import annotations

import json
import random
from typing import Iterable

import pytest

from modelarena.config import ArenaConfig
from modelarena.orchestrator import Arena
from modelarena.providers import ProviderError

DOMAINS = ("science", "humanities", "economics")


def corpus_line(qid: str, domain: str, stem: str = "", correct: str = "B") -> str:
    return json.dumps(
        {
            "question_id": qid,
            "domain": domain,
            "stem": stem or f"What about {qid}?",
            "options": ["first", "second", "third", "fourth"],
            "correct": correct,
        }
    )


def corpus_lines(per_domain: int, domains: Iterable[str] = DOMAINS) -> list[str]:
    return [
        corpus_line(f"q-{domain}-{i:04d}", domain)
        for domain in domains
        for i in range(per_domain)
    ]


def make_arena(
    tmp_path,
    n_models: int = 4,
    seed: int = 42,
    subdir: str = "arena",
    **overrides,
) -> Arena:
    providers = {f"adapter-{i}": {"kind": "mock", "seed": 100 + i} for i in range(n_models)}
    config = ArenaConfig(
        data_dir=tmp_path / subdir,
        seed=seed,
        fsync=False,
        providers=providers,
        **overrides,
    )
    arena = Arena(config)
    for i in range(n_models):
        arena.register_model(f"Model {i}", f"adapter-{i}", model_id=f"m{i}")
    return arena


def add_user(arena: Arena, user_id: str, consent: bool = True, **fields) -> str:
    raw = {"user_id": user_id, "consent": "true" if consent else "false"}
    raw.update(fields)
    return arena.upsert_profile(raw).user_id


class FlakyProvider:
    """Fails the first `failures` calls, then behaves like a fixed echo."""

    def __init__(self, adapter_id: str, failures: int):
        self.adapter_id = adapter_id
        self.failures = failures
        self.calls = 0

    def generate(self, prompt: str, params) -> str:
        self.calls += 1
        if self.calls <= self.failures:
            raise ProviderError("transient failure")
        return f"recovered response #{self.calls}"


@pytest.fixture
def arena(tmp_path) -> Arena:
    a = make_arena(tmp_path)
    a.ingest_questions(corpus_lines(3))
    add_user(a, "u-alice", consent=True, age_band="18-25", profession="engineer", education="master")
    add_user(a, "u-bob", consent=True, age_band="26-35", profession="teacher", education="bachelor")
    return a


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xA11CE)
