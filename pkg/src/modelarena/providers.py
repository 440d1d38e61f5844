"""Model provider adapters.

The adapter contract is deliberately tiny: ``generate(prompt, params)``
returns response text or raises ProviderError; each call honors a 30 s
timeout budget supplied via ``params["timeout_s"]``. Live connectors to
commercial APIs are out of scope; the deterministic mock below stands in
for them so every round is replayable: (adapter seed, prompt) fully
determines the response.
"""

from __future__ import annotations

import hashlib
from typing import Any, Mapping, Protocol

from modelarena.parsing import MCQ_PROMPT_PREFIX

JUDGE_PROMPT_PREFIX = "You are a judge. "

DEFAULT_TIMEOUT_S = 30.0


class ProviderError(Exception):
    """A single generate call failed; the orchestrator owns the retry budget."""


class ProviderAdapter(Protocol):
    adapter_id: str

    def generate(self, prompt: str, params: Mapping[str, Any]) -> str: ...


_MCQ_REASONS = (
    "it follows directly from the statement of the question",
    "the other options contradict well-established facts",
    "eliminating the implausible options leaves only this one",
    "this is the standard result for questions of this kind",
)

_JUDGE_VERDICTS = (
    "Response A is better: it is more precise and directly addresses the question.",
    "Response B is better: it gives the clearer and better supported explanation.",
    "Both responses are equally good; each covers the essential points.",
    "Both responses are equally bad; neither justifies its conclusion.",
)

_FREEFORM_OPENERS = (
    "Here is one way to think about it:",
    "A short answer first, then the reasoning:",
    "Let me take this step by step.",
    "There are a few angles worth separating.",
)


class MockProvider:
    """Deterministic stand-in for a real model endpoint.

    Responses are a pure function of (seed, prompt). MCQ prompts get the
    canonical shape "The correct option is (X) because ...", judge prompts
    get one of four verdict sentences, and anything else gets a short
    deterministic completion. Response text never mentions model
    identities, which keeps anonymized round views clean.
    """

    def __init__(self, adapter_id: str, seed: int = 0):
        self.adapter_id = adapter_id
        self.seed = seed

    def _digest(self, prompt: str) -> bytes:
        return hashlib.sha256(f"{self.seed}:{prompt}".encode("utf-8")).digest()

    def generate(self, prompt: str, params: Mapping[str, Any]) -> str:
        d = self._digest(prompt)
        if prompt.startswith(MCQ_PROMPT_PREFIX):
            letter = "ABCD"[d[0] % 4]
            reason = _MCQ_REASONS[d[1] % len(_MCQ_REASONS)]
            return f"The correct option is ({letter}) because {reason}."
        if prompt.startswith(JUDGE_PROMPT_PREFIX):
            return _JUDGE_VERDICTS[d[0] % len(_JUDGE_VERDICTS)]
        opener = _FREEFORM_OPENERS[d[0] % len(_FREEFORM_OPENERS)]
        return f"{opener} Considering what was asked, a reasonable treatment is sketch {d[2]:02x}{d[3]:02x}, weighing clarity against completeness."


class FailingProvider:
    """Adapter that always fails; exercises retry and abort paths."""

    def __init__(self, adapter_id: str):
        self.adapter_id = adapter_id

    def generate(self, prompt: str, params: Mapping[str, Any]) -> str:
        raise ProviderError(f"adapter {self.adapter_id} is permanently unavailable")


def build_provider(adapter_id: str, config: Mapping[str, Any]) -> ProviderAdapter:
    """Construct an adapter from its configuration record."""
    kind = config.get("kind", "mock")
    if kind == "mock":
        return MockProvider(adapter_id, seed=int(config.get("seed", 0)))
    if kind == "failing":
        return FailingProvider(adapter_id)
    raise ValueError(f"unknown provider kind {kind!r}")
