"""Token and cost estimation.

The token estimate is the chars/4 heuristic; it is used for pre-flight cost
display and as a fallback when the backend reports no usage. It is not a BPE
tokenizer and must never be asserted against real tokenizer counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class UnknownModelPrice(KeyError):
    """No price-table entry for the model; cost is unavailable, not zero."""


@dataclass(frozen=True)
class ModelPrice:
    prompt_per_1k: float
    completion_per_1k: float


@dataclass(frozen=True)
class PriceTable:
    """Per-1K-token rates by model id, in a single configured currency."""

    rates: dict[str, ModelPrice]
    currency: str = "USD"

    def for_model(self, model: str) -> ModelPrice:
        try:
            return self.rates[model]
        except KeyError:
            raise UnknownModelPrice(model) from None


def estimate_tokens(text: str) -> int:
    """ceil(len/4) character heuristic; 0 for empty text."""
    return math.ceil(len(text) / 4)


def estimate_cost(prompt_tokens: int, completion_tokens: int, model: str, prices: PriceTable) -> float:
    """prompt·rate_in + completion·rate_out, rates per 1K tokens.

    Raises UnknownModelPrice when the model has no table entry.
    """
    price = prices.for_model(model)
    return prompt_tokens / 1000 * price.prompt_per_1k + completion_tokens / 1000 * price.completion_per_1k
