"""Synthetic corpora with planted structure.

A planted model is an ordered list of rules plus a fallback. Every
generated point first draws which rule it belongs to (rules carry
membership weights; the fallback receives the leftover mass), then draws
its method from that rule's distribution, pins the rule's pattern bits,
and fills every remaining bit i.i.d. with the noise probability. All draws
come from a seeded PCG64 stream in a fixed order (membership, method,
noise), so a given (model, n, seed) triple yields the same corpus on any
platform.

Config files are plain text::

    features = 16
    noise = 0.01
    rule 0.4 : 3=1 -> induct:0.9, auto:0.1
    rule 0.2 : 5=1, 6=0 -> simp:1.0
    fallback : auto:0.7, blast:0.3

The fallback line may instead derive a power-law distribution over listed
methods: ``fallback zipf 1.3 : m001 m002 m003``. Blank lines and ``#``
comments are skipped. Rule order in the file is the model's rule order;
when a vector matches several patterns the first rule wins.
"""
from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from .corpus import METHOD_TOKEN, Corpus
from .errors import (
    BadIndexError,
    InvalidDistributionError,
    PamperError,
    PlantedConfigError,
)

_SUM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class PlantedRule:
    """Feature pattern, method distribution, and membership weight."""

    pattern: dict[int, bool]
    distribution: dict[str, float]
    weight: float

    def __post_init__(self):
        object.__setattr__(self, "pattern", MappingProxyType(dict(self.pattern)))
        object.__setattr__(
            self, "distribution", MappingProxyType(dict(self.distribution))
        )


@dataclass(frozen=True, eq=False)
class PlantedModel:
    rules: tuple[PlantedRule, ...]
    fallback: dict[str, float]
    feature_count: int
    noise: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "fallback", MappingProxyType(dict(self.fallback)))

    def validate(self) -> None:
        if self.feature_count < 1:
            raise PamperError("feature count must be positive")
        if not 0.0 <= self.noise <= 1.0:
            raise PamperError("noise must lie in [0, 1]")
        total_weight = 0.0
        for rule in self.rules:
            if rule.weight < 0.0:
                raise InvalidDistributionError("rule weight must be nonnegative")
            total_weight += rule.weight
            for index in rule.pattern:
                if not 0 <= index < self.feature_count:
                    raise BadIndexError(
                        None,
                        f"pattern index {index} out of range for "
                        f"{self.feature_count} features",
                    )
            _check_distribution(rule.distribution)
        if total_weight > 1.0 + _SUM_TOL:
            raise InvalidDistributionError("rule weights sum past 1")
        _check_distribution(self.fallback)

    def match(self, vector) -> int | None:
        """Index of the first rule whose pattern the vector satisfies."""
        bits = np.asarray(vector)
        for i, rule in enumerate(self.rules):
            if all(bool(bits[j]) == want for j, want in rule.pattern.items()):
                return i
        return None


def _check_distribution(dist) -> None:
    if not dist:
        raise InvalidDistributionError("distribution has no methods")
    total = 0.0
    for name, prob in dist.items():
        if not METHOD_TOKEN.match(name):
            raise InvalidDistributionError(f"invalid method name: {name!r}")
        if prob < 0.0:
            raise InvalidDistributionError(f"negative probability for {name}")
        total += prob
    if abs(total - 1.0) > _SUM_TOL:
        raise InvalidDistributionError(f"probabilities sum to {total!r}, expected 1")


def zipf_imbalance(methods, s: float) -> dict[str, float]:
    """Power-law distribution over the methods in their given order.

    The r-th listed method gets probability proportional to r**-s; two
    methods at s=1 come out as (2/3, 1/3). Larger s concentrates mass on
    the head of the list.
    """
    names = list(methods)
    if not names:
        raise InvalidDistributionError("distribution has no methods")
    if len(set(names)) != len(names):
        raise InvalidDistributionError("duplicate method in distribution")
    if s <= 0.0:
        raise InvalidDistributionError("zipf exponent must be positive")
    weights = [rank ** -s for rank in range(1, len(names) + 1)]
    total = sum(weights)
    return {name: w / total for name, w in zip(names, weights)}


def _sample_methods(dist: dict[str, float], draws: np.ndarray) -> np.ndarray:
    items = list(dist.items())
    cumulative = np.cumsum([prob for _, prob in items])
    picks = np.searchsorted(cumulative, draws, side="right")
    picks = np.minimum(picks, len(items) - 1)
    names = np.asarray([name for name, _ in items], dtype=object)
    return names[picks]


def generate(model: PlantedModel, n: int, seed: int) -> Corpus:
    """Sample a corpus of n points from a planted model, deterministically."""
    model.validate()
    if n < 1:
        raise PamperError("number of points must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    membership_draws = rng.random(n)
    method_draws = rng.random(n)
    if model.noise > 0.0:
        X = (rng.random((n, model.feature_count)) < model.noise).astype(np.uint8)
    else:
        X = np.zeros((n, model.feature_count), dtype=np.uint8)

    fallback_id = len(model.rules)
    assigned = np.full(n, fallback_id, dtype=np.int64)
    low = 0.0
    for i, rule in enumerate(model.rules):
        high = low + rule.weight
        assigned[(membership_draws >= low) & (membership_draws < high)] = i
        low = high

    names = np.empty(n, dtype=object)
    for i, rule in enumerate(model.rules):
        members = assigned == i
        if not members.any():
            continue
        names[members] = _sample_methods(rule.distribution, method_draws[members])
        for index, want in rule.pattern.items():
            X[members, index] = 1 if want else 0
    fallback_members = assigned == fallback_id
    if fallback_members.any():
        names[fallback_members] = _sample_methods(
            model.fallback, method_draws[fallback_members]
        )
    return Corpus(tuple(names.tolist()), X, model.feature_count)


def _parse_distribution(text: str, line_no: int) -> dict[str, float]:
    dist: dict[str, float] = {}
    for part in text.split(","):
        entry = part.strip()
        if not entry:
            raise PlantedConfigError(line_no, "empty distribution entry")
        name, sep, prob_text = entry.rpartition(":")
        if not sep:
            raise PlantedConfigError(line_no, f"expected '<method>:<prob>', got {entry!r}")
        name = name.strip()
        if not METHOD_TOKEN.match(name):
            raise PlantedConfigError(line_no, f"invalid method name: {name!r}")
        if name in dist:
            raise PlantedConfigError(line_no, f"duplicate method: {name}")
        try:
            dist[name] = float(prob_text.strip())
        except ValueError:
            raise PlantedConfigError(
                line_no, f"bad probability: {prob_text.strip()!r}"
            ) from None
    return dist


def _parse_pattern(text: str, line_no: int) -> dict[int, bool]:
    pattern: dict[int, bool] = {}
    for part in text.split(","):
        entry = part.strip()
        if not entry:
            raise PlantedConfigError(line_no, "empty pattern entry")
        index_text, sep, bit = entry.partition("=")
        if not sep or bit.strip() not in ("0", "1"):
            raise PlantedConfigError(line_no, f"expected '<index>=<0|1>', got {entry!r}")
        try:
            index = int(index_text.strip())
        except ValueError:
            raise PlantedConfigError(
                line_no, f"bad feature index: {index_text.strip()!r}"
            ) from None
        if index < 0:
            raise PlantedConfigError(line_no, f"negative feature index: {index}")
        if index in pattern:
            raise PlantedConfigError(line_no, f"duplicate pattern index: {index}")
        pattern[index] = bit.strip() == "1"
    return pattern


def _parse_rule(line: str, line_no: int) -> PlantedRule:
    body = line[len("rule"):].strip()
    weight_text, sep, rest = body.partition(":")
    if not sep:
        raise PlantedConfigError(line_no, "expected 'rule <weight> : <pattern> -> <dist>'")
    try:
        weight = float(weight_text.strip())
    except ValueError:
        raise PlantedConfigError(
            line_no, f"bad rule weight: {weight_text.strip()!r}"
        ) from None
    pattern_text, arrow, dist_text = rest.partition("->")
    if not arrow:
        raise PlantedConfigError(line_no, "rule is missing '->'")
    pattern = _parse_pattern(pattern_text.strip(), line_no)
    dist = _parse_distribution(dist_text.strip(), line_no)
    return PlantedRule(pattern, dist, weight)


def _parse_fallback(line: str, line_no: int) -> dict[str, float]:
    body = line[len("fallback"):].strip()
    if body.startswith("zipf"):
        spec, sep, names_text = body[len("zipf"):].partition(":")
        if not sep:
            raise PlantedConfigError(line_no, "expected 'fallback zipf <s> : <names>'")
        try:
            s = float(spec.strip())
        except ValueError:
            raise PlantedConfigError(line_no, f"bad zipf exponent: {spec.strip()!r}") from None
        names = names_text.replace(",", " ").split()
        if not names:
            raise PlantedConfigError(line_no, "zipf fallback lists no methods")
        try:
            return zipf_imbalance(names, s)
        except InvalidDistributionError as exc:
            raise PlantedConfigError(line_no, str(exc)) from None
    head, sep, dist_text = body.partition(":")
    if not sep or head.strip():
        raise PlantedConfigError(line_no, "expected 'fallback : <dist>'")
    return _parse_distribution(dist_text.strip(), line_no)


def parse_planted_config(text: str | bytes) -> PlantedModel:
    """Parse and validate a planted-model config file."""
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    feature_count: int | None = None
    noise = 0.0
    rules: list[PlantedRule] = []
    fallback: dict[str, float] | None = None
    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("rule") and (len(line) == 4 or not line[4].isalnum()):
            rules.append(_parse_rule(line, line_no))
        elif line.startswith("fallback") and (len(line) == 8 or not line[8].isalnum()):
            if fallback is not None:
                raise PlantedConfigError(line_no, "duplicate fallback line")
            fallback = _parse_fallback(line, line_no)
        elif "=" in line:
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key == "features":
                try:
                    feature_count = int(value)
                except ValueError:
                    raise PlantedConfigError(line_no, f"bad feature count: {value!r}") from None
            elif key == "noise":
                try:
                    noise = float(value)
                except ValueError:
                    raise PlantedConfigError(line_no, f"bad noise: {value!r}") from None
            else:
                raise PlantedConfigError(line_no, f"unknown key: {key!r}")
        else:
            raise PlantedConfigError(line_no, f"unrecognized line: {line!r}")
    if feature_count is None:
        raise PlantedConfigError(1, "config never sets 'features'")
    if fallback is None:
        raise PlantedConfigError(1, "config has no fallback line")
    model = PlantedModel(tuple(rules), fallback, feature_count, noise)
    model.validate()
    return model
