"""Discovering the congruence on move strings and turning it into rewriting rules.

Two words are equivalent when they act identically on every state.  A single
probe state with enough elements in every container to absorb the words
decides this, so relations are found by grouping words by their image of
the probe.  Each relation is oriented towards the lexicographically larger
word, which makes rewriting terminate.
"""

from __future__ import annotations

import json
import logging
from collections import defaultdict
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Iterable, Sequence

from .game import ILLEGAL, State, apply_string, letter_counts

log = logging.getLogger(__name__)

CONVENTION = "lex-max-target; shortest-first; emit only sources irreducible by earlier rules"
DEFAULT_MAX_WORDS = 50_000_000


class DiscoveryBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class Rule:
    """Rewriting rule ``source -> target`` between equivalent words, target lex-larger."""

    source: str
    target: str

    def to_record(self) -> dict:
        return {"from": self.source, "to": self.target}

    @classmethod
    def from_record(cls, rec: dict) -> Rule:
        return cls(rec["from"], rec["to"])

    def __str__(self):
        return f"{self.source}->{self.target}"


def probe_state(length: int, k: int) -> State:
    """A state no word of at most ``length`` moves can drive into an illegal move.

    The input queue and each stack hold ``length`` elements; labels are
    distinct across containers and the output queue starts empty.
    """
    if length < 1:
        raise ValueError("probe length must be positive")
    labels = iter(range(1, (k + 1) * length + 1))
    inp = tuple(next(labels) for _ in range(length))
    stacks = tuple(tuple(next(labels) for _ in range(length)) for _ in range(k))
    return State(inp, stacks, ())


def equivalent(u: str, v: str, k: int) -> bool:
    s = probe_state(max(len(u), len(v), 1), k)
    a = apply_string(u, s)
    return a is not ILLEGAL and a == apply_string(v, s)


# -- discovery --------------------------------------------------------------


def _image_key(word: str, probe: State) -> bytes:
    """Compact fingerprint of ``word * probe``; equal keys iff equal states."""
    result = apply_string(word, probe)
    if result is ILLEGAL:
        raise AssertionError(f"{word} is illegal on the probe state")
    # labels fit in a byte for every practical probe; 0 separates containers
    parts = [bytes([len(result.input)])]
    for s in result.stacks:
        parts.append(bytes(s))
    parts.append(bytes(result.output))
    return b"\0".join(parts)


class _ReversedTrie:
    """Detects whether a word ends with one of a growing set of patterns."""

    def __init__(self):
        self.root: dict = {}

    def add(self, word: str) -> None:
        node = self.root
        for ch in reversed(word):
            node = node.setdefault(ch, {})
        node[""] = True

    def has_suffix_in(self, word: str) -> bool:
        node = self.root
        for ch in reversed(word):
            node = node.get(ch)
            if node is None:
                return False
            if "" in node:
                return True
        return False


def discover_relations(
    max_len: int,
    k: int,
    *,
    exhaustive: bool = False,
    max_words: int = DEFAULT_MAX_WORDS,
) -> list[Rule]:
    """All rules ``v -> u`` with ``|u| = |v| <= max_len``, ``u`` the lex-max of the class of ``v``.

    Lengths are processed in increasing order.  A class member yields a rule
    only if no rule found at a shorter length already rewrites it.

    By default only words avoiding every source found so far are probed.
    The lex-max of a class never contains a source (it could be rewritten to
    something larger in the same class), and reducible words never yield
    rules, so this produces exactly the same rules as probing all
    ``(k+1)**L`` words; ``exhaustive=True`` probes everything.
    """
    if (k + 1) * max_len > 254:
        raise ValueError("probe too large for byte-encoded state keys")
    letters = "123456789"[: k + 1]
    probe = probe_state(max(max_len, 1), k)
    trie = _ReversedTrie()
    rules: list[Rule] = []
    level = [""]
    for length in range(1, max_len + 1):
        if exhaustive:
            candidates = ["".join(t) for t in product(letters, repeat=length)]
        else:
            candidates = [w + c for w in level for c in letters if not trie.has_suffix_in(w + c)]
        if len(candidates) > max_words:
            raise DiscoveryBudgetExceeded(f"{len(candidates)} words at length {length}")
        classes: dict[bytes, list[str]] = defaultdict(list)
        for w in candidates:
            classes[_image_key(w, probe)].append(w)
        found = []
        for members in classes.values():
            if len(members) < 2:
                continue
            target = max(members)
            for w in members:
                if w != target and not _reducible(w, trie):
                    found.append(Rule(w, target))
        found.sort(key=lambda r: (r.target, r.source))
        for r in found:
            trie.add(r.source)
        rules.extend(found)
        if not exhaustive:
            level = [w for w in candidates if not trie.has_suffix_in(w)]
        log.info("length %d: %d words probed, %d new rules (%d total)", length, len(candidates), len(found), len(rules))
        del classes
    return rules


def _reducible(word: str, trie: _ReversedTrie) -> bool:
    return any(trie.has_suffix_in(word[:end]) for end in range(1, len(word) + 1))


# -- rewriting --------------------------------------------------------------


def derive_forbidden(rules: Iterable[Rule]) -> list[str]:
    """Rule sources, keeping only those containing no other source as a factor."""
    sources = sorted({r.source for r in rules}, key=lambda w: (len(w), w))
    kept: list[str] = []
    for w in sources:
        if not any(f in w for f in kept):
            kept.append(w)
    return kept


def rewrite_to_canonical(word: str, rules: Iterable[Rule]) -> str:
    """Apply rules at the leftmost (then longest) match until none applies."""
    table = {r.source: r.target for r in rules}
    lengths = sorted({len(s) for s in table}, reverse=True)
    if not lengths:
        return word
    w = word
    while True:
        for i in range(len(w)):
            hit = next((w[i : i + m] for m in lengths if w[i : i + m] in table), None)
            if hit is not None:
                w = w[:i] + table[hit] + w[i + len(hit) :]
                break
        else:
            return w


def rule_problem(rule: Rule, k: int) -> str | None:
    """Why ``rule`` is unsound, or None if it satisfies every rule invariant."""
    u, v = rule.source, rule.target
    if len(u) != len(v):
        return "sides have different lengths"
    if any(ch < "1" or ch > str(k + 1) for ch in u + v):
        return f"letters outside m1..m{k + 1}"
    if u == v:
        return "trivial rule"
    if letter_counts(u, k) != letter_counts(v, k):
        return "letter counts differ"
    if not v > u:
        return "target is not lexicographically larger"
    if not equivalent(u, v, k):
        return "sides act differently on the probe state"
    return None


def first_invalid_rule(rules: Iterable[Rule], k: int) -> tuple[Rule, str] | None:
    for r in rules:
        problem = rule_problem(r, k)
        if problem:
            return r, problem
    return None


def verify_rules(rules: Iterable[Rule], k: int) -> bool:
    return first_invalid_rule(rules, k) is None


# -- persistence ------------------------------------------------------------


def rules_document(rules: Sequence[Rule], k: int, max_len: int | None) -> dict:
    return {
        "header": {"k": k, "max_len": max_len, "convention": CONVENTION, "count": len(rules)},
        "rules": [r.to_record() for r in rules],
    }


def save_rules(path: str | Path, rules: Sequence[Rule], k: int, max_len: int | None) -> None:
    Path(path).write_text(json.dumps(rules_document(rules, k, max_len), indent=1, sort_keys=True) + "\n")


def load_rules(path: str | Path) -> tuple[list[Rule], dict]:
    doc = json.loads(Path(path).read_text())
    if isinstance(doc, list):  # bare array of {from, to}
        return [Rule.from_record(r) for r in doc], {}
    return [Rule.from_record(r) for r in doc["rules"]], doc.get("header", {})
