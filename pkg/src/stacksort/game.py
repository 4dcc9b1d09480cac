"""The stack-system game: states, moves and the action of move strings on states.

A system has ``k`` stacks in series between an input queue and an output
queue.  Move ``m_i`` transfers one element from container ``i - 1`` to
container ``i``, where container 0 is the input queue and container ``k + 1``
is the output queue.  Move strings are written as digit strings, so
``"121121232333"`` stands for ``m1 m2 m1 m1 m2 m1 m2 m3 m2 m3 m3 m3``.  Plain
string comparison of such words is the lexicographic order with
``m1 < m2 < ... < m_{k+1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import comb, factorial
from typing import Iterator, Sequence

MAX_LETTERS = 9


class LengthCapExceeded(ValueError):
    """Raised when an enumeration would produce words longer than the caller allows."""


class IllegalState:
    """The absorbing illegal state.  Use the module-level ``ILLEGAL`` instance."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ILLEGAL"

    def __reduce__(self):
        return (IllegalState, ())

    def to_text(self) -> str:
        return "ILLEGAL"

    def to_record(self) -> dict:
        return {"illegal": True}


ILLEGAL = IllegalState()


@dataclass(frozen=True)
class State:
    """A live configuration.  Stacks are listed bottom first, queues front first."""

    input: tuple[int, ...]
    stacks: tuple[tuple[int, ...], ...]
    output: tuple[int, ...]

    def __post_init__(self):
        labels = self.labels()
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate element labels in state {self.to_text()}")

    @property
    def k(self) -> int:
        return len(self.stacks)

    def labels(self) -> list[int]:
        out = list(self.input)
        for s in self.stacks:
            out.extend(s)
        out.extend(self.output)
        return out

    def is_initial(self) -> bool:
        return not self.output and not any(self.stacks)

    def is_final(self) -> bool:
        return not self.input and not any(self.stacks)

    def to_text(self) -> str:
        def fmt(seq):
            return "[" + ",".join(map(str, seq)) + "]"

        parts = ["in:" + fmt(self.input)]
        parts += [f"s{i}:" + fmt(s) for i, s in enumerate(self.stacks, 1)]
        parts.append("out:" + fmt(self.output))
        return " ".join(parts)

    def to_record(self) -> dict:
        return {
            "illegal": False,
            "input": list(self.input),
            "stacks": [list(s) for s in self.stacks],
            "output": list(self.output),
        }


AnyState = State | IllegalState


def state_from_record(record: dict) -> AnyState:
    if record.get("illegal"):
        return ILLEGAL
    return State(
        tuple(record["input"]),
        tuple(tuple(s) for s in record["stacks"]),
        tuple(record["output"]),
    )


# -- construction -----------------------------------------------------------


def initial_state(n: int, k: int) -> State:
    return State(tuple(range(1, n + 1)), ((),) * k, ())


def final_state(n: int, k: int) -> State:
    return State((), ((),) * k, tuple(range(1, n + 1)))


def state_of_permutation(perm: Sequence[int], k: int) -> State:
    _check_permutation(perm)
    return State(tuple(perm), ((),) * k, ())


def final_state_of_permutation(perm: Sequence[int], k: int) -> State:
    _check_permutation(perm)
    return State((), ((),) * k, tuple(perm))


def _check_permutation(perm: Sequence[int]) -> None:
    if sorted(perm) != list(range(1, len(perm) + 1)):
        raise ValueError(f"not a permutation of 1..{len(perm)}: {list(perm)}")


# -- move strings -----------------------------------------------------------


def parse_moves(text: str, k: int | None = None) -> str:
    """Validate a digit-encoded move string and return it unchanged.

    Accepts an optional leading ``m`` and ignores spaces, so ``"m 12 3"`` is
    the word ``"123"``.
    """
    word = text.strip()
    if word.startswith("m"):
        word = word[1:]
    word = word.replace(" ", "")
    for ch in word:
        if not ("1" <= ch <= "9"):
            raise ValueError(f"invalid move symbol {ch!r} in {text!r}")
        if k is not None and int(ch) > k + 1:
            raise ValueError(f"move m{ch} out of range for k={k}")
    return word


def letter_counts(word: str, k: int) -> tuple[int, ...]:
    return tuple(word.count(str(i)) for i in range(1, k + 2))


# -- the action -------------------------------------------------------------


def apply_move(move: int, state: AnyState) -> AnyState:
    return apply_string(str(move), state)


def apply_string(word: str, state: AnyState) -> AnyState:
    """Fold the moves of ``word`` over ``state``, left to right."""
    if state is ILLEGAL:
        return ILLEGAL
    k = state.k
    # containers[0] is the input read from position `head`; the rest are stacks / output
    inp = state.input
    head = 0
    stacks = [list(s) for s in state.stacks]
    out = list(state.output)
    for ch in word:
        i = ord(ch) - 48
        if i < 1 or i > k + 1:
            raise ValueError(f"move m{ch} out of range for k={k}")
        if i == 1:
            if head >= len(inp):
                return ILLEGAL
            x = inp[head]
            head += 1
        else:
            src = stacks[i - 2]
            if not src:
                return ILLEGAL
            x = src.pop()
        if i == k + 1:
            out.append(x)
        else:
            stacks[i - 1].append(x)
    return State(inp[head:], tuple(tuple(s) for s in stacks), tuple(out))


def generated_permutation(word: str, n: int, k: int) -> tuple[int, ...] | None:
    """Output order produced by ``word`` from ``I(n, k)``, or None if not final."""
    result = apply_string(word, initial_state(n, k))
    if result is ILLEGAL or not result.is_final():
        return None
    return result.output


# -- n-complete strings -----------------------------------------------------


def is_n_complete(word: str, n: int, k: int) -> bool:
    """Prefix-count test: |u|_1 >= ... >= |u|_{k+1} on every prefix, all totals n."""
    counts = [0] * (k + 2)
    for ch in word:
        i = ord(ch) - 48
        if i < 1 or i > k + 1:
            return False
        counts[i] += 1
        if i > 1 and counts[i] > counts[i - 1]:
            return False
    return all(c == n for c in counts[1:])


def _partitions_into_runs(word: str, n: int, k: int) -> bool:
    # greedy: each m_i extends the earliest copy still waiting for it
    waiting = [0] * (k + 2)  # waiting[i]: copies whose next letter is m_i
    started = 0
    for ch in word:
        i = ord(ch) - 48
        if i < 1 or i > k + 1:
            return False
        if i == 1:
            if started == n:
                return False
            started += 1
        else:
            if waiting[i] == 0:
                return False
            waiting[i] -= 1
        if i <= k:
            waiting[i + 1] += 1
    return started == n and not any(waiting)


def complete_characterizations(word: str, n: int, k: int) -> tuple[bool, bool, bool]:
    """Evaluate the three equivalent descriptions of n-completeness independently.

    Returns (reaches a final state from I(n, k), splits into n copies of
    m1 m2 ... m_{k+1}, satisfies the prefix-count condition).
    """
    if any(not ("1" <= ch <= str(k + 1)) for ch in word):
        return (False, False, False)
    result = apply_string(word, initial_state(n, k))
    by_action = result is not ILLEGAL and result.is_final()
    return (by_action, _partitions_into_runs(word, n, k), is_n_complete(word, n, k))


# -- the three languages ----------------------------------------------------

TIERS = ("I", "II", "III")
DEFAULT_LENGTH_CAP = 16


def _check_tier(tier: str) -> None:
    if tier not in TIERS:
        raise ValueError(f"tier must be one of {TIERS}, got {tier!r}")


def enumerate_language(n: int, k: int, tier: str, max_len: int = DEFAULT_LENGTH_CAP) -> Iterator[str]:
    """Yield the words of the type I, II or III language in lexicographic order."""
    _check_tier(tier)
    length = n * (k + 1)
    if length > max_len:
        raise LengthCapExceeded(f"words of length {length} exceed cap {max_len}")
    letters = "123456789"[: k + 1]
    if tier == "III":
        for t in product(letters, repeat=length):
            yield "".join(t)
        return

    counts = [0] * (k + 2)
    buf: list[str] = []

    def rec():
        if len(buf) == length:
            yield "".join(buf)
            return
        for i in range(1, k + 2):
            if counts[i] == n:
                continue
            if tier == "I" and i > 1 and counts[i] >= counts[i - 1]:
                continue
            counts[i] += 1
            buf.append(letters[i - 1])
            yield from rec()
            buf.pop()
            counts[i] -= 1

    yield from rec()


def count_language(n: int, k: int, tier: str) -> int:
    """Cardinality of a language without materializing it."""
    _check_tier(tier)
    if tier == "III":
        return (k + 1) ** (n * (k + 1))
    if tier == "II":
        return factorial(n * (k + 1)) // factorial(n) ** (k + 1)
    # lattice paths through non-increasing count vectors
    table = {(0,) * (k + 1): 1}
    for _ in range(n * (k + 1)):
        nxt: dict[tuple[int, ...], int] = {}
        for vec, ways in table.items():
            for i in range(k + 1):
                if vec[i] == n or (i > 0 and vec[i] >= vec[i - 1]):
                    continue
                v = vec[:i] + (vec[i] + 1,) + vec[i + 1 :]
                nxt[v] = nxt.get(v, 0) + ways
        table = nxt
    return sum(table.values())


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)
