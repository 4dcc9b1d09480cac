"""Brute-force ground truth about generable and sortable permutations."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter
from itertools import permutations
from typing import Iterable, Sequence

log = logging.getLogger(__name__)

DEFAULT_MAX_STATES = 20_000_000

Perm = tuple[int, ...]


class SearchBudgetExceeded(RuntimeError):
    """The search visited more states than its budget allows.

    This is never a verdict about sortability; callers must treat it as
    "unknown".
    """


def generable_perms(n: int, k: int, max_states: int = DEFAULT_MAX_STATES) -> frozenset[Perm]:
    """The set P(n, k) of output orders reachable from I(n, k).

    Depth-first search over live states with a visited set.  States are
    encoded as (elements consumed from input, stacks, output).
    """
    if k == 0:
        return frozenset([tuple(range(1, n + 1))])
    start = (0, ((),) * k, ())
    seen = {start}
    todo = [start]
    found = set()
    while todo:
        head, stacks, out = todo.pop()
        if head == n and not any(stacks):
            found.add(out)
            continue
        # push successors so that m_{k+1} is explored first
        succ = []
        if head < n:
            succ.append((head + 1, (stacks[0] + (head + 1,),) + stacks[1:], out))
        for i in range(1, k):
            if stacks[i - 1]:
                x = stacks[i - 1][-1]
                st = list(stacks)
                st[i - 1] = stacks[i - 1][:-1]
                st[i] = stacks[i] + (x,)
                succ.append((head, tuple(st), out))
        if stacks[k - 1]:
            x = stacks[k - 1][-1]
            succ.append((head, stacks[: k - 1] + (stacks[k - 1][:-1],), out + (x,)))
        for s in succ:
            if s not in seen:
                seen.add(s)
                if len(seen) > max_states:
                    raise SearchBudgetExceeded(f"P({n},{k}): more than {max_states} states")
                todo.append(s)
    return frozenset(found)


def is_sortable(perm: Sequence[int], k: int, max_states: int = DEFAULT_MAX_STATES) -> bool:
    """Whether some move string takes s_perm to F(n, k).

    The output queue only ever needs to hold 1, 2, ..., so the search tracks
    the next element owed to the output instead of the queue itself, pops it
    greedily when it surfaces on the last stack, and never buries a smaller
    element of the last stack under a larger one.
    """
    perm = tuple(perm)
    n = len(perm)
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation: {perm}")
    if k == 0:
        return perm == tuple(range(1, n + 1))

    start = (0, ((),) * k, 1)
    seen = {start}
    todo = [start]
    last = k - 1
    while todo:
        head, stacks, need = todo.pop()
        if need > n:
            return True
        top = stacks[last]
        if top and top[-1] == need:
            # forced: outputting the owed element commutes with every other useful move
            nxt = (head, stacks[:last] + (top[:-1],), need + 1)
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
            continue
        succ = []
        for i in range(k - 1, 0, -1):
            src = stacks[i - 1]
            if not src:
                continue
            x = src[-1]
            dst = stacks[i]
            if i == last and dst and x > dst[-1]:
                continue
            st = list(stacks)
            st[i - 1] = src[:-1]
            st[i] = dst + (x,)
            succ.append((head, tuple(st), need))
        if head < n:
            x = perm[head]
            if not (k == 1 and stacks[0] and x > stacks[0][-1]):
                succ.append((head + 1, (stacks[0] + (x,),) + stacks[1:], need))
        # reversed so the move closest to the output is popped first
        for s in reversed(succ):
            if s not in seen:
                seen.add(s)
                if len(seen) > max_states:
                    raise SearchBudgetExceeded(f"sorting {perm} on {k} stacks: more than {max_states} states")
                todo.append(s)
    return False


@dataclass(frozen=True)
class KnEntry:
    n: int
    k_n: int | None
    status: str = "ok"

    def to_record(self) -> dict:
        return {"n": self.n, "k_n": self.k_n, "status": self.status}


def compute_kn(n: int, max_states: int = DEFAULT_MAX_STATES) -> int:
    """Smallest k such that every permutation of n elements is sortable by k stacks."""
    everything = list(permutations(range(1, n + 1)))
    k = 0
    while True:
        bad = next((p for p in everything if not is_sortable(p, k, max_states)), None)
        if bad is None:
            return k
        log.debug("n=%d: %s is not sortable by %d stacks", n, bad, k)
        k += 1


def kn_table(max_n: int, max_states: int = DEFAULT_MAX_STATES) -> list[KnEntry]:
    rows = []
    for n in range(max_n + 1):
        try:
            rows.append(KnEntry(n, compute_kn(n, max_states)))
        except SearchBudgetExceeded as exc:
            log.warning("k_%d: %s", n, exc)
            rows.append(KnEntry(n, None, "budget_exhausted"))
        log.info("k_%d = %s", n, rows[-1].k_n)
    return rows


# -- products of permutation sets ------------------------------------------


def compose(a: Perm, b: Perm) -> Perm:
    """Output order after feeding the output of ``a`` through a stage generating ``b``.

    In one-line notation this is the function composition a(b(j)).
    """
    if len(a) != len(b):
        raise ValueError("permutations of different sizes")
    return tuple(a[j - 1] for j in b)


def compose_sets(first: Iterable[Perm], second: Iterable[Perm]) -> frozenset[Perm]:
    first, second = list(first), list(second)
    sizes = {len(p) for p in first} | {len(p) for p in second}
    if len(sizes) > 1:
        raise ValueError(f"permutation sets over different n: {sorted(sizes)}")
    return frozenset(compose(a, b) for a in first for b in second)


def interleave(words: Sequence[str]) -> str:
    """Merge per-stack move strings into one string for the whole system.

    ``words[i]`` uses only letters i+1 and i+2 and describes what stack i+1
    does.  The j-th occurrence of a letter shared by two neighbouring words
    is the same event, so the occurrences form a precedence graph; any
    topological order of it is a valid merged string.
    """
    for i in range(len(words) - 1):
        shared = str(i + 2)
        if words[i].count(shared) != words[i + 1].count(shared):
            raise ValueError(f"stacks {i + 1} and {i + 2} disagree on the number of m{shared} moves")
    graph = TopologicalSorter()
    for i, w in enumerate(words, 1):
        allowed = {str(i), str(i + 1)}
        if set(w) - allowed:
            raise ValueError(f"word {w!r} for stack {i} uses letters outside {sorted(allowed)}")
        seen: dict[str, int] = {}
        prev = None
        for ch in w:
            seen[ch] = seen.get(ch, 0) + 1
            node = (int(ch), seen[ch])
            graph.add(node, *([prev] if prev else []))
            prev = node
    try:
        order = list(graph.static_order())
    except CycleError as exc:
        raise ValueError("per-stack strings are inconsistent (cyclic precedence)") from exc
    return "".join(str(letter) for letter, _ in order)
