"""Shared builders and independent oracles for the test suite.

The oracles here deliberately take the slow, obvious route (enumerate every
subset, try every pattern combination) so the optimized implementations have
something honest to be checked against.
"""

from __future__ import annotations

import random
from datetime import datetime, timedelta
from itertools import combinations
from typing import Sequence

from hypothesis import strategies as st

from mdlpatterns import SupportThreshold, Transaction, init_pattern_table
from mdlpatterns import recompute_usages, total_length
from mdlpatterns.codec import Pattern
from mdlpatterns.mining import Itemset

BASE = datetime(2016, 8, 22)


def make_db(
    combos: Sequence[tuple[int, ...]],
    attrs: Sequence[str] = ("PB", "LQ", "RB"),
) -> list[Transaction]:
    """One transaction per category combo, consecutive hourly timestamps."""
    rows = []
    for i, cats in enumerate(combos):
        items = tuple((attr, int(cat)) for attr, cat in zip(attrs, cats))
        rows.append(Transaction(timestamp=BASE + timedelta(hours=i), items=items))
    return rows


def random_db(
    rng: random.Random,
    max_rows: int = 12,
    attrs: Sequence[str] = ("A", "B", "C"),
    max_cat: int = 4,
    min_rows: int = 1,
) -> list[Transaction]:
    n = rng.randint(min_rows, max_rows)
    combos = [
        tuple(rng.randint(1, max_cat) for _ in attrs) for _ in range(n)
    ]
    return make_db(combos, attrs=attrs)


def db_strategy(max_rows: int = 12, attrs=("A", "B", "C"), max_cat: int = 4):
    """Hypothesis strategy for small databases over fixed attributes."""
    row = st.tuples(*(st.integers(1, max_cat) for _ in attrs))
    return st.lists(row, min_size=1, max_size=max_rows).map(
        lambda combos: make_db(combos, attrs=attrs)
    )


def brute_force_frequent(
    transactions: Sequence[Transaction], threshold: SupportThreshold
) -> set[tuple[frozenset, int]]:
    """Every itemset of size >= 2 meeting the threshold, by direct enumeration.

    Tries each combination of observed items up to the longest row size (a
    larger set cannot be contained in any row) and counts supersets one row
    at a time.
    """
    resolved = threshold.resolve(len(transactions))
    universe = sorted({item for txn in transactions for item in txn.items})
    longest_row = max(len(txn.items) for txn in transactions)
    found = set()
    for size in range(2, min(len(universe), longest_row) + 1):
        for combo in combinations(universe, size):
            items = frozenset(combo)
            sup = sum(1 for txn in transactions if items <= txn.item_set)
            if threshold.meets(sup, resolved):
                found.add((items, sup))
    return found


def exhaustive_best_length(
    transactions: Sequence[Transaction], candidates: Sequence[Itemset]
) -> float:
    """Minimum total length over every subset of the candidate patterns.

    The empty subset (singletons only) is included, so this is always a lower
    bound for what the greedy search can reach with the same candidates.
    """
    best = None
    for mask in range(2 ** len(candidates)):
        table = init_pattern_table(transactions)
        for bit, cand in enumerate(candidates):
            if mask >> bit & 1:
                table.patterns.append(Pattern(items=cand.items, usage=cand.support))
        recompute_usages(table, transactions)
        length = total_length(transactions, table)
        if best is None or length < best:
            best = length
    return best
