"""Dictionary-based compressor: pattern table, greedy covering, code lengths, MDL search.

The pattern table is the compression model. Every distinct item in the
database is always present as a singleton pattern, so any transaction can be
covered; multi-item patterns are admitted one at a time when they shorten the
total description (database bits plus table bits, log base 2).

A transaction's cover is a disjoint exact decomposition of its items into
table patterns, chosen greedily in canonical cover order: descending
cardinality, then descending usage, then lexicographic items. A pattern's
code length is -log2 of its share of all usages, so frequent patterns get
short codes; a transaction's code length (the anomaly score downstream) is
the sum over its cover.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import log2
from typing import Iterable, Sequence

from .ingest import Item, Transaction
from .mining import SupportThreshold, canonical_key, format_items, frequent_itemsets, parse_items

# Cover/usage consistency: usages are defined by covers and covers scan in
# usage order, so recomputation iterates until the usage vector is stable.
# Preference feeds back positively, so in practice this converges in a pass
# or two; the cap only guards against pathological cycling.
_MAX_RECOVER_PASSES = 25


@dataclass(eq=False)
class Pattern:
    """A set of (site, category) items plus its current usage count."""

    items: frozenset[Item]
    usage: int = 0

    @property
    def is_singleton(self) -> bool:
        return len(self.items) == 1


@dataclass
class PatternTable:
    """The code dictionary: patterns plus fixed singleton-item statistics.

    ``singleton_counts`` holds the raw occurrence count of each item over the
    whole database; ``total_singleton_count`` is their sum. Both are fixed at
    initialization and independent of the evolving covers.
    """

    patterns: list[Pattern]
    singleton_counts: dict[Item, int]
    total_singleton_count: int

    def active_usage_total(self) -> int:
        return sum(p.usage for p in self.patterns)

    def find(self, items: frozenset[Item]) -> Pattern | None:
        for pattern in self.patterns:
            if pattern.items == items:
                return pattern
        return None


@dataclass(frozen=True)
class Cover:
    """Disjoint exact decomposition of one transaction into table patterns."""

    transaction: Transaction
    parts: tuple[Pattern, ...]


@dataclass(frozen=True)
class TrialRecord:
    items: frozenset[Item]
    support: int
    trial_length: float
    accepted: bool
    length_after: float


@dataclass
class CompressionResult:
    table: PatternTable
    initial_length: float
    final_length: float
    log: list[TrialRecord] = field(default_factory=list)

    @property
    def compression_ratio(self) -> float:
        return self.final_length / self.initial_length


def init_pattern_table(transactions: Sequence[Transaction]) -> PatternTable:
    """Singleton-only table: one pattern per distinct item, usage = raw count."""
    if not transactions:
        raise ValueError("cannot build a pattern table from an empty database")
    counts: dict[Item, int] = {}
    for txn in transactions:
        for item in txn.items:
            counts[item] = counts.get(item, 0) + 1
    patterns = [
        Pattern(items=frozenset([item]), usage=counts[item]) for item in sorted(counts)
    ]
    return PatternTable(
        patterns=patterns,
        singleton_counts=dict(sorted(counts.items())),
        total_singleton_count=sum(counts.values()),
    )


def _cover_order(patterns: Iterable[Pattern]) -> list[Pattern]:
    return sorted(patterns, key=lambda p: canonical_key(p.items, p.usage))


def _greedy_cover(row: frozenset[Item], order: Sequence[Pattern]) -> tuple[Pattern, ...]:
    uncovered = set(row)
    parts = []
    for pattern in order:
        if not uncovered:
            break
        if pattern.items <= uncovered:
            parts.append(pattern)
            uncovered -= pattern.items
    if uncovered:  # pre-condition violation: some item has no singleton
        missing = format_items(uncovered)
        raise ValueError(f"table cannot cover item(s) {missing}")
    return tuple(parts)


def cover_transaction(txn: Transaction, table: PatternTable) -> Cover:
    """Greedy cover of one transaction in canonical cover order."""
    for item in txn.items:
        if item not in table.singleton_counts and table.find(frozenset([item])) is None:
            raise ValueError(f"unknown item {item[0]}:{item[1]} (no singleton pattern)")
    parts = _greedy_cover(txn.item_set, _cover_order(table.patterns))
    return Cover(transaction=txn, parts=parts)


def cover_database(
    transactions: Sequence[Transaction], table: PatternTable
) -> list[Cover]:
    """Cover every transaction under one fixed canonical order (single pass)."""
    order = _cover_order(table.patterns)
    memo: dict[frozenset[Item], tuple[Pattern, ...]] = {}
    covers = []
    for txn in transactions:
        row = txn.item_set
        parts = memo.get(row)
        if parts is None:
            parts = _greedy_cover(row, order)
            memo[row] = parts
        covers.append(Cover(transaction=txn, parts=parts))
    return covers


def recompute_usages(
    table: PatternTable, transactions: Sequence[Transaction]
) -> PatternTable:
    """Set every pattern's usage to the number of covers that include it.

    Iterates cover passes until usages are self-consistent (the covers
    produced under the current usage ordering reproduce those same usages),
    so afterwards ``sum of usages == sum of cover sizes`` exactly.
    """
    for _ in range(_MAX_RECOVER_PASSES):
        covers = cover_database(transactions, table)
        tally: dict[int, int] = {}
        for cover in covers:
            for part in cover.parts:
                tally[id(part)] = tally.get(id(part), 0) + 1
        stable = all(tally.get(id(p), 0) == p.usage for p in table.patterns)
        for pattern in table.patterns:
            pattern.usage = tally.get(id(pattern), 0)
        if stable:
            break
    return table


def pattern_code_length(pattern: Pattern, table: PatternTable) -> float:
    """-log2(usage / total usage). Undefined (error) for zero-usage patterns."""
    if pattern.usage <= 0:
        raise ValueError(
            f"pattern {format_items(pattern.items)} has zero usage; it carries no code"
        )
    total = table.active_usage_total()
    if total <= 0:
        raise ValueError("pattern table has no usage at all")
    return -log2(pattern.usage / total)


def transaction_code_length(txn: Transaction, table: PatternTable) -> float:
    """Sum of code lengths over the transaction's cover."""
    cover = cover_transaction(txn, table)
    return sum(pattern_code_length(part, table) for part in cover.parts)


def database_length(
    transactions: Sequence[Transaction], table: PatternTable
) -> float:
    """Total bits to encode every transaction under the table."""
    if not transactions:
        return 0.0
    covers = cover_database(transactions, table)
    total_usage = table.active_usage_total()
    length_of: dict[int, float] = {
        id(p): -log2(p.usage / total_usage) for p in table.patterns if p.usage > 0
    }
    row_length: dict[frozenset[Item], float] = {}
    total = 0.0
    for cover in covers:
        row = cover.transaction.item_set
        bits = row_length.get(row)
        if bits is None:
            bits = sum(length_of[id(part)] for part in cover.parts)
            row_length[row] = bits
        total += bits
    return total


def table_length(table: PatternTable) -> float:
    """Bits to encode the table itself.

    First term: code lengths of all in-use patterns. Second term: the fixed
    singleton-item encoding, sum of -r_i * log2(r_i / c) over raw item counts.
    """
    first = sum(
        pattern_code_length(p, table) for p in table.patterns if p.usage > 0
    )
    c = table.total_singleton_count
    second = 0.0
    for item in sorted(table.singleton_counts):
        r = table.singleton_counts[item]
        second += -r * log2(r / c)
    return first + second


def total_length(
    transactions: Sequence[Transaction], table: PatternTable
) -> float:
    return database_length(transactions, table) + table_length(table)


def compress(
    transactions: Sequence[Transaction],
    threshold: SupportThreshold,
) -> CompressionResult:
    """Greedy MDL selection of a pattern table.

    Seeds the singleton table, computes the initial length L0, mines frequent
    itemsets, then trials each candidate once in canonical order (descending
    cardinality, descending support, lexicographic): tentatively insert,
    re-cover, recompute usages, and keep the candidate only if the total
    length strictly drops. Rejected candidates are removed and the previous
    usages restored. Multi-item patterns left unused by a later accepted
    candidate are pruned; singletons always stay.
    """
    if not transactions:
        raise ValueError("cannot compress an empty database")
    table = init_pattern_table(transactions)
    recompute_usages(table, transactions)
    initial = total_length(transactions, table)
    best = initial

    candidates = frequent_itemsets(transactions, threshold)
    log: list[TrialRecord] = []
    for candidate in candidates:
        snapshot = [(p, p.usage) for p in table.patterns]
        # Provisional usage = support places the newcomer among its
        # same-cardinality peers for the trial's first cover pass.
        trial_pattern = Pattern(items=candidate.items, usage=candidate.support)
        table.patterns.append(trial_pattern)
        recompute_usages(table, transactions)
        trial = total_length(transactions, table)
        if trial < best:
            best = trial
            table.patterns = [
                p for p in table.patterns if p.is_singleton or p.usage > 0
            ]
            accepted = True
        else:
            table.patterns.pop()
            for pattern, usage in snapshot:
                pattern.usage = usage
            accepted = False
        log.append(
            TrialRecord(
                items=candidate.items,
                support=candidate.support,
                trial_length=trial,
                accepted=accepted,
                length_after=best,
            )
        )
    return CompressionResult(
        table=table, initial_length=initial, final_length=best, log=log
    )


# --- pattern table file format -------------------------------------------------
# Pattern lines: "site:cat,...<TAB>usage<TAB>code_length_bits", in canonical
# cover order. Leading '#' lines carry the fixed singleton statistics so a
# reloaded table supports every length computation without the database.

def write_pattern_table(path: str, table: PatternTable) -> None:
    total = table.active_usage_total()
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("# pattern-table v1\n")
        fh.write(f"# total_singleton_count\t{table.total_singleton_count}\n")
        for item in sorted(table.singleton_counts):
            fh.write(
                f"# item_count\t{item[0]}:{item[1]}\t{table.singleton_counts[item]}\n"
            )
        for pattern in _cover_order(table.patterns):
            if pattern.usage > 0:
                bits = f"{-log2(pattern.usage / total):.9f}"
            else:
                bits = "inf"
            fh.write(f"{format_items(pattern.items)}\t{pattern.usage}\t{bits}\n")


def read_pattern_table(path: str) -> PatternTable:
    """Reload a written table. Code lengths are derived from usages, so the
    stored bits column is informational only."""
    patterns: list[Pattern] = []
    singleton_counts: dict[Item, int] = {}
    total_singleton_count = 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                fields = line[1:].strip().split("\t")
                if fields[0] == "total_singleton_count":
                    total_singleton_count = int(fields[1])
                elif fields[0] == "item_count":
                    attr, _, cat = fields[1].rpartition(":")
                    singleton_counts[(attr, int(cat))] = int(fields[2])
                continue
            try:
                items_text, usage_text, _bits = line.split("\t")
                patterns.append(
                    Pattern(items=parse_items(items_text), usage=int(usage_text))
                )
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}")
    if not patterns:
        raise ValueError(f"{path}: no patterns found")
    return PatternTable(
        patterns=patterns,
        singleton_counts=singleton_counts,
        total_singleton_count=total_singleton_count,
    )


# --- acceptance log file format --------------------------------------------

def write_acceptance_log(path: str, result: CompressionResult) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("# acceptance-log v1\n")
        fh.write(f"# initial_length\t{result.initial_length:.9f}\n")
        fh.write(f"# final_length\t{result.final_length:.9f}\n")
        fh.write("candidate\tsupport\ttrial_length\taccepted\tlength_after\n")
        for record in result.log:
            fh.write(
                f"{format_items(record.items)}\t{record.support}\t"
                f"{record.trial_length:.9f}\t"
                f"{'yes' if record.accepted else 'no'}\t{record.length_after:.9f}\n"
            )
