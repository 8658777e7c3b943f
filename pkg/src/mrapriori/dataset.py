"""Transaction files, blocks, input splits and the weighted-transaction format."""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .itemset import Itemset, make_itemset


class ParseError(ValueError):
    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class FormatError(ParseError):
    """A weighted-transaction line that does not decode."""


@dataclass(frozen=True)
class WeightedTransaction:
    items: Itemset
    weight: int = 1

    def __post_init__(self):
        if self.weight < 1:
            raise FormatError(f"weight must be >= 1, got {self.weight}")


def _int_tokens(line, line_number, error=ParseError):
    tokens = line.split()
    try:
        values = [int(tok) for tok in tokens]
    except ValueError:
        bad = next(tok for tok in tokens if not tok.lstrip("-").isdigit())
        raise error(f"non-integer token {bad!r}", line_number) from None
    if any(v < 0 for v in values):
        raise error("negative item id", line_number)
    return values


def parse_transaction_line(line: str, line_number: int | None = None) -> WeightedTransaction | None:
    """Parse one raw transaction line; ``None`` means the line is blank and skipped."""
    if not line.strip():
        return None
    return WeightedTransaction(make_itemset(_int_tokens(line, line_number)), 1)


def encode_weighted_transaction(wt: WeightedTransaction) -> str:
    return " ".join(str(i) for i in (*wt.items, wt.weight))


def decode_weighted_transaction(line: str, line_number: int | None = None) -> WeightedTransaction:
    values = _int_tokens(line, line_number, FormatError)
    if len(values) < 2:
        raise FormatError("weighted transaction needs at least one item and a weight", line_number)
    *items, weight = values
    if weight < 1:
        raise FormatError(f"weight must be >= 1, got {weight}", line_number)
    return WeightedTransaction(make_itemset(items), weight)


def render_itemset(items: Itemset) -> str:
    return " ".join(map(str, items))


@dataclass(frozen=True)
class TransactionDatabase:
    """Ordered transactions plus the non-blank text lines they came from.

    ``lines[i]`` is the text the map tasks see for ``transactions[i]``.
    """

    transactions: tuple
    lines: tuple
    blank_lines: int = 0
    duplicate_items: int = 0

    @property
    def line_count(self) -> int:
        return len(self.lines)

    def __len__(self):
        return len(self.lines)

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> TransactionDatabase:
        transactions, kept = [], []
        blank = dup = 0
        for number, raw in enumerate(lines, start=1):
            wt = parse_transaction_line(raw, number)
            if wt is None:
                blank += 1
                continue
            n_tokens = len(raw.split())
            dup += n_tokens - len(wt.items)
            transactions.append(wt)
            kept.append(raw.strip())
        return cls(tuple(transactions), tuple(kept), blank, dup)

    @classmethod
    def from_itemsets(cls, itemsets: Iterable[Iterable[int]]) -> TransactionDatabase:
        rows = [make_itemset(x) for x in itemsets]
        return cls(
            tuple(WeightedTransaction(r, 1) for r in rows),
            tuple(render_itemset(r) for r in rows),
        )

    @classmethod
    def from_weighted(cls, weighted: Iterable[WeightedTransaction]) -> TransactionDatabase:
        """Database whose lines are in the weighted (weight-last) encoding."""
        weighted = tuple(weighted)
        return cls(weighted, tuple(encode_weighted_transaction(w) for w in weighted))


def read_transactions(path) -> TransactionDatabase:
    with open(path, encoding="utf-8") as fh:
        return TransactionDatabase.from_lines(fh)


def write_weighted_transactions(path, weighted: Iterable[WeightedTransaction]):
    Path(path).write_text("".join(encode_weighted_transaction(w) + "\n" for w in weighted), encoding="utf-8")


def read_weighted_transactions(path) -> list[WeightedTransaction]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for number, line in enumerate(fh, start=1):
            if line.strip():
                out.append(decode_weighted_transaction(line, number))
    return out


@dataclass(frozen=True)
class Block:
    block_id: int
    start: int
    end: int  # exclusive

    @property
    def line_range(self):
        return range(self.start, self.end)

    def __len__(self):
        return self.end - self.start


@dataclass(frozen=True)
class Split:
    """Logical slice of the input; one map task each.

    ``block_id`` is the block holding the split's first line and decides
    where the task is data-local.
    """

    split_id: int
    start: int
    end: int
    block_id: int = 0

    @property
    def line_range(self):
        return range(self.start, self.end)

    def __len__(self):
        return self.end - self.start


def _line_count(db) -> int:
    return db if isinstance(db, int) else len(db)


def partition_into_blocks(db, block_lines: int) -> list[Block]:
    if block_lines < 1:
        raise ValueError("block_lines must be >= 1")
    n = _line_count(db)
    return [Block(i, start, min(start + block_lines, n)) for i, start in enumerate(range(0, n, block_lines))]


def make_line_splits(db, lines_per_split: int | None = None, blocks: Sequence[Block] | None = None) -> list[Split]:
    """Contiguous splits of at most ``lines_per_split`` lines.

    Without ``lines_per_split`` every block becomes one split.  ``blocks``
    (default: a single block spanning the input) decide each split's owning
    block.
    """
    n = _line_count(db)
    if blocks is None:
        blocks = [Block(0, 0, n)] if n else []
    if lines_per_split is None:
        return [Split(b.block_id, b.start, b.end, b.block_id) for b in blocks]
    if lines_per_split < 1:
        raise ValueError("lines_per_split must be >= 1")
    starts = [b.start for b in blocks]
    splits = []
    for i, start in enumerate(range(0, n, lines_per_split)):
        owner = blocks[_owner_index(starts, start)].block_id if blocks else 0
        splits.append(Split(i, start, min(start + lines_per_split, n), owner))
    return splits


def _owner_index(starts, line):
    return bisect_right(starts, line) - 1


def splits_for_count(db, num_splits: int) -> int:
    """Lines per split that yields at most ``num_splits`` splits."""
    if num_splits < 1:
        raise ValueError("num_splits must be >= 1")
    return max(1, math.ceil(_line_count(db) / num_splits))
