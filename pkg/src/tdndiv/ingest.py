"""Build frequency tables from archived line-delimited JSON records.

Each non-blank line is one record. The contributor is the value found at
a dotted field path (``user.id_str`` for archived tweets); integer and
string ids are both accepted and compared by their decimal string form,
so ``12`` and ``"12"`` are the same contributor. Display names are never
consulted. Every record counts as one contribution.

Tables persist as a two-column CSV (``contributor_id,count``), rows in
rank order: descending count, then ascending id.
"""

from __future__ import annotations

import csv
import enum
import gzip
import io
import json
import logging
import os
import re
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Union

from tdndiv.errors import DuplicateId, EmptyTable, InvalidCount, MalformedRecord, ParseError
from tdndiv.freqtable import FrequencyTable

__all__ = [
    "OnMalformed",
    "IngestConfig",
    "IngestReport",
    "ingest_stream",
    "ingest_path",
    "open_records",
    "load_table",
    "save_table",
    "dump_table",
    "CSV_HEADER",
]

log = logging.getLogger(__name__)

CSV_HEADER = ("contributor_id", "count")
_GZIP_MAGIC = b"\x1f\x8b"
_COUNT_RE = re.compile(r"[+-]?[0-9]+")


class OnMalformed(str, enum.Enum):
    SKIP_AND_COUNT = "skip_and_count"
    ABORT = "abort"


@dataclass(frozen=True)
class IngestConfig:
    id_path: str = "user.id_str"
    on_malformed: OnMalformed = OnMalformed.SKIP_AND_COUNT

    def __post_init__(self):
        if not self.id_path or any(not part for part in self.id_path.split(".")):
            raise ValueError(f"invalid id path {self.id_path!r}")
        object.__setattr__(self, "on_malformed", OnMalformed(self.on_malformed))

    @property
    def keys(self) -> tuple[str, ...]:
        return tuple(self.id_path.split("."))


@dataclass(frozen=True)
class IngestReport:
    records_read: int
    records_counted: int
    records_skipped: int
    table: FrequencyTable


def _resolve_id(record, keys: tuple[str, ...]) -> str:
    node = record
    for key in keys:
        if not isinstance(node, dict) or key not in node:
            raise KeyError(key)
        node = node[key]
    if isinstance(node, bool):
        raise TypeError("boolean id")
    if isinstance(node, int):
        return str(node)
    if isinstance(node, str) and node:
        return node
    raise TypeError(f"unusable id {node!r}")


def _count_lines(lines: Iterable[Union[str, bytes]], cfg: IngestConfig, first_lineno: int):
    keys = cfg.keys
    abort = cfg.on_malformed is OnMalformed.ABORT
    counts: Counter = Counter()
    read = skipped = 0
    for lineno, line in enumerate(lines, start=first_lineno):
        if not line.strip():
            continue
        read += 1
        try:
            cid = _resolve_id(json.loads(line), keys)
        except (ValueError, KeyError, TypeError) as exc:
            # UnicodeDecodeError and JSONDecodeError are both ValueErrors
            if abort:
                reason = f"missing field {exc.args[0]!r}" if isinstance(exc, KeyError) else str(exc)
                raise MalformedRecord(lineno, reason) from None
            skipped += 1
            continue
        counts[cid] += 1
    return counts, read, skipped


def _report(counts: Counter, read: int, skipped: int) -> IngestReport:
    if not counts:
        raise EmptyTable(f"no countable records among {read} read")
    return IngestReport(read, read - skipped, skipped, FrequencyTable(counts))


def ingest_stream(lines: Iterable[Union[str, bytes]], cfg: IngestConfig, first_lineno: int = 1) -> IngestReport:
    """Count contributions per contributor over a stream of JSON lines.

    State is one counter entry per distinct contributor. Blank lines are
    not records. Lines that fail to parse, or whose id is missing, empty
    or of the wrong type, are tallied as skipped or raise
    :class:`MalformedRecord` with their line number, per ``cfg``.
    """
    return _report(*_count_lines(lines, cfg, first_lineno))


def open_records(path: Union[str, os.PathLike]) -> IO[bytes]:
    """Open a record archive in binary mode, decompressing gzip by magic bytes."""
    with open(path, "rb") as probe:
        magic = probe.read(2)
    if magic == _GZIP_MAGIC:
        return gzip.open(path, "rb")
    return open(path, "rb")


def _blocks(fh: IO[bytes], size: int):
    """Yield ``(first_lineno, blob)`` with each blob ending on a line boundary."""
    lineno = 1
    while True:
        blob = fh.read(size)
        if not blob:
            return
        if not blob.endswith(b"\n"):
            blob += fh.readline()
        yield lineno, blob
        lineno += blob.count(b"\n")


def _count_block(blob: bytes, cfg: IngestConfig, first_lineno: int):
    return _count_lines(blob.split(b"\n"), cfg, first_lineno)


def _absorb(future, total: Counter, read: int, skipped: int) -> tuple[int, int]:
    counts, r, s = future.result()
    total.update(counts)
    return read + r, skipped + s


def ingest_path(
    path: Union[str, os.PathLike],
    cfg: IngestConfig,
    workers: int = 1,
    block_bytes: int = 4 << 20,
) -> IngestReport:
    """Ingest an archive file, optionally across ``workers`` processes.

    The file is dealt to workers in contiguous, line-aligned blocks of about
    ``block_bytes``; each worker keeps a
    private counter and the counters are summed. The result is identical
    to single-pass ingestion, and in abort mode the reported line is the
    first malformed line of the file.
    """
    with open_records(path) as fh:
        if workers <= 1:
            return ingest_stream(fh, cfg)
        total: Counter = Counter()
        read = skipped = 0
        pending: deque = deque()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # results are consumed in submission order, so the first exception
            # raised is the earliest malformed line; the window bounds memory
            for lineno, blob in _blocks(fh, block_bytes):
                pending.append(pool.submit(_count_block, blob, cfg, lineno))
                if len(pending) >= 2 * workers:
                    read, skipped = _absorb(pending.popleft(), total, read, skipped)
            while pending:
                read, skipped = _absorb(pending.popleft(), total, read, skipped)
    log.debug("ingested %d records with %d workers", read, workers)
    return _report(total, read, skipped)


def dump_table(t: FrequencyTable, fp: IO[str]) -> None:
    writer = csv.writer(fp, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(t.ranked())


def save_table(t: FrequencyTable, path: Union[str, os.PathLike]) -> None:
    """Write ``t`` as canonical CSV: UTF-8, LF endings, rank-ordered rows."""
    with open(path, "w", encoding="utf-8", newline="") as fp:
        dump_table(t, fp)


def _parse_rows(fp: IO[str]) -> FrequencyTable:
    reader = csv.reader(fp)
    header = next(reader, None)
    if header is None or tuple(header) != CSV_HEADER:
        raise ParseError(1, f"expected header {','.join(CSV_HEADER)!r}, got {header!r}")
    counts: dict[str, int] = {}
    for row_no, row in enumerate(reader, start=2):
        if len(row) != 2:
            raise ParseError(row_no, f"expected 2 fields, got {len(row)}")
        cid, raw = row
        if not cid:
            raise ParseError(row_no, "empty contributor id")
        if not _COUNT_RE.fullmatch(raw):
            raise ParseError(row_no, f"count is not an integer: {raw!r}")
        count = int(raw)
        if count < 1:
            raise InvalidCount(f"count for {cid!r} must be >= 1, got {count}", row=row_no)
        if cid in counts:
            raise DuplicateId(f"duplicate contributor id {cid!r}", row=row_no)
        counts[cid] = count
    if not counts:
        raise EmptyTable("frequency file has no data rows")
    return FrequencyTable(counts)


def load_table(source: Union[str, os.PathLike, IO[str]]) -> FrequencyTable:
    """Read a table written by :func:`save_table`.

    Rows may appear in any order. Raises :class:`ParseError` for a bad
    header or malformed row, :class:`InvalidCount` for counts below one,
    :class:`DuplicateId` for repeated ids and :class:`EmptyTable` when
    there are no data rows.
    """
    if isinstance(source, io.TextIOBase):
        return _parse_rows(source)
    with open(Path(source), encoding="utf-8", newline="") as fp:
        return _parse_rows(fp)
