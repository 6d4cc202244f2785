"""Parsing and validation of external inputs.

Formats
-------
Price CSV
    ``date,open,high,low,close,adj_close,volume`` with ISO dates. Every column
    after ``date`` is optional except that one of ``adj_close`` / ``close``
    must be present. Missing OHLC fields collapse onto the close, missing
    volume is zero.
Corpus JSONL
    One object per line: ``{"date": "YYYY-MM-DD", "text": "...",
    "tags": ["$AAPL"], "source": "ft"}``; ``tags`` and ``source`` optional.
Attitude lexicon TSV
    ``token<TAB>score`` lines, ``#`` comments, optional ``[negators]`` section
    listing one token per line.
Emotion lexicon TSV
    ``token<TAB>emotion1,emotion2,...``.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import json
import logging
import math
import re
import unicodedata
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AllLinesMalformed,
    EmptyCorpus,
    InvalidBar,
    InvalidTicker,
    MalformedLine,
    MalformedNumber,
    MissingColumn,
    MissingInput,
    NonMonotonicDates,
    ScoreOutOfRange,
)
from .timeseries import DatedSeries

logger = logging.getLogger(__name__)

EMOTIONS = ("anger", "anticipation", "disgust", "fear", "joy", "sadness", "surprise", "trust")
PRICE_COLUMNS = ("date", "open", "high", "low", "close", "adj_close", "volume")
_FIELDS = ("dates",) + PRICE_COLUMNS[1:]

CASHTAG_RE = re.compile(r"^\$[A-Za-z0-9.]{1,6}$")
TICKER_RE = re.compile(r"^[A-Z0-9.]{1,6}$")


def _require_file(path) -> Path:
    p = Path(path)
    if not p.is_file():
        raise MissingInput(f"input file not found: {p}")
    return p


def parse_date(text: str) -> dt.date:
    return dt.date.fromisoformat(text.strip())


@dataclass(frozen=True)
class PriceBar:
    date: dt.date
    open: float
    high: float
    low: float
    close: float
    adj_close: float
    volume: float


@dataclass(frozen=True, eq=False)
class PriceSeries:
    """Column-oriented sequence of daily bars sorted by date."""

    dates: np.ndarray
    open: np.ndarray
    high: np.ndarray
    low: np.ndarray
    close: np.ndarray
    adj_close: np.ndarray
    volume: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dates", np.asarray(self.dates, dtype="datetime64[D]"))
        for name in PRICE_COLUMNS[1:]:
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            if arr.shape != self.dates.shape:
                raise ValueError(f"column {name} has the wrong length")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        self.dates.flags.writeable = False

    def __len__(self) -> int:
        return len(self.dates)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PriceSeries):
            return NotImplemented
        return all(np.array_equal(getattr(self, c), getattr(other, c)) for c in _FIELDS)

    def bars(self) -> list[PriceBar]:
        return [
            PriceBar(d.item(), *(float(getattr(self, c)[i]) for c in PRICE_COLUMNS[1:]))
            for i, d in enumerate(self.dates)
        ]

    def head(self, n: int) -> "PriceSeries":
        return PriceSeries(*(getattr(self, c)[:n] for c in _FIELDS))

    def adjusted_hlc(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """High, low and close scaled by the split/dividend adjustment factor."""
        factor = self.adj_close / self.close
        return self.high * factor, self.low * factor, self.adj_close.copy()

    def series(self, column: str = "adj_close") -> DatedSeries:
        return DatedSeries(self.dates, getattr(self, column), column)

    def to_csv(self, path) -> None:
        Path(path).write_text(self.to_csv_text(), encoding="utf-8")

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(PRICE_COLUMNS)
        for i, d in enumerate(self.dates):
            writer.writerow([str(d)] + [repr(float(getattr(self, c)[i])) for c in PRICE_COLUMNS[1:]])
        return buf.getvalue()


def _parse_float(text: str, line: int, column: str) -> float:
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise MalformedNumber(line, f"line {line}: cannot parse {column}={text!r}") from None
    if not math.isfinite(value):
        raise MalformedNumber(line, f"line {line}: non-finite {column}={text!r}")
    return value


def load_prices(path) -> PriceSeries:
    """Read a price CSV.

    Rows are sorted by date; a repeated date raises ``NonMonotonicDates``.
    Error row numbers are file line numbers (the header is line 1).
    """
    p = _require_file(path)
    with p.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip().lower() for h in next(reader)]
        except StopIteration:
            raise MissingColumn("price file has no header row") from None
        col = {name: i for i, name in enumerate(header)}
        if "date" not in col:
            raise MissingColumn("price file lacks a 'date' column")
        if "adj_close" not in col and "close" not in col:
            raise MissingColumn("price file needs an 'adj_close' or 'close' column")

        rows = []
        for line, raw in enumerate(reader, start=2):
            if not raw or all(not c.strip() for c in raw):
                continue
            if len(raw) < len(header):
                raise MalformedNumber(line, f"line {line}: expected {len(header)} fields, got {len(raw)}")
            try:
                day = parse_date(raw[col["date"]])
            except ValueError:
                raise MalformedNumber(line, f"line {line}: bad date {raw[col['date']]!r}") from None
            fields = {
                name: _parse_float(raw[col[name]], line, name)
                for name in PRICE_COLUMNS[1:]
                if name in col
            }
            close = fields.get("close", fields.get("adj_close"))
            adj = fields.get("adj_close", close)
            opn = fields.get("open", close)
            high = fields.get("high", max(opn, close))
            low = fields.get("low", min(opn, close))
            vol = fields.get("volume", 0.0)
            if min(opn, high, low, close, adj) <= 0:
                raise InvalidBar(line, f"line {line}: prices must be positive")
            if vol < 0:
                raise InvalidBar(line, f"line {line}: negative volume")
            if not (low <= opn <= high and low <= close <= high):
                raise InvalidBar(line, f"line {line}: requires low <= open, close <= high")
            rows.append((day, opn, high, low, close, adj, vol, line))

    if not rows:
        raise MissingColumn("price file has a header but no data rows")
    rows.sort(key=lambda r: r[0])
    for prev, cur in zip(rows, rows[1:]):
        if cur[0] == prev[0]:
            raise NonMonotonicDates(f"date {cur[0]} repeated (lines {prev[7]} and {cur[7]})")
    cols = list(zip(*rows))
    return PriceSeries(np.array(cols[0], dtype="datetime64[D]"), *cols[1:7])


@dataclass(frozen=True)
class Document:
    date: dt.date
    text: str
    tags: frozenset = frozenset()
    source: str = ""

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("document text is empty")
        tags = frozenset(t.upper() for t in self.tags)
        bad = [t for t in tags if not CASHTAG_RE.match(t)]
        if bad:
            raise ValueError(f"invalid cashtags: {sorted(bad)}")
        object.__setattr__(self, "tags", tags)

    @property
    def tickers(self) -> frozenset:
        return frozenset(t[1:] for t in self.tags)

    def to_json(self) -> str:
        obj = {"date": self.date.isoformat(), "text": self.text}
        if self.tags:
            obj["tags"] = sorted(self.tags)
        if self.source:
            obj["source"] = self.source
        return json.dumps(obj, ensure_ascii=False)


def _parse_document(line: str) -> Document:
    obj = json.loads(line)
    if not isinstance(obj, dict):
        raise ValueError("record is not an object")
    tags = obj.get("tags", [])
    source = obj.get("source", "")
    if not isinstance(obj.get("text"), str) or not isinstance(tags, list):
        raise ValueError("bad field types")
    if not all(isinstance(t, str) for t in tags) or not isinstance(source, str):
        raise ValueError("bad field types")
    return Document(parse_date(obj["date"]), obj["text"], frozenset(tags), source)


def load_documents(path) -> tuple[list[Document], list[int]]:
    """Read a JSONL corpus.

    Returns the documents sorted by date (stable for equal dates) and the
    line numbers of malformed records that were skipped.
    """
    p = _require_file(path)
    docs: list[Document] = []
    skipped: list[int] = []
    with p.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                docs.append(_parse_document(line))
            except (ValueError, KeyError, TypeError) as exc:
                logger.warning("skipping malformed corpus line %d: %s", lineno, exc)
                skipped.append(lineno)
    if not docs and not skipped:
        raise EmptyCorpus(f"corpus {p} contains no records")
    if not docs:
        raise AllLinesMalformed(f"all {len(skipped)} records in {p} are malformed")
    docs.sort(key=lambda d: d.date)
    return docs, skipped


def write_documents(docs: Iterable[Document], path) -> None:
    Path(path).write_text("".join(d.to_json() + "\n" for d in docs), encoding="utf-8")


def _strip_trailing_punct(token: str) -> str:
    end = len(token)
    while end > 0 and unicodedata.category(token[end - 1]).startswith("P"):
        end -= 1
    return token[:end]


def cashtag_tokens(text: str) -> set[str]:
    """Uppercased whitespace tokens of ``text`` that form a valid cashtag."""
    out = set()
    for tok in text.split():
        tok = _strip_trailing_punct(tok)
        if CASHTAG_RE.match(tok):
            out.add(tok.upper())
    return out


def filter_by_cashtag(docs: Sequence[Document], ticker: str) -> list[Document]:
    """Documents mentioning ``$TICKER`` in their tags or as a whole text token."""
    if not isinstance(ticker, str) or not TICKER_RE.match(ticker):
        raise InvalidTicker(f"invalid ticker {ticker!r}")
    tag = "$" + ticker
    return [d for d in docs if tag in d.tags or tag in cashtag_tokens(d.text)]


@dataclass(frozen=True)
class AttitudeLexicon:
    entries: dict
    negators: frozenset = frozenset()
    duplicates: int = 0

    def __post_init__(self):
        for tok, score in self.entries.items():
            if any(c.isspace() for c in tok) or not math.isfinite(score):
                raise ValueError(f"bad lexicon entry {tok!r}")


@dataclass(frozen=True)
class EmotionLexicon:
    entries: dict
    duplicates: int = 0

    def __post_init__(self):
        for tok, emotions in self.entries.items():
            if not set(emotions) <= set(EMOTIONS):
                raise ValueError(f"unknown emotion labels for {tok!r}")


def _lexicon_lines(path) -> Iterable[tuple[int, str]]:
    p = _require_file(path)
    with p.open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            yield lineno, line


def load_attitude_lexicon(path) -> AttitudeLexicon:
    entries: dict[str, float] = {}
    negators: set[str] = set()
    duplicates = 0
    in_negators = False
    for lineno, line in _lexicon_lines(path):
        stripped = line.strip()
        if stripped.lower() == "[negators]":
            in_negators = True
            continue
        if in_negators:
            if any(c.isspace() for c in stripped):
                raise MalformedLine(lineno, f"line {lineno}: negator must be a single token")
            negators.add(stripped.lower())
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].strip() or any(c.isspace() for c in parts[0].strip()):
            raise MalformedLine(lineno, f"line {lineno}: expected 'token<TAB>score'")
        token = parts[0].strip().lower()
        try:
            score = float(parts[1])
        except ValueError:
            raise MalformedLine(lineno, f"line {lineno}: score {parts[1]!r} is not a number") from None
        if not math.isfinite(score):
            raise MalformedLine(lineno, f"line {lineno}: non-finite score")
        if not -1.0 <= score <= 1.0:
            raise ScoreOutOfRange(lineno)
        if token in entries:
            duplicates += 1
        entries[token] = score
    if duplicates:
        logger.warning("attitude lexicon %s: %d duplicate tokens (last wins)", path, duplicates)
    return AttitudeLexicon(entries, frozenset(negators), duplicates)


def load_emotion_lexicon(path) -> EmotionLexicon:
    entries: dict[str, frozenset] = {}
    duplicates = 0
    for lineno, line in _lexicon_lines(path):
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].strip() or any(c.isspace() for c in parts[0].strip()):
            raise MalformedLine(lineno, f"line {lineno}: expected 'token<TAB>emotion,...'")
        labels = [e.strip().lower() for e in parts[1].split(",")]
        if not labels or any(e not in EMOTIONS for e in labels):
            raise MalformedLine(lineno, f"line {lineno}: unknown emotion in {parts[1]!r}")
        token = parts[0].strip().lower()
        if token in entries:
            duplicates += 1
        entries[token] = frozenset(labels)
    if duplicates:
        logger.warning("emotion lexicon %s: %d duplicate tokens (last wins)", path, duplicates)
    return EmotionLexicon(entries, duplicates)


def write_attitude_lexicon(lex: AttitudeLexicon, path) -> None:
    lines = [f"{tok}\t{score!r}" for tok, score in sorted(lex.entries.items())]
    if lex.negators:
        lines.append("[negators]")
        lines.extend(sorted(lex.negators))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_emotion_lexicon(lex: EmotionLexicon, path) -> None:
    lines = [
        f"{tok}\t{','.join(e for e in EMOTIONS if e in emos)}"
        for tok, emos in sorted(lex.entries.items())
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def default_attitude_lexicon() -> AttitudeLexicon:
    """Small financial-domain attitude lexicon shipped with the package."""
    with resources.as_file(resources.files("sentimarket.data") / "attitude.tsv") as p:
        return load_attitude_lexicon(p)


def default_emotion_lexicon() -> EmotionLexicon:
    """Small emotion lexicon in the NRC layout shipped with the package."""
    with resources.as_file(resources.files("sentimarket.data") / "emotion.tsv") as p:
        return load_emotion_lexicon(p)
