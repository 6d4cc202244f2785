"""Lexicon-based attitude and emotion extraction with tense tagging."""

from __future__ import annotations

import datetime as dt
import re
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Literal, Sequence

import numpy as np

from .ingest import EMOTIONS, AttitudeLexicon, Document, EmotionLexicon

Mode = Literal["standard", "temporal"]
TemporalTag = Literal["past", "present", "future", "unknown"]

NEGATION_WINDOW = 3
SIGNAL_COLUMNS = ("date", "attitude") + EMOTIONS + ("doc_count",)

_SENTENCE_END = re.compile(r"(?<=[.!?])\s+")
_TOKEN = re.compile(r"\$?[^\W_]+(?:'[^\W_]+)*")

TIME_UNITS = frozenset({"day", "week", "month", "quarter", "year", "season", "decade"})
FUTURE_WORDS = frozenset({"will", "shall", "tomorrow"})
PAST_WORDS = frozenset({"was", "were", "had", "did", "yesterday"})
PRESENT_WORDS = frozenset({"is", "are", "has", "have", "says", "expects"})


def split_sentences(text: str) -> list[str]:
    """Split on ``.``, ``!`` or ``?`` followed by whitespace or end of text."""
    parts = _SENTENCE_END.split(text.strip())
    return [p for p in (s.strip() for s in parts) if p]


def tokenize(sentence: str) -> list[str]:
    """Lowercase alphanumeric tokens keeping a ``$`` prefix and inner apostrophes."""
    return _TOKEN.findall(sentence.lower().replace("’", "'"))


def score_attitude(tokens: Sequence[str], lex: AttitudeLexicon) -> float:
    """Mean lexicon score of matched tokens; negated within 3 preceding tokens."""
    matched = []
    for i, tok in enumerate(tokens):
        score = lex.entries.get(tok)
        if score is None:
            continue
        window = tokens[max(0, i - NEGATION_WINDOW) : i]
        if any(w in lex.negators for w in window):
            score = -score
        matched.append(score)
    if not matched:
        return 0.0
    return float(min(1.0, max(-1.0, sum(matched) / len(matched))))


def count_emotions(tokens: Iterable[str], lex: EmotionLexicon) -> dict[str, int]:
    counts = dict.fromkeys(EMOTIONS, 0)
    for tok in tokens:
        for emo in lex.entries.get(tok, ()):
            counts[emo] += 1
    return counts


def tag_temporal(sentence: str) -> TemporalTag:
    """Tense heuristic: future cues win over past cues, past over present."""
    tokens = tokenize(sentence)
    pairs = list(zip(tokens, tokens[1:]))
    if (
        any(t in FUTURE_WORDS for t in tokens)
        or ("going", "to") in pairs
        or any(a == "next" and b in TIME_UNITS for a, b in pairs)
    ):
        return "future"
    if (
        any(t in PAST_WORDS for t in tokens)
        or any(a == "last" and b in TIME_UNITS for a, b in pairs)
        or any(len(t) >= 4 and t.endswith("ed") for t in tokens)
    ):
        return "past"
    if any(t in PRESENT_WORDS for t in tokens):
        return "present"
    return "unknown"


@dataclass(frozen=True)
class SentenceSentiment:
    attitude: float
    emotion_counts: dict
    token_count: int
    temporal_tag: TemporalTag
    contributes: bool = True

    def emotion_vector(self) -> np.ndarray:
        return np.array([self.emotion_counts[e] for e in EMOTIONS], dtype=np.float64)


@dataclass(frozen=True)
class Lexicons:
    attitude: AttitudeLexicon
    emotion: EmotionLexicon


def analyze_document(doc: Document | str, lexicons: Lexicons, mode: Mode = "standard") -> list[SentenceSentiment]:
    """Score each sentence; in temporal mode past-tagged sentences are zeroed and excluded."""
    if mode not in ("standard", "temporal"):
        raise ValueError(f"unknown sentiment mode {mode!r}")
    text = doc.text if isinstance(doc, Document) else doc
    out = []
    for sentence in split_sentences(text):
        tokens = tokenize(sentence)
        if not tokens:
            continue
        tag = tag_temporal(sentence)
        if mode == "temporal" and tag == "past":
            out.append(SentenceSentiment(0.0, dict.fromkeys(EMOTIONS, 0), len(tokens), tag, False))
            continue
        out.append(
            SentenceSentiment(
                score_attitude(tokens, lexicons.attitude),
                count_emotions(tokens, lexicons.emotion),
                len(tokens),
                tag,
            )
        )
    return out


@dataclass(frozen=True, eq=False)
class DailySignal:
    date: dt.date
    attitude: float
    emotions: np.ndarray
    doc_count: int

    def __eq__(self, other) -> bool:
        if not isinstance(other, DailySignal):
            return NotImplemented
        return (
            self.date == other.date
            and self.attitude == other.attitude
            and np.array_equal(self.emotions, other.emotions)
            and self.doc_count == other.doc_count
        )

    def emotion(self, name: str) -> float:
        return float(self.emotions[EMOTIONS.index(name)])

    @classmethod
    def zero(cls, date: dt.date) -> "DailySignal":
        return cls(date, 0.0, np.zeros(len(EMOTIONS)), 0)


def aggregate_daily(
    analyzed: Iterable[tuple[dt.date, Sequence[SentenceSentiment]]],
    calendar: Sequence[dt.date],
) -> list[DailySignal]:
    """Reduce per-document sentence scores onto a calendar.

    ``analyzed`` yields ``(document date, sentence scores)`` per document.
    Days without contributing sentences get zero attitude and emotions.
    """
    calendar = [_as_date(d) for d in calendar]
    if any(b <= a for a, b in zip(calendar, calendar[1:])):
        raise ValueError("calendar must be strictly increasing")
    wanted = set(calendar)
    attitudes: dict = defaultdict(list)
    emo_sum: dict = defaultdict(lambda: np.zeros(len(EMOTIONS)))
    tok_sum: dict = defaultdict(int)
    docs: dict = defaultdict(int)
    for day, sentences in analyzed:
        day = _as_date(day)
        if day not in wanted:
            continue
        docs[day] += 1
        for s in sentences:
            if not s.contributes:
                continue
            attitudes[day].append(s.attitude)
            emo_sum[day] = emo_sum[day] + s.emotion_vector()
            tok_sum[day] += s.token_count
    out = []
    for day in calendar:
        if not attitudes.get(day):
            out.append(DailySignal(day, 0.0, np.zeros(len(EMOTIONS)), docs.get(day, 0)))
            continue
        # sorted summation keeps the result independent of corpus order
        att = float(np.mean(sorted(attitudes[day])))
        emotions = np.clip(emo_sum[day] / tok_sum[day], 0.0, 1.0)
        out.append(DailySignal(day, min(1.0, max(-1.0, att)), emotions, docs[day]))
    return out


def extract_daily(
    docs: Sequence[Document],
    lexicons: Lexicons,
    calendar: Sequence[dt.date] | None = None,
    mode: Mode = "standard",
) -> list[DailySignal]:
    """Analyze a corpus and aggregate it per day.

    Without a calendar every day from the first to the last document is used.
    """
    if calendar is None:
        if not docs:
            return []
        first = min(d.date for d in docs)
        last = max(d.date for d in docs)
        calendar = [first + dt.timedelta(days=i) for i in range((last - first).days + 1)]
    analyzed = ((d.date, analyze_document(d, lexicons, mode)) for d in docs)
    return aggregate_daily(analyzed, calendar)


def _as_date(d) -> dt.date:
    if isinstance(d, np.datetime64):
        return d.astype("datetime64[D]").item()
    if isinstance(d, dt.datetime):
        return d.date()
    return d


def signals_to_csv(signals: Sequence[DailySignal], path) -> None:
    Path(path).write_text(signals_to_csv_text(signals), encoding="utf-8")


def signals_to_csv_text(signals: Sequence[DailySignal]) -> str:
    lines = [",".join(SIGNAL_COLUMNS)]
    for s in signals:
        cells = [s.date.isoformat(), repr(float(s.attitude))]
        cells += [repr(float(v)) for v in s.emotions]
        cells.append(str(s.doc_count))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def load_signals(path) -> list[DailySignal]:
    from .errors import MalformedNumber, MissingColumn, MissingInput

    p = Path(path)
    if not p.is_file():
        raise MissingInput(f"signal file not found: {p}")
    lines = p.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise MissingColumn("signal file is empty")
    header = [h.strip() for h in lines[0].split(",")]
    missing = [c for c in SIGNAL_COLUMNS if c not in header]
    if missing:
        raise MissingColumn(f"signal file lacks columns {missing}")
    idx = {c: header.index(c) for c in SIGNAL_COLUMNS}
    out = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split(",")
        try:
            out.append(
                DailySignal(
                    dt.date.fromisoformat(cells[idx["date"]]),
                    float(cells[idx["attitude"]]),
                    np.array([float(cells[idx[e]]) for e in EMOTIONS]),
                    int(cells[idx["doc_count"]]),
                )
            )
        except (ValueError, IndexError):
            raise MalformedNumber(lineno, f"line {lineno}: malformed signal row") from None
    out.sort(key=lambda s: s.date)
    return out


def signal_matrix(signals: Sequence[DailySignal]) -> tuple[np.ndarray, np.ndarray]:
    """Dates and an (n, 9) array of attitude followed by the eight emotions."""
    dates = np.array([s.date for s in signals], dtype="datetime64[D]")
    values = np.array([[s.attitude, *s.emotions] for s in signals], dtype=np.float64).reshape(-1, 1 + len(EMOTIONS))
    return dates, values
