"""Seeded synthetic fixtures: price paths, causal pairs and planted-sentiment corpora.

Every generator is a pure function of its parameters and seed; randomness
comes from :class:`sentimarket.rng.SplitMix64` streams.
"""

from __future__ import annotations

import datetime as dt
from typing import Sequence

import numpy as np

from .ingest import EMOTIONS, Document, PriceSeries
from .rng import SplitMix64
from .sentiment import (
    FUTURE_WORDS,
    PAST_WORDS,
    PRESENT_WORDS,
    TIME_UNITS,
    DailySignal,
    Lexicons,
    tokenize,
)
from .timeseries import DatedSeries

START_DATE = "2011-01-03"

NEUTRAL_WORDS = (
    "the", "a", "an", "of", "in", "on", "at", "for", "with", "and", "or", "to",
    "by", "from", "as", "that", "this", "it", "its", "their", "company", "market",
    "shares", "stock", "index", "investors", "analysts", "trading", "session",
    "sector", "bank", "firm", "chief", "executive", "board", "quarterly", "report",
    "statement", "price", "prices", "bond", "yield", "currency", "dollar", "euro",
    "london", "york", "street", "europe", "asia", "data", "figures", "industry",
    "energy", "oil", "retail", "technology", "group", "unit", "sales", "deal",
    "talks", "meeting", "policy", "central", "rate", "rates", "exchange", "fund",
    "funds", "assets", "client", "clients", "product", "products", "service",
    "network", "office", "region", "country", "government", "minister", "officials",
)


def business_days(n: int, start: str = START_DATE) -> np.ndarray:
    """``n`` consecutive weekdays beginning on or after ``start``."""
    first = np.busday_offset(np.datetime64(start, "D"), 0, roll="forward")
    return np.busday_offset(first, np.arange(n), roll="forward").astype("datetime64[D]")


def _ohlc_from_close(close: np.ndarray, open_: np.ndarray, vol: float, rng: SplitMix64):
    n = len(close)
    u_hi, u_lo, u_vol = rng.uniform(n), rng.uniform(n), rng.uniform(n)
    high = np.maximum(open_, close) * (1.0 + 0.5 * vol * u_hi)
    low = np.minimum(open_, close) * (1.0 - 0.5 * min(vol, 1.0) * u_lo)
    volume = np.floor(1e6 * (1.0 + u_vol))
    return high, low, volume


def gen_random_walk(
    n: int,
    drift: float = 0.0002,
    vol: float = 0.01,
    seed: int = 0,
    start_price: float = 100.0,
    start: str = START_DATE,
) -> PriceSeries:
    """Geometric random walk ``c_t = c_{t-1} exp(drift + vol z_t)`` on business days.

    Opens sit at the previous close; highs and lows extend at most ``vol/2``
    beyond the open-close body.
    """
    rng = SplitMix64(seed, 0)
    steps = drift + vol * rng.normal(n)
    steps[0] = 0.0
    close = start_price * np.exp(np.cumsum(steps))
    open_ = np.concatenate([[start_price], close[:-1]])
    high, low, volume = _ohlc_from_close(close, open_, vol, rng.spawn(1))
    return PriceSeries(business_days(n, start), open_, high, low, close, close.copy(), volume)


def gen_momentum_market(
    n: int,
    seed: int = 0,
    drift: float = 0.004,
    vol: float = 0.006,
    regime: tuple[int, int] = (25, 60),
    start_price: float = 100.0,
    start: str = START_DATE,
) -> PriceSeries:
    """Price path whose log-drift alternates sign in regimes of random length.

    The sign of the move over the next few days mostly follows the current
    regime, so recent momentum carries planted predictive signal.
    """
    rng = SplitMix64(seed, 0)
    lengths = rng.spawn(2)
    mu = np.empty(n)
    sign = 1.0 if rng.spawn(3).uniform() < 0.5 else -1.0
    pos = 0
    while pos < n:
        span = regime[0] + lengths.integers(regime[1] - regime[0] + 1)
        mu[pos : pos + span] = sign * drift
        sign = -sign
        pos += span
    steps = mu + vol * rng.normal(n)
    steps[0] = 0.0
    close = start_price * np.exp(np.cumsum(steps))
    open_ = np.concatenate([[start_price], close[:-1]])
    high, low, volume = _ohlc_from_close(close, open_, vol, rng.spawn(1))
    return PriceSeries(business_days(n, start), open_, high, low, close, close.copy(), volume)


def gen_ar1(n: int, phi: float, seed: int = 0, sigma: float = 1.0, start: str = START_DATE) -> DatedSeries:
    """AR(1) ``v_t = phi v_{t-1} + sigma e_t``; stationary start when ``|phi| < 1``, else zero."""
    e = sigma * SplitMix64(seed, 0).normal(n)
    v = np.empty(n)
    v[0] = e[0] / np.sqrt(1.0 - phi * phi) if abs(phi) < 1 else 0.0
    for t in range(1, n):
        v[t] = phi * v[t - 1] + e[t]
    return DatedSeries(business_days(n, start), v, "ar1")


def gen_causal_pair(
    n: int,
    a_self: float,
    b_cross: float,
    noise: float = 1.0,
    seed: int = 0,
    x_phi: float = 0.5,
    burn_in: int = 100,
    start: str = START_DATE,
) -> tuple[DatedSeries, DatedSeries]:
    """``x`` autonomous AR(1); ``y_t = a_self y_{t-1} + b_cross x_{t-1} + noise e_t``.

    ``x`` Granger-causes ``y`` exactly when ``b_cross != 0``.
    """
    total = n + burn_in
    rng = SplitMix64(seed, 0)
    ex = rng.normal(total)
    ey = rng.spawn(1).normal(total)
    x = np.zeros(total)
    y = np.zeros(total)
    for t in range(1, total):
        x[t] = x_phi * x[t - 1] + ex[t]
        y[t] = a_self * y[t - 1] + b_cross * x[t - 1] + noise * ey[t]
    dates = business_days(n, start)
    return DatedSeries(dates, x[burn_in:], "x"), DatedSeries(dates, y[burn_in:], "y")


def random_signals(calendar: Sequence[dt.date], seed: int = 0, attitude: float = 0.8, emotion: float = 0.08) -> list[DailySignal]:
    """Uniform planted targets: attitude in [-attitude, attitude], each emotion in [0, emotion]."""
    rng = SplitMix64(seed, 5)
    n = len(calendar)
    att = rng.uniform(n, -attitude, attitude)
    emo = rng.uniform(n * len(EMOTIONS), 0.0, emotion).reshape(n, len(EMOTIONS))
    return [DailySignal(_date(d), float(a), e, 1) for d, a, e in zip(calendar, att, emo)]


def _date(d) -> dt.date:
    return d.astype("datetime64[D]").item() if isinstance(d, np.datetime64) else d


_CUES = FUTURE_WORDS | PAST_WORDS | PRESENT_WORDS | TIME_UNITS | {"going", "next", "last"}


def _usable(tok: str, negators: frozenset) -> bool:
    return (
        tokenize(tok) == [tok]
        and tok not in negators
        and tok not in _CUES
        and not (len(tok) >= 4 and tok.endswith("ed"))
    )


class CorpusVocabulary:
    """Token pools whose lexicon hits are unambiguous for corpus generation."""

    def __init__(self, lexicons: Lexicons):
        att, emo = lexicons.attitude, lexicons.emotion
        negators = att.negators
        self.attitude = sorted(
            (score, tok)
            for tok, score in att.entries.items()
            if tok not in emo.entries and tokenize(tok) == [tok] and tok not in negators and tok not in _CUES
        )
        self.emotion: dict[str, list[str]] = {}
        for e in EMOTIONS:
            pure = sorted(
                t for t, labels in emo.entries.items()
                if labels == frozenset({e}) and t not in att.entries and _usable(t, negators)
            )
            if not pure:
                pure = sorted(
                    t for t, labels in emo.entries.items()
                    if e in labels and t not in att.entries and _usable(t, negators)
                )
            self.emotion[e] = pure
        self.filler = [
            w for w in NEUTRAL_WORDS
            if w not in att.entries and w not in emo.entries and _usable(w, negators)
        ]
        if not self.filler:
            raise ValueError("no neutral filler tokens remain after excluding lexicon entries")


def _attitude_tokens(target: float, slots: int, vocab: CorpusVocabulary) -> list[str]:
    """Greedy choice of ``slots`` attitude tokens whose mean score tracks ``target``."""
    scores = np.array([s for s, _ in vocab.attitude])
    target = float(np.clip(target, scores.min(), scores.max()))
    chosen = []
    total = 0.0
    for k in range(1, slots + 1):
        idx = int(np.argmin(np.abs(total + scores - target * k)))
        total += scores[idx]
        chosen.append(vocab.attitude[idx][1])
    return chosen


def gen_corpus(
    calendar: Sequence,
    planted: Sequence[DailySignal],
    lexicons: Lexicons,
    seed: int = 0,
    past_dates: Sequence = (),
    docs_per_day: tuple[int, int] = (2, 4),
    sentences_per_doc: tuple[int, int] = (3, 5),
    tokens_per_sentence: int = 20,
    attitude_per_sentence: int = 4,
    ticker: str | None = None,
    tag_fraction: float = 0.5,
    source: str = "synthetic",
) -> list[Document]:
    """Documents whose extracted daily signal approximates ``planted``.

    Every sentence has ``tokens_per_sentence`` tokens: one tense cue ("will",
    or "yesterday" on ``past_dates``), ``attitude_per_sentence`` attitude-lexicon
    tokens chosen so the day's mean score tracks the planted attitude (none
    when the target is zero), emotion tokens in the planted proportions of all
    the day's tokens, and neutral fillers. Emotion targets that do not fit in
    the free slots are scaled down proportionally.
    """
    vocab = CorpusVocabulary(lexicons)
    by_date = {s.date: s for s in planted}
    past = {_date(d) for d in past_dates}
    rng = SplitMix64(seed, 7)
    docs: list[Document] = []
    for d in calendar:
        day = _date(d)
        target = by_date.get(day) or DailySignal.zero(day)
        n_docs = docs_per_day[0] + rng.integers(docs_per_day[1] - docs_per_day[0] + 1)
        per_doc = [sentences_per_doc[0] + rng.integers(sentences_per_doc[1] - sentences_per_doc[0] + 1) for _ in range(n_docs)]
        n_sent = sum(per_doc)
        total_tokens = n_sent * tokens_per_sentence

        att_slots = attitude_per_sentence if target.attitude != 0 else 0
        att_tokens = _attitude_tokens(target.attitude, n_sent * att_slots, vocab) if att_slots else []
        att_tokens = [att_tokens[i] for i in rng.permutation(len(att_tokens))]

        free = n_sent * (tokens_per_sentence - 1 - att_slots)
        counts = np.rint(np.asarray(target.emotions) * total_tokens).astype(int)
        counts = np.where([bool(vocab.emotion[e]) for e in EMOTIONS], counts, 0)
        if counts.sum() > free:
            counts = np.floor(counts * free / counts.sum()).astype(int)
        emo_tokens = []
        for e, c in zip(EMOTIONS, counts):
            pool = vocab.emotion[e]
            emo_tokens += [pool[k] for k in rng.integers(len(pool), int(c))] if c else []
        fillers = [vocab.filler[k] for k in rng.integers(len(vocab.filler), free - len(emo_tokens))] if free > len(emo_tokens) else []
        bag = emo_tokens + fillers
        bag = [bag[i] for i in rng.permutation(len(bag))]

        cue = "yesterday" if day in past else "will"
        body_len = tokens_per_sentence - 1 - att_slots
        sentences = []
        for s in range(n_sent):
            words = [cue] + att_tokens[s * att_slots : (s + 1) * att_slots] + bag[s * body_len : (s + 1) * body_len]
            words = [words[i] for i in rng.permutation(len(words))]
            sentences.append(" ".join(words).capitalize() + ".")
        pos = 0
        for k in range(n_docs):
            text = " ".join(sentences[pos : pos + per_doc[k]])
            pos += per_doc[k]
            tags = frozenset()
            if ticker is not None and rng.uniform() < tag_fraction:
                tags = frozenset({"$" + ticker})
            docs.append(Document(day, text, tags, source))
    return docs
