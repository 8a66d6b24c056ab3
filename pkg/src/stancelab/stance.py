"""Per-user polarity scores and categorical stance assignment.

A user's polarity is the usage-weighted average of the labels of the
labeled hashtags they used; the stance trichotomy is negative/positive/zero
(or no labeled hashtags) -> disbeliever/believer/unclassified.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .corpus import Corpus

__all__ = [
    "Stance",
    "StanceRow",
    "StanceTable",
    "stance_from_polarity",
    "user_polarity",
    "classify_users",
    "group_tweet_counts",
    "read_stance_csv",
    "write_stance_csv",
]


class Stance(str, Enum):
    DISBELIEVER = "disbeliever"
    BELIEVER = "believer"
    UNCLASSIFIED = "unclassified"


def stance_from_polarity(polarity: float | None) -> Stance:
    if polarity is None or polarity == 0:
        return Stance.UNCLASSIFIED
    return Stance.DISBELIEVER if polarity < 0 else Stance.BELIEVER


@dataclass(frozen=True)
class StanceRow:
    """hashtag_count is the number of labeled usage events backing the score
    (distinct labeled hashtags under presence weighting)."""

    user_id: str
    polarity: float | None
    stance: Stance
    hashtag_count: int


@dataclass
class StanceTable:
    rows: dict[str, StanceRow]

    def __len__(self) -> int:
        return len(self.rows)

    def stance_of(self, user_id: str, default: Stance = Stance.UNCLASSIFIED) -> Stance:
        row = self.rows.get(user_id)
        return row.stance if row is not None else default

    def group(self, stance: Stance) -> set[str]:
        return {u for u, row in self.rows.items() if row.stance is stance}

    def counts(self) -> dict[Stance, int]:
        out = {s: 0 for s in Stance}
        for row in self.rows.values():
            out[row.stance] += 1
        return out


def _labeled_usage(
    corpus: Corpus,
    labels: dict[str, float],
    user_id: str,
    count_weighting: bool,
    include_retweet_hashtags: bool,
) -> list[tuple[str, int]]:
    counts = corpus.hashtag_counts(user_id, include_retweets=include_retweet_hashtags)
    usage = [(h, c if count_weighting else 1) for h, c in counts.items() if h in labels]
    usage.sort()
    return usage


def user_polarity(
    corpus: Corpus,
    labels: dict[str, float],
    user_id: str,
    *,
    count_weighting: bool = True,
    include_retweet_hashtags: bool = True,
) -> float | None:
    """Weighted average label of the labeled hashtags a user used.

    None when the user used no labeled hashtag.  Raises KeyError for users
    absent from the corpus.
    """
    usage = _labeled_usage(corpus, labels, user_id, count_weighting, include_retweet_hashtags)
    if not usage:
        return None
    score = 0.0
    total = 0.0
    for tag, weight in usage:
        score += labels[tag] * weight
        total += weight
    return score / total


def classify_users(
    corpus: Corpus,
    labels: dict[str, float],
    *,
    count_weighting: bool = True,
    include_retweet_hashtags: bool = True,
) -> StanceTable:
    """One stance row per corpus author."""
    rows: dict[str, StanceRow] = {}
    for user_id in corpus.users:
        usage = _labeled_usage(corpus, labels, user_id, count_weighting, include_retweet_hashtags)
        if usage:
            score = 0.0
            total = 0.0
            for tag, weight in usage:
                score += labels[tag] * weight
                total += weight
            polarity: float | None = score / total
            hashtag_count = sum(w for _, w in usage)
        else:
            polarity = None
            hashtag_count = 0
        rows[user_id] = StanceRow(
            user_id=user_id,
            polarity=polarity,
            stance=stance_from_polarity(polarity),
            hashtag_count=hashtag_count,
        )
    return StanceTable(rows=rows)


def group_tweet_counts(corpus: Corpus, table: StanceTable) -> dict[Stance, int]:
    """Tweet totals by author stance; authors missing from the table count as
    unclassified."""
    out = {s: 0 for s in Stance}
    for t in corpus.tweets:
        out[table.stance_of(t.user_id)] += 1
    return out


def write_stance_csv(table: StanceTable, path: str | Path) -> None:
    """Output CSV: user_id,polarity,stance,hashtag_count (polarity blank when
    undefined)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["user_id", "polarity", "stance", "hashtag_count"])
        for user_id in sorted(table.rows):
            row = table.rows[user_id]
            polarity = "" if row.polarity is None else repr(row.polarity)
            writer.writerow([user_id, polarity, row.stance.value, row.hashtag_count])


def read_stance_csv(path: str | Path) -> StanceTable:
    rows: dict[str, StanceRow] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        expected = ["user_id", "polarity", "stance", "hashtag_count"]
        if header is None or [c.strip().lower() for c in header[:4]] != expected:
            raise ValueError(f"{path}: expected header {','.join(expected)!r}")
        for row in reader:
            if not row or not "".join(row).strip():
                continue
            user_id, raw_pol, raw_stance, raw_count = row[0], row[1], row[2], row[3]
            polarity = None if raw_pol == "" else float(raw_pol)
            rows[user_id] = StanceRow(
                user_id=user_id,
                polarity=polarity,
                stance=Stance(raw_stance),
                hashtag_count=int(raw_count),
            )
    return StanceTable(rows=rows)
