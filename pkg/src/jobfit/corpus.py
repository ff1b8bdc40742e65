"""Interaction logs, temporal splits, document-embedding tables, synthetic data.

The on-disk event log is a TSV file whose first line is a header of the form
``#n=<candidates>\tm=<jobs>`` followed by one event per line:
``kind\tcandidate\tjob\ttimestamp``. Timestamps are integer day offsets.
Further lines starting with ``#`` are treated as comments.
"""

from __future__ import annotations

import enum
import logging
import re
import struct
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.special import expit

from .errors import ConfigError, DataFormatError

logger = logging.getLogger(__name__)

EMBED_MAGIC = b"DPFEMB1\x00"
_HEADER_RE = re.compile(r"^#n=(\d+)\tm=(\d+)\s*$")

# Standard deviation of the noise added to synthetic document embeddings so
# that text carries partial (not perfect) signal about the latent vectors.
_TEXT_NOISE = 0.5


class Kind(enum.Enum):
    """Event kind. APPLY is candidate-initiated, REACHOUT job-initiated."""

    APPLY = "apply"
    REACHOUT = "reachout"
    MATCH = "match"


_KIND_BY_TOKEN = {k.value: k for k in Kind}


@dataclass(frozen=True)
class Event:
    kind: Kind
    candidate: int
    job: int
    day: int


@dataclass(frozen=True)
class EventLog:
    """Raw event stream plus the universe sizes from the log header."""

    n: int
    m: int
    events: tuple[Event, ...]


@dataclass(frozen=True)
class InteractionSplit:
    """Deduplicated pair sets for one temporal slice, after reconciliation.

    All pairs are stored as (candidate, job) regardless of who initiated;
    ``reachouts`` are job-initiated even though the candidate id comes first.
    """

    applies: frozenset[tuple[int, int]]
    reachouts: frozenset[tuple[int, int]]
    matches: frozenset[tuple[int, int]]

    def interaction_count(self) -> int:
        return len(self.applies) + len(self.reachouts) + len(self.matches)


@dataclass(frozen=True)
class SplitDataset:
    n: int
    m: int
    train: InteractionSplit
    valid: InteractionSplit
    test: InteractionSplit
    t_valid_start: int
    t_test_start: int

    @property
    def all_matches(self) -> frozenset[tuple[int, int]]:
        return self.train.matches | self.valid.matches | self.test.matches


def load_events(path: str | Path) -> EventLog:
    """Parse an event log TSV, validating ids against the header counts."""
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        header = fh.readline()
        match = _HEADER_RE.match(header)
        if match is None:
            raise DataFormatError(
                f"{path}:1: expected header '#n=<int>\\tm=<int>', got {header!r}"
            )
        n, m = int(match.group(1)), int(match.group(2))
        events = []
        for lineno, raw in enumerate(fh, start=2):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise DataFormatError(
                    f"{path}:{lineno}: expected 4 tab-separated fields, got {len(parts)}"
                )
            kind = _KIND_BY_TOKEN.get(parts[0])
            if kind is None:
                raise DataFormatError(f"{path}:{lineno}: unknown event kind {parts[0]!r}")
            try:
                cand, job, day = int(parts[1]), int(parts[2]), int(parts[3])
            except ValueError as exc:
                raise DataFormatError(f"{path}:{lineno}: non-integer field: {exc}") from exc
            if not 0 <= cand < n:
                raise DataFormatError(
                    f"{path}:{lineno}: candidate id {cand} out of range [0, {n})"
                )
            if not 0 <= job < m:
                raise DataFormatError(f"{path}:{lineno}: job id {job} out of range [0, {m})")
            if day < 0:
                raise DataFormatError(f"{path}:{lineno}: negative timestamp {day}")
            events.append(Event(kind, cand, job, day))
    return EventLog(n=n, m=m, events=tuple(events))


def write_events(
    path: str | Path,
    log: EventLog,
    comments: Sequence[str] = (),
) -> None:
    """Write an event log TSV. ``comments`` go right after the header line."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(f"#n={log.n}\tm={log.m}\n")
        for comment in comments:
            fh.write(f"# {comment}\n")
        for ev in log.events:
            fh.write(f"{ev.kind.value}\t{ev.candidate}\t{ev.job}\t{ev.day}\n")


def _reconcile_window(events: Iterable[Event]) -> InteractionSplit:
    # Within one window a Match supersedes the pair's directed events,
    # and repeated events of one kind for one pair collapse to a single entry.
    applies: set[tuple[int, int]] = set()
    reachouts: set[tuple[int, int]] = set()
    matches: set[tuple[int, int]] = set()
    for ev in events:
        pair = (ev.candidate, ev.job)
        if ev.kind is Kind.APPLY:
            applies.add(pair)
        elif ev.kind is Kind.REACHOUT:
            reachouts.add(pair)
        else:
            matches.add(pair)
    applies -= matches
    reachouts -= matches
    return InteractionSplit(frozenset(applies), frozenset(reachouts), frozenset(matches))


def temporal_split(log: EventLog, t_valid_start: int, t_test_start: int) -> SplitDataset:
    """Partition events by timestamp into train/valid/test and reconcile.

    Pairs matched in an earlier window are dropped entirely from later
    windows, so evaluation positives are always previously unseen pairs.
    """
    if not 0 < t_valid_start < t_test_start:
        raise ConfigError(
            f"need 0 < t_valid_start < t_test_start, got {t_valid_start}, {t_test_start}"
        )
    windows: tuple[list[Event], list[Event], list[Event]] = ([], [], [])
    for ev in log.events:
        if ev.day < t_valid_start:
            windows[0].append(ev)
        elif ev.day < t_test_start:
            windows[1].append(ev)
        else:
            windows[2].append(ev)

    splits = []
    matched_earlier: set[tuple[int, int]] = set()
    for window in windows:
        split = _reconcile_window(window)
        split = InteractionSplit(
            applies=split.applies - matched_earlier,
            reachouts=split.reachouts - matched_earlier,
            matches=split.matches - matched_earlier,
        )
        matched_earlier |= split.matches
        splits.append(split)

    train, valid, test = splits
    if train.interaction_count() == 0:
        raise DataFormatError("train split is empty after reconciliation")
    return SplitDataset(
        n=log.n,
        m=log.m,
        train=train,
        valid=valid,
        test=test,
        t_valid_start=t_valid_start,
        t_test_start=t_test_start,
    )


def split_to_log(dataset: SplitDataset, split: InteractionSplit, day: int) -> EventLog:
    """Render one reconciled split back into an event log (single timestamp)."""
    events = []
    for kind, pairs in (
        (Kind.APPLY, split.applies),
        (Kind.REACHOUT, split.reachouts),
        (Kind.MATCH, split.matches),
    ):
        for cand, job in sorted(pairs):
            events.append(Event(kind, cand, job, day))
    return EventLog(n=dataset.n, m=dataset.m, events=tuple(events))


class Side(enum.Enum):
    CANDIDATE = "candidate"
    JOB = "job"


@dataclass(frozen=True)
class DocTable:
    """Frozen per-user document embeddings for one side, float32 rows."""

    side: Side
    rows: np.ndarray

    @property
    def count(self) -> int:
        return self.rows.shape[0]

    @property
    def dim(self) -> int:
        return self.rows.shape[1]


def load_doc_embeddings(path: str | Path, side: Side, expected_count: int) -> DocTable:
    """Read a binary embedding table and validate it against the universe."""
    path = Path(path)
    blob = path.read_bytes()
    if len(blob) < len(EMBED_MAGIC) + 8:
        raise DataFormatError(f"{path}: truncated embedding file")
    if blob[: len(EMBED_MAGIC)] != EMBED_MAGIC:
        raise DataFormatError(f"{path}: bad magic, not an embedding table")
    count, dim = struct.unpack_from("<II", blob, len(EMBED_MAGIC))
    if count != expected_count:
        raise DataFormatError(
            f"{path}: table has {count} rows, expected {expected_count} for {side.value}s"
        )
    offset = len(EMBED_MAGIC) + 8
    expected_bytes = count * dim * 4
    payload = blob[offset:]
    if len(payload) != expected_bytes:
        raise DataFormatError(
            f"{path}: payload is {len(payload)} bytes, expected {expected_bytes}"
        )
    rows = np.frombuffer(payload, dtype="<f4").reshape(count, dim)
    if not np.all(np.isfinite(rows)):
        raise DataFormatError(f"{path}: embedding table contains non-finite values")
    return DocTable(side=side, rows=rows.astype(np.float32))


def write_doc_embeddings(path: str | Path, table: DocTable) -> None:
    path = Path(path)
    rows = np.ascontiguousarray(table.rows, dtype="<f4")
    with path.open("wb") as fh:
        fh.write(EMBED_MAGIC)
        fh.write(struct.pack("<II", rows.shape[0], rows.shape[1]))
        fh.write(rows.tobytes(order="C"))


def zero_doc_table(side: Side, count: int, dim: int) -> DocTable:
    """Fallback table for users without text. Callers should warn when used."""
    logger.warning("no document embeddings for %ss, using zero vectors", side.value)
    return DocTable(side=side, rows=np.zeros((count, dim), dtype=np.float32))


@dataclass(frozen=True)
class SyntheticSpec:
    """Knobs for the synthetic two-sided interaction generator.

    ``asymmetry`` controls how far each user's outgoing taste drifts from the
    taste others have for them: 0 makes the active and passive latent vectors
    identical, 1 makes them independent.
    """

    n: int = 1000
    m: int = 800
    d_latent: int = 16
    d_o: int = 32
    days: int = 106
    apply_rate: float = 0.08
    reachout_rate: float = 0.08
    match_threshold: float = 0.0
    asymmetry: float = 0.5
    seed: int = 7

    def validate(self) -> None:
        if self.n <= 0 or self.m <= 0:
            raise ConfigError(f"need positive universe sizes, got n={self.n}, m={self.m}")
        if self.d_latent <= 0 or self.d_o <= 0:
            raise ConfigError("latent and document dimensions must be positive")
        if self.days <= 0:
            raise ConfigError(f"days must be positive, got {self.days}")
        for name in ("apply_rate", "reachout_rate"):
            rate = getattr(self, name)
            if not 0.0 <= rate <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {rate}")
        if not 0.0 <= self.asymmetry <= 1.0:
            raise ConfigError(f"asymmetry must lie in [0, 1], got {self.asymmetry}")

    def as_dict(self) -> dict[str, object]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _correlated_latents(
    rng: np.random.Generator, count: int, dim: int, asymmetry: float
) -> tuple[np.ndarray, np.ndarray]:
    active = rng.standard_normal((count, dim))
    noise = rng.standard_normal((count, dim))
    rho = 1.0 - asymmetry
    passive = rho * active + np.sqrt(max(0.0, 1.0 - rho * rho)) * noise
    return active, passive


def generate_synthetic(spec: SyntheticSpec) -> tuple[EventLog, DocTable, DocTable]:
    """Sample an event log plus document tables from a latent two-sided model.

    Each side gets active (initiating) and passive (receiving) latent vectors.
    A candidate applies with probability apply_rate * sigmoid(intent) where
    intent is the scaled dot of their active vector with the job's passive
    one; reach-outs mirror this. A match replaces the directed events of a
    pair when both directions fired and both intents clear match_threshold.
    Outputs are a deterministic function of the knobs, seed included.
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    cand_active, cand_passive = _correlated_latents(rng, spec.n, spec.d_latent, spec.asymmetry)
    job_active, job_passive = _correlated_latents(rng, spec.m, spec.d_latent, spec.asymmetry)

    scale = 1.0 / np.sqrt(spec.d_latent)
    cand_intent = cand_active @ job_passive.T * scale          # (n, m) candidate -> job
    job_intent = (job_active @ cand_passive.T).T * scale       # (n, m) job -> candidate

    apply_fired = rng.random((spec.n, spec.m)) < spec.apply_rate * expit(cand_intent)
    reach_fired = rng.random((spec.n, spec.m)) < spec.reachout_rate * expit(job_intent)
    matched = (
        apply_fired
        & reach_fired
        & (cand_intent > spec.match_threshold)
        & (job_intent > spec.match_threshold)
    )

    events: list[Event] = []
    for kind, mask in (
        (Kind.APPLY, apply_fired & ~matched),
        (Kind.REACHOUT, reach_fired & ~matched),
        (Kind.MATCH, matched),
    ):
        cands, jobs = np.nonzero(mask)
        days = rng.integers(0, spec.days, size=cands.size)
        for c, j, d in zip(cands.tolist(), jobs.tolist(), days.tolist()):
            events.append(Event(kind, c, j, d))

    # Documents are a fixed random projection of the concatenated latents
    # plus noise, so the text signal is informative but not sufficient.
    proj_scale = 1.0 / np.sqrt(2 * spec.d_latent)
    cand_proj = rng.standard_normal((2 * spec.d_latent, spec.d_o)) * proj_scale
    job_proj = rng.standard_normal((2 * spec.d_latent, spec.d_o)) * proj_scale
    cand_rows = np.hstack([cand_active, cand_passive]) @ cand_proj
    cand_rows += _TEXT_NOISE * rng.standard_normal((spec.n, spec.d_o))
    job_rows = np.hstack([job_active, job_passive]) @ job_proj
    job_rows += _TEXT_NOISE * rng.standard_normal((spec.m, spec.d_o))

    log = EventLog(n=spec.n, m=spec.m, events=tuple(events))
    cand_table = DocTable(Side.CANDIDATE, cand_rows.astype(np.float32))
    job_table = DocTable(Side.JOB, job_rows.astype(np.float32))
    return log, cand_table, job_table
