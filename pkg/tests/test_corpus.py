"""Event log IO, temporal splitting, embedding tables, synthetic corpus."""

import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jobfit.corpus import (
    EMBED_MAGIC,
    DocTable,
    Event,
    EventLog,
    Kind,
    Side,
    SyntheticSpec,
    generate_synthetic,
    load_doc_embeddings,
    load_events,
    split_to_log,
    temporal_split,
    write_doc_embeddings,
    write_events,
)
from jobfit.errors import ConfigError, DataFormatError


def write_log(path, n, m, rows):
    lines = [f"#n={n}\tm={m}"] + rows
    path.write_text("\n".join(lines) + "\n")


class TestLoadEvents:
    def test_roundtrip(self, tmp_path):
        log = EventLog(
            n=3,
            m=2,
            events=(
                Event(Kind.APPLY, 0, 1, 0),
                Event(Kind.REACHOUT, 2, 0, 5),
                Event(Kind.MATCH, 1, 1, 9),
            ),
        )
        path = tmp_path / "events.tsv"
        write_events(path, log, comments=["tool=test"])
        assert load_events(path) == log

    def test_parses_counts_from_header(self, tmp_path):
        path = tmp_path / "e.tsv"
        write_log(path, 7, 4, ["apply\t6\t3\t0"])
        log = load_events(path)
        assert (log.n, log.m) == (7, 4)
        assert log.events[0] == Event(Kind.APPLY, 6, 3, 0)

    def test_missing_header(self, tmp_path):
        path = tmp_path / "e.tsv"
        path.write_text("apply\t0\t0\t0\n")
        with pytest.raises(DataFormatError, match="header"):
            load_events(path)

    def test_malformed_line_reports_line_number(self, tmp_path):
        path = tmp_path / "e.tsv"
        write_log(path, 2, 2, ["apply\t0\t0\t0", "apply\t1\t1"])
        with pytest.raises(DataFormatError, match=":3:"):
            load_events(path)

    def test_unknown_kind(self, tmp_path):
        path = tmp_path / "e.tsv"
        write_log(path, 2, 2, ["poke\t0\t0\t0"])
        with pytest.raises(DataFormatError, match="poke"):
            load_events(path)

    def test_out_of_range_ids(self, tmp_path):
        path = tmp_path / "e.tsv"
        write_log(path, 2, 2, ["apply\t2\t0\t0"])
        with pytest.raises(DataFormatError, match="candidate id 2"):
            load_events(path)
        write_log(path, 2, 2, ["apply\t0\t5\t0"])
        with pytest.raises(DataFormatError, match="job id 5"):
            load_events(path)

    def test_negative_timestamp(self, tmp_path):
        path = tmp_path / "e.tsv"
        write_log(path, 2, 2, ["apply\t0\t0\t-1"])
        with pytest.raises(DataFormatError, match="negative timestamp"):
            load_events(path)

    def test_comment_lines_skipped(self, tmp_path):
        path = tmp_path / "e.tsv"
        write_log(path, 2, 2, ["# provenance", "apply\t0\t0\t0", ""])
        assert len(load_events(path).events) == 1


class TestTemporalSplit:
    def events(self, rows):
        return EventLog(n=4, m=4, events=tuple(Event(*row) for row in rows))

    def test_partitions_by_day(self):
        log = self.events(
            [
                (Kind.APPLY, 0, 0, 0),
                (Kind.APPLY, 1, 1, 9),
                (Kind.MATCH, 2, 2, 10),
                (Kind.REACHOUT, 3, 3, 14),
                (Kind.MATCH, 0, 1, 15),
                (Kind.APPLY, 1, 2, 20),
            ]
        )
        ds = temporal_split(log, 10, 15)
        assert ds.train.applies == {(0, 0), (1, 1)}
        assert ds.valid.matches == {(2, 2)}
        assert ds.valid.reachouts == {(3, 3)}
        assert ds.test.matches == {(0, 1)}
        assert ds.test.applies == {(1, 2)}

    def test_match_supersedes_directed_events_in_window(self):
        log = self.events(
            [
                (Kind.APPLY, 0, 0, 1),
                (Kind.REACHOUT, 0, 0, 2),
                (Kind.MATCH, 0, 0, 3),
                (Kind.APPLY, 1, 1, 4),
                (Kind.APPLY, 1, 1, 5),
            ]
        )
        ds = temporal_split(log, 10, 11)
        assert ds.train.matches == {(0, 0)}
        assert ds.train.applies == {(1, 1)}
        assert ds.train.reachouts == frozenset()

    def test_pair_matched_earlier_dropped_from_later_windows(self):
        log = self.events(
            [
                (Kind.MATCH, 0, 0, 0),
                (Kind.APPLY, 0, 0, 10),   # re-interaction with a matched pair
                (Kind.MATCH, 0, 0, 12),   # duplicate match
                (Kind.MATCH, 1, 1, 11),
                (Kind.MATCH, 1, 1, 20),   # matched in valid, reappears in test
            ]
        )
        ds = temporal_split(log, 10, 15)
        assert ds.train.matches == {(0, 0)}
        assert ds.valid.matches == {(1, 1)}
        assert ds.valid.applies == frozenset()
        assert ds.test.matches == frozenset()

    def test_splits_are_disjoint_on_matched_pairs(self):
        rng = np.random.default_rng(3)
        events = []
        for _ in range(300):
            kind = [Kind.APPLY, Kind.REACHOUT, Kind.MATCH][rng.integers(0, 3)]
            events.append(Event(kind, int(rng.integers(0, 4)), int(rng.integers(0, 4)), int(rng.integers(0, 30))))
        ds = temporal_split(EventLog(4, 4, tuple(events)), 10, 20)
        assert not (ds.train.matches & ds.valid.matches)
        assert not (ds.train.matches & ds.test.matches)
        assert not (ds.valid.matches & ds.test.matches)
        for split in (ds.train, ds.valid, ds.test):
            assert not (split.applies & split.matches)
            assert not (split.reachouts & split.matches)

    def test_resplitting_reconciled_output_is_identity(self):
        rng = np.random.default_rng(4)
        events = []
        for _ in range(200):
            kind = [Kind.APPLY, Kind.REACHOUT, Kind.MATCH][rng.integers(0, 3)]
            events.append(Event(kind, int(rng.integers(0, 5)), int(rng.integers(0, 5)), int(rng.integers(0, 30))))
        ds = temporal_split(EventLog(5, 5, tuple(events)), 10, 20)
        merged = (
            split_to_log(ds, ds.train, 0).events
            + split_to_log(ds, ds.valid, 10).events
            + split_to_log(ds, ds.test, 20).events
        )
        again = temporal_split(EventLog(5, 5, merged), 10, 20)
        for first, second in ((ds.train, again.train), (ds.valid, again.valid), (ds.test, again.test)):
            assert first == second

    def test_bad_boundaries(self):
        log = self.events([(Kind.MATCH, 0, 0, 0)])
        with pytest.raises(ConfigError):
            temporal_split(log, 10, 10)
        with pytest.raises(ConfigError):
            temporal_split(log, 0, 10)

    def test_empty_train_split(self):
        log = self.events([(Kind.MATCH, 0, 0, 25)])
        with pytest.raises(DataFormatError, match="empty"):
            temporal_split(log, 10, 20)


class TestDocEmbeddings:
    def test_roundtrip(self, tmp_path, rng):
        rows = rng.standard_normal((5, 3)).astype(np.float32)
        path = tmp_path / "docs.emb"
        write_doc_embeddings(path, DocTable(Side.CANDIDATE, rows))
        table = load_doc_embeddings(path, Side.CANDIDATE, 5)
        assert table.rows.dtype == np.float32
        np.testing.assert_array_equal(table.rows, rows)

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "docs.emb"
        path.write_bytes(b"NOTMAGIC" + struct.pack("<II", 1, 1) + b"\x00" * 4)
        with pytest.raises(DataFormatError, match="magic"):
            load_doc_embeddings(path, Side.CANDIDATE, 1)

    def test_count_mismatch(self, tmp_path, rng):
        path = tmp_path / "docs.emb"
        write_doc_embeddings(path, DocTable(Side.JOB, rng.standard_normal((4, 2)).astype(np.float32)))
        with pytest.raises(DataFormatError, match="expected 9"):
            load_doc_embeddings(path, Side.JOB, 9)

    def test_truncated_payload(self, tmp_path, rng):
        path = tmp_path / "docs.emb"
        write_doc_embeddings(path, DocTable(Side.JOB, rng.standard_normal((4, 2)).astype(np.float32)))
        blob = path.read_bytes()
        path.write_bytes(blob[:-4])
        with pytest.raises(DataFormatError, match="payload"):
            load_doc_embeddings(path, Side.JOB, 4)

    def test_non_finite_rejected(self, tmp_path):
        rows = np.array([[np.inf, 0.0]], dtype=np.float32)
        path = tmp_path / "docs.emb"
        write_doc_embeddings(path, DocTable(Side.CANDIDATE, rows))
        with pytest.raises(DataFormatError, match="non-finite"):
            load_doc_embeddings(path, Side.CANDIDATE, 1)

    def test_layout_matches_format(self, tmp_path):
        rows = np.array([[1.5, -2.0], [0.25, 4.0]], dtype=np.float32)
        path = tmp_path / "docs.emb"
        write_doc_embeddings(path, DocTable(Side.CANDIDATE, rows))
        blob = path.read_bytes()
        assert blob[:8] == EMBED_MAGIC
        assert struct.unpack_from("<II", blob, 8) == (2, 2)
        assert np.frombuffer(blob[16:], dtype="<f4").tolist() == [1.5, -2.0, 0.25, 4.0]


class TestSyntheticGenerator:
    def test_deterministic(self):
        spec = SyntheticSpec(n=30, m=20, d_latent=4, d_o=5, days=20, seed=11)
        log1, cand1, job1 = generate_synthetic(spec)
        log2, cand2, job2 = generate_synthetic(spec)
        assert log1 == log2
        assert cand1.rows.tobytes() == cand2.rows.tobytes()
        assert job1.rows.tobytes() == job2.rows.tobytes()

    def test_seed_changes_output(self):
        base = SyntheticSpec(n=30, m=20, d_latent=4, d_o=5, days=20, seed=11)
        other = SyntheticSpec(n=30, m=20, d_latent=4, d_o=5, days=20, seed=12)
        assert generate_synthetic(base)[0] != generate_synthetic(other)[0]

    def test_shapes_and_ranges(self):
        spec = SyntheticSpec(n=25, m=15, d_latent=4, d_o=6, days=9, seed=0)
        log, cand, job = generate_synthetic(spec)
        assert (log.n, log.m) == (25, 15)
        assert cand.rows.shape == (25, 6)
        assert job.rows.shape == (15, 6)
        assert cand.rows.dtype == np.float32
        for ev in log.events:
            assert 0 <= ev.candidate < 25
            assert 0 <= ev.job < 15
            assert 0 <= ev.day < 9

    def test_degenerate_threshold_turns_double_fires_into_matches(self):
        # With the threshold at -inf, a pair that fired in both directions
        # must surface as a match, never as a pair of directed events.
        spec = SyntheticSpec(
            n=40, m=30, d_latent=4, d_o=4, days=10,
            apply_rate=0.9, reachout_rate=0.9,
            match_threshold=float("-inf"), asymmetry=0.0, seed=5,
        )
        log, _, _ = generate_synthetic(spec)
        applies = {(e.candidate, e.job) for e in log.events if e.kind is Kind.APPLY}
        reachouts = {(e.candidate, e.job) for e in log.events if e.kind is Kind.REACHOUT}
        matches = {(e.candidate, e.job) for e in log.events if e.kind is Kind.MATCH}
        assert matches
        assert not (applies & reachouts)
        assert not (applies & matches)
        assert not (reachouts & matches)

    def test_zero_asymmetry_aligns_perspectives(self):
        # The generator couples active/passive latents exactly when
        # asymmetry is 0; observable as many more matches than at 1.
        common = dict(n=80, m=60, d_latent=6, d_o=4, days=10,
                      apply_rate=0.5, reachout_rate=0.5, match_threshold=0.4, seed=2)
        aligned, _, _ = generate_synthetic(SyntheticSpec(asymmetry=0.0, **common))
        skewed, _, _ = generate_synthetic(SyntheticSpec(asymmetry=1.0, **common))
        count = lambda log: sum(1 for e in log.events if e.kind is Kind.MATCH)
        assert count(aligned) > count(skewed)

    @given(
        apply_rate=st.floats(min_value=-2, max_value=2),
        sign=st.sampled_from(["apply_rate", "reachout_rate", "asymmetry"]),
    )
    @settings(max_examples=25, deadline=None)
    def test_rejects_out_of_range_rates(self, apply_rate, sign):
        if 0.0 <= apply_rate <= 1.0:
            return
        spec = SyntheticSpec(n=4, m=4, **{sign: apply_rate})
        with pytest.raises(ConfigError):
            spec.validate()

    def test_rejects_empty_universe(self):
        with pytest.raises(ConfigError):
            SyntheticSpec(n=0, m=5).validate()
