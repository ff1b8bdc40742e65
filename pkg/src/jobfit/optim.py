"""Losses, exact manual gradients, Adam, the training loop, and checkpoints.

The whole forward pass is linear algebra plus smooth scalar maps, so
gradients are computed in closed form: score gradients scatter into a dense
matrix over node representations, the symmetric averaged propagation operator
pulls that back to layer zero, and the layer-zero gradient splits into the id
embedding rows and (through the frozen document table) the text projection.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.special import expit, logsumexp

from .corpus import SplitDataset
from .errors import CheckpointError, ConfigError, NumericsError, SamplingError, TrainingError
from .evaluation import build_eval_instances, evaluate, partner_maps
from .graph import SELF_EDGE_MODES, DualGraph, NodeLayout
from .model import (
    ModelParams,
    PropagatedState,
    VariantConfig,
    apply_mean_powers,
    build_variant_graph,
    init_params,
    pair_scores,
    propagate,
)

CKPT_MAGIC = b"DPFCKPT1"
CKPT_VERSION = 1

PROPAGATE_MODES = ("batch", "epoch")


@dataclass(frozen=True)
class TrainConfig:
    d_e: int = 128
    d_t: int = 32
    learning_rate: float = 1e-3
    batch_size: int = 512
    max_epochs: int = 100
    patience: int = 10
    tau: float = 0.2
    seed: int = 0
    eval_seed: int = 1
    propagate_every: str = "batch"
    ssl_negatives: int = 0          # 0 keeps in-batch denominators
    eval_negatives: int = 20
    eval_k: int = 5

    def validate(self) -> None:
        if self.d_e <= 0 or self.d_t <= 0:
            raise ConfigError(f"d_e and d_t must be positive, got {self.d_e}, {self.d_t}")
        if self.learning_rate <= 0:
            raise ConfigError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.batch_size <= 0:
            raise ConfigError(f"batch_size must be positive, got {self.batch_size}")
        if self.max_epochs < 0:
            raise ConfigError(f"max_epochs must be >= 0, got {self.max_epochs}")
        if self.patience <= 0:
            raise ConfigError(f"patience must be positive, got {self.patience}")
        if self.tau <= 0:
            raise ConfigError(f"tau must be positive, got {self.tau}")
        if self.propagate_every not in PROPAGATE_MODES:
            raise ConfigError(
                f"propagate_every must be one of {PROPAGATE_MODES}, got {self.propagate_every!r}"
            )
        if self.ssl_negatives < 0:
            raise ConfigError(f"ssl_negatives must be >= 0, got {self.ssl_negatives}")
        if self.eval_negatives <= 0:
            raise ConfigError(f"eval_negatives must be positive, got {self.eval_negatives}")
        if self.eval_k <= 0:
            raise ConfigError(f"eval_k must be positive, got {self.eval_k}")


def softplus(x):
    """log(1 + exp(x)) computed without overflow."""
    return np.logaddexp(0.0, x)


def scatter_add_rows(out: np.ndarray, ids: np.ndarray, rows: np.ndarray) -> None:
    """out[ids] += rows with repeated ids accumulated, deterministic order."""
    ids = np.asarray(ids)
    if ids.size == 0:
        return
    order = np.argsort(ids, kind="stable")
    ids_sorted = ids[order]
    rows_sorted = rows[order]
    starts = np.flatnonzero(np.r_[True, ids_sorted[1:] != ids_sorted[:-1]])
    out[ids_sorted[starts]] += np.add.reduceat(rows_sorted, starts, axis=0)


def sample_quadruples(
    cands: np.ndarray,
    jobs: np.ndarray,
    by_cand: dict[int, set[int]],
    by_job: dict[int, set[int]],
    n: int,
    m: int,
    rng: np.random.Generator,
    max_tries: int = 1000,
) -> tuple[np.ndarray, np.ndarray]:
    """Uniform negative job and candidate per positive pair, by rejection.

    Exclusion sets must cover matches from every split so no sampled negative
    is a true match anywhere in the data.
    """
    neg_jobs = np.empty(len(cands), dtype=np.int64)
    neg_cands = np.empty(len(cands), dtype=np.int64)
    for idx in range(len(cands)):
        cand, job = int(cands[idx]), int(jobs[idx])
        matched_jobs = by_cand.get(cand, set())
        for _ in range(max_tries):
            draw = int(rng.integers(0, m))
            if draw not in matched_jobs:
                neg_jobs[idx] = draw
                break
        else:
            raise SamplingError(f"no eligible negative job found for candidate {cand}")
        matched_cands = by_job.get(job, set())
        for _ in range(max_tries):
            draw = int(rng.integers(0, n))
            if draw not in matched_cands:
                neg_cands[idx] = draw
                break
        else:
            raise SamplingError(f"no eligible negative candidate found for job {job}")
    return neg_jobs, neg_cands


def quadruple_loss(y_pos, y_neg_job, y_neg_cand) -> float:
    """Mean -log sigmoid(y_pos - y_neg_job/2 - y_neg_cand/2) over the batch."""
    x = np.asarray(y_pos) - 0.5 * np.asarray(y_neg_job) - 0.5 * np.asarray(y_neg_cand)
    return float(np.mean(softplus(-x)))


def pairwise_bpr_loss(y_pos, y_neg_job, y_neg_cand) -> float:
    """Average of the two one-sided pairwise ranking losses per quadruple."""
    x1 = np.asarray(y_pos) - np.asarray(y_neg_job)
    x2 = np.asarray(y_pos) - np.asarray(y_neg_cand)
    return float(np.mean(0.5 * (softplus(-x1) + softplus(-x2))))


def main_loss(y_pos, y_neg_job, y_neg_cand, quadruple: bool = True) -> float:
    if quadruple:
        return quadruple_loss(y_pos, y_neg_job, y_neg_cand)
    return pairwise_bpr_loss(y_pos, y_neg_job, y_neg_cand)


def _side_contrastive(
    z: np.ndarray,
    active_ids: np.ndarray,
    passive_ids: np.ndarray,
    tau: float,
    grad_out: np.ndarray | None = None,
    weight: float = 1.0,
) -> float:
    """One side's contrastive loss with in-batch denominators.

    For anchor i the denominator sums, over every batch member i' including
    i itself, both exp(a_i . p_i' / tau) and exp(a_i' . p_i / tau); the
    numerator is the anchor's own active/passive agreement. Log-sum-exp keeps
    everything finite. Returns the sum (not mean) over anchors.
    """
    batch = len(active_ids)
    if batch == 0:
        return 0.0
    a = z[active_ids]
    p = z[passive_ids]
    s1 = (a @ p.T) / tau
    s2 = s1.T.copy()                      # s2[i, j] = a_j . p_i / tau
    pos = np.diagonal(s1)
    logden = np.logaddexp(logsumexp(s1, axis=1), logsumexp(s2, axis=1))
    loss = float(np.sum(logden - pos))
    if grad_out is not None:
        w1 = np.exp(s1 - logden[:, None])
        w2 = np.exp(s2 - logden[:, None])
        g1 = w1
        g1[np.arange(batch), np.arange(batch)] -= 1.0
        da = (g1 @ p + w2.T @ p) / tau
        dp = (g1.T @ a + w2 @ a) / tau
        scatter_add_rows(grad_out, active_ids, weight * da)
        scatter_add_rows(grad_out, passive_ids, weight * dp)
    return loss


def _side_contrastive_sampled(
    z: np.ndarray,
    active_ids: np.ndarray,
    passive_ids: np.ndarray,
    den_active_ids: np.ndarray,
    den_passive_ids: np.ndarray,
    tau: float,
    grad_out: np.ndarray | None = None,
    weight: float = 1.0,
) -> float:
    """Contrastive loss with per-anchor sampled denominators.

    ``den_*_ids`` have shape (batch, S + 1) with the anchor itself in column
    zero, preserving the convention that the anchor appears in its own
    denominator.
    """
    batch = len(active_ids)
    if batch == 0:
        return 0.0
    a = z[active_ids]
    p = z[passive_ids]
    pg = z[den_passive_ids]               # (batch, S + 1, d)
    ag = z[den_active_ids]
    s1 = np.einsum("bd,bsd->bs", a, pg) / tau
    s2 = np.einsum("bd,bsd->bs", p, ag) / tau
    pos = np.sum(a * p, axis=1) / tau
    logden = np.logaddexp(logsumexp(s1, axis=1), logsumexp(s2, axis=1))
    loss = float(np.sum(logden - pos))
    if grad_out is not None:
        w1 = np.exp(s1 - logden[:, None])
        w2 = np.exp(s2 - logden[:, None])
        da = (np.einsum("bs,bsd->bd", w1, pg) - p) / tau
        dp = (np.einsum("bs,bsd->bd", w2, ag) - a) / tau
        dpg = w1[:, :, None] * a[:, None, :] / tau
        dag = w2[:, :, None] * p[:, None, :] / tau
        dim = z.shape[1]
        scatter_add_rows(grad_out, active_ids, weight * da)
        scatter_add_rows(grad_out, passive_ids, weight * dp)
        scatter_add_rows(grad_out, den_passive_ids.ravel(), weight * dpg.reshape(-1, dim))
        scatter_add_rows(grad_out, den_active_ids.ravel(), weight * dag.reshape(-1, dim))
    return loss


def ssl_loss(
    z: np.ndarray,
    layout: NodeLayout,
    cand_users: np.ndarray,
    job_users: np.ndarray,
    tau: float,
) -> float:
    """Dual-perspective contrastive loss, candidate side plus job side."""
    if tau <= 0:
        raise ConfigError(f"tau must be positive, got {tau}")
    cand_users = np.asarray(cand_users, dtype=np.int64)
    job_users = np.asarray(job_users, dtype=np.int64)
    loss_c = _side_contrastive(
        z, layout.cand_active(cand_users), layout.cand_passive(cand_users), tau
    )
    loss_j = _side_contrastive(
        z, layout.job_active(job_users), layout.job_passive(job_users), tau
    )
    return loss_c + loss_j


def sample_ssl_denominators(
    anchors: np.ndarray, universe: int, count: int, rng: np.random.Generator
) -> np.ndarray:
    """(batch, count + 1) user ids per anchor; column 0 is the anchor."""
    if count >= universe:
        raise SamplingError(
            f"cannot sample {count} distinct contrastive negatives from {universe} users"
        )
    out = np.empty((len(anchors), count + 1), dtype=np.int64)
    out[:, 0] = anchors
    for row, anchor in enumerate(anchors):
        draws = rng.choice(universe - 1, size=count, replace=False)
        out[row, 1:] = draws + (draws >= anchor)
    return out


@dataclass
class BatchResult:
    loss_main: float
    loss_ssl: float
    d_embeddings: np.ndarray
    d_projection: np.ndarray
    state: PropagatedState


def _losses_and_score_grads(
    z: np.ndarray,
    layout: NodeLayout,
    variant: VariantConfig,
    quads: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray],
    cand_users: np.ndarray,
    job_users: np.ndarray,
    tau: float,
    ssl_dens: tuple[np.ndarray, np.ndarray] | None,
    grad_out: np.ndarray | None,
) -> tuple[float, float]:
    cands, jobs, neg_cands, neg_jobs = quads
    _, _, y_pos = pair_scores(z, layout, cands, jobs)
    _, _, y_nj = pair_scores(z, layout, cands, neg_jobs)
    _, _, y_nc = pair_scores(z, layout, neg_cands, jobs)
    batch = len(cands)
    if batch == 0:
        raise TrainingError("empty batch of positive pairs")

    if variant.quadruple_loss:
        x = y_pos - 0.5 * y_nj - 0.5 * y_nc
        loss_main = float(np.mean(softplus(-x)))
        dx = (expit(x) - 1.0) / batch
        w_pos, w_nj, w_nc = dx, -0.5 * dx, -0.5 * dx
    else:
        x1 = y_pos - y_nj
        x2 = y_pos - y_nc
        loss_main = float(np.mean(0.5 * (softplus(-x1) + softplus(-x2))))
        dx1 = 0.5 * (expit(x1) - 1.0) / batch
        dx2 = 0.5 * (expit(x2) - 1.0) / batch
        w_pos, w_nj, w_nc = dx1 + dx2, -dx1, -dx2

    if grad_out is not None:
        for cand_idx, job_idx, w in (
            (cands, jobs, w_pos),
            (cands, neg_jobs, w_nj),
            (neg_cands, jobs, w_nc),
        ):
            ca = layout.cand_active(cand_idx)
            cp = layout.cand_passive(cand_idx)
            ja = layout.job_active(job_idx)
            jp = layout.job_passive(job_idx)
            half = 0.5 * w[:, None]
            scatter_add_rows(grad_out, ca, half * z[jp])
            scatter_add_rows(grad_out, jp, half * z[ca])
            scatter_add_rows(grad_out, ja, half * z[cp])
            scatter_add_rows(grad_out, cp, half * z[ja])

    loss_ssl = 0.0
    if variant.ssl_weight > 0:
        if ssl_dens is None:
            loss_ssl += _side_contrastive(
                z,
                layout.cand_active(cand_users),
                layout.cand_passive(cand_users),
                tau,
                grad_out,
                variant.ssl_weight,
            )
            loss_ssl += _side_contrastive(
                z,
                layout.job_active(job_users),
                layout.job_passive(job_users),
                tau,
                grad_out,
                variant.ssl_weight,
            )
        else:
            den_cands, den_jobs = ssl_dens
            loss_ssl += _side_contrastive_sampled(
                z,
                layout.cand_active(cand_users),
                layout.cand_passive(cand_users),
                layout.cand_active(den_cands),
                layout.cand_passive(den_cands),
                tau,
                grad_out,
                variant.ssl_weight,
            )
            loss_ssl += _side_contrastive_sampled(
                z,
                layout.job_active(job_users),
                layout.job_passive(job_users),
                layout.job_active(den_jobs),
                layout.job_passive(den_jobs),
                tau,
                grad_out,
                variant.ssl_weight,
            )
    return loss_main, loss_ssl


def batch_loss(
    params: ModelParams,
    graph: DualGraph,
    variant: VariantConfig,
    quads: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray],
    cand_users: np.ndarray,
    job_users: np.ndarray,
    tau: float,
    ssl_dens: tuple[np.ndarray, np.ndarray] | None = None,
) -> float:
    """Joint objective value for a fixed batch, forward pass only."""
    state = propagate(params, graph, variant)
    loss_main, loss_ssl = _losses_and_score_grads(
        state.z, params.layout, variant, quads, cand_users, job_users, tau, ssl_dens, None
    )
    return loss_main + variant.ssl_weight * loss_ssl


def batch_gradients(
    params: ModelParams,
    graph: DualGraph,
    variant: VariantConfig,
    quads: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray],
    cand_users: np.ndarray,
    job_users: np.ndarray,
    tau: float,
    ssl_dens: tuple[np.ndarray, np.ndarray] | None = None,
    state: PropagatedState | None = None,
) -> BatchResult:
    """Joint loss and exact gradients for the learnable tensors.

    Passing a precomputed ``state`` reuses stale representations (the
    once-per-epoch propagation mode); gradients are still taken through the
    propagation operator, which depends only on the graph.
    """
    if state is None:
        state = propagate(params, graph, variant)
    z = state.z
    grad_z = np.zeros_like(z)
    loss_main, loss_ssl = _losses_and_score_grads(
        z, params.layout, variant, quads, cand_users, job_users, tau, ssl_dens, grad_z
    )
    grad_z0 = apply_mean_powers(graph, variant, grad_z)
    d_embeddings = grad_z0[:, : params.d_e]
    d_projection = grad_z0[:, params.d_e :].T @ params.doc_table
    if not (np.all(np.isfinite(d_embeddings)) and np.all(np.isfinite(d_projection))):
        raise NumericsError("non-finite gradients in backward pass")
    return BatchResult(loss_main, loss_ssl, d_embeddings, d_projection, state)


@dataclass
class AdamState:
    m_embeddings: np.ndarray
    v_embeddings: np.ndarray
    m_projection: np.ndarray
    v_projection: np.ndarray
    step: int = 0

    @classmethod
    def zeros(cls, params: ModelParams) -> "AdamState":
        return cls(
            m_embeddings=np.zeros_like(params.embeddings),
            v_embeddings=np.zeros_like(params.embeddings),
            m_projection=np.zeros_like(params.projection),
            v_projection=np.zeros_like(params.projection),
        )

    def copy(self) -> "AdamState":
        return AdamState(
            self.m_embeddings.copy(),
            self.v_embeddings.copy(),
            self.m_projection.copy(),
            self.v_projection.copy(),
            self.step,
        )


def adam_step(
    params: ModelParams,
    d_embeddings: np.ndarray,
    d_projection: np.ndarray,
    state: AdamState,
    lr: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
) -> None:
    """One bias-corrected Adam update, in place."""
    state.step += 1
    t = state.step
    for value, grad, m, v in (
        (params.embeddings, d_embeddings, state.m_embeddings, state.v_embeddings),
        (params.projection, d_projection, state.m_projection, state.v_projection),
    ):
        m *= beta1
        m += (1.0 - beta1) * grad
        v *= beta2
        v += (1.0 - beta2) * np.square(grad)
        m_hat = m / (1.0 - beta1**t)
        v_hat = v / (1.0 - beta2**t)
        value -= lr * m_hat / (np.sqrt(v_hat) + eps)


@dataclass
class Checkpoint:
    n: int
    m: int
    d_e: int
    d_t: int
    d_o: int
    variant: VariantConfig
    embeddings: np.ndarray
    projection: np.ndarray
    adam: AdamState
    epoch: int
    best_metric: float

    @property
    def layout(self) -> NodeLayout:
        return NodeLayout(self.n, self.m, self.variant.dual_graph)


def checkpoint_from(
    params: ModelParams,
    adam: AdamState,
    variant: VariantConfig,
    epoch: int,
    best_metric: float,
) -> Checkpoint:
    layout = params.layout
    return Checkpoint(
        n=layout.n,
        m=layout.m,
        d_e=params.d_e,
        d_t=params.d_t,
        d_o=params.d_o,
        variant=variant,
        embeddings=params.embeddings.copy(),
        projection=params.projection.copy(),
        adam=adam.copy(),
        epoch=epoch,
        best_metric=best_metric,
    )


def params_from_checkpoint(
    ckpt: Checkpoint, cand_docs: np.ndarray, job_docs: np.ndarray
) -> ModelParams:
    from .model import node_doc_table

    if cand_docs.shape[1] != ckpt.d_o:
        raise CheckpointError(
            f"checkpoint expects document dimension {ckpt.d_o}, got {cand_docs.shape[1]}"
        )
    doc_table = node_doc_table(ckpt.layout, cand_docs, job_docs)
    return ModelParams(ckpt.layout, ckpt.embeddings.copy(), ckpt.projection.copy(), doc_table)


def save_checkpoint(ckpt: Checkpoint, path: str | Path) -> None:
    variant = ckpt.variant
    head = struct.pack(
        "<6I4B2dI",
        ckpt.n,
        ckpt.m,
        ckpt.d_e,
        ckpt.d_t,
        ckpt.d_o,
        ckpt.layout.node_count,
        int(variant.dual_graph),
        int(variant.quadruple_loss),
        SELF_EDGE_MODES.index(variant.self_edges),
        0,
        variant.ssl_weight,
        variant.omega,
        variant.layers,
    )
    tail = struct.pack("<IdQ", ckpt.epoch, ckpt.best_metric, ckpt.adam.step)
    blob = bytearray()
    blob += CKPT_MAGIC
    blob += struct.pack("<I", CKPT_VERSION)
    blob += head
    blob += tail
    for arr in (
        ckpt.embeddings,
        ckpt.projection,
        ckpt.adam.m_embeddings,
        ckpt.adam.v_embeddings,
        ckpt.adam.m_projection,
        ckpt.adam.v_projection,
    ):
        blob += np.ascontiguousarray(arr, dtype="<f8").tobytes(order="C")
    blob += struct.pack("<I", zlib.crc32(bytes(blob)) & 0xFFFFFFFF)
    Path(path).write_bytes(bytes(blob))


def load_checkpoint(path: str | Path) -> Checkpoint:
    path = Path(path)
    blob = path.read_bytes()
    if len(blob) < len(CKPT_MAGIC) + 4:
        raise CheckpointError(f"{path}: truncated checkpoint")
    if blob[: len(CKPT_MAGIC)] != CKPT_MAGIC:
        raise CheckpointError(f"{path}: bad magic, not a checkpoint file")
    stored_crc = struct.unpack_from("<I", blob, len(blob) - 4)[0]
    if zlib.crc32(blob[:-4]) & 0xFFFFFFFF != stored_crc:
        raise CheckpointError(f"{path}: checksum mismatch, checkpoint is corrupt")
    offset = len(CKPT_MAGIC)
    (version,) = struct.unpack_from("<I", blob, offset)
    offset += 4
    if version != CKPT_VERSION:
        raise CheckpointError(f"{path}: unsupported checkpoint version {version}")
    head = struct.unpack_from("<6I4B2dI", blob, offset)
    offset += struct.calcsize("<6I4B2dI")
    n, m, d_e, d_t, d_o, node_count, dual, quad, self_idx, _pad = head[:10]
    ssl_weight, omega, layers = head[10], head[11], head[12]
    epoch, best_metric, adam_steps = struct.unpack_from("<IdQ", blob, offset)
    offset += struct.calcsize("<IdQ")
    if not 0 <= self_idx < len(SELF_EDGE_MODES):
        raise CheckpointError(f"{path}: invalid self-edge mode index {self_idx}")
    variant = VariantConfig(
        dual_graph=bool(dual),
        quadruple_loss=bool(quad),
        ssl_weight=ssl_weight,
        omega=omega,
        layers=layers,
        self_edges=SELF_EDGE_MODES[self_idx],
    )
    expected_nodes = 2 * (n + m) if variant.dual_graph else n + m
    if node_count != expected_nodes:
        raise CheckpointError(
            f"{path}: node count {node_count} inconsistent with n={n}, m={m}, "
            f"dual={variant.dual_graph}"
        )

    shapes = [
        (node_count, d_e),
        (d_t, d_o),
        (node_count, d_e),
        (node_count, d_e),
        (d_t, d_o),
        (d_t, d_o),
    ]
    tensor_bytes = sum(8 * a * b for a, b in shapes)
    if len(blob) - offset - 4 != tensor_bytes:
        raise CheckpointError(f"{path}: truncated checkpoint payload")
    arrays = []
    for rows, cols in shapes:
        size = 8 * rows * cols
        arrays.append(
            np.frombuffer(blob[offset : offset + size], dtype="<f8").reshape(rows, cols).copy()
        )
        offset += size
    emb, proj, m_e, v_e, m_p, v_p = arrays
    adam = AdamState(m_e, v_e, m_p, v_p, step=int(adam_steps))
    return Checkpoint(
        n=int(n),
        m=int(m),
        d_e=int(d_e),
        d_t=int(d_t),
        d_o=int(d_o),
        variant=variant,
        embeddings=emb,
        projection=proj,
        adam=adam,
        epoch=int(epoch),
        best_metric=float(best_metric),
    )


def ensure_checkpoint_matches(
    ckpt: Checkpoint, n: int, m: int, variant: VariantConfig | None = None
) -> None:
    if (ckpt.n, ckpt.m) != (n, m):
        raise CheckpointError(
            f"checkpoint was trained on n={ckpt.n}, m={ckpt.m}; data has n={n}, m={m}"
        )
    if variant is not None and variant != ckpt.variant:
        raise CheckpointError(
            f"checkpoint variant {ckpt.variant} does not match configured variant {variant}"
        )


@dataclass(frozen=True)
class HistoryRow:
    epoch: int
    loss_main: float
    loss_ssl: float
    val_mrr_cand: float
    val_mrr_job: float


@dataclass
class TrainResult:
    checkpoint: Checkpoint
    history: list[HistoryRow] = field(default_factory=list)


def train(
    dataset: SplitDataset,
    cand_docs: np.ndarray,
    job_docs: np.ndarray,
    config: TrainConfig,
    variant: VariantConfig,
) -> TrainResult:
    """Mini-batch training with early stopping on mean validation MRR.

    The graph is built from the training split only. Every epoch shuffles the
    training matches; each mini-batch refreshes representations (or reuses
    the epoch's, per ``propagate_every``), samples one negative job and one
    negative candidate per positive, and takes one Adam step on the joint
    objective. The checkpoint with the best mean of the two directions'
    validation MRR is returned.
    """
    config.validate()
    variant.validate()
    n, m = dataset.n, dataset.m
    train_matches = np.array(sorted(dataset.train.matches), dtype=np.int64)
    if train_matches.size == 0:
        raise TrainingError("training split has no matches")
    if not dataset.valid.matches:
        raise TrainingError("validation split has no matches, early stopping is undefined")

    graph = build_variant_graph(dataset.train, n, m, variant)
    layout = graph.layout
    params = init_params(layout, config.d_e, config.d_t, cand_docs, job_docs, config.seed)
    adam = AdamState.zeros(params)
    by_cand, by_job = partner_maps(dataset.all_matches)
    val_instances = build_eval_instances(
        dataset.valid.matches, by_cand, by_job, n, m, config.eval_seed, config.eval_negatives
    )

    rng = np.random.default_rng(config.seed)
    best = checkpoint_from(params, adam, variant, epoch=0, best_metric=float("nan"))
    best_metric: float | None = None
    epochs_since_best = 0
    history: list[HistoryRow] = []

    for epoch in range(1, config.max_epochs + 1):
        order = rng.permutation(len(train_matches))
        epoch_state = (
            propagate(params, graph, variant) if config.propagate_every == "epoch" else None
        )
        main_total = 0.0
        ssl_total = 0.0
        batches = 0
        for start in range(0, len(train_matches), config.batch_size):
            pairs = train_matches[order[start : start + config.batch_size]]
            cands, jobs = pairs[:, 0], pairs[:, 1]
            neg_jobs, neg_cands = sample_quadruples(
                cands, jobs, by_cand, by_job, n, m, rng
            )
            cand_users = np.unique(cands)
            job_users = np.unique(jobs)
            ssl_dens = None
            if variant.ssl_weight > 0 and config.ssl_negatives > 0:
                ssl_dens = (
                    sample_ssl_denominators(cand_users, n, config.ssl_negatives, rng),
                    sample_ssl_denominators(job_users, m, config.ssl_negatives, rng),
                )
            result = batch_gradients(
                params,
                graph,
                variant,
                (cands, jobs, neg_cands, neg_jobs),
                cand_users,
                job_users,
                config.tau,
                ssl_dens,
                state=epoch_state,
            )
            adam_step(params, result.d_embeddings, result.d_projection, adam, config.learning_rate)
            main_total += result.loss_main
            ssl_total += result.loss_ssl
            batches += 1

        val_state = propagate(params, graph, variant)
        report = evaluate(val_state.z, layout, val_instances, k=config.eval_k)
        metric = 0.5 * (report.for_candidates.mrr + report.for_jobs.mrr)
        history.append(
            HistoryRow(
                epoch=epoch,
                loss_main=main_total / batches,
                loss_ssl=ssl_total / batches,
                val_mrr_cand=report.for_candidates.mrr,
                val_mrr_job=report.for_jobs.mrr,
            )
        )
        if best_metric is None or metric > best_metric:
            best_metric = metric
            epochs_since_best = 0
            best = checkpoint_from(params, adam, variant, epoch=epoch, best_metric=metric)
        else:
            epochs_since_best += 1
            if epochs_since_best >= config.patience:
                break

    return TrainResult(checkpoint=best, history=history)
