"""Compare the full model against its three ablations on one dataset.

Variants:
  full    dual nodes per user, quadruple ranking loss, contrastive term
  no-dpg  one node per user, so both directed scores collapse into one
  no-ql   pairwise ranking against each negative separately
  no-ssl  drops the active/passive contrastive term

One seed and a short budget keep this quick; expect small gaps and some
seed-to-seed noise. The acceptance suite checks the direction of the
full-versus-ablation gaps as a 5-seed average.
"""

import time

import numpy as np

from jobfit.corpus import SyntheticSpec, generate_synthetic, temporal_split
from jobfit.model import variant_config
from jobfit.optim import TrainConfig, train

spec = SyntheticSpec(seed=202)
log, cand_docs, job_docs = generate_synthetic(spec)
dataset = temporal_split(log, t_valid_start=84, t_test_start=95)
cand = cand_docs.rows.astype(np.float64)
job = job_docs.rows.astype(np.float64)
print(
    f"n={spec.n} m={spec.m}, matches: train={len(dataset.train.matches)} "
    f"valid={len(dataset.valid.matches)} test={len(dataset.test.matches)}"
)

config = TrainConfig(
    d_e=48,
    d_t=16,
    learning_rate=0.05,
    batch_size=256,
    max_epochs=40,
    patience=40,
    tau=5.0,
    seed=202,
    eval_seed=1,
)

print("\nvariant  best_epoch  val_mrr  seconds")
for name in ("full", "no-dpg", "no-ql", "no-ssl"):
    overrides = {} if name == "no-ssl" else {"ssl_weight": 1e-3}
    if name == "no-dpg":
        overrides["self_edges"] = "off"
    variant = variant_config(name, **overrides)
    started = time.perf_counter()
    result = train(dataset, cand, job, config, variant)
    elapsed = time.perf_counter() - started
    best = result.checkpoint
    print(f"{name:7s}  {best.epoch:10d}  {best.best_metric:7.4f}  {elapsed:7.1f}")

print(
    "\nthe contrastive weight matters: at 1e-3 it nudges active and passive"
    "\nviews together; at the 0.05 default it swamps the ranking loss on a"
    "\ncorpus this small (the per-anchor contrastive gradient scales with"
    "\nweight/tau while the ranking gradient is averaged over the batch)."
)
