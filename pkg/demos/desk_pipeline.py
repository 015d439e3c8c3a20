"""Desk-scale end-to-end run: corpus, teacher, tokenizer stages I/II, AR, evaluation, sweeps.

Every step is skipped when its artifact already exists, so the script can be
re-launched after an interruption (training loops resume from their last
partial checkpoint). Results land in ``<out_dir>/desk_summary.json``.

    python3 demos/desk_pipeline.py [--config demos/desk.json]

On one CPU core the full lengths (20k + 10k + 20k steps) take about 6-7 hours.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import time
from pathlib import Path

import numpy as np

from semtok import pipeline, toydata
from semtok.config import parse_config

ABLATION_STEP = int(os.environ.get("DESK_ABLATION_STEP", 5000))

log = logging.getLogger("desk")


def _summary_path(cfg):
    return Path(cfg.out_dir) / "desk_summary.json"


def _update(cfg, **items):
    path = _summary_path(cfg)
    data = json.loads(path.read_text()) if path.exists() else {}
    data.update(items)
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    log.info("summary: %s", ", ".join(items))
    return data


def _done(cfg, key):
    path = _summary_path(cfg)
    return path.exists() and key in json.loads(path.read_text())


def _last_losses(path: Path) -> dict:
    lines = path.read_text().splitlines()
    return json.loads(lines[-1]) if lines else {}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default=str(Path(__file__).with_name("desk.json")))
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(message)s")
    cfg = parse_config(args.config)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.time()

    # 1. corpus and teacher
    if not (Path(cfg.data_dir) / toydata.MANIFEST).exists():
        pipeline.gen_data(cfg)
    if not (out / pipeline.TEACHER).exists():
        pipeline.train_teacher(cfg)
    teacher = pipeline.load_teacher(cfg)
    if not _done(cfg, "teacher_checksum_before"):
        data = pipeline.load_data(cfg)
        from semtok.teacher import accuracy
        _update(cfg, teacher_checksum_before=teacher.checksum(),
                teacher_val_accuracy=accuracy(teacher, data["val_images"], data["val_labels"]))

    # 2. tokenizer stage I (with a snapshot for the semantic ablation)
    if not (out / pipeline.tokenizer_file(1)).exists():
        pipeline.train_tokenizer(cfg, 1, snapshots=(ABLATION_STEP,))
    # 3. semantic ablation arm: same schedule and seed, lambda_s = 0, stopped early
    nosem = cfg.replace(lambda_s=0.0)
    if not (out / pipeline.tokenizer_file(1, "nosem")).exists():
        pipeline.train_tokenizer(nosem, 1, tag="nosem", stop_at=ABLATION_STEP)
    if not _done(cfg, "ablation"):
        with_sem = pipeline.load_tokenizer(cfg, 1, path=out / f"tokenizer_stage1.step{ABLATION_STEP}.stok")
        without = pipeline.load_tokenizer(cfg, 1, "nosem")
        r_with = pipeline.eval_recon(cfg, "diffusion", 1, f"step{ABLATION_STEP}", model=with_sem)
        r_without = pipeline.eval_recon(cfg, "diffusion", 1, "nosem", model=without)
        _update(cfg, ablation={"step": ABLATION_STEP, "tfd_with_sem": r_with.tfd,
                               "tfd_without_sem": r_without.tfd, "psnr_with_sem": r_with.psnr,
                               "psnr_without_sem": r_without.psnr})

    # 4. stage I evaluation
    if not _done(cfg, "stage1"):
        s1 = pipeline.load_tokenizer(cfg, 1)
        rep = pipeline.eval_recon(cfg, "diffusion", 1, model=s1)
        steps_psnr = {}
        data = pipeline.load_data(cfg)
        from semtok import metrics, tokenizer as tk
        for n in (1, 5, 25):
            rec = tk.reconstruct(s1, data["val_images"], "diffusion", steps=n, seed=cfg.sample_seed)
            steps_psnr[str(n)] = float(np.mean([metrics.psnr(a, b) for a, b in zip(rec, data["val_images"])]))
        _update(cfg, stage1={"report": json.loads(rep.to_json()), "codebook": pipeline.codebook_report(cfg, s1),
                             "final_losses": _last_losses(out / "tokenizer_stage1.losses.jsonl"),
                             "psnr_by_decode_steps": steps_psnr})

    # 5. tokenizer stage II
    if not (out / pipeline.tokenizer_file(2)).exists():
        pipeline.train_tokenizer(cfg, 2)
    if not _done(cfg, "stage2"):
        s2 = pipeline.load_tokenizer(cfg, 2)
        rep = pipeline.eval_recon(cfg, "refine", 2, model=s2)
        _update(cfg, stage2={"report": json.loads(rep.to_json()), "codebook": pipeline.codebook_report(cfg, s2),
                             "final_losses": _last_losses(out / "tokenizer_stage2.losses.jsonl")})
        pipeline.reconstruct(cfg, "refine", limit=16)

    # 6. masked AR generator
    if not (out / pipeline.AR).exists():
        pipeline.train_ar(cfg)
    if not _done(cfg, "generation"):
        rep = pipeline.eval_gen(cfg)
        _update(cfg, generation=json.loads(rep.to_json()),
                ar_final_loss=_last_losses(out / "ar.losses.jsonl"))
        for c in range(len(toydata.CLASS_NAMES)):
            pipeline.generate(cfg, c, 4)

    # 7. sampler ablation sweeps over the frozen checkpoints
    for kind in ("cfg-scale", "top-p", "steps", "order", "cfg-schedule"):
        if not (out / f"sweep_{kind}.csv").exists():
            pipeline.sweep(cfg, kind)
    if not _done(cfg, "sweeps"):
        _update(cfg, sweeps={k: pipeline.read_sweep(out / f"sweep_{k}.csv")
                             for k in ("cfg-scale", "top-p", "steps", "order", "cfg-schedule")})

    # ``prior_seconds``: compute already spent by earlier, interrupted invocations
    elapsed = time.time() - t0
    prior = json.loads(_summary_path(cfg).read_text()).get("prior_seconds", 0.0)
    _update(cfg, teacher_checksum_after=pipeline.load_teacher(cfg).checksum(),
            last_invocation_seconds=elapsed, total_seconds=prior + elapsed)


if __name__ == "__main__":
    main()
