"""
A tokenizer in a minute
=======================

Train a very small 1D tokenizer (4 tokens x 6 bits) on the toy corpus for a
few hundred steps, then compare the two decoders. At this size the numbers
are modest; the desk run (demos/desk_pipeline.py) is where the real ones live.

    python3 demos/tiny_tokenizer.py
"""
import time

import numpy as np

from semtok import metrics, quantizer, toydata
from semtok import tokenizer as tk
from semtok.teacher import accuracy, train_teacher

rng = np.random.default_rng(0)

# 1,024 procedurally drawn 16x16 images, 8 shape classes, hash-based val split.
images, labels = toydata.render_corpus(toydata.ToySpec())
tr, va = toydata.split_indices(len(images))
print("corpus:", images.shape, "train", len(tr), "val", len(va))

# The frozen teacher supplies semantic features for the alignment losses.
teacher = train_teacher(images[tr], labels[tr], images[va], labels[va], epochs=5, seed=0)
print("teacher val accuracy:", accuracy(teacher, images[va], labels[va]))

cfg = tk.TokenizerConfig(resolution=16, patch=2, tokens=4, bits=6, enc_width=16, enc_heads=2,
                         enc_depth=1, dec_width=32, dec_heads=2, dec_depth=2, mlp_ratio=2.0,
                         time_dim=16, seed=0)
model = tk.TokenizerModel(cfg)
state = tk.make_state(model, lr=1e-3, weight_decay=0.0, ema_rate=0.99)

# Stage I: flow matching decoder + entropy + semantic alignment.
t0 = time.time()
for step in range(300):
    batch = images[tr][rng.integers(0, len(tr), 16)]
    losses = tk.stage1_step(state, batch, teacher, rng)
    if step % 50 == 0:
        print(f"stage I step {step:3d}  diff {losses.diff.item():.3f}  quant {losses.quant.item():+.3f}")
print(f"stage I: {time.time() - t0:.0f} s")

val = images[va][:32]
diff = tk.reconstruct(model, val, "diffusion", steps=10)
print("diffusion decode PSNR:", np.mean([metrics.psnr(a, b) for a, b in zip(val, diff)]))

# Stage II: freeze the flow decoder, train the one-shot refiner on pixels.
model.stage = 2
state = tk.make_state(model, lr=1e-3, weight_decay=0.0, ema_rate=0.99)
for step in range(300):
    batch = images[tr][rng.integers(0, len(tr), 16)]
    tk.stage2_step(state, batch, teacher, tk.StageIIConfig(use_disc=False))
ref = tk.reconstruct(model, val, "refine")
print("refiner PSNR         :", np.mean([metrics.psnr(a, b) for a, b in zip(val, ref)]))

codes = tk.encode_codes(model, images[va])
util, ent, ham = quantizer.codebook_stats(codes.ravel(), cfg.bits)
print(f"codebook: {util:.0%} of {2 ** cfg.bits} codes used, {ent:.2f} bits entropy")
