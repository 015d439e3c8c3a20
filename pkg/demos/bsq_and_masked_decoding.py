"""
Binary spherical codes and masked parallel decoding
===================================================

Everything here is inference-side arithmetic: no training, runs in seconds.

    python3 demos/bsq_and_masked_decoding.py
"""
import numpy as np

from semtok import argen, quantizer
from semtok.diffcore import Tensor

rng = np.random.default_rng(0)

# A token is a d-dim vector. BSQ normalises it onto the unit sphere and snaps
# every coordinate to +-1/sqrt(d): the sign pattern *is* the codebook index,
# so a 2^d codebook never has to be stored.
d = 4
z = Tensor(np.array([[0.3, -0.2, 0.5, -0.1]]))
code = quantizer.quantize(z, quantizer.BsqConfig(d))
print("corner :", code.hard.data)          # [[ 0.5 -0.5  0.5 -0.5]]
print("bits   :", code.bits)               # least significant bit first
print("index  :", code.index)              # 1 + 4 = 5

# Scaling the input never changes the code (the sphere forgets the radius).
print("same code at 1000x:", quantizer.quantize(z * 1000.0, quantizer.BsqConfig(d)).index)

# The entropy objective: confident per-token bits (low H per row) that are
# diverse across the batch (high H of the mean) push the loss towards -d ln 2.
confident_and_diverse = Tensor(np.array([[0.999] * d, [0.001] * d]))
undecided = Tensor(np.full((2, d), 0.5))
print("entropy loss, diverse :", quantizer.entropy_loss(confident_and_diverse).item(), ">= -d ln2 =", -d * np.log(2))
print("entropy loss, coin flips:", quantizer.entropy_loss(undecided).item())

# Codebook usage of random codes: utilisation, entropy (bits), mean Hamming distance.
idx = rng.integers(0, 2 ** 10, 500)
print("random 10-bit codes:", quantizer.codebook_stats(idx, 10))

# Masked decoding reveals K slots over N steps on a cosine schedule.
# Each step reveals at least one token, so N can never exceed K.
for K, N in ((16, 4), (16, 16), (256, 8)):
    s = argen.cosine_schedule(K, N)
    print(f"K={K:3d} N={N:2d} reveal per step: {s.reveal}")

# With a perfectly confident predictor the sampler must hand back the target,
# whatever the order, nucleus size or number of steps.
K = 16
target = rng.integers(0, 2 ** d, (2, K))
oracle = argen.oracle_predictor(target, d)
for order in ("random", "confidence"):
    trace = argen.generate(oracle, [0, 1], K=K, d=d, null_class=2, steps=5, order=order,
                           top_p=0.75, rng=rng, trace=True)
    print(order, "recovers target:", np.array_equal(trace.index, target),
          "| slots written per step:", [int(w[0].sum()) for w in trace.written])

# Guidance ramps linearly with the fraction already revealed.
print("cfg scale at 0%, 50%, 100% revealed:", [argen.cfg_scale(r, 6.0) for r in (0.0, 0.5, 1.0)])
