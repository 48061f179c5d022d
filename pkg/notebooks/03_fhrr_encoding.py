"""
Fractional power encoding
=========================

A real feature vector becomes a 10,000-element unit-phasor hypervector.
Similarity between two encodings depends only on the feature difference.
"""

import numpy as np

from hyperdoa import encode, expected_similarity, new_basis, similarity

basis = new_basis(feature_dim=4, d=10_000, seed=0)
rng = np.random.default_rng(0)
f = rng.standard_normal(4)

h = encode(basis, f)
print("all unit modulus:", np.allclose(np.abs(h), 1.0))
print("self similarity:", similarity(h, h))

# the zero vector maps to all ones
print("encode(0) == 1:", np.allclose(encode(basis, np.zeros(4)), 1.0))

# move one coordinate and watch similarity fall off along the sinc kernel
for eps in (0.0, 0.25, 0.5, 1.0, 2.0, 4.0):
    g = f.copy()
    g[0] += eps
    measured = similarity(h, encode(basis, g))
    print(f"eps={eps:4.2f}  measured={measured:+.3f}  kernel={expected_similarity([eps], basis.bandwidth):+.3f}")

# shift invariance holds exactly for a fixed basis
c = rng.standard_normal(4)
print(similarity(encode(basis, f + c), encode(basis, c)), similarity(encode(basis, f), encode(basis, np.zeros(4))))
