# %% [markdown]
# # Global frames on S3 and S7
#
# Left multiplication by the imaginary units gives orthonormal tangent frames at
# every point. The connection that keeps them parallel has zero curvature and
# torsion set by the structure constants.

# %%
import numpy as np

from parasphere import curvature_check, s3_frame, s7_frame
from parasphere.parallel import torsion_equatorial, torsion_equatorial_formula

rng = np.random.default_rng(0)
x = rng.standard_normal(4)
x /= np.linalg.norm(x)
xi = rng.standard_normal(8)
xi /= np.linalg.norm(xi)
print("S3 frame defect:", s3_frame(x).orthonormality_defect(x))
print("S7 frame defect:", s7_frame(xi).orthonormality_defect(xi))

# %% [markdown]
# Finite differences of the frame give the Weitzenboeck curvature and torsion.
# The flat control uses the constant frame of R3.

# %%
for sphere in ("S3", "S7", "flat"):
    rep = curvature_check(sphere, samples=20)
    print(f"{sphere:5s} max|R| = {rep.max_abs_component:.1e}  torsion deviation = {rep.torsion.max_deviation:.1e}")

# %% [markdown]
# Half the commutator of two bivector values is the bivector of the cross product.

# %%
a, a2 = np.eye(3)[0], np.array([0.0, np.sqrt(0.5), np.sqrt(0.5)])
print(torsion_equatorial(a, a2, 1))
print(torsion_equatorial_formula(a, a2, 1))
