# %% [markdown]
# # Clifford algebras and the normed division algebras
#
# Multivectors of Cl(n,0) are dense coefficient arrays indexed by blade bitmask.
# The even part of Cl(3,0) is the quaternions; octonions come from the seven
# Fano triples.

# %%
import numpy as np

from parasphere import Multivector, Octonion, Quaternion, pseudoscalar
from parasphere.clifford import FANO_TRIPLES, associativity_defect
from parasphere.division import (
    alternativity_defect,
    corrupted_octonion_table,
    max_unit_associator,
    norm_composition_defect,
    octonion_table,
    structure_functions,
)

# %% [markdown]
# Basis vectors anticommute and the Cl(3,0) pseudoscalar squares to -1.

# %%
e1, e2 = Multivector.blade(3, 1), Multivector.blade(3, 2)
print("e1 e2 =", e1 * e2, "  e2 e1 =", e2 * e1)
print("I^2 =", pseudoscalar(3) * pseudoscalar(3))
print("Cl(7) associativity defect:", associativity_defect(7, 100))

# %% [markdown]
# Quaternions sit in the even subalgebra with units I e_j.

# %%
q = Quaternion(0.5, (0.5, 0.5, 0.5))
print(q.to_multivector())
print("|q q*| =", (q * q.conj()).norm())

# %% [markdown]
# Octonions keep the norm under multiplication but lose associativity.
# Flipping a single product entry breaks the norm law.

# %%
print("norm defect:", norm_composition_defect(octonion_table(), 10_000))
print("corrupted-table norm defect:", norm_composition_defect(corrupted_octonion_table(), 10_000))
print("alternativity defect:", alternativity_defect())
print("largest unit associator:", max_unit_associator())
for j, k, l in FANO_TRIPLES:
    assert Octonion.unit(j) * Octonion.unit(k) == Octonion.unit(l)

# %% [markdown]
# The point-dependent structure functions f_jkl(xi) stay totally antisymmetric.

# %%
xi = np.arange(1.0, 9.0)
xi /= np.linalg.norm(xi)
f = structure_functions(xi)
print("antisymmetry error:", np.max(np.abs(f + f.transpose(1, 0, 2))))
print("f_124(xi) =", f[0, 1, 3])
