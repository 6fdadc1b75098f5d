# %% [markdown]
# # Correlations against the quantum oracle
#
# The bivector model averages the product of the two local values over both
# handednesses. The sign model gives the piecewise linear correlation.

# %%
import numpy as np

from parasphere import EnsembleSpec, epr_correlation, linear_model_correlation
from parasphere.models import ghz_closed_form
from parasphere.quantum import expectation, ghz4_expectation, hardy_amplitudes, hardy_closed_form, \
    hardy_find_directions, pauli_dot, singlet_state, tensor

# %%
ens = EnsembleSpec("uniform-sphere-lambda", seed=0, samples=200_000)
a = np.array([1.0, 0.0, 0.0])
print(" angle   bivector   singlet     sign model")
for t in np.linspace(0, np.pi, 7):
    b = np.array([np.cos(t), np.sin(t), 0.0])
    qm = expectation(singlet_state(), tensor([pauli_dot(a), pauli_dot(b)]))
    lin = linear_model_correlation(a, b, ens)
    print(f"{t:6.3f} {epr_correlation(a, b).scalar_part:+.6f} {qm:+.6f} {lin.scalar_part:+.4f}+-{lin.stderr:.4f}")

# %% [markdown]
# Four-particle correlations: closed form against the 16-dimensional state.

# %%
rng = np.random.default_rng(1)
theta, phi = rng.uniform(0, np.pi, (5, 4)), rng.uniform(0, 2 * np.pi, (5, 4))
for t, p in zip(theta, phi):
    print(f"{ghz_closed_form(t, p):+.12f}  {ghz4_expectation(t, p):+.12f}")

# %% [markdown]
# Hardy directions: three amplitudes vanish, the fourth matches its closed form.

# %%
for th in (0.3, 0.9, 1.3):
    sol = hardy_find_directions(th)
    amps = hardy_amplitudes(th, sol.a, sol.a2, sol.b, sol.b2)
    print(th, [f"{abs(z):.1e}" for z in amps[:3]], f"{abs(amps[3]):.9f}", f"{hardy_closed_form(th):.9f}")
