# %% [markdown]
# # CHSH strings, torsion bounds and the optimizer
#
# The string E(a,b) + E(a,b') + E(a',b) - E(a',b') is maximized numerically and
# compared with the torsion-based bound 2 sqrt(1 - (a x a').(b' x b)).

# %%
from parasphere import DirectionQuadruple, ScanConfig, chsh_string, maximize_chsh, scan_inequality
from parasphere.chsh import landau_bound_s3

# %%
for angles in [(0, 90, 45, 135), (0, 90, 45, -45)]:
    q = DirectionQuadruple.coplanar(*angles)
    rep = chsh_string("S3-equatorial", q)
    print(angles, f"S={rep.string_value:+.6f} dot={q.torsion_dot():+.1f} "
                  f"bound={rep.bound:.4f} landau={landau_bound_s3(q):.4f}")

# %% [markdown]
# The maximum of |S| is 2 sqrt 2, reached where the torsion dot product is +1.
# There the bound formula gives 0, so random scans find many violations. The
# quantum bound 2 sqrt(1 + dot) is never exceeded.

# %%
best = maximize_chsh(ScanConfig("S3-equatorial", trials=100))
print("max |S| =", best.value, "dot at optimum =", best.torsion_dot)
for mode in ("S0", "S1", "S3-equatorial", "S7-equatorial"):
    res = scan_inequality(ScanConfig(mode, trials=20_000))
    print(f"{mode:14s} violations {res.violations:6d}  max|S| {res.max_abs_string:.6f}")
