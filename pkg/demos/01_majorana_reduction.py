# %% [markdown]
# Spin-1 three-level dynamics from a two-level propagator
#
# A case1 pulse drives |1>, |2>, |3> with equal pump and Stokes couplings and
# opposite detunings.  That Hamiltonian is the spin-1 image of a two-level one,
# so the 3x3 propagator follows from the 2x2 Cayley-Klein pair (a, b).

# %%
import numpy as np

from pulseforge import (
    ErrorModel,
    cayley_klein_of,
    lift,
    make_case1,
    populations_from_ck,
    propagate_numeric,
)

pulse = make_case1("allen_eberly")
err = ErrorModel.rabi(0.15)

U2 = propagate_numeric(pulse, err)  # reduced 2x2
U3 = propagate_numeric(pulse, err, reduced=False)  # full 3x3
ck = cayley_klein_of(U2)
print("a =", np.round(ck.a, 6), " b =", np.round(ck.b, 6))

# %%
# The lifted matrix and the directly integrated one agree entry by entry.
print("max |lift(a, b) - U3| =", np.abs(lift(ck) - U3).max())

# Populations from |1>: P1 = |a|^4, P2 = 2|a|^2|b|^2, P3 = |b|^4
print("from (a, b):", np.round(populations_from_ck(ck), 8))
print("from U3:    ", np.round(np.abs(U3[:, 0]) ** 2, 8))

# %%
# Every case1 family, a handful of Rabi errors.
for kind in ("pi", "chirped_gaussian", "allen_eberly", "sta", "resonant_gaussian"):
    e = ErrorModel.rabi(np.linspace(-0.3, 0.3, 5))
    gap = np.abs(lift(cayley_klein_of(propagate_numeric(make_case1(kind), e)))
                 - propagate_numeric(make_case1(kind), e, reduced=False)).max()
    print(f"{kind:>18}: {gap:.1e}")
