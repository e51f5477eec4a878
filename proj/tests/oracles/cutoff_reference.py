#!/usr/bin/env python3
"""Reference constants for the cubic smoothstep cutoff f.

f(R) = 1 on [0,r], f(R) = (1-t)^2(1+2t) with t = (R-r)/r on [r,2r], 0 beyond.
Freezes sup|f'|*r and sup|(f^2)'|*r for test_elastic_energy.cpp and the
shear detbounds constant.
"""
import numpy as np

t = np.linspace(0.0, 1.0, 20000001)
f = (1 - t) ** 2 * (1 + 2 * t)
ft = -6 * t * (1 - t)            # d f / d t
g = 2 * f * ft                   # d (f^2) / d t

i = np.argmax(np.abs(ft))
j = np.argmax(np.abs(g))
print(f"sup r|f'|   = {abs(ft[i]):.17g} at t = {t[i]:.9f}")
print(f"sup r|(f2)'| = {abs(g[j]):.17g} at t = {t[j]:.9f}  (1/sqrt(10) = {1/np.sqrt(10):.9f})")

# closed form check at t* = 1/sqrt(10): |g| = 12 t (1-t)^3 (1+2t)
ts = 1 / np.sqrt(10)
print(f"closed form  = {12 * ts * (1 - ts) ** 3 * (1 + 2 * ts):.17g}")
