"""Closed-form weak-reset steady states used as golden values."""

import numpy as np

S2 = np.sqrt(2)

NI_GENERIC = np.array([[3, 0, 0, -1], [0, 1, 1, 0], [0, 1, 1, 0], [-1, 0, 0, 3]]) / 8
NI_HALF_PI = np.diag([0.5, 0, 0, 0.5])

ENT_GENERIC = np.array([[5, 1, 1, 1], [1, 5, 1, 1], [1, 1, 3, -1], [1, 1, -1, 3]]) / 16

_a = (1 + 1j) / (S2 + 2)
_b = (1 - 1j) / S2 + 1 + 1j
_c = 1 - 1j + (1 + 1j) / S2
ENT_FIFTHS = np.array([
    [7 - S2, 1, _a, _a.conjugate()],
    [1, S2 + 3, _b, _c],
    [_a.conjugate(), _c, 3, -1 + 1j * S2],
    [_a, _b, -1 - 1j * S2, 3],
]) / 16
ENT_QUARTERS = np.array([[3, 1, 0, 0], [1, 3, 0, 0], [0, 0, 1, -1], [0, 0, -1, 1]]) / 8
ENT_THIRDS = ENT_FIFTHS.conj()
