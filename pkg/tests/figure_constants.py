"""Figure caption parameters, typed as plain numbers for the preset table test.

Each curve: (scheme, interaction, alpha, delta, theta, phi, system rho0, ancilla eta).
theta/phi are None where the ancilla interaction is the plain partial swap.
"""

import numpy as np

S5 = np.sqrt(5)
S3 = np.sqrt(3)


def pure(a, b):
    v = np.array([a, b], dtype=complex)
    return np.outer(v, v.conj())


def bloch(x, y, z):
    return 0.5 * np.array([[1 + z, x - 1j * y], [x + 1j * y, 1 - z]])


UP = bloch(0, 0, 1)
RHO_PURE = pure(1 / S5, 2 / S5)
ETA_PURE = pure(1 / S3, np.sqrt(2 / 3))
ETA_DIAG = np.diag([3 / 5, 2 / 5])
ETA_PLUS = 0.5 * np.ones((2, 2))

AXES = {"x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)}


def _pair(interaction, axis, minus_alpha):
    v = np.array(AXES[axis])
    tp = (0.40, 0.15) if interaction == "PSTHETA" else (None, None)
    return {
        "plus": ("S1", interaction, 0.20, 1.45, *tp, bloch(*v), UP),
        "minus": ("S1", interaction, minus_alpha, 1.45, *tp, bloch(*-v), UP),
    }


FIGURES = {
    "fig-zswap": _pair("PSWAP", "z", 0.70),
    "fig-xswap": _pair("PSWAP", "x", 0.70),
    "fig-yswap": _pair("PSWAP", "y", 0.70),
    "fig-pswap-gen": {
        "markov": ("MARKOV", "PSWAP", 0.20, 1.45, None, None, RHO_PURE, ETA_PURE),
        "s1": ("S1", "PSWAP", 0.20, 1.45, None, None, RHO_PURE, ETA_PURE),
        "s2": ("S2", "PSWAP", 0.20, 1.45, None, None, RHO_PURE, ETA_PURE),
    },
    "fig-pswap-dia": {
        "markov": ("MARKOV", "PSWAP", 0.20, 1.45, None, None, RHO_PURE, ETA_DIAG),
        "s1": ("S1", "PSWAP", 0.20, 1.45, None, None, RHO_PURE, ETA_DIAG),
        "s2": ("S2", "PSWAP", 0.20, 1.45, None, None, RHO_PURE, ETA_DIAG),
    },
    "fig-ztheta": _pair("PSTHETA", "z", 0.30),
    "fig-xtheta": _pair("PSTHETA", "x", 0.30),
    "fig-ytheta": _pair("PSTHETA", "y", 0.30),
    "fig-psi-1": {
        "markov": ("MARKOV", "PSWAP", 0.20, 1.45, None, None, RHO_PURE, ETA_PLUS),
        "s1-pswap": ("S1", "PSWAP", 0.20, 1.45, None, None, RHO_PURE, ETA_PLUS),
        "s1-pstheta": ("S1", "PSTHETA", 0.20, 1.45, 0.40, 0.15, RHO_PURE, ETA_PLUS),
    },
    "fig-psi-2": {
        "markov": ("MARKOV", "PSWAP", 0.20, 1.45, None, None, RHO_PURE, ETA_DIAG),
        "s1-pswap": ("S1", "PSWAP", 0.20, 1.45, None, None, RHO_PURE, ETA_DIAG),
        "s1-pstheta": ("S1", "PSTHETA", 0.20, 1.45, 0.40, 0.15, RHO_PURE, ETA_DIAG),
    },
    "fig-psi-3": {
        "s1-pstheta": ("S1", "PSTHETA", 0.20, 1.45, 0.40, 0.15, RHO_PURE, ETA_DIAG),
        "s2-pstheta": ("S2", "PSTHETA", 0.20, 1.45, 0.40, 0.15, RHO_PURE, ETA_DIAG),
    },
}
