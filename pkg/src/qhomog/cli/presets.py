"""Figure configurations: every curve of every fidelity-vs-n plot.

A curve is a partial run specification (string values in the same grammar
the command line accepts).  Each figure also carries the qualitative
property its curves are expected to show.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

ALPHA_A = "0.20"
DELTA = "1.45"
THETA = "0.40"
PHI = "0.15"

ETA_UP = "bloch:0,0,1"
RHO_PURE = "ket:1,0,2,0"  # (|0> + 2|1>)/sqrt(5)
ETA_PURE = "ket:1,0,1.4142135623730951,0"  # |0>/sqrt(3) + sqrt(2/3)|1>
ETA_DIAG = "diag:0.6"
ETA_PLUS = "ket:1,0,1,0"  # (|0> + |1>)/sqrt(2)


@dataclass(frozen=True)
class Curve:
    label: str
    params: Dict[str, str]


@dataclass(frozen=True)
class Figure:
    name: str
    curves: Tuple[Curve, ...]
    n: int
    checks: Tuple[str, ...]
    primary: str = ""
    notes: str = ""

    def curve(self, label: str) -> Curve:
        for c in self.curves:
            if c.label == label:
                return c
        raise KeyError(label)


def _axis_pair(interaction, axis, minus_alpha, n):
    v = {"x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)}[axis]
    plus = "bloch:" + ",".join(str(c) for c in v)
    minus = "bloch:" + ",".join(str(-c) for c in v)
    base = {"scheme": "S1", "interaction": interaction, "delta": DELTA, "ancilla": ETA_UP}
    if interaction == "PSTHETA":
        base.update(theta=THETA, phi=PHI)
    kind = "swap" if interaction == "PSWAP" else "theta"
    return Figure(
        name=f"fig-{axis}{kind}",
        curves=(
            Curve("plus", {**base, "alpha": ALPHA_A, "system": plus}),
            Curve("minus", {**base, "alpha": minus_alpha, "system": minus}),
        ),
        n=n,
        checks=("settles",),
        primary="plus",
    )


def _comparison(name, eta, curves, n, checks, primary):
    common = {"alpha": ALPHA_A, "delta": DELTA, "system": RHO_PURE, "ancilla": eta}
    built = []
    for label, scheme, interaction in curves:
        p = {**common, "scheme": scheme, "interaction": interaction}
        if interaction == "PSTHETA":
            p.update(theta=THETA, phi=PHI)
        built.append(Curve(label, p))
    return Figure(name=name, curves=tuple(built), n=n, checks=checks, primary=primary)


FIGURES: Tuple[Figure, ...] = (
    _axis_pair("PSWAP", "z", "0.70", 2000),
    _axis_pair("PSWAP", "x", "0.70", 2000),
    _axis_pair("PSWAP", "y", "0.70", 2000),
    _comparison(
        "fig-pswap-gen", ETA_PURE,
        [("markov", "MARKOV", "PSWAP"), ("s1", "S1", "PSWAP"), ("s2", "S2", "PSWAP")],
        2000, ("settles", "markov-first", "schemes-close"), "s1",
    ),
    _comparison(
        "fig-pswap-dia", ETA_DIAG,
        [("markov", "MARKOV", "PSWAP"), ("s1", "S1", "PSWAP"), ("s2", "S2", "PSWAP")],
        2000, ("settles", "markov-first"), "s1",
    ),
    _axis_pair("PSTHETA", "z", "0.30", 1000),
    _axis_pair("PSTHETA", "x", "0.30", 1000),
    _axis_pair("PSTHETA", "y", "0.30", 1000),
    _comparison(
        "fig-psi-1", ETA_PLUS,
        [("markov", "MARKOV", "PSWAP"), ("s1-pswap", "S1", "PSWAP"), ("s1-pstheta", "S1", "PSTHETA")],
        5000, ("pstheta-stalls",), "s1-pstheta",
    ),
    _comparison(
        "fig-psi-2", ETA_DIAG,
        [("markov", "MARKOV", "PSWAP"), ("s1-pswap", "S1", "PSWAP"), ("s1-pstheta", "S1", "PSTHETA")],
        2000, ("settles", "pstheta-beats-pswap"), "s1-pstheta",
    ),
    _comparison(
        "fig-psi-3", ETA_DIAG,
        [("s1-pstheta", "S1", "PSTHETA"), ("s2-pstheta", "S2", "PSTHETA")],
        2000, ("settles", "schemes-close"), "s1-pstheta",
    ),
)

FIGURE_BY_NAME: Dict[str, Figure] = {f.name: f for f in FIGURES}


def run_presets() -> Dict[str, Dict[str, str]]:
    """Single-curve presets: ``<figure>-<curve>`` plus ``<figure>`` for its primary curve."""
    out: Dict[str, Dict[str, str]] = {}
    for fig in FIGURES:
        for c in fig.curves:
            out[f"{fig.name}-{c.label}"] = {**c.params, "n": str(fig.n)}
        out[fig.name] = {**fig.curve(fig.primary).params, "n": str(fig.n)}
    return out


RUN_PRESETS = run_presets()


def lookup_run_preset(name: str) -> Dict[str, str]:
    try:
        return dict(RUN_PRESETS[name])
    except KeyError:
        raise KeyError(f"unknown preset {name!r}") from None


def figure_names() -> List[str]:
    return [f.name for f in FIGURES]
