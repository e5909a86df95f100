"""
Model specifications for the simulated locally stationary series.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from ..config import BURN_IN

# points on [0, 1] where stability conditions are checked
_CHECK_POINTS = np.linspace(0, 1, 1001)

FORMS = ("constant", "polynomial", "cosine", "sine")

KINDS = (
    "tv_ar1",
    "tv_arch1",
    "tv_markov_switch",
    "tv_threshold_ar",
    "tv_bilinear",
    "tv_ma1",
    "tv_ar_general",
)

# coefficient names each kind needs; tv_ar_general takes a1..ap
REQUIRED = {
    "tv_ar1": ("a",),
    "tv_arch1": ("a0", "a1"),
    "tv_markov_switch": ("a0", "a1", "b"),
    "tv_threshold_ar": ("a", "b"),
    "tv_bilinear": ("b", "c"),
    "tv_ma1": ("a0", "a1"),
    "tv_ar_general": ("sigma",),
}


@dataclass(frozen=True)
class Coefficient:
    """

    A coefficient function of rescaled time u in [0, 1].

    Forms:
        constant:   value
        polynomial: sum_k coeffs[k] u^k
        cosine:     offset + amplitude cos(2 pi frequency u + phase)
        sine:       offset + amplitude sin(2 pi frequency u + phase)

    """

    form: str
    params: Dict[str, object] = field(default_factory=dict, hash=False)

    def __post_init__(self):

        if self.form not in FORMS:
            raise ValueError(f"Unknown coefficient form {self.form!r}; use one of {FORMS}.")

    def __call__(self, u):

        u = np.asarray(u, dtype=float)
        p = self.params

        if self.form == "constant":
            values = np.full(u.shape, float(p["value"]))

        elif self.form == "polynomial":
            values = np.polynomial.polynomial.polyval(u, np.asarray(p["coeffs"], dtype=float))

        else:
            wave = np.cos if self.form == "cosine" else np.sin
            values = p.get("offset", 0.0) + p["amplitude"] * wave(
                2 * np.pi * p.get("frequency", 1.0) * u + p.get("phase", 0.0)
            )

        return values

    def to_dict(self):
        return {"form": self.form, **self.params}

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        return cls(d.pop("form"), d)


def constant(value):
    return Coefficient("constant", {"value": value})


def polynomial(*coeffs):
    return Coefficient("polynomial", {"coeffs": list(coeffs)})


def cosine(amplitude, frequency=1.0, phase=0.0, offset=0.0):
    return Coefficient(
        "cosine", {"amplitude": amplitude, "frequency": frequency, "phase": phase, "offset": offset}
    )


def sine(amplitude, frequency=1.0, phase=0.0, offset=0.0):
    return Coefficient(
        "sine", {"amplitude": amplitude, "frequency": frequency, "phase": phase, "offset": offset}
    )


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """

    A locally stationary model: its kind, its coefficient functions,
    the burn-in length, and for Markov switching the 2 x 2 transition
    matrix.

    """

    kind: str
    coefficients: Dict[str, Coefficient]
    burn_in: int = BURN_IN
    transition: Optional[np.ndarray] = None
    name: str = ""

    def __post_init__(self):

        if self.kind not in KINDS:
            raise ValueError(f"Unknown model kind {self.kind!r}; use one of {KINDS}.")

        missing = [c for c in REQUIRED[self.kind] if c not in self.coefficients]

        if missing:
            raise ValueError(f"Model {self.kind} is missing coefficients {missing}.")

        if self.burn_in < 0:
            raise ValueError(f"Burn-in must be nonnegative, got {self.burn_in}.")

        if self.transition is not None:
            object.__setattr__(self, "transition", np.array(self.transition, dtype=float))

    def ar_order(self):
        # tv_ar_general: a1..ap must be consecutive
        p = 0
        while f"a{p + 1}" in self.coefficients:
            p += 1
        return p

    def ar_polynomial(self, u):
        """

        Coefficients a_1..a_p of tv_ar_general at times u, shape (len(u), p).

        """

        u = np.atleast_1d(np.asarray(u, dtype=float))
        p = self.ar_order()

        if p == 0:
            return np.zeros((len(u), 0))

        return np.stack([self.coefficients[f"a{j}"](u) for j in range(1, p + 1)], axis=-1)

    def to_dict(self):

        d = {
            "kind": self.kind,
            "name": self.name,
            "burn_in": self.burn_in,
            "coefficients": {k: c.to_dict() for k, c in self.coefficients.items()},
        }

        if self.transition is not None:
            d["transition"] = self.transition.tolist()

        return d

    @classmethod
    def from_dict(cls, d):

        return cls(
            kind=d["kind"],
            coefficients={k: Coefficient.from_dict(c) for k, c in d["coefficients"].items()},
            burn_in=int(d.get("burn_in", BURN_IN)),
            transition=d.get("transition"),
            name=d.get("name", ""),
        )


def check_stability(spec):
    """

    Raise ValueError naming the violated stability condition.

    """

    u = _CHECK_POINTS
    c = {k: f(u) for k, f in spec.coefficients.items()}

    if spec.kind == "tv_ar1":
        if np.max(np.abs(c["a"])) >= 1:
            raise ValueError("tv_ar1 needs sup |a(u)| < 1.")

    elif spec.kind == "tv_arch1":
        if np.min(c["a0"]) <= 0:
            raise ValueError("tv_arch1 needs a0(u) > 0.")
        if np.min(c["a1"]) < 0:
            raise ValueError("tv_arch1 needs a1(u) >= 0.")
        if np.max(c["a1"]) >= 1:
            raise ValueError("tv_arch1 needs a1(u) < 1.")
        # the supremum may touch 1, as for a1(u) = 0.3 sin(pi u) at u = 1/2
        if np.max(c["a0"] + c["a1"]) > 1 + 1e-12:
            raise ValueError("tv_arch1 needs sup (a0(u) + a1(u)) <= 1.")

    elif spec.kind == "tv_markov_switch":
        if np.max(np.abs(c["b"])) >= 1:
            raise ValueError("tv_markov_switch needs sup |b(u)| < 1.")
        P = spec.transition
        if P is None or P.shape != (2, 2):
            raise ValueError("tv_markov_switch needs a 2 x 2 transition matrix.")
        if np.any(P < 0) or not np.allclose(P.sum(axis=1), 1):
            raise ValueError("Transition matrix rows must be nonnegative and sum to 1.")

    elif spec.kind == "tv_threshold_ar":
        if np.max(np.abs(c["a"]) + np.abs(c["b"])) >= 1:
            raise ValueError("tv_threshold_ar needs sup (|a(u)| + |b(u)|) < 1.")

    elif spec.kind == "tv_bilinear":
        if np.max(c["b"] ** 2 + c["c"] ** 2) >= 1:
            raise ValueError("tv_bilinear needs sup (b(u)^2 + c(u)^2) < 1.")

    elif spec.kind == "tv_ar_general":
        if np.min(c["sigma"]) <= 0:
            raise ValueError("tv_ar_general needs sigma(u) > 0.")
        for a in spec.ar_polynomial(u[::10]):
            if len(a) and np.any(np.abs(np.roots(np.r_[1.0, a][::-1])) <= 1):
                raise ValueError("tv_ar_general needs a causal AR polynomial at every u.")


def preset(name, delta=0.0):
    """

    Simulation models used in the coverage and power studies.

    Args:
        name (str): one of PRESETS
        delta (float): departure from the null for the power families
                       (tvarch1_drift, tvma1)

    Returns:
        ModelSpec

    """

    if name == "tvar1":
        return ModelSpec("tv_ar1", {"a": cosine(0.3)}, name=name)

    if name == "tvarch1":
        return ModelSpec("tv_arch1", {"a0": constant(0.7), "a1": sine(0.3, frequency=0.5)}, name=name)

    if name == "markov_switch":
        return ModelSpec(
            "tv_markov_switch",
            {"a0": constant(0.0), "a1": polynomial(0.0, 0.3), "b": cosine(0.3)},
            transition=[[0.9, 0.1], [0.5, 0.5]],
            name=name,
        )

    if name == "threshold_ar":
        return ModelSpec("tv_threshold_ar", {"a": cosine(0.3), "b": sine(0.3)}, name=name)

    if name == "bilinear":
        return ModelSpec("tv_bilinear", {"b": cosine(0.3), "c": sine(0.1)}, name=name)

    if name == "tvarch1_drift":
        return ModelSpec(
            "tv_arch1", {"a0": constant(0.3), "a1": polynomial(0.2, delta)}, name=name
        )

    if name == "tvma1":
        return ModelSpec(
            "tv_ma1",
            {"a0": cosine(0.9, offset=0.7), "a1": cosine(0.9 * delta, offset=0.7 * delta)},
            name=name,
        )

    if name == "tvar_whittle":
        return ModelSpec(
            "tv_ar_general",
            {"a1": polynomial(0.3, 0.2), "sigma": polynomial(1.0, 0.3, 0.2)},
            name=name,
        )

    raise ValueError(f"Unknown preset {name!r}; use one of {PRESETS}.")


PRESETS = (
    "tvar1",
    "tvarch1",
    "markov_switch",
    "threshold_ar",
    "bilinear",
    "tvarch1_drift",
    "tvma1",
    "tvar_whittle",
)
