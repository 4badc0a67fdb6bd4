"""Open-loop Hammerstein simulation and its linear-in-parameters rewriting.

A Hammerstein system is a static nonlinearity followed by linear dynamics:

    y_{k+1} = a_1 y_k + ... + a_p y_{k+1-p}
              + b_1 f(u_k) + ... + b_q f(u_{k+1-q}) + w_{k+1},
    f(u) = d_1 g_1(u) + ... + d_s g_s(u).

Sign convention: the ``a`` coefficients multiply past outputs *directly* in
the one-step update above, so the regression identity
``y_{k+1} = theta^T phi_k + w_{k+1}`` holds with no sign flips.  Textbook
forms that move the output lags to the left-hand side carry the opposite
sign on ``a``; flip once when constructing the spec, never afterwards.

Because the products ``b_i d_j`` enter the regression as independent
unknowns (over-parametrization), the parameter vector is

    theta = [a_1..a_p, b_1 d_1..b_1 d_s, ..., b_q d_1..b_q d_s]

against the regressor

    phi_k = [y_k..y_{k+1-p}, g_1(u_k)..g_s(u_k), ..., g_1(u_{k+1-q})..g_s(u_{k+1-q})].

The rank-1 structure of the ``q x s`` coefficient matrix ``[b_i d_j]`` is
what :func:`recover_bd` exploits to split the products back into factors.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from numpy.typing import NDArray

FloatArray = NDArray[np.float64]

__all__ = [
    "Uniform",
    "Gaussian",
    "law_from_dict",
    "HammersteinSpec",
    "Dataset",
    "OverparamMatrix",
    "BdFactors",
    "SimulationDiverged",
    "simulate_hammerstein",
    "overparam_vector",
    "column_support",
    "recover_bd",
]

#: Trajectories whose output magnitude exceeds this are aborted as divergent
#: rather than allowed to pollute downstream statistics with inf/nan.
OVERFLOW_GUARD = 1e12


class SimulationDiverged(RuntimeError):
    """Raised when a simulated trajectory exceeds the overflow guard."""


@dataclass(frozen=True)
class Uniform:
    """I.i.d. uniform law on ``[lo, hi]``."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (self.lo < self.hi):
            raise ValueError(f"need lo < hi, got [{self.lo}, {self.hi}]")

    def draw(self, rng: np.random.Generator, size: int) -> FloatArray:
        return rng.uniform(self.lo, self.hi, size=size)

    @property
    def variance(self) -> float:
        return (self.hi - self.lo) ** 2 / 12.0

    def to_dict(self) -> dict:
        return {"kind": "uniform", "lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class Gaussian:
    """I.i.d. Gaussian law with the given mean and variance."""

    mean: float = 0.0
    var: float = 1.0

    def __post_init__(self) -> None:
        if self.var < 0.0:
            raise ValueError(f"variance must be >= 0, got {self.var}")

    def draw(self, rng: np.random.Generator, size: int) -> FloatArray:
        if self.var == 0.0:
            return np.full(size, self.mean, dtype=np.float64)
        return rng.normal(self.mean, np.sqrt(self.var), size=size)

    @property
    def variance(self) -> float:
        return self.var

    def to_dict(self) -> dict:
        return {"kind": "gaussian", "mean": self.mean, "var": self.var}


Law = Uniform | Gaussian


def law_from_dict(data: dict) -> Law:
    kind = data.get("kind")
    if kind == "uniform":
        return Uniform(lo=float(data["lo"]), hi=float(data["hi"]))
    if kind == "gaussian":
        return Gaussian(mean=float(data["mean"]), var=float(data["var"]))
    raise ValueError(f"unknown law kind {kind!r}")


def _seeded_rng(seed: int, stream: int) -> np.random.Generator:
    # Accepts any 64-bit value (negatives wrap); the (seed, stream) pair is
    # the documented splitting rule for independent substreams.
    return np.random.default_rng(np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, stream]))


@dataclass
class HammersteinSpec:
    """True parameters and signal laws of one Hammerstein system.

    Attributes:
        a: Output-lag coefficients ``a_1..a_p`` (direct one-step convention,
            see the module docstring).
        b: Input-channel gains ``b_1..b_q``.
        d: Basis coefficients ``d_1..d_s``.
        basis: Optional sequence of scalar-vectorized callables ``g_j``;
            ``None`` means polynomial powers ``g_j(u) = u**j``.
        input_law: Law of the i.i.d. excitation ``u_k``.
        noise_law: Law of the i.i.d. output noise ``w_k`` (independent of the
            input).

    Construction warns (but does not fail) when the linear block is unstable
    or when every ``b_j`` is zero, since both break the usual identifiability
    conditions.
    """

    a: FloatArray
    b: FloatArray
    d: FloatArray
    basis: Sequence[Callable[[FloatArray], FloatArray]] | None = None
    input_law: Law = field(default_factory=lambda: Uniform(-1.0, 1.0))
    noise_law: Law = field(default_factory=lambda: Gaussian(0.0, 1.0))

    def __post_init__(self) -> None:
        self.a = np.atleast_1d(np.asarray(self.a, dtype=np.float64))
        self.b = np.atleast_1d(np.asarray(self.b, dtype=np.float64))
        self.d = np.atleast_1d(np.asarray(self.d, dtype=np.float64))
        if self.a.size < 1 or self.b.size < 1 or self.d.size < 1:
            raise ValueError("need p, q, s >= 1")
        if self.basis is not None and len(self.basis) != self.s:
            raise ValueError(
                f"basis length {len(self.basis)} does not match d length {self.s}"
            )
        poles = np.roots(np.concatenate(([1.0], -self.a)))
        if poles.size and np.max(np.abs(poles)) >= 1.0:
            warnings.warn(
                "output recursion is unstable (a pole has magnitude >= 1); "
                "simulation may hit the overflow guard",
                stacklevel=2,
            )
        if np.all(self.b == 0.0):
            warnings.warn("all input gains b are zero; the input never reaches the output", stacklevel=2)

    @property
    def p(self) -> int:
        return int(self.a.size)

    @property
    def q(self) -> int:
        return int(self.b.size)

    @property
    def s(self) -> int:
        return int(self.d.size)

    @property
    def dim(self) -> int:
        """Regressor dimension ``p + q*s``."""
        return self.p + self.q * self.s

    def basis_matrix(self, u: FloatArray) -> FloatArray:
        """Stack ``g_j(u)`` column-wise: shape ``(len(u), s)``."""
        u = np.asarray(u, dtype=np.float64)
        if self.basis is None:
            return u[:, None] ** np.arange(1, self.s + 1)
        return np.column_stack([np.asarray(g(u), dtype=np.float64) for g in self.basis])

    def nonlinearity(self, u: FloatArray) -> FloatArray:
        """Evaluate ``f(u) = sum_j d_j g_j(u)``."""
        return self.basis_matrix(u) @ self.d

    @property
    def theta(self) -> FloatArray:
        """True over-parametrized coefficient vector."""
        return overparam_vector(self.a, self.b, self.d)

    def to_dict(self) -> dict:
        if self.basis is not None:
            raise ValueError("only the default power basis serializes to JSON")
        return {
            "kind": "hammerstein",
            "a": self.a.tolist(),
            "b": self.b.tolist(),
            "d": self.d.tolist(),
            "basis": "powers",
            "input_law": self.input_law.to_dict(),
            "noise_law": self.noise_law.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "HammersteinSpec":
        if data.get("basis", "powers") != "powers":
            raise ValueError("only the default power basis deserializes from JSON")
        return cls(
            a=np.asarray(data["a"], dtype=np.float64),
            b=np.asarray(data["b"], dtype=np.float64),
            d=np.asarray(data["d"], dtype=np.float64),
            basis=None,
            input_law=law_from_dict(data["input_law"]),
            noise_law=law_from_dict(data["noise_law"]),
        )

    def digest(self) -> str:
        """Short stable hash of the serialized spec, for dataset provenance."""
        payload = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(payload).hexdigest()[:16]


@dataclass
class Dataset:
    """Regression pairs ``(phi_k, y_{k+1})`` emitted by a simulation.

    ``ks[i]`` is the absolute time index of row ``i``; rows start at
    ``k = max(p, q)`` so every regressor is fully defined (earlier steps only
    fill the lag window).
    """

    regressors: FloatArray
    outputs: FloatArray
    ks: NDArray[np.int64]
    meta: dict

    def __post_init__(self) -> None:
        if not (len(self.regressors) == len(self.outputs) == len(self.ks)):
            raise ValueError("regressors, outputs and ks must have equal length")

    def __len__(self) -> int:
        return len(self.outputs)

    @property
    def dim(self) -> int:
        return self.regressors.shape[1]

    def to_csv(self, path: str | Path) -> None:
        """Write ``k,y_next,phi_1..phi_r`` rows (round-trip float text)."""
        path = Path(path)
        r = self.dim
        header = "k,y_next," + ",".join(f"phi_{j}" for j in range(1, r + 1))
        lines = [header]
        for i in range(len(self)):
            phi = ",".join(repr(float(v)) for v in self.regressors[i])
            lines.append(f"{int(self.ks[i])},{float(self.outputs[i])!r},{phi}")
        path.write_text("\n".join(lines) + "\n")

    @classmethod
    def from_csv(cls, path: str | Path, meta: dict | None = None) -> "Dataset":
        path = Path(path)
        lines = path.read_text().strip().splitlines()
        header = lines[0].split(",")
        if header[:2] != ["k", "y_next"]:
            raise ValueError(f"unexpected dataset header {header[:2]}")
        rows = [line.split(",") for line in lines[1:]]
        ks = np.array([int(row[0]) for row in rows], dtype=np.int64)
        outputs = np.array([float(row[1]) for row in rows], dtype=np.float64)
        regressors = np.array([[float(v) for v in row[2:]] for row in rows], dtype=np.float64)
        return cls(regressors=regressors, outputs=outputs, ks=ks, meta=meta or {})


def simulate_hammerstein(spec: HammersteinSpec, n: int, seed: int) -> Dataset:
    """Simulate ``n`` steps and emit the regression pairs.

    The input and noise sequences are i.i.d. draws from the spec's laws on
    independent substreams of ``seed``, mutually independent; all state for
    time indices <= 0 is zero.  Pairs ``(phi_k, y_{k+1})`` are emitted for
    ``k = max(p, q) .. n``.  The same ``(spec, n, seed)`` triple always
    reproduces the dataset bit for bit.
    """
    p, q, s = spec.p, spec.q, spec.s
    m = max(p, q)
    if n < m + 1:
        raise ValueError(f"need n >= max(p, q) + 1 = {m + 1}, got {n}")

    u = spec.input_law.draw(_seeded_rng(seed, 0), n)  # u[k-1] = u_k, k = 1..n
    w = spec.noise_law.draw(_seeded_rng(seed, 1), n + 1)  # w[k-1] = w_k, k = 1..n+1

    g = spec.basis_matrix(u)  # g[k-1] = [g_1(u_k)..g_s(u_k)]
    fu = g @ spec.d

    y = np.zeros(n + 2, dtype=np.float64)  # y[k] = y_k, k = 1..n+1; y[0] unused
    y[1] = w[0]
    for k in range(1, n + 1):
        acc = w[k]  # w_{k+1}
        for i in range(1, p + 1):
            if k + 1 - i >= 1:
                acc += spec.a[i - 1] * y[k + 1 - i]
        for j in range(1, q + 1):
            if k + 1 - j >= 1:
                acc += spec.b[j - 1] * fu[k - j]  # fu index k-j = u_{k+1-j} - 1
        if abs(acc) > OVERFLOW_GUARD:
            raise SimulationDiverged(
                f"|y_{k + 1}| = {abs(acc):.3e} exceeded the overflow guard "
                f"{OVERFLOW_GUARD:.0e} at step {k}; the output recursion is divergent"
            )
        y[k + 1] = acc

    ks = np.arange(m, n + 1, dtype=np.int64)
    rows = np.empty((len(ks), spec.dim), dtype=np.float64)
    for idx, k in enumerate(ks):
        lags = y[k - p + 1 : k + 1][::-1]  # [y_k, ..., y_{k+1-p}]
        blocks = [g[k - j] for j in range(1, q + 1)]  # g rows for u_k .. u_{k+1-q}
        rows[idx] = np.concatenate([lags, *blocks])
    outputs = y[ks + 1].copy()

    meta = {"seed": int(seed), "n": int(n), "spec_sha": _maybe_digest(spec)}
    return Dataset(regressors=rows, outputs=outputs, ks=ks, meta=meta)


def _maybe_digest(spec: HammersteinSpec) -> str:
    try:
        return spec.digest()
    except ValueError:
        return "custom-basis"


def overparam_vector(a: FloatArray, b: FloatArray, d: FloatArray) -> FloatArray:
    """Flatten ``(a, b, d)`` into the linear-regression coefficient vector.

    Layout ``[a_1..a_p, b_1*d_1..b_1*d_s, ..., b_q*d_1..b_q*d_s]`` in the
    direct one-step sign convention (no flips), so
    ``y_{k+1} = theta^T phi_k + w_{k+1}`` holds exactly for the simulator.
    """
    a = np.atleast_1d(np.asarray(a, dtype=np.float64))
    b = np.atleast_1d(np.asarray(b, dtype=np.float64))
    d = np.atleast_1d(np.asarray(d, dtype=np.float64))
    return np.concatenate([a, np.kron(b, d)])


@dataclass(frozen=True)
class OverparamMatrix:
    """The ``q x s`` coefficient matrix ``[b_i d_j]`` (or an estimate of it).

    Constructed from true factors it has rank at most 1, and its zero columns
    sit exactly at the zero entries of ``d``; estimates assembled from a
    sparse solve inherit exact zeros from the solver.
    """

    m: FloatArray

    def __post_init__(self) -> None:
        m = np.asarray(self.m, dtype=np.float64)
        if m.ndim != 2:
            raise ValueError(f"expected a 2-d matrix, got shape {m.shape}")
        object.__setattr__(self, "m", m)

    @classmethod
    def from_factors(cls, b: FloatArray, d: FloatArray) -> "OverparamMatrix":
        return cls(np.outer(np.asarray(b, dtype=np.float64), np.asarray(d, dtype=np.float64)))

    @classmethod
    def from_estimate(cls, theta: FloatArray, p: int, q: int, s: int) -> "OverparamMatrix":
        """Slice the product block out of a full coefficient vector."""
        theta = np.asarray(theta, dtype=np.float64)
        if theta.shape != (p + q * s,):
            raise ValueError(
                f"coefficient vector has shape {theta.shape}, expected ({p + q * s},)"
            )
        return cls(theta[p:].reshape(q, s).copy())

    @property
    def q(self) -> int:
        return self.m.shape[0]

    @property
    def s(self) -> int:
        return self.m.shape[1]


def column_support(m_est: OverparamMatrix) -> frozenset[int]:
    """1-indexed set of columns that are exactly zero.

    The complement indexes the basis functions that actually contribute.
    Exact equality is intentional: estimates come from a solver whose zeros
    are bit-exact.
    """
    zero_cols = np.flatnonzero(np.all(m_est.m == 0.0, axis=0))
    return frozenset(int(l) + 1 for l in zero_cols)


@dataclass(frozen=True)
class BdFactors:
    """Rank-1 factorization, scale split evenly and sign anchored on ``d``."""

    b: FloatArray
    d: FloatArray
    residual: float


def recover_bd(m_est: OverparamMatrix) -> BdFactors:
    """Split an estimated product matrix back into its rank-1 factors.

    The best rank-1 approximation ``sigma * u v^T`` comes from the SVD of the
    small ``q x s`` matrix; the scale is split as ``sqrt(sigma)`` to each
    factor and the sign fixed so the first non-negligible entry of the ``d``
    factor is positive.  (The factorization is inherently scale- and
    sign-ambiguous; this convention is deterministic and documented.)
    ``residual`` is the Frobenius distance between the input and the rank-1
    reconstruction.
    """
    m = m_est.m
    if np.all(m == 0.0):
        raise ValueError("cannot factor the zero matrix")
    u_mat, svals, vt_mat = np.linalg.svd(m)
    sigma = float(svals[0])
    scale = np.sqrt(sigma)
    b = u_mat[:, 0] * scale
    d = vt_mat[0] * scale
    nz = np.flatnonzero(np.abs(d) > 1e-12 * float(np.max(np.abs(d))))
    if nz.size and d[nz[0]] < 0.0:
        b = -b
        d = -d
    residual = float(np.linalg.norm(m - np.outer(b, d), "fro"))
    return BdFactors(b=b, d=d, residual=residual)
