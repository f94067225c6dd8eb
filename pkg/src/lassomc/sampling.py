"""Seeded input sampling and dataset centering.

All randomness flows through counter-based Philox generators keyed by an
explicit 64-bit seed, so every draw is a pure function of
(distribution, n, seed) and distinct keys give non-overlapping streams.
Normal variates use numpy's ziggurat method; this choice is fixed and the
determinism guarantee binds to it.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateInputError, ParameterError

NORMAL = "normal"
UNIFORM = "uniform"


@dataclass(frozen=True)
class InputDistribution:
    """Input distribution: diagonal multivariate normal or i.i.d. uniform.

    For ``kind="normal"``, `mean` has length `dim` and `scale` holds the
    per-dimension standard deviations (zero allowed: degenerate point mass).
    For ``kind="uniform"``, `scale` is the pair ``(low, high)`` shared by all
    dimensions and `mean` is unused. Full covariance matrices are out of
    scope; every benchmark uses a diagonal.
    """

    kind: str
    dim: int
    mean: np.ndarray = None
    scale: object = None

    def __post_init__(self):
        if self.dim < 1:
            raise ParameterError(f"dim must be >= 1, got {self.dim}")
        if self.kind == NORMAL:
            mean = np.atleast_1d(np.asarray(self.mean, dtype=float))
            scale = np.broadcast_to(
                np.asarray(self.scale, dtype=float), (self.dim,)
            ).copy()
            if mean.shape != (self.dim,):
                raise ParameterError(
                    f"mean has shape {mean.shape}, expected ({self.dim},)"
                )
            if np.any(scale < 0):
                raise ParameterError("normal scale must be nonnegative")
            object.__setattr__(self, "mean", mean)
            object.__setattr__(self, "scale", scale)
        elif self.kind == UNIFORM:
            low, high = (float(v) for v in self.scale)
            if not low < high:
                raise ParameterError(f"uniform bounds need low < high, got [{low}, {high}]")
            object.__setattr__(self, "scale", (low, high))
        else:
            raise ParameterError(f"unknown distribution kind {self.kind!r}")


def normal_distribution(mean, scale):
    """Diagonal multivariate normal with the given mean vector and per-dim std."""
    mean = np.atleast_1d(np.asarray(mean, dtype=float))
    return InputDistribution(NORMAL, mean.size, mean, scale)


def uniform_distribution(dim, low=0.0, high=1.0):
    """I.i.d. uniform on [low, high] in each of `dim` dimensions."""
    return InputDistribution(UNIFORM, dim, None, (low, high))


@dataclass
class SampleSet:
    """An n-by-d matrix of inputs with optional outputs and its provenance."""

    inputs: np.ndarray
    outputs: np.ndarray = None
    seed: int = 0
    distribution: InputDistribution = None

    def __post_init__(self):
        if self.outputs is not None and len(self.outputs) != len(self.inputs):
            raise ParameterError(
                f"outputs length {len(self.outputs)} != {len(self.inputs)} input rows"
            )

    @property
    def n(self):
        return self.inputs.shape[0]

    def with_outputs(self, outputs):
        outputs = np.asarray(outputs, dtype=float)
        return replace(self, outputs=outputs)


def _generator(seed):
    if seed < 0:
        raise ParameterError(f"seed must be nonnegative, got {seed}")
    return np.random.Generator(np.random.Philox(key=seed))


def derive_seeds(seed, count):
    """Derive `count` independent child seeds from a base seed.

    Children are produced by SeedSequence spawning, so batches drawn from
    them never share raw stream state with each other or with the parent.
    """
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


def sample(dist, n, seed):
    """Draw `n` i.i.d. rows from `dist`, deterministically for a fixed seed."""
    if n < 1:
        raise ParameterError(f"sample count must be >= 1, got {n}")
    rng = _generator(seed)
    if dist.kind == NORMAL:
        z = rng.standard_normal((n, dist.dim))
        inputs = dist.mean + dist.scale * z
    else:
        low, high = dist.scale
        inputs = low + (high - low) * rng.random((n, dist.dim))
    return SampleSet(inputs=inputs, seed=seed, distribution=dist)


def center_matrix(x):
    """Subtract column means; returns (centered, means)."""
    x = np.asarray(x, dtype=float)
    means = x.mean(axis=0)
    return x - means, means


def center_columns(s):
    """Center every column of a SampleSet around zero.

    Returns the centered set and the offsets vector: the d input-column
    means, with the output mean appended as a final entry when outputs are
    present. Centering twice is a no-op (second offsets are zero up to
    round-off).
    """
    if s.n < 2:
        raise DegenerateInputError("centering needs at least 2 rows")
    inputs, in_off = center_matrix(s.inputs)
    if s.outputs is None:
        return replace(s, inputs=inputs), in_off
    outputs, out_off = center_matrix(s.outputs)
    return replace(s, inputs=inputs, outputs=outputs), np.append(in_off, out_off)
