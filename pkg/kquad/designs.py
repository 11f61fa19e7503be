"""Design points on [0, 1] and their geometry (fill distance, separation radius)."""

import dataclasses
from kquad._compat import StrEnum

import numpy as np

from kquad.errors import DesignError


class DesignLabel(StrEnum):
    UNIFORM = "uniform"
    NONUNIFORM = "nonuniform"
    CUSTOM = "custom"


@dataclasses.dataclass(frozen=True)
class DesignSet:
    points: np.ndarray
    label: DesignLabel = DesignLabel.CUSTOM

    def __post_init__(self):
        points = np.array(self.points, dtype=np.float64).reshape(-1)
        min_size = 1 if self.label == DesignLabel.CUSTOM else 2
        if points.shape[0] < min_size:
            raise DesignError(f"A {self.label} design needs at least {min_size} points, got {points.shape[0]}.")
        if not np.all(np.isfinite(points)) or points[0] < 0 or points[-1] > 1:
            raise DesignError(f"Design points must lie in [0, 1], got [{points[0]}, {points[-1]}].")
        if np.any(np.diff(points) <= 0):
            raise DesignError("Design points must be strictly increasing.")
        points.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "label", DesignLabel(self.label))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def __len__(self) -> int:
        return self.n


def uniform_design(n: int) -> DesignSet:
    if n < 2:
        raise DesignError(f"Uniform designs need n >= 2, got {n}.")
    return DesignSet(np.arange(n) / (n - 1), DesignLabel.UNIFORM)


def nonuniform_design(n: int) -> DesignSet:
    """Odd-indexed points on the uniform grid, each followed by a partner (n - 1)^{-2} to its right."""
    if n < 3:
        # For n = 2 the only partner point is the right end point and no pair is formed.
        raise DesignError(f"Non-uniform designs need n >= 3, got {n}.")
    i = np.arange(1, n + 1)
    odd = i % 2 == 1
    points = np.where(odd, (i - 1) / (n - 1), (i - 2) / (n - 1) + 1.0 / (n - 1) ** 2)
    return DesignSet(points, DesignLabel.NONUNIFORM)


def custom_design(points) -> DesignSet:
    return DesignSet(np.asarray(points, dtype=np.float64), DesignLabel.CUSTOM)


def make_design(label: str | DesignLabel, n: int) -> DesignSet:
    label = DesignLabel(label)
    if label == DesignLabel.UNIFORM:
        return uniform_design(n)
    if label == DesignLabel.NONUNIFORM:
        return nonuniform_design(n)
    raise DesignError(f"Cannot generate a {label} design from a size alone.")


def fill_distance(design: DesignSet) -> float:
    """sup_{x in [0, 1]} min_i |x - X_i|, evaluated in closed form for sorted points."""
    points = design.points
    candidates = [points[0], 1.0 - points[-1]]
    if design.n > 1:
        candidates.append(np.max(np.diff(points)) / 2)
    return float(max(candidates))


def separation_radius(design: DesignSet) -> float:
    if design.n < 2:
        raise DesignError("The separation radius needs at least two points.")
    return float(np.min(np.diff(design.points)) / 2)


def quasi_uniformity_ratio(design: DesignSet) -> float:
    return fill_distance(design) / separation_radius(design)
