"""
Benchmark suite: eleven unconstrained test functions with their intervals,
known optima and a registry keyed both by index (f1..f11) and by name.

Every formula works along the last axis, so a (k, d) batch evaluates in one
call; a single vector returns a float.
"""

from enum import Enum
from typing import Callable, Dict, List, Sequence, Union

import numpy as np

from src.core import SearchSpace, as_vector
from src.exceptions import DimensionError, UnknownFunctionError


class DimensionConstraint(str, Enum):
    ANY = "any"
    EXACTLY_TWO = "exactly-2"


def _indices(x: np.ndarray) -> np.ndarray:
    return np.arange(1, x.shape[-1] + 1, dtype=float)


def sphere(x: np.ndarray) -> np.ndarray:
    return np.sum(x ** 2, axis=-1)


def ackley(x: np.ndarray) -> np.ndarray:
    # a = d, c = 2*pi
    d = x.shape[-1]
    return (
        -20.0 * np.exp(-0.2 * np.sqrt(np.sum(x ** 2, axis=-1) / d))
        - np.exp(np.sum(np.cos(2.0 * np.pi * x), axis=-1) / d)
        + 20.0
        + np.e
    )


def qing(x: np.ndarray) -> np.ndarray:
    return np.sum((x ** 2 - _indices(x)) ** 2, axis=-1)


def dejong3(x: np.ndarray) -> np.ndarray:
    return np.sum(np.abs(x), axis=-1)


def dejong4(x: np.ndarray) -> np.ndarray:
    return np.sum(_indices(x) * x ** 4, axis=-1)


def rosenbrock(x: np.ndarray) -> np.ndarray:
    head, tail = x[..., :-1], x[..., 1:]
    return np.sum(100.0 * (tail - head ** 2) ** 2 + (head - 1.0) ** 2, axis=-1)


def schwefel(x: np.ndarray) -> np.ndarray:
    return np.sum(x ** 2, axis=-1) ** np.pi


def booth(x: np.ndarray) -> np.ndarray:
    x1, x2 = x[..., 0], x[..., 1]
    return (x1 + 2.0 * x2 - 7.0) ** 2 + (2.0 * x1 + x2 - 5.0) ** 2


def matyas(x: np.ndarray) -> np.ndarray:
    x1, x2 = x[..., 0], x[..., 1]
    return 0.26 * (x1 ** 2 + x2 ** 2) - 0.48 * x1 * x2


def easom(x: np.ndarray) -> np.ndarray:
    x1, x2 = x[..., 0], x[..., 1]
    return -np.cos(x1) * np.cos(x2) * np.exp(-((x1 - np.pi) ** 2) - (x2 - np.pi) ** 2)


def bohachevsky(x: np.ndarray) -> np.ndarray:
    x1, x2 = x[..., 0], x[..., 1]
    return (
        x1 ** 2
        + 2.0 * x2 ** 2
        - 0.3 * np.cos(3.0 * np.pi * x1)
        - 0.4 * np.cos(4.0 * np.pi * x2)
        + 0.7
    )


class BenchmarkFunction:
    """A registered test function; callable on a vector or a batch"""

    vectorized = True

    def __init__(
        self,
        key: str,
        name: str,
        title: str,
        formula: Callable[[np.ndarray], np.ndarray],
        interval: Sequence[float],
        known_optimum: float,
        optimizer_point: Callable[[int], np.ndarray],
        dimension_constraint: DimensionConstraint = DimensionConstraint.ANY,
        min_dimension: int = 1,
    ):
        self.key = key
        self.name = name
        self.title = title
        self.formula = formula
        self.low, self.high = float(interval[0]), float(interval[1])
        self.known_optimum = known_optimum
        self._optimizer_point = optimizer_point
        self.dimension_constraint = dimension_constraint
        self.min_dimension = 2 if dimension_constraint == DimensionConstraint.EXACTLY_TWO else min_dimension

    def check_dimension(self, dim: int) -> None:
        """Raise DimensionError unless `dim` is allowed"""
        if self.dimension_constraint == DimensionConstraint.EXACTLY_TWO and dim != 2:
            raise DimensionError(f"{self.title} is defined for exactly 2 dimensions, got {dim}")
        if dim < self.min_dimension:
            raise DimensionError(
                f"{self.title} needs at least {self.min_dimension} dimensions, got {dim}"
            )

    def space(self, dim: int) -> SearchSpace:
        """The tabulated interval in every dimension"""
        self.check_dimension(dim)
        return SearchSpace.cube(self.low, self.high, dim)

    def optimizer(self, dim: int) -> np.ndarray:
        """A point attaining the known optimum"""
        self.check_dimension(dim)
        return np.asarray(self._optimizer_point(dim), dtype=float)

    def __call__(self, x) -> Union[float, np.ndarray]:
        x = np.asarray(x, dtype=float)
        self.check_dimension(x.shape[-1])
        value = self.formula(x)
        return float(value) if x.ndim == 1 else value

    def __repr__(self) -> str:
        return f"BenchmarkFunction({self.key}, {self.name})"


_FUNCTIONS = [
    BenchmarkFunction("f1", "sphere", "Sphere", sphere, (-5.12, 5.12), 0.0,
                      lambda d: np.zeros(d)),
    BenchmarkFunction("f2", "ackley", "Ackley", ackley, (-32.0, 32.0), 0.0,
                      lambda d: np.zeros(d)),
    BenchmarkFunction("f3", "qing", "Qing", qing, (-500.0, 500.0), 0.0,
                      lambda d: np.sqrt(np.arange(1, d + 1, dtype=float))),
    BenchmarkFunction("f4", "dejong3", "3rd De Jong", dejong3, (-2.048, 2.048), 0.0,
                      lambda d: np.zeros(d)),
    BenchmarkFunction("f5", "dejong4", "4th De Jong", dejong4, (-1.28, 1.28), 0.0,
                      lambda d: np.zeros(d)),
    BenchmarkFunction("f6", "rosenbrock", "Rosenbrock", rosenbrock, (-100.0, 100.0), 0.0,
                      lambda d: np.ones(d), min_dimension=2),
    BenchmarkFunction("f7", "schwefel", "Schwefel", schwefel, (-100.0, 100.0), 0.0,
                      lambda d: np.zeros(d)),
    BenchmarkFunction("f8", "booth", "Booth", booth, (-5.0, 5.0), 0.0,
                      lambda d: np.array([1.0, 3.0]), DimensionConstraint.EXACTLY_TWO),
    BenchmarkFunction("f9", "matyas", "Matyas", matyas, (-10.0, 10.0), 0.0,
                      lambda d: np.zeros(2), DimensionConstraint.EXACTLY_TWO),
    BenchmarkFunction("f10", "easom", "Easom", easom, (-100.0, 100.0), -1.0,
                      lambda d: np.array([np.pi, np.pi]), DimensionConstraint.EXACTLY_TWO),
    BenchmarkFunction("f11", "bohachevsky", "Bohachevsky", bohachevsky, (-100.0, 100.0), 0.0,
                      lambda d: np.zeros(2), DimensionConstraint.EXACTLY_TWO),
]

_LOOKUP: Dict[str, BenchmarkFunction] = {}
for _function in _FUNCTIONS:
    _LOOKUP[_function.key] = _function
    _LOOKUP[_function.name] = _function


def registry() -> List[BenchmarkFunction]:
    """All eleven functions in f1..f11 order"""
    return list(_FUNCTIONS)


def function_names() -> List[str]:
    """Lowercase names accepted by `--function`"""
    return [function.name for function in _FUNCTIONS]


def get_function(name: str) -> BenchmarkFunction:
    """Look up by key (f1..f11) or lowercase name"""
    try:
        return _LOOKUP[str(name).strip().lower()]
    except KeyError:
        raise UnknownFunctionError(
            f"Unknown benchmark function '{name}' (known: {', '.join(function_names())})"
        ) from None


def evaluate(name: str, x) -> float:
    """Value of the named function at a single finite point"""
    return float(get_function(name)(as_vector(x)))
