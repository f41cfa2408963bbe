"""Canonical charts, constant 2-forms and the basic differential operators.

The model space is R^(n(k+1)) with k fiber blocks of n variables and one
block of n leaf variables.  Fiber variable p,i (1-based) sits at index
(p-1)*n + (i-1) and is named "x{p}_{i}"; leaf variable i sits at index
k*n + (i-1) and is named "q{i}".  The vertical foliation is carried
implicitly by this index split: a function is basic when it involves no
fiber variable, and the canonical 2-forms pair each fiber block with the
leaf block.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .linalg import RationalMatrix, kernel
from .poly import Polynomial


class Chart:
    """Coordinate model for given (n, k); owns all variable indexing."""

    __slots__ = ("n", "k", "_aliases", "_names", "_index_of")

    def __init__(self, n: int, k: int, aliases: Mapping[str, str] | None = None):
        if n < 1 or k < 1:
            raise ValueError("chart needs n >= 1 and k >= 1")
        self.n = n
        self.k = k
        names = []
        for p in range(1, k + 1):
            for i in range(1, n + 1):
                names.append(f"x{p}_{i}")
        for i in range(1, n + 1):
            names.append(f"q{i}")
        self._names = tuple(names)
        index_of = {name: idx for idx, name in enumerate(names)}
        clean_aliases = {}
        for alias, target in dict(aliases or {}).items():
            if alias in index_of and index_of.get(alias) != index_of.get(target):
                raise ValueError(f"alias {alias!r} collides with a canonical name")
            if target not in index_of:
                raise ValueError(f"alias target {target!r} is not a chart variable")
            if not alias.isidentifier() or not alias.isascii():
                raise ValueError(f"alias {alias!r} is not a valid variable token")
            clean_aliases[alias] = target
        self._aliases = clean_aliases
        for alias, target in clean_aliases.items():
            index_of[alias] = index_of[target]
        self._index_of = index_of

    @property
    def dim(self) -> int:
        return self.n * (self.k + 1)

    @property
    def var_names(self) -> tuple[str, ...]:
        return self._names

    @property
    def aliases(self) -> dict[str, str]:
        return dict(self._aliases)

    def with_aliases(self, aliases: Mapping[str, str]) -> "Chart":
        merged = dict(self._aliases)
        merged.update(aliases)
        return Chart(self.n, self.k, merged)

    def fiber_index(self, p: int, i: int) -> int:
        if not (1 <= p <= self.k and 1 <= i <= self.n):
            raise ValueError(f"fiber variable ({p},{i}) out of range")
        return (p - 1) * self.n + (i - 1)

    def leaf_index(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise ValueError(f"leaf variable {i} out of range")
        return self.k * self.n + (i - 1)

    def is_leaf_index(self, idx: int) -> bool:
        return self.k * self.n <= idx < self.dim

    def is_fiber_index(self, idx: int) -> bool:
        return 0 <= idx < self.k * self.n

    def fiber_block_of(self, idx: int) -> int:
        """1-based block number p of a fiber index."""
        if not self.is_fiber_index(idx):
            raise ValueError(f"index {idx} is not a fiber variable")
        return idx // self.n + 1

    @property
    def leaf_indices(self) -> tuple[int, ...]:
        return tuple(range(self.k * self.n, self.dim))

    @property
    def fiber_indices(self) -> tuple[int, ...]:
        return tuple(range(self.k * self.n))

    def fiber_block(self, p: int) -> tuple[int, ...]:
        return tuple(self.fiber_index(p, i) for i in range(1, self.n + 1))

    def var_name(self, idx: int) -> str:
        return self._names[idx]

    def variable_index(self, name: str) -> int:
        return self._index_of[name]

    def zero(self) -> Polynomial:
        return Polynomial.zero(self.dim)

    def constant(self, value) -> Polynomial:
        return Polynomial.constant(self.dim, value)

    def coordinate(self, name: str) -> Polynomial:
        return Polynomial.variable(self.dim, self.variable_index(name))

    def __eq__(self, other):
        if not isinstance(other, Chart):
            return NotImplemented
        return (self.n, self.k, self._aliases) == (other.n, other.k, other._aliases)

    def __hash__(self):
        return hash((self.n, self.k, tuple(sorted(self._aliases.items()))))

    def __repr__(self):
        return f"Chart(n={self.n}, k={self.k})"


def _check_same_chart(a, b):
    if a.chart != b.chart:
        raise ValueError("chart mismatch")


class RkMap:
    """A map into R^k given by k polynomial components."""

    __slots__ = ("chart", "comps")

    def __init__(self, chart: Chart, comps: Iterable[Polynomial]):
        comps = tuple(comps)
        if len(comps) != chart.k:
            raise ValueError(f"expected {chart.k} components, got {len(comps)}")
        if any(c.dim != chart.dim for c in comps):
            raise ValueError("component dimension does not match the chart")
        self.chart = chart
        self.comps = comps

    @classmethod
    def zero(cls, chart: Chart) -> "RkMap":
        return cls(chart, [chart.zero()] * chart.k)

    def __getitem__(self, p: int) -> Polynomial:
        return self.comps[p]

    def __iter__(self):
        return iter(self.comps)

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.comps)

    def __add__(self, other: "RkMap") -> "RkMap":
        _check_same_chart(self, other)
        return RkMap(self.chart, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other: "RkMap") -> "RkMap":
        _check_same_chart(self, other)
        return RkMap(self.chart, [a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self) -> "RkMap":
        return RkMap(self.chart, [-c for c in self.comps])

    def __mul__(self, scalar) -> "RkMap":
        return RkMap(self.chart, [c * scalar for c in self.comps])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, RkMap):
            return NotImplemented
        return self.chart == other.chart and self.comps == other.comps

    def __hash__(self):
        return hash((self.chart, self.comps))

    def to_string(self) -> str:
        names = self.chart.var_names
        return "(" + ", ".join(c.to_string(names) for c in self.comps) + ")"

    def __repr__(self):
        return f"<rkmap {self.to_string()}>"


class VectorField:
    """Polynomial vector field; absent components are zero."""

    __slots__ = ("chart", "_comps")

    def __init__(self, chart: Chart, components: Mapping[int, Polynomial] = ()):
        comps = {}
        for idx, poly in dict(components).items():
            if not 0 <= idx < chart.dim:
                raise ValueError(f"component index {idx} out of range")
            if poly.dim != chart.dim:
                raise ValueError("component dimension does not match the chart")
            if not poly.is_zero:
                comps[idx] = poly
        self.chart = chart
        self._comps = comps

    @classmethod
    def zero(cls, chart: Chart) -> "VectorField":
        return cls(chart)

    @classmethod
    def coordinate(cls, chart: Chart, idx: int) -> "VectorField":
        """The constant field along one coordinate direction."""
        return cls(chart, {idx: chart.constant(1)})

    def component(self, idx: int) -> Polynomial:
        return self._comps.get(idx, Polynomial.zero(self.chart.dim))

    def components(self) -> tuple[tuple[int, Polynomial], ...]:
        return tuple((i, self._comps[i]) for i in sorted(self._comps))

    @property
    def is_zero(self) -> bool:
        return not self._comps

    def apply_to(self, poly: Polynomial) -> Polynomial:
        """Directional derivative sum_i X^i dp/dx^i."""
        if poly.dim != self.chart.dim:
            raise ValueError("polynomial dimension does not match the chart")
        total = Polynomial.zero(self.chart.dim)
        for idx, comp in self.components():
            total = total + comp * poly.partial(idx)
        return total

    def restrict(self, indices: Iterable[int]) -> "VectorField":
        """Keep only the named component slots."""
        keep = set(indices)
        return VectorField(self.chart,
                           {i: c for i, c in self._comps.items() if i in keep})

    def __add__(self, other: "VectorField") -> "VectorField":
        _check_same_chart(self, other)
        acc = dict(self._comps)
        for idx, poly in other._comps.items():
            total = acc.get(idx, Polynomial.zero(self.chart.dim)) + poly
            if total.is_zero:
                acc.pop(idx, None)
            else:
                acc[idx] = total
        return VectorField(self.chart, acc)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + (-other)

    def __neg__(self) -> "VectorField":
        return VectorField(self.chart, {i: -c for i, c in self._comps.items()})

    def __mul__(self, factor) -> "VectorField":
        """Scale by a rational or by a polynomial function."""
        return VectorField(self.chart,
                           {i: c * factor for i, c in self._comps.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.chart == other.chart and self._comps == other._comps

    def __hash__(self):
        return hash((self.chart, frozenset(self._comps.items())))

    def to_string(self) -> str:
        names = self.chart.var_names
        return "(" + ", ".join(
            self.component(i).to_string(names) for i in range(self.chart.dim)) + ")"

    def __repr__(self):
        return f"<field {self.to_string()}>"


class OneFormRk:
    """R^k-valued 1-form: a k x N grid of dx^j coefficients."""

    __slots__ = ("chart", "comps")

    def __init__(self, chart: Chart, comps: Iterable[Iterable[Polynomial]]):
        grid = tuple(tuple(row) for row in comps)
        if len(grid) != chart.k or any(len(row) != chart.dim for row in grid):
            raise ValueError(f"expected a {chart.k} x {chart.dim} grid")
        for row in grid:
            for poly in row:
                if poly.dim != chart.dim:
                    raise ValueError("entry dimension does not match the chart")
        self.chart = chart
        self.comps = grid

    @classmethod
    def zero(cls, chart: Chart) -> "OneFormRk":
        z = chart.zero()
        return cls(chart, [[z] * chart.dim for _ in range(chart.k)])

    @classmethod
    def basis(cls, chart: Chart, p: int, j: int) -> "OneFormRk":
        """dx^j tensor e_p with 0-based p and j."""
        grid = [[chart.zero()] * chart.dim for _ in range(chart.k)]
        grid[p][j] = chart.constant(1)
        return cls(chart, grid)

    def entry(self, p: int, j: int) -> Polynomial:
        return self.comps[p][j]

    @property
    def is_zero(self) -> bool:
        return all(poly.is_zero for row in self.comps for poly in row)

    def __add__(self, other: "OneFormRk") -> "OneFormRk":
        _check_same_chart(self, other)
        return OneFormRk(self.chart,
                         [[a + b for a, b in zip(ra, rb)]
                          for ra, rb in zip(self.comps, other.comps)])

    def __neg__(self) -> "OneFormRk":
        return OneFormRk(self.chart, [[-p for p in row] for row in self.comps])

    def __sub__(self, other: "OneFormRk") -> "OneFormRk":
        return self + (-other)

    def __mul__(self, factor) -> "OneFormRk":
        return OneFormRk(self.chart,
                         [[p * factor for p in row] for row in self.comps])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, OneFormRk):
            return NotImplemented
        return self.chart == other.chart and self.comps == other.comps

    def __repr__(self):
        names = self.chart.var_names
        rows = "; ".join(
            "(" + ", ".join(p.to_string(names) for p in row) + ")"
            for row in self.comps)
        return f"<one-form {rows}>"


# -- operators -----------------------------------------------------------


def is_basic(poly: Polynomial, chart: Chart) -> bool:
    """True when the function is constant along the fibers."""
    if poly.dim != chart.dim:
        raise ValueError("polynomial dimension does not match the chart")
    fiber = chart.fiber_indices
    return all(not any(exps[i] for i in fiber) for exps in poly.terms)


def differential(H: RkMap) -> OneFormRk:
    """Componentwise exterior derivative dH^p = sum_j (dH^p/dx^j) dx^j."""
    chart = H.chart
    return OneFormRk(chart, [[H[p].partial(j) for j in range(chart.dim)]
                             for p in range(chart.k)])


def interior_product(X: VectorField, theta: RationalMatrix) -> tuple[Polynomial, ...]:
    """i(X)theta as a row of dx^j coefficients: sum_i X^i theta[i, j]."""
    chart = X.chart
    if theta.rows != chart.dim or theta.cols != chart.dim:
        raise ValueError("form shape does not match the chart")
    row = [Polynomial.zero(chart.dim) for _ in range(chart.dim)]
    for idx, comp in X.components():
        for j in range(chart.dim):
            coeff = theta.entry(idx, j)
            if coeff:
                row[j] = row[j] + comp * coeff
    return tuple(row)


def exterior_derivative_one_form(
        omega: Sequence[Polynomial]) -> tuple[tuple[Polynomial, ...], ...]:
    """d(omega) as the antisymmetric grid (i,j) -> dω_j/dx^i - dω_i/dx^j."""
    n = len(omega)
    if n == 0 or any(p.dim != omega[0].dim for p in omega):
        raise ValueError("omega must be a non-empty row over one chart")
    return tuple(
        tuple(omega[j].partial(i) - omega[i].partial(j) for j in range(n))
        for i in range(n))


def grid_is_zero(grid: Sequence[Sequence[Polynomial]]) -> bool:
    return all(p.is_zero for row in grid for p in row)


def xi_pairing(beta: OneFormRk, X: VectorField) -> RkMap:
    """The pairing <beta, X>: component p is sum_j beta^p_j X^j."""
    _check_same_chart(beta, X)
    chart = X.chart
    comps = []
    for p in range(chart.k):
        total = Polynomial.zero(chart.dim)
        for j, xj in X.components():
            total = total + beta.entry(p, j) * xj
        comps.append(total)
    return RkMap(chart, comps)


# -- k-symplectic structures ----------------------------------------------


def canonical_theta(chart: Chart, p: int) -> RationalMatrix:
    """Coefficient matrix of sum_i dx^{pi} ^ dx^i (1-based p)."""
    n = chart.dim
    grid = [[Fraction(0)] * n for _ in range(n)]
    for i in range(1, chart.n + 1):
        a = chart.fiber_index(p, i)
        b = chart.leaf_index(i)
        grid[a][b] = Fraction(1)
        grid[b][a] = Fraction(-1)
    return RationalMatrix(grid)


class KSymplecticStructure:
    """A chart together with constant antisymmetric 2-forms.

    The canonical instance carries the chart's k Darboux forms; custom
    lists (any count >= 1) are allowed so that degenerate configurations
    can be probed by the structure check.
    """

    __slots__ = ("chart", "thetas")

    def __init__(self, chart: Chart, thetas: Iterable[RationalMatrix]):
        thetas = tuple(thetas)
        if not thetas:
            raise ValueError("at least one 2-form required")
        for theta in thetas:
            if theta.rows != chart.dim or theta.cols != chart.dim:
                raise ValueError("form shape does not match the chart")
            if not theta.is_antisymmetric():
                raise ValueError("2-form coefficient matrices must be antisymmetric")
        self.chart = chart
        self.thetas = thetas

    @classmethod
    def canonical(cls, chart: Chart) -> "KSymplecticStructure":
        return cls(chart, [canonical_theta(chart, p)
                           for p in range(1, chart.k + 1)])

    def theta(self, p: int) -> RationalMatrix:
        """0-based accessor."""
        return self.thetas[p]


@dataclass(frozen=True)
class StructureReport:
    """check_ksymplectic outcome with witnesses."""
    passed: bool
    form_kernels: tuple[tuple[tuple[Fraction, ...], ...], ...]
    joint_kernel: tuple[tuple[Fraction, ...], ...]
    vertical_violations: tuple[tuple[int, int, int, Fraction], ...]

    def summary(self, chart: Chart | None = None) -> str:
        if self.passed:
            return "nondegenerate: joint characteristic space is trivial"
        parts = []
        if self.joint_kernel:
            parts.append(f"joint characteristic space has dimension "
                         f"{len(self.joint_kernel)}")
        if self.vertical_violations:
            p, i, j, value = self.vertical_violations[0]
            where = (f"theta^{p + 1}({chart.var_name(i)},{chart.var_name(j)})"
                     if chart else f"theta^{p + 1}[{i},{j}]")
            parts.append(f"{where} = {value} on vertical directions")
        return "; ".join(parts)


def check_ksymplectic(structure: KSymplecticStructure) -> StructureReport:
    """Exact nondegeneracy and vertical-isotropy test for constant forms.

    Constant coefficients make each characteristic space the kernel of
    the coefficient matrix, so the joint condition reduces to the kernel
    of the stacked matrix being trivial.  The second condition asks each
    form to vanish on pairs of fiber directions.
    """
    chart = structure.chart
    form_kernels = tuple(tuple(kernel(theta)) for theta in structure.thetas)
    stacked = structure.thetas[0]
    if len(structure.thetas) > 1:
        stacked = stacked.stack(*structure.thetas[1:])
    joint = tuple(kernel(stacked))
    violations = []
    fiber = chart.fiber_indices
    for p, theta in enumerate(structure.thetas):
        for a_pos, a in enumerate(fiber):
            for b in fiber[a_pos + 1:]:
                value = theta.entry(a, b)
                if value:
                    violations.append((p, a, b, value))
    return StructureReport(
        passed=not joint and not violations,
        form_kernels=form_kernels,
        joint_kernel=joint,
        vertical_violations=tuple(violations),
    )
