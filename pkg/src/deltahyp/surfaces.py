"""Closed-form example hypersurfaces and grid-sampled immersion ingestion."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .errors import GeometryError, GridError, SchemaError
from .jsonio import dump_path, load_path
from .shape import ShapeOperator

#: Condition-number threshold above which the first fundamental form is
#: treated as degenerate.
METRIC_COND_LIMIT = 1e8

CATALOG_KINDS = ("spherical-cylinder", "round-sphere", "hyperplane", "graph")


@dataclass(frozen=True)
class SurfaceSpec:
    """Closed-form catalog entry evaluated at a distinguished point."""

    kind: str
    n: int
    p: Optional[int] = None
    radius: Optional[float] = None
    hessian: Optional[tuple[tuple[float, ...], ...]] = None

    def __post_init__(self):
        if self.kind not in CATALOG_KINDS:
            raise GeometryError(f"unknown catalog kind {self.kind!r}")
        if self.n < 2:
            raise GeometryError(f"dimension must be >= 2, got {self.n}")
        if self.kind == "spherical-cylinder":
            self._forbid(hessian=self.hessian)
            if self.p is None or not 1 <= self.p <= self.n - 1:
                raise GeometryError(
                    f"spherical cylinder needs 1 <= p <= n-1, got p={self.p}, n={self.n}"
                )
            if self.radius is None or self.radius <= 0:
                raise GeometryError(f"radius must be positive, got {self.radius}")
        elif self.kind == "round-sphere":
            self._forbid(p=self.p, hessian=self.hessian)
            if self.radius is None or self.radius <= 0:
                raise GeometryError(f"radius must be positive, got {self.radius}")
        elif self.kind == "hyperplane":
            self._forbid(p=self.p, radius=self.radius, hessian=self.hessian)
        elif self.kind == "graph":
            self._forbid(p=self.p, radius=self.radius)
            if self.hessian is None:
                raise GeometryError("graph spec needs a hessian")
            if any(len(row) != self.n for row in self.hessian) or len(self.hessian) != self.n:
                raise GeometryError(
                    f"graph hessian must be {self.n}x{self.n} to match n={self.n}"
                )

    def _forbid(self, **fields):
        for name, value in fields.items():
            if value is not None:
                raise GeometryError(
                    f"field {name!r} does not apply to kind {self.kind!r}"
                )

    def to_json_dict(self) -> dict:
        out: dict = {"kind": self.kind, "n": self.n}
        if self.p is not None:
            out["p"] = self.p
        if self.radius is not None:
            out["radius"] = self.radius
        if self.hessian is not None:
            out["hessian"] = [list(row) for row in self.hessian]
        return out


class ImmersionGrid:
    """Uniform lattice of samples of an immersion into (n+1)-space."""

    __slots__ = ("n", "h", "base", "shape", "points")

    def __init__(self, n: int, h, base, shape, points):
        if n < 2:
            raise GridError(f"parameter dimension must be >= 2, got {n}")
        h = tuple(float(x) for x in h)
        base = tuple(int(x) for x in base)
        shape = tuple(int(x) for x in shape)
        if len(h) != n or len(base) != n or len(shape) != n:
            raise GridError(
                f"h, base, shape must each have length n={n}; "
                f"got {len(h)}, {len(base)}, {len(shape)}"
            )
        if any(x <= 0 for x in h):
            raise GridError(f"grid spacings must be positive, got {h}")
        pts = np.array(points, dtype=float)
        expected = math.prod(shape) * (n + 1)
        if pts.size != expected:
            raise GridError(
                f"points array has {pts.size} values, expected {expected} "
                f"(prod(shape) * (n+1))"
            )
        pts = pts.reshape(*shape, n + 1)
        # every axis must admit a centered 5-point stencil around the base
        for axis in range(n):
            if base[axis] - 2 < 0 or base[axis] + 2 >= shape[axis]:
                raise GridError(
                    f"insufficient stencil on axis {axis}: base {base[axis]} "
                    f"needs two neighbors on each side within size {shape[axis]}"
                )
        pts.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "points", pts)

    def __setattr__(self, *_):  # pragma: no cover - guard
        raise AttributeError("ImmersionGrid is immutable")

    def at(self, offset: tuple[int, ...]) -> np.ndarray:
        index = tuple(b + o for b, o in zip(self.base, offset))
        return self.points[index]

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "h": list(self.h),
            "base": list(self.base),
            "shape": list(self.shape),
            "points": [float(x) for x in self.points.reshape(-1)],
        }


# -- catalog ---------------------------------------------------------------------


def catalog_shape_operator(spec: SurfaceSpec) -> ShapeOperator:
    """Shape operator of a catalog surface at its distinguished point.

    Normals are oriented so the spherical cylinder has curvature +1/r on its
    curved directions; the round sphere then gets +1/r on every direction.
    """
    n = spec.n
    if spec.kind == "spherical-cylinder":
        diag = [1.0 / spec.radius] * spec.p + [0.0] * (n - spec.p)
        return ShapeOperator(np.diag(diag))
    if spec.kind == "round-sphere":
        return ShapeOperator(np.eye(n) / spec.radius)
    if spec.kind == "hyperplane":
        return ShapeOperator(np.zeros((n, n)))
    if spec.kind == "graph":
        return ShapeOperator(np.array(spec.hessian, dtype=float))
    raise GeometryError(f"unknown catalog kind {spec.kind!r}")  # pragma: no cover


# -- grid ingestion -----------------------------------------------------------------


def shape_operator_from_grid(grid: ImmersionGrid) -> ShapeOperator:
    """Shape operator at the base point by O(h^2) central differences.

    Builds the first fundamental form from first differences, the second
    fundamental form from second differences against the unit normal, and
    returns the symmetrized operator I^(-1/2) * II * I^(-1/2), which is
    similar to I^(-1) * II.  The normal sign is chosen so the trace is
    nonnegative, matching the catalog's cylinder orientation.
    """
    n = grid.n
    h = grid.h

    def offset(steps: dict[int, int] | None = None) -> tuple[int, ...]:
        out = [0] * n
        for axis, step in (steps or {}).items():
            out[axis] = step
        return tuple(out)

    center = grid.at(offset())
    tangents = np.zeros((n + 1, n))
    for i in range(n):
        plus = grid.at(offset({i: +1}))
        minus = grid.at(offset({i: -1}))
        tangents[:, i] = (plus - minus) / (2.0 * h[i])

    metric = tangents.T @ tangents
    cond = float(np.linalg.cond(metric))
    if not np.isfinite(cond) or cond > METRIC_COND_LIMIT:
        raise GridError(
            f"first fundamental form is degenerate (condition number {cond:.3e})"
        )

    # unit normal: the column of the full orthonormal basis not spanned by
    # the tangents
    q_full, _ = np.linalg.qr(tangents, mode="complete")
    normal = q_full[:, n]

    second = np.zeros((n, n))
    for i in range(n):
        plus = grid.at(offset({i: +1}))
        minus = grid.at(offset({i: -1}))
        dd = (plus - 2.0 * center + minus) / (h[i] * h[i])
        second[i, i] = float(dd @ normal)
        for j in range(i + 1, n):
            pp = grid.at(offset({i: +1, j: +1}))
            pm = grid.at(offset({i: +1, j: -1}))
            mp = grid.at(offset({i: -1, j: +1}))
            mm = grid.at(offset({i: -1, j: -1}))
            dd = (pp - pm - mp + mm) / (4.0 * h[i] * h[j])
            second[i, j] = second[j, i] = float(dd @ normal)

    eigenvalues, vectors = np.linalg.eigh(metric)
    inv_sqrt = vectors @ np.diag(1.0 / np.sqrt(eigenvalues)) @ vectors.T
    operator = inv_sqrt @ second @ inv_sqrt
    operator = 0.5 * (operator + operator.T)
    if float(np.trace(operator)) < 0.0:
        operator = -operator
    return ShapeOperator(operator)


# -- JSON schemas ---------------------------------------------------------------------


def _reject_unknown(data: dict, allowed: set[str], where: str) -> None:
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise SchemaError(
            f"unknown field(s) {', '.join(repr(k) for k in unknown)} in {where}",
            positions=[f"$.{k}" for k in unknown],
        )


def _require(data: dict, keys: set[str], where: str) -> None:
    missing = sorted(keys - set(data))
    if missing:
        raise SchemaError(
            f"missing field(s) {', '.join(repr(k) for k in missing)} in {where}",
            positions=[f"$.{k}" for k in missing],
        )


def _expect_int(data: dict, key: str):
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(
            f"field {key!r} must be an integer, got {type(value).__name__}",
            positions=[f"$.{key}"],
        )
    return value


def _expect_number(data: dict, key: str) -> float:
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(
            f"field {key!r} must be a number, got {type(value).__name__}",
            positions=[f"$.{key}"],
        )
    return float(value)


def _expect_number_list(data: dict, key: str) -> list[float]:
    value = data[key]
    if not isinstance(value, list) or not all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in value
    ):
        raise SchemaError(
            f"field {key!r} must be a list of numbers", positions=[f"$.{key}"]
        )
    return [float(x) for x in value]


def _parse_surface_spec(data: dict) -> SurfaceSpec:
    kind = data.get("kind")
    if kind not in CATALOG_KINDS:
        raise SchemaError(
            f"unknown catalog kind {kind!r}; expected one of {CATALOG_KINDS}",
            positions=["$.kind"],
        )
    where = f"surface spec of kind {kind!r}"
    if kind == "spherical-cylinder":
        _require(data, {"kind", "p", "n", "radius"}, where)
        _reject_unknown(data, {"kind", "p", "n", "radius"}, where)
        spec = SurfaceSpec(
            kind=kind,
            n=_expect_int(data, "n"),
            p=_expect_int(data, "p"),
            radius=_expect_number(data, "radius"),
        )
    elif kind == "round-sphere":
        _require(data, {"kind", "n", "radius"}, where)
        _reject_unknown(data, {"kind", "n", "radius"}, where)
        spec = SurfaceSpec(kind=kind, n=_expect_int(data, "n"), radius=_expect_number(data, "radius"))
    elif kind == "hyperplane":
        _require(data, {"kind", "n"}, where)
        _reject_unknown(data, {"kind", "n"}, where)
        spec = SurfaceSpec(kind=kind, n=_expect_int(data, "n"))
    else:  # graph
        _require(data, {"kind", "hessian"}, where)
        _reject_unknown(data, {"kind", "hessian", "n"}, where)
        hess = data["hessian"]
        if not isinstance(hess, list) or not hess:
            raise SchemaError("field 'hessian' must be a nonempty matrix", positions=["$.hessian"])
        size = len(hess)
        for i, row in enumerate(hess):
            if not isinstance(row, list) or len(row) != size:
                raise SchemaError(
                    f"hessian row {i} must be a list of length {size}",
                    positions=[f"$.hessian[{i}]"],
                )
            for j, value in enumerate(row):
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise SchemaError(
                        f"hessian entry [{i}][{j}] must be a number",
                        positions=[f"$.hessian[{i}][{j}]"],
                    )
        matrix = np.array(hess, dtype=float)
        scale = max(1.0, float(np.max(np.abs(matrix))))
        bad = [
            (i, j)
            for i in range(size)
            for j in range(i + 1, size)
            if abs(matrix[i, j] - matrix[j, i]) > 1e-12 * scale
        ]
        if bad:
            i, j = bad[0]
            raise SchemaError(
                f"hessian must be symmetric; entries [{i}][{j}] and [{j}][{i}] differ",
                positions=[f"$.hessian[{i}][{j}]", f"$.hessian[{j}][{i}]"],
            )
        declared_n = data.get("n", size)
        if declared_n != size:
            raise SchemaError(
                f"declared n={declared_n} does not match hessian size {size}",
                positions=["$.n"],
            )
        spec = SurfaceSpec(kind=kind, n=size, hessian=tuple(tuple(row) for row in matrix.tolist()))
    return spec


def _parse_grid(data: dict) -> ImmersionGrid:
    where = "immersion grid"
    _require(data, {"n", "h", "base", "shape", "points"}, where)
    _reject_unknown(data, {"n", "h", "base", "shape", "points"}, where)
    n = _expect_int(data, "n")
    h = _expect_number_list(data, "h")
    base_raw = data["base"]
    shape_raw = data["shape"]
    for key, value in (("base", base_raw), ("shape", shape_raw)):
        if not isinstance(value, list) or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in value
        ):
            raise SchemaError(
                f"field {key!r} must be a list of integers", positions=[f"$.{key}"]
            )
    points = _expect_number_list(data, "points")
    try:
        return ImmersionGrid(n=n, h=h, base=base_raw, shape=shape_raw, points=points)
    except GridError as exc:
        raise SchemaError(str(exc), positions=["$"]) from exc


def load_case(path) -> Union[SurfaceSpec, ImmersionGrid]:
    """Load either a catalog surface spec or an immersion grid from JSON."""
    try:
        data = load_path(path)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON in {path}: {exc}", positions=["$"]) from exc
    if not isinstance(data, dict):
        raise SchemaError("top-level JSON value must be an object", positions=["$"])
    if "kind" in data:
        try:
            return _parse_surface_spec(data)
        except GeometryError as exc:
            raise SchemaError(str(exc), positions=["$"]) from exc
    if "points" in data:
        return _parse_grid(data)
    raise SchemaError(
        "object is neither a surface spec (missing 'kind') nor a grid (missing 'points')",
        positions=["$"],
    )


def save_report(path, report) -> None:
    """Write any report object as canonical JSON."""
    dump_path(path, report)


def load_report(path) -> dict:
    """Read back a JSON report written by save_report."""
    return load_path(path)
