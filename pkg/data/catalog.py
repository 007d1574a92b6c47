"""
Test-function catalog: targets f with exact derivative evaluators, asserted
shape classes (q, Y_s), kink locations and Sobolev order.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import Polynomial

from core.chebcore import _check_domain, cheb_grid, differentiate, interpolate
from models.constrained import ShapeConstraint, sign_pattern

logger = logging.getLogger(__name__)

PROXY_DEGREE    = 40
MEMBERSHIP_GRID = 2000
MEMBERSHIP_TOL  = 1e-9
EXP_DERIVS      = 12
MAX_CHECKED_Q   = 4


# ---------------------------------------------------------------------------
# Piecewise polynomials (kinked entries and exact primitives)
# ---------------------------------------------------------------------------


class Piecewise:
    """Polynomial pieces on [-1, b_1], [b_1, b_2], ..., [b_m, 1]; a break belongs to its right piece."""

    def __init__(self, breaks, pieces):
        self.breaks = np.asarray(sorted(breaks), dtype=float)
        self.pieces = [Polynomial(p) if not isinstance(p, Polynomial) else p for p in pieces]
        if len(self.pieces) != self.breaks.size + 1:
            raise ValueError("Piecewise needs one more piece than breaks")

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        flat = np.atleast_1d(arr).ravel()
        idx = np.searchsorted(self.breaks, flat, side="right")
        out = np.empty_like(flat)
        for i, piece in enumerate(self.pieces):
            mask = idx == i
            if mask.any():
                out[mask] = piece(flat[mask])
        return out.reshape(arr.shape) if arr.ndim else out[0]

    def deriv(self, m: int = 1) -> "Piecewise":
        return Piecewise(self.breaks, [p.deriv(m) for p in self.pieces])

    def integ(self, value_at_minus1: float = 0.0) -> "Piecewise":
        """Continuous antiderivative with F(-1) = value_at_minus1."""
        edges = np.concatenate([[-1.0], self.breaks])
        value = value_at_minus1
        out = []
        for i, piece in enumerate(self.pieces):
            prim = piece.integ(k=[value], lbnd=edges[i])
            out.append(prim)
            if i < self.breaks.size:
                value = float(prim(self.breaks[i]))
        return Piecewise(self.breaks, out)

    def primitive(self, q: int) -> "Piecewise":
        pw = self
        for _ in range(q):
            pw = pw.integ()
        return pw


def _product(ys) -> Polynomial:
    return Polynomial.fromroots(list(ys)) if len(ys) else Polynomial([1.0])


# ---------------------------------------------------------------------------
# TestFunction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TestFunction:
    __test__ = False

    id: str
    description: str
    fn: Callable[[np.ndarray], np.ndarray]
    derivative_evals: tuple = ()
    shape_classes: tuple = ()
    kink_points: tuple = ()
    sobolev_order: int = 0
    params: dict = field(default_factory=dict)
    approximate: bool = False

    def __post_init__(self):
        kinks = tuple(sorted(float(k) for k in self.kink_points))
        if any(abs(k) >= 1.0 for k in kinks):
            raise ValueError(f"{self.id}: kink points must lie in (-1, 1)")
        object.__setattr__(self, "kink_points", kinks)
        object.__setattr__(self, "derivative_evals", tuple(self.derivative_evals))
        object.__setattr__(self, "shape_classes", tuple(self.shape_classes))
        for sc in self.shape_classes:
            defect = self.membership_defect(sc)
            if defect < -MEMBERSHIP_TOL:
                raise ValueError(
                    f"{self.id}: asserted shape class {sc.label()} fails the membership "
                    f"check (min signed derivative {defect:.3e})"
                )

    @property
    def r_max(self) -> int:
        return len(self.derivative_evals)

    def __call__(self, x):
        xs = _check_domain(x)
        out = np.asarray(self.fn(xs), dtype=float)
        return float(out) if out.ndim == 0 else out

    def __hash__(self):
        return hash((self.id, tuple(sorted((k, str(v)) for k, v in self.params.items()))))

    @cached_property
    def proxy(self):
        """Degree-40 Chebyshev interpolant standing in for derivatives past r_max."""
        return interpolate(self, PROXY_DEGREE)

    def derivative(self, j: int) -> "TestFunction":
        """f^(j) as a TestFunction; flagged approximate when j > r_max."""
        if j < 0:
            raise ValueError(f"Derivative order must be >= 0, got {j}")
        if j == 0:
            return self
        shifted = tuple(
            ShapeConstraint(sc.q - j, sc.change_points) for sc in self.shape_classes if sc.q > j
        )
        if j <= self.r_max:
            return TestFunction(
                id=f"{self.id}^({j})",
                description=f"derivative {j} of {self.description}",
                fn=self.derivative_evals[j - 1],
                derivative_evals=self.derivative_evals[j:],
                shape_classes=shifted,
                kink_points=self.kink_points,
                sobolev_order=max(0, self.sobolev_order - j),
                params=self.params,
                approximate=self.approximate,
            )
        logger.warning(
            "%s: derivative %d exceeds exact order %d; using the degree-%d interpolant",
            self.id, j, self.r_max, PROXY_DEGREE,
        )
        dp = differentiate(self.proxy, j)
        return TestFunction(
            id=f"{self.id}^({j})",
            description=f"approximate derivative {j} of {self.description}",
            fn=dp,
            kink_points=self.kink_points,
            params=self.params,
            approximate=True,
        )

    def membership_defect(self, sc: ShapeConstraint) -> float:
        """min over a 2001-point grid of sigma(x) * f^(q)(x)."""
        x = cheb_grid(MEMBERSHIP_GRID).nodes
        if sc.q <= self.r_max:
            dq = np.asarray(self.derivative_evals[sc.q - 1](x), dtype=float)
        else:
            dq = np.asarray(differentiate(self.proxy, sc.q)(x), dtype=float)
        vals = sign_pattern(sc, x) * dq
        scale = max(1.0, float(np.max(np.abs(dq))))
        return float(np.min(vals)) / scale

    def belongs_to(self, sc: ShapeConstraint) -> bool:
        return self.membership_defect(sc) >= -MEMBERSHIP_TOL

    @cached_property
    def norm(self) -> float:
        x = np.concatenate([cheb_grid(MEMBERSHIP_GRID).nodes, self.kink_points])
        return float(np.max(np.abs(self(x))))

    def scaled(self, c: float) -> "TestFunction":
        """c * f for c > 0; shape classes are preserved."""
        if not c > 0:
            raise ValueError(f"Scale factor must be positive, got {c}")
        return TestFunction(
            id=self.id,
            description=f"{c:g} * {self.description}" if c != 1 else self.description,
            fn=_scale(self.fn, c),
            derivative_evals=tuple(_scale(d, c) for d in self.derivative_evals),
            shape_classes=self.shape_classes,
            kink_points=self.kink_points,
            sobolev_order=self.sobolev_order,
            params={**self.params, "scale": c * self.params.get("scale", 1.0)},
            approximate=self.approximate,
        )


def _scale(g: Callable, c: float) -> Callable:
    return lambda x: c * np.asarray(g(x), dtype=float)


def _from_piecewise(
    id_: str,
    description: str,
    pw: Piecewise,
    r_max: int,
    classes,
    kinks=(),
    sobolev: Optional[int] = None,
    params: Optional[dict] = None,
) -> TestFunction:
    return TestFunction(
        id=id_,
        description=description,
        fn=pw,
        derivative_evals=tuple(pw.deriv(j) for j in range(1, r_max + 1)),
        shape_classes=tuple(classes),
        kink_points=tuple(kinks),
        sobolev_order=r_max if sobolev is None else sobolev,
        params=params or {},
    )


# ---------------------------------------------------------------------------
# Entry builders
# ---------------------------------------------------------------------------


def _monomial(k: int) -> TestFunction:
    poly = Polynomial.basis(k)
    classes = []
    for q in range(1, MAX_CHECKED_Q + 1):
        # x^(k-q) keeps sign for even k-q, flips at 0 for odd
        if q > k or (k - q) % 2 == 0:
            classes.append(ShapeConstraint(q))
        else:
            classes.append(ShapeConstraint(q, (0.0,)))
    return _from_piecewise(
        "monomial", f"x^{k}", Piecewise((), [poly]), k + 1, classes, params={"k": k}
    )


def _exp(c: float) -> TestFunction:
    derivs = tuple(
        (lambda x, j=j: c ** j * np.exp(c * np.asarray(x, dtype=float)))
        for j in range(1, EXP_DERIVS + 1)
    )
    return TestFunction(
        id="exp",
        description=f"exp({c:g} x)",
        fn=lambda x: np.exp(c * np.asarray(x, dtype=float)),
        derivative_evals=derivs,
        shape_classes=tuple(ShapeConstraint(q) for q in range(1, MAX_CHECKED_Q + 1)),
        sobolev_order=EXP_DERIVS,
        params={"c": c},
    )


def _xabsx() -> TestFunction:
    pw = Piecewise([0.0], [[0, 0, -1], [0, 0, 1]])
    return _from_piecewise(
        "xabsx", "x |x|", pw, 2,
        [ShapeConstraint(1), ShapeConstraint(2, (0.0,))], kinks=(0.0,),
    )


def _abs() -> TestFunction:
    pw = Piecewise([0.0], [[0, -1], [0, 1]])
    return _from_piecewise("abs", "|x|", pw, 1, [ShapeConstraint(1, (0.0,))], kinks=(0.0,))


def _trunc(m: int, a: float) -> TestFunction:
    pw = Piecewise([a], [[0.0], Polynomial([-a, 1.0]) ** m])
    return _from_piecewise(
        "trunc", f"(x - {a:g})_+^{m}", pw, m,
        [ShapeConstraint(q) for q in range(1, m + 1)],
        kinks=(a,), params={"m": m, "a": a},
    )


def _signed_primitive(q: int, ys: tuple, lam: float, c: float) -> TestFunction:
    base = _product(ys)
    if lam > 0:
        left = base * Polynomial([1.0 + lam * c, -lam])
        right = base * Polynomial([1.0 - lam * c, lam])
        pw = Piecewise([c], [left, right]).primitive(q)
        r_max, kinks = q + 1, (c,)
        desc = f"{q}-fold primitive of prod(x - y_i) * (1 + {lam:g}|x - {c:g}|)"
    else:
        pw = Piecewise((), [base]).primitive(q)
        r_max, kinks = q + len(ys) + 1, ()
        desc = f"{q}-fold primitive of prod(x - y_i)"
    return _from_piecewise(
        "signed_primitive", desc, pw, r_max, [ShapeConstraint(q, ys)], kinks=kinks,
        params={"q": q, "ys": tuple(ys), "lam": lam, "c": c},
    )


def _abs_primitive(q: int, ys: tuple) -> TestFunction:
    base = _product(ys)
    # |prod| is +prod right of y_1 and alternates leftward
    s = len(ys)
    pieces = [base * ((-1) ** (s - i)) for i in range(s + 1)]
    pw = Piecewise(ys, pieces).primitive(q)
    return _from_piecewise(
        "abs_primitive", f"{q}-fold primitive of |prod(x - y_i)|", pw, q + 1,
        [ShapeConstraint(q)], kinks=ys, params={"q": q, "ys": tuple(ys)},
    )


def _op117() -> TestFunction:
    poly = Polynomial([0, 0, 0, -1 / 24, 0, 1 / 20])
    r = 1.0 / math.sqrt(2.0)
    classes = [ShapeConstraint(2, (0.5, 0.0, -0.5)), ShapeConstraint(1, (r, -r))]
    return _from_piecewise(
        "op117", "x^5/20 - x^3/24, f'' = x(x^2 - 1/4)", Piecewise((), [poly]), 6, classes
    )


def _q3_family(y: float, r: int) -> TestFunction:
    # r=1: |x-y|, piecewise linear (f'' and f''' vanish off y)
    # r=3: (|x-y|^3 - |1+y|^3)/3 with f' = (x-y)|x-y|, f'' = 2|x-y|, f''' = 2 sign(x-y)
    if r not in (1, 3):
        raise ValueError(f"q3_family: 'r' must be 1 or 3, got {r}")
    line = Polynomial([-y, 1.0])
    if r == 1:
        pw = Piecewise([y], [-line, line])
        description = f"|x - {y:g}|"
    else:
        cube = line ** 3
        pw = Piecewise([y], [(-cube - abs(1 + y) ** 3) / 3.0, (cube - abs(1 + y) ** 3) / 3.0])
        description = f"(|x - {y:g}|^3 - |1 + {y:g}|^3) / 3"
    classes = [ShapeConstraint(3, (y,)), ShapeConstraint(2), ShapeConstraint(1, (y,))]
    return _from_piecewise(
        "q3_family", description, pw, 3, classes,
        kinks=(y,), sobolev=r, params={"y": y, "r": r},
    )


def _endpoint_power(p: float) -> TestFunction:
    r = int(math.floor(p))

    def deriv(j):
        coef = math.prod(p - i for i in range(j))
        return lambda x: coef * np.power(np.asarray(x, dtype=float) + 1.0, p - j)

    return TestFunction(
        id="endpoint_power",
        description=f"(x + 1)^{p:g}",
        fn=deriv(0),
        derivative_evals=tuple(deriv(j) for j in range(1, r + 1)),
        shape_classes=tuple(ShapeConstraint(q) for q in range(1, min(r, MAX_CHECKED_Q) + 1)),
        sobolev_order=r,
        params={"p": p},
    )


def _blend(base: str, other: str, lam: float, base_params: dict, other_params: dict) -> TestFunction:
    f = get_function(base, base_params)
    g = get_function(other, other_params)
    r = min(f.r_max, g.r_max)
    fn = lambda x: f.fn(x) + lam * np.asarray(g.fn(x), dtype=float)  # noqa: E731
    derivs = tuple(
        (lambda x, a=f.derivative_evals[j], b=g.derivative_evals[j]:
            a(x) + lam * np.asarray(b(x), dtype=float))
        for j in range(r)
    )
    kinks = tuple(sorted(set(f.kink_points) | set(g.kink_points)))
    params = {
        "base": base, "other": other, "lam": lam,
        **{f"base_{k}": v for k, v in base_params.items()},
        **{f"other_{k}": v for k, v in other_params.items()},
    }
    trial = TestFunction("blend", "", fn, derivs, (), kinks, min(f.sobolev_order, g.sobolev_order))
    candidates = list(dict.fromkeys(list(f.shape_classes) + list(g.shape_classes)))
    kept = [sc for sc in candidates if sc.q <= r and trial.belongs_to(sc)]
    dropped = len(candidates) - len(kept)
    if dropped:
        logger.warning("blend %s + %g*%s: dropped %d shape class(es)", base, lam, other, dropped)
    return TestFunction(
        id="blend",
        description=f"{f.description} + {lam:g} * ({g.description})",
        fn=fn,
        derivative_evals=derivs,
        shape_classes=tuple(kept),
        kink_points=kinks,
        sobolev_order=trial.sobolev_order,
        params=params,
    )


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Param:
    kind: str                       # int | float | floats | id
    default: object
    lo: Optional[float] = None
    hi: Optional[float] = None
    left_open: bool = False
    right_open: bool = False


@dataclass(frozen=True)
class Entry:
    description: str
    params: dict
    build: Callable[..., TestFunction]


CATALOG = {
    "monomial":         Entry("x^k", {"k": Param("int", 3, 0, 10)}, _monomial),
    "exp":              Entry("exp(c x)", {"c": Param("float", 1.0, 0.0, 5.0, left_open=True)}, _exp),
    "xabsx":            Entry("x |x|", {}, _xabsx),
    "abs":              Entry("|x|", {}, _abs),
    "trunc":            Entry("(x - a)_+^m", {
                            "m": Param("int", 1, 1, 3),
                            "a": Param("float", 0.0, -1.0, 1.0, True, True),
                        }, _trunc),
    "signed_primitive": Entry("q-fold primitive of prod(x - y_i), optionally times (1 + lam|x - c|)", {
                            "q":   Param("int", 1, 1, 6),
                            "ys":  Param("floats", (0.0,)),
                            "lam": Param("float", 0.0, 0.0, 10.0),
                            "c":   Param("float", 0.0, -1.0, 1.0, True, True),
                        }, _signed_primitive),
    "abs_primitive":    Entry("q-fold primitive of |prod(x - y_i)|", {
                            "q":  Param("int", 1, 1, 6),
                            "ys": Param("floats", (0.0,)),
                        }, _abs_primitive),
    "op117":            Entry("x^5/20 - x^3/24", {}, _op117),
    "q3_family":        Entry("|x - y| (r=1) or (|x - y|^3 - |1 + y|^3) / 3 (r=3)", {
                            "y": Param("float", 0.0, -1.0, 1.0, True, True),
                            "r": Param("int", 1, 1, 3),
                        }, _q3_family),
    "endpoint_power":   Entry("(x + 1)^p", {"p": Param("float", 2.5, 0.0, 12.0, left_open=True)}, _endpoint_power),
    "blend":            Entry("f + lam g", {
                            "base":  Param("id", "exp"),
                            "other": Param("id", "abs"),
                            "lam":   Param("float", 0.1, -10.0, 10.0),
                        }, _blend),
}


def _coerce(entry_id: str, name: str, spec: Param, value):
    if spec.kind == "id":
        if value not in CATALOG or value == "blend":
            raise ValueError(f"{entry_id}: '{name}' must name a non-blend catalog entry, got {value!r}")
        return value
    if spec.kind == "floats":
        if isinstance(value, str):
            value = [v for v in value.split(",") if v.strip()]
        ys = tuple(float(v) for v in np.atleast_1d(value))
        # validated as a change collection
        ShapeConstraint(1, ys)
        return ys
    if spec.kind == "int":
        if float(value) != int(float(value)):
            raise ValueError(f"{entry_id}: '{name}' must be an integer, got {value!r}")
        value = int(float(value))
    else:
        value = float(value)
    lo, hi = spec.lo, spec.hi
    below = value <= lo if spec.left_open else value < lo
    above = value >= hi if spec.right_open else value > hi
    if below or above:
        left = "(" if spec.left_open else "["
        right = ")" if spec.right_open else "]"
        raise ValueError(f"{entry_id}: '{name}' = {value!r} outside {left}{lo:g}, {hi:g}{right}")
    return value


def get_function(id_: str, params: Optional[dict] = None) -> TestFunction:
    """Build a catalog entry; raises ValueError on unknown ids or invalid params."""
    if id_ not in CATALOG:
        raise ValueError(f"Unknown catalog id '{id_}'. Available: {list(CATALOG)}")
    entry = CATALOG[id_]
    params = dict(params or {})

    if id_ == "blend":
        base_params = {k[5:]: params.pop(k) for k in list(params) if k.startswith("base_")}
        other_params = {k[6:]: params.pop(k) for k in list(params) if k.startswith("other_")}
    unknown = set(params) - set(entry.params)
    if unknown:
        raise ValueError(f"{id_}: unknown params {sorted(unknown)}; accepted {sorted(entry.params)}")

    values = {
        name: _coerce(id_, name, spec, params.get(name, spec.default))
        for name, spec in entry.params.items()
    }
    if id_ == "blend":
        return entry.build(values["base"], values["other"], values["lam"], base_params, other_params)
    return entry.build(**values)


def list_catalog() -> list[dict]:
    """Catalog entries in registry order with default params and their shape classes."""
    rows = []
    for id_, entry in CATALOG.items():
        f = get_function(id_)
        rows.append({
            "id": id_,
            "description": entry.description,
            "params": {k: p.default for k, p in entry.params.items()},
            "shape_classes": [sc.label() for sc in f.shape_classes],
            "kink_points": list(f.kink_points),
            "r_max": f.r_max,
            "sobolev_order": f.sobolev_order,
        })
    return rows


def monotone_entries() -> list[TestFunction]:
    """Default-param entries asserted nondecreasing, (1, empty set)."""
    out = []
    for id_ in CATALOG:
        f = get_function(id_)
        if ShapeConstraint(1) in f.shape_classes:
            out.append(f)
    return out
