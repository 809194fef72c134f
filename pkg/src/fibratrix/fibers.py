"""Fibers of the graph projection, read off from coranks of evaluated
matrix representations.

At a target point P the corank of M_nu(P) is the Hilbert function of the
fiber over P in degree nu. Finite fibers give a constant corank (their
degree); one-dimensional fibers give a corank growing linearly in nu with
slope the degree of the curve part.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BasePointError, MathError, PreimageError
from .fields import QQ, format_elem
from .linalg import left_kernel, rank
from .matrep import binom2, build_matrix_rep, compute_nu0, default_index
from .poly import basis_index, format_poly, multivariate_gcd


class ProjPoint:
    """Point of a projective space (or of P1 x P1 when ``split=2``).

    Coordinates are normalized so the first nonzero entry of each factor is 1.
    """

    __slots__ = ("coords", "split", "field")

    def __init__(self, coords, field=QQ, split=None):
        coords = [field(c) for c in coords]
        groups = [coords] if split is None else [coords[:split], coords[split:]]
        out = []
        for g in groups:
            lead = next((c for c in g if c), None)
            if lead is None:
                raise ValueError("projective point with all coordinates zero")
            out.extend(c / lead for c in g)
        self.coords = tuple(out)
        self.split = split
        self.field = field

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return self.coords == other.coords and self.split == other.split

    def __hash__(self):
        return hash((self.coords, self.split))

    def __str__(self):
        if self.split is None:
            return "(" + ":".join(format_elem(c) for c in self.coords) + ")"
        a, b = self.coords[:self.split], self.coords[self.split:]
        return ("((" + ":".join(format_elem(c) for c in a) + "),("
                + ":".join(format_elem(c) for c in b) + "))")

    def __repr__(self):
        return f"ProjPoint{self}"


_NUM = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_point(text, field=QQ, arity=4, split=None):
    """Parse ``"a:b:c:d"`` (entries integers or ``p/q``).

    Tensor source points may be written ``"a:b;c:d"``. Anything that is not
    a rational number (complex entries, floats) is rejected.
    """
    text = text.strip().strip("()")
    parts = re.split(r"[:;,]", text.replace(")(", ";").replace("),(", ";"))
    parts = [p.strip().strip("()") for p in parts]
    if len(parts) != arity:
        raise ValueError(f"point {text!r} needs {arity} coordinates, got {len(parts)}")
    vals = []
    for p in parts:
        m = _NUM.match(p)
        if not m:
            raise ValueError(f"coordinate {p!r} is not an exact rational number")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ValueError(f"zero denominator in {p!r}")
        vals.append(Fraction(num, den))
    return ProjPoint(vals, field=field, split=split)


@dataclass
class FiberReport:
    kind: str
    coranks: list
    degree: int = None
    curve_degree: int = None
    bidegree: tuple = None
    hilbert_constant: int = None
    residual_degree: int = None
    curve_equation: object = None
    below_threshold: bool = False
    warnings: list = field(default_factory=list)

    def as_dict(self):
        d = {"kind": self.kind,
             "coranks": [[list(nu) if isinstance(nu, tuple) else nu, r] for nu, r in self.coranks]}
        if self.kind == "finite":
            d["degree"] = self.degree
        if self.kind == "curve":
            if self.bidegree is not None:
                d["bidegree"] = list(self.bidegree)
            else:
                d["curve_degree"] = self.curve_degree
                d["residual_degree"] = self.residual_degree
            d["hilbert_constant"] = self.hilbert_constant
            d["curve_equation"] = (format_poly(self.curve_equation)
                                   if self.curve_equation is not None else None)
        d["below_threshold"] = self.below_threshold
        d["warnings"] = list(self.warnings)
        return d


def _as_point(phi, P):
    if isinstance(P, ProjPoint):
        return P
    return ProjPoint(P, field=phi.field)


def evaluate_rep(rep, P):
    return rep.evaluate(P)


def corank_at(phi, nu, P):
    """rows - rank of the degree-``nu`` matrix representation evaluated at P."""
    rep = build_matrix_rep(phi, nu)
    return rep.rows - rank(rep.evaluate(_as_point(phi, P)))


def membership(phi, P):
    """True iff P lies on the surface (corank drop at the working index)."""
    return corank_at(phi, default_index(phi), P) > 0


def classify(phi, P, nu=None):
    if phi.is_tensor:
        return classify_fiber_bigraded(phi, P)
    return classify_fiber(phi, P, nu)


def classify_fiber(phi, P, nu=None):
    """Characters of the fiber over P for a triangular parameterization.

    Compares the coranks in degrees nu and nu + 1; the default nu is
    max(nu0, 1).
    """
    P = _as_point(phi, P)
    nu0 = compute_nu0(phi).nu0
    if nu is None:
        nu = default_index(phi)
    below = nu < nu0
    warnings = ["index below the regularity threshold; no guarantees"] if below else []
    r = corank_at(phi, nu, P)
    coranks = [(nu, r)]
    if r == 0:
        return FiberReport("off_surface", coranks, below_threshold=below, warnings=warnings)
    if r <= nu:
        return FiberReport("finite", coranks, degree=r, below_threshold=below, warnings=warnings)
    r1 = corank_at(phi, nu + 1, P)
    coranks.append((nu + 1, r1))
    if r1 <= r:
        if r1 < r:
            warnings.append("corank decreased with the index; hypotheses likely violated")
        return FiberReport("finite", coranks, degree=r, below_threshold=below, warnings=warnings)
    delta = r1 - r
    c = r - delta * nu
    n_res = binom2(delta - 1) + c - 1
    if n_res < 0:
        warnings.append("negative residual degree: hypotheses likely violated")
    h = fiber_curve(phi, P)
    return FiberReport("curve", coranks, curve_degree=delta, hilbert_constant=c,
                       residual_degree=n_res, curve_equation=h, below_threshold=below,
                       warnings=warnings)


def classify_fiber_bigraded(phi, P):
    """Fiber characters for a tensor-product parameterization.

    Compares coranks at (d1-1, 2d2-1), (d1, 2d2-1) and (d1-1, 2d2).
    """
    P = _as_point(phi, P)
    d1, d2 = phi.degree
    base = (d1 - 1, 2 * d2 - 1)
    r = corank_at(phi, base, P)
    coranks = [(base, r)]
    if r == 0:
        return FiberReport("off_surface", coranks)
    r1 = corank_at(phi, (d1, 2 * d2 - 1), P)
    r2 = corank_at(phi, (d1 - 1, 2 * d2), P)
    coranks += [((d1, 2 * d2 - 1), r1), ((d1 - 1, 2 * d2), r2)]
    e1, e2 = r1 - r, r2 - r
    warnings = []
    if e1 < 0 or e2 < 0:
        warnings.append("corank decreased with the index; hypotheses likely violated")
    if e1 <= 0 and e2 <= 0:
        return FiberReport("finite", coranks, degree=r, warnings=warnings)
    c = r - e1 * base[0] - e2 * base[1]
    h = fiber_curve(phi, P)
    return FiberReport("curve", coranks, bidegree=(e1, e2), hilbert_constant=c,
                       curve_equation=h, warnings=warnings)


def preimage_index(phi):
    """Index at which preimages are read off the left kernel."""
    if phi.is_tensor:
        d1, d2 = phi.degree
        return (d1, 2 * d2 - 1)
    return max(2 * phi.degree - 2, 1)


def unique_preimage(phi, P):
    """The single source point over P.

    The left kernel of M(P) at the preimage index is spanned by the vector of
    all basis monomials evaluated at the preimage; coordinates are ratios of
    its entries.
    """
    P = _as_point(phi, P)
    nu = preimage_index(phi)
    if phi.is_tensor:
        rep = classify_fiber_bigraded(phi, P)
        if rep.kind != "finite" or rep.degree != 1:
            raise PreimageError(f"fiber over {P} is not a single point ({rep.kind}, "
                                f"coranks {rep.coranks})")
    rep_m = build_matrix_rep(phi, nu)
    K = left_kernel(rep_m.evaluate(P))
    if K.cols != 1:
        if phi.is_tensor:
            raise PreimageError(f"corank ≠ 1 at ν={nu} (corank {K.cols})")
        raise PreimageError(f"corank ≠ 1 at ν=2d−2 (corank {K.cols} at ν={nu})")
    v = K.column(0)
    idx = basis_index(phi.ring, nu)
    if phi.is_tensor:
        s = _extract_tensor(v, idx, nu)
        split = 2
    else:
        s = _extract_triangular(v, idx, nu)
        split = None
    if s is None:
        raise MathError("internal error: kernel vector is not a monomial evaluation")
    S = ProjPoint(s, field=phi.field, split=split)
    image = phi(S)
    if not any(image) or ProjPoint(image, field=phi.field) != P:
        raise MathError(f"internal error: recovered {S} does not map to {P}")
    return S


def _extract_triangular(v, idx, nu):
    for i in range(3):
        top = [0, 0, 0]
        top[i] = nu
        if v[idx[tuple(top)]]:
            out = []
            for k in range(3):
                e = [0, 0, 0]
                e[i] = nu - 1
                e[k] += 1
                out.append(v[idx[tuple(e)]])
            return out
    return None


def _extract_tensor(v, idx, nu):
    n1, n2 = nu
    for i in range(2):
        for j in range(2):
            top = [0, 0, 0, 0]
            top[i] = n1
            top[2 + j] = n2
            if not v[idx[tuple(top)]]:
                continue
            s = []
            for k in range(2):
                e = list(top)
                e[i] -= 1
                e[k] += 1
                s.append(v[idx[tuple(e)]])
            t = []
            for k in range(2):
                e = list(top)
                e[2 + j] -= 1
                e[2 + k] += 1
                t.append(v[idx[tuple(e)]])
            return s + t
    return None


def fiber_curve(phi, P, pivot=None):
    """Equation of the unmixed one-dimensional part of the fiber over P.

    With l = x_j / p_j for the chosen coordinate j (default: the first
    nonzero one), returns the monic gcd of the forms f_i - p_i * l(f).
    A constant result (1) means the fiber has no curve component.
    """
    P = _as_point(phi, P)
    p = P.coords
    j = next(i for i, c in enumerate(p) if c) if pivot is None else pivot
    if not p[j]:
        raise ValueError(f"pivot coordinate {j} of {P} is zero")
    lf = phi.polys[j].scale(1 / p[j])
    forms = [phi.polys[i] - lf.scale(p[i]) for i in range(4)]
    if not any(forms):
        raise MathError("internal error: all shifted forms vanish (dependent forms?)")
    return multivariate_gcd(forms)


@dataclass
class LowDegreeSat:
    no_curve_fibers: bool
    pieces: list

    def as_dict(self):
        if self.no_curve_fibers:
            return {"marker": "no 1-dimensional fibers possible", "pieces": []}
        return {"pieces": [{"degree": mu, "basis": [format_poly(F) for F in basis]}
                           for mu, basis in self.pieces]}


def low_degree_sat_elements(phi):
    """Saturation elements of degree < d; each is divisible by every curve-fiber equation."""
    info = compute_nu0(phi)
    if info.base_locus_empty:
        return LowDegreeSat(True, [])
    pieces = [(mu, b) for mu, b in sorted(info.sat_pieces.items()) if b]
    return LowDegreeSat(False, pieces)


def pullback_classify(phi, s):
    """Image point of a source point and the fiber report over it."""
    coords = s.coords if isinstance(s, ProjPoint) else tuple(s)
    image = phi(coords)
    if not any(image):
        raise BasePointError(f"{s} is a base point of the parameterization")
    P = ProjPoint(image, field=phi.field)
    return P, classify(phi, P)
