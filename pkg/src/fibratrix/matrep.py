"""Parameterizations, graded syzygies and matrix representations.

A matrix representation in degree ``nu`` has one row per monomial of degree
``nu`` and one column per basis syzygy ``(g0, g1, g2, g3)`` of degree
``nu + d``; the column holds the coefficients of ``g0*X0 + ... + g3*X3``.
It is stored as four scalar matrices ``A0..A3`` with ``M = sum Xi*Ai``.
"""

import random
from dataclasses import dataclass, field as dc_field

from .errors import DegenerateParameterizationError, ParameterizationError
from .fields import QQ
from .linalg import Matrix, column_space, left_kernel, rank, right_kernel
from .poly import (IMPLICIT, TRIANGULAR, MultiPoly, add_degrees,
                   basis_index, basis_size, monomial_basis, multivariate_gcd,
                   parse_poly, ring_from_kind)

DEFAULT_SEED = 20130601


@dataclass(eq=False)
class Parameterization:
    """Four homogeneous forms of a common (bi)degree over an exact field.

    Construction checks homogeneity and equal degrees only; the remaining
    hypotheses are reported by :func:`validate`.
    """

    polys: tuple
    ring: object = TRIANGULAR
    field: object = QQ
    degree: object = None
    _cache: dict = dc_field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.polys = tuple(self.polys)
        if len(self.polys) != 4:
            raise ParameterizationError(f"need exactly 4 polynomials, got {len(self.polys)}")
        degs = []
        for i, p in enumerate(self.polys):
            if p.ring != self.ring:
                raise ParameterizationError(f"f{i} lives in {p.ring}, expected {self.ring}")
            if p.is_zero():
                continue
            d = p.homogeneous_degree()
            if d is None:
                raise ParameterizationError(f"f{i} = {p} is not homogeneous")
            degs.append(d)
        if not degs:
            raise ParameterizationError("all four polynomials are zero")
        if len(set(degs)) != 1:
            raise ParameterizationError(f"degree mismatch: {degs}")
        d = degs[0]
        if self.degree is not None and self.degree != d:
            raise ParameterizationError(f"declared degree {self.degree} but forms have degree {d}")
        self.degree = d
        if self.ring.kind == "tensor":
            if min(d) < 1:
                raise ParameterizationError(f"bidegree {d} must be at least (1, 1)")
        elif d < 1:
            raise ParameterizationError("degree must be at least 1")

    @classmethod
    def from_strings(cls, texts, ring="triangular", field=QQ):
        ring = ring_from_kind(ring) if isinstance(ring, str) else ring
        return cls(tuple(parse_poly(t, ring, field) for t in texts), ring, field)

    @property
    def is_tensor(self):
        return self.ring.kind == "tensor"

    def __call__(self, point):
        """Image of a source point, as a coordinate tuple (not normalized)."""
        coords = point.coords if hasattr(point, "coords") else tuple(point)
        return tuple(p(*coords) for p in self.polys)

    def __repr__(self):
        return f"Parameterization(({', '.join(map(str, self.polys))}), {self.ring.kind}, {self.field!r})"

    def cached(self, key, build):
        # duplicate builds are harmless: results are deterministic
        try:
            return self._cache[key]
        except KeyError:
            value = self._cache[key] = build()
            return value


# ---------------------------------------------------------------------------
# validation

@dataclass
class ValidationReport:
    checks: list
    warnings: list

    @property
    def ok(self):
        """True when no fatal check failed (birationality is only a warning)."""
        return all(c["status"] != "fail" for c in self.checks)

    def as_dict(self):
        return {"ok": self.ok, "checks": self.checks, "warnings": self.warnings}


def coefficient_matrix(phi):
    """4 x dim(S_d) matrix of the coefficients of f0..f3."""
    return Matrix.from_rows([p.coefficient_vector(phi.degree) for p in phi.polys],
                            phi.field, cols=basis_size(phi.ring, phi.degree))


def validate(phi, seed=DEFAULT_SEED, trials=5):
    """Check the standing hypotheses as far as they are decidable.

    Returns a report; nothing is raised. The birationality check classifies
    the fiber over the images of ``trials`` random parameter points and
    expects a single preimage each time.
    """
    checks = [{"name": "homogeneous_equal_degree", "status": "pass",
               "detail": f"degree {phi.degree}"}]
    warnings = []

    r = rank(coefficient_matrix(phi))
    if r == 4:
        checks.append({"name": "linear_independence", "status": "pass", "detail": "rank 4"})
    else:
        checks.append({"name": "linear_independence", "status": "fail",
                       "detail": f"coefficient matrix has rank {r} < 4"})

    g = multivariate_gcd(phi.polys)
    if g.is_constant():
        checks.append({"name": "constant_gcd", "status": "pass", "detail": "gcd = 1"})
    else:
        checks.append({"name": "constant_gcd", "status": "fail",
                       "detail": f"common factor {g}: positive-dimensional base locus"})

    if all(c["status"] == "pass" for c in checks):
        from .fibers import ProjPoint, classify
        rng = random.Random(seed)
        bad = []
        done = 0
        attempts = 0
        while done < trials and attempts < 10 * trials:
            attempts += 1
            s = random_source_point(phi, rng)
            image = phi(s)
            if not any(image):
                continue
            done += 1
            rep = classify(phi, ProjPoint(image))
            if rep.kind != "finite" or rep.degree != 1:
                bad.append((str(s), rep.kind, rep.degree))
        if bad:
            checks.append({"name": "birationality", "status": "warn",
                           "detail": f"fibers of degree != 1 over random points: {bad}"})
            warnings.append("birationality check failed; classification guarantees may not hold")
        else:
            checks.append({"name": "birationality", "status": "probabilistic pass",
                           "detail": f"{done} random fibers of degree 1"})
    else:
        checks.append({"name": "birationality", "status": "skipped",
                       "detail": "structural checks failed"})
    return ValidationReport(checks, warnings)


def random_source_point(phi, rng, bound=20):
    from .fibers import ProjPoint
    while True:
        if phi.is_tensor:
            c = [rng.randint(-bound, bound) for _ in range(4)]
            if any(c[:2]) and any(c[2:]):
                return ProjPoint(c, field=phi.field, split=2)
        else:
            c = [rng.randint(-bound, bound) for _ in range(3)]
            if any(c):
                return ProjPoint(c, field=phi.field)


# ---------------------------------------------------------------------------
# syzygies and matrix representations

def multiplication_matrix(phi, nu):
    """Matrix of (S_nu)^4 -> S_{nu+d}, (g0..g3) -> sum gi*fi.

    Column ``i*n + k`` is the coefficient vector of ``basis[k] * f_i``.
    """
    ring = phi.ring
    src = monomial_basis(ring, nu)
    tgt_deg = add_degrees(nu, phi.degree)
    idx = basis_index(ring, tgt_deg)
    zero = phi.field.zero
    cols = []
    for f in phi.polys:
        for m in src:
            col = [zero] * len(idx)
            for e, c in f.terms.items():
                col[idx[tuple(a + b for a, b in zip(e, m))]] = c
            cols.append(col)
    return Matrix.from_columns(cols, len(idx), phi.field)


def syzygy_graded_basis(phi, nu):
    """Basis of the degree-``nu`` syzygies as columns of stacked (g0|g1|g2|g3)."""
    return phi.cached(("syz", nu), lambda: right_kernel(multiplication_matrix(phi, nu)))


@dataclass(eq=False)
class MatrixRep:
    index: object
    rows: int
    cols: int
    A: tuple
    row_labels: tuple
    phi: Parameterization
    below_threshold: bool = False

    def evaluate(self, point):
        """Scalar matrix sum(p_i * A_i) at a coordinate tuple."""
        coords = point.coords if hasattr(point, "coords") else tuple(point)
        if len(coords) != 4:
            raise ValueError("target points have four coordinates")
        F = self.phi.field
        coords = [F(c) for c in coords]
        data = []
        zero = F.zero
        for i in range(self.rows):
            rows_i = [a.data[i] for a in self.A]
            data.append([sum((c * r[j] for c, r in zip(coords, rows_i) if c), zero)
                         for j in range(self.cols)])
        return Matrix(self.rows, self.cols, data, F)

    def syzygies(self):
        """The columns as 4-tuples of polynomials (g0..g3) in S_nu."""
        out = []
        for j in range(self.cols):
            out.append(tuple(MultiPoly.from_vector(self.phi.ring, self.index, a.column(j),
                                                   self.phi.field) for a in self.A))
        return out

    def linear_forms(self):
        """Entries as polynomials in X0..X3 (rows x cols nested lists)."""
        F = self.phi.field
        out = []
        for i in range(self.rows):
            row = []
            for j in range(self.cols):
                terms = {}
                for k, a in enumerate(self.A):
                    e = [0, 0, 0, 0]
                    e[k] = 1
                    terms[tuple(e)] = a[i, j]
                row.append(MultiPoly(IMPLICIT, terms, F))
            out.append(row)
        return out


def build_matrix_rep(phi, nu):
    """Matrix representation of ``phi`` in degree ``nu`` (cached per phi)."""
    if phi.is_tensor:
        if not (isinstance(nu, tuple) and len(nu) == 2):
            raise ValueError("tensor parameterizations need a bidegree index (nu1, nu2)")
        below = not region_admissible(phi.degree, nu)
    else:
        if isinstance(nu, tuple):
            raise ValueError("triangular parameterizations need an integer index")
        below = nu < compute_nu0(phi).nu0

    def build():
        K = syzygy_graded_basis(phi, nu)
        n = basis_size(phi.ring, nu)
        blocks = tuple(
            Matrix(n, K.cols, [K.row(i * n + r) for r in range(n)], phi.field)
            for i in range(4))
        return MatrixRep(nu, n, K.cols, blocks, monomial_basis(phi.ring, nu), phi, below)

    return phi.cached(("rep", nu), build)


# ---------------------------------------------------------------------------
# saturation and the regularity threshold

def ideal_piece(phi, mu):
    """Canonical basis (columns) of I_mu = span{monomial * f_i}."""
    if mu < phi.degree:
        return Matrix(basis_size(phi.ring, mu), 0, [[] for _ in range(basis_size(phi.ring, mu))],
                      phi.field)
    return phi.cached(("I", mu), lambda: column_space(multiplication_matrix(phi, mu - phi.degree)))


def saturation_piece(phi, mu):
    """Basis of the degree-``mu`` part of the saturation of I, as polynomials.

    F is in the saturation iff F * m lies in I for every monomial m of degree
    ``N = max(0, 3d - 2 - mu)``; beyond degree 3d - 3 the ideal and its
    saturation agree, so this exponent is always sufficient.
    """
    if phi.is_tensor:
        raise NotImplementedError("saturation is only implemented for the triangular ring")
    if mu < 0:
        raise ValueError("degree must be nonnegative")

    def build():
        d = phi.degree
        ring = phi.ring
        N = max(0, 3 * d - 2 - mu)
        D = mu + N
        if N == 0:
            B = ideal_piece(phi, mu)
            return [MultiPoly.from_vector(ring, mu, c, phi.field) for c in B.columns()]
        # functionals vanishing on I_D
        lam = left_kernel(ideal_piece(phi, D)).columns()
        src = monomial_basis(ring, mu)
        if not lam:
            basis = [[1 if i == j else 0 for i in range(len(src))] for j in range(len(src))]
            return [MultiPoly.from_vector(ring, mu, v, phi.field) for v in basis]
        idx = basis_index(ring, D)
        rows = []
        for m in monomial_basis(ring, N):
            shifted = [idx[tuple(a + b for a, b in zip(e, m))] for e in src]
            for l in lam:
                rows.append([l[k] for k in shifted])
        K = right_kernel(Matrix.from_rows(rows, phi.field, cols=len(src)))
        return [MultiPoly.from_vector(ring, mu, c, phi.field) for c in K.columns()]

    return phi.cached(("sat", mu), build)


@dataclass
class SatInfo:
    indeg_sat: object
    nu0: object
    base_locus_degree: object
    sat_pieces: dict

    @property
    def base_locus_empty(self):
        return self.indeg_sat == 0


def compute_nu0(phi):
    """Threshold index from the initial degree of the saturated base ideal.

    For tensor parameterizations returns the default corner (d1 - 1, 2*d2 - 1)
    with the saturation fields left empty.
    """
    if phi.is_tensor:
        d1, d2 = phi.degree
        return SatInfo(None, (d1 - 1, 2 * d2 - 1), None, {})

    def build():
        d = phi.degree
        if rank(coefficient_matrix(phi)) == 2:
            raise DegenerateParameterizationError(
                "the base ideal is a complete intersection of two forms: the image is not a surface")
        indeg = None
        pieces = {}
        for mu in range(d + 1):
            basis = saturation_piece(phi, mu)
            if mu < d:
                pieces[mu] = basis
            if basis and indeg is None:
                indeg = mu
                if mu == d:
                    break
        if indeg is None:
            raise DegenerateParameterizationError("saturation has no element of degree <= d")
        if indeg == 0:
            deg_base = None
        else:
            D = 3 * d - 2
            deg_base = basis_size(phi.ring, D) - ideal_piece(phi, D).cols
        return SatInfo(indeg, 2 * d - 2 - indeg, deg_base, pieces)

    return phi.cached("nu0", build)


def region_admissible(d, nu):
    """True iff bidegree ``nu`` lies outside the excluded region for bidegree ``d``."""
    d1, d2 = d
    n1, n2 = nu
    in_region = (n1 <= d1 - 2) or (n2 <= d2 - 2) or (n1 <= 2 * d1 - 2 and n2 <= 2 * d2 - 2)
    return not in_region


def default_index(phi):
    """Working index: max(nu0, 1) for triangular, (d1-1, 2*d2-1) for tensor."""
    if phi.is_tensor:
        d1, d2 = phi.degree
        return (d1 - 1, 2 * d2 - 1)
    return max(compute_nu0(phi).nu0, 1)


def binom2(n):
    """n(n-1)/2, i.e. C(n, 2) extended polynomially to all integers."""
    return n * (n - 1) // 2
