"""Fitting ideals of a matrix representation as explicit minors.

``Fitt^i`` of a matrix with ``rows`` rows is generated by its minors of
size ``rows - i``. Entries are linear forms in X0..X3 so each minor is a
form of degree ``rows - i``. Intended for inspection at small sizes; the
fiber classification never needs symbolic minors.
"""

import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .errors import FittingError
from .matrep import DEFAULT_SEED
from .poly import MultiPoly, format_poly, substitute

MAX_MINOR_SIZE = 6
MAX_UNLIMITED_COUNT = 20000


@dataclass
class MinorRequest:
    rep: object
    fitting_index: int
    limit: int = None
    seed: int = DEFAULT_SEED
    max_size: int = MAX_MINOR_SIZE

    def __post_init__(self):
        if self.fitting_index < 0:
            raise ValueError("fitting index must be >= 0")
        if self.limit is not None and self.limit < 1:
            raise ValueError("limit must be >= 1")

    @property
    def size(self):
        return self.rep.rows - self.fitting_index


@dataclass
class FittingResult:
    generators: list
    index_sets: list = field(default_factory=list)
    total: int = 0
    truncated: bool = False
    unit_ideal: bool = False
    seed: int = None

    def as_dict(self):
        if self.unit_ideal:
            return {"unit_ideal": True, "generators": []}
        return {
            "unit_ideal": False,
            "total_minors": self.total,
            "truncated": self.truncated,
            "seed": self.seed if self.truncated else None,
            "generators": [
                {"rows": list(r), "cols": list(c), "poly": format_poly(g)}
                for (r, c), g in zip(self.index_sets, self.generators)],
        }


def symbolic_det(entries):
    """Determinant of a square matrix of polynomials by cofactor expansion.

    Expansion runs along rows with memoisation on the remaining column set,
    so an n x n determinant costs O(n 2^n) polynomial products.
    """
    n = len(entries)
    if n == 0:
        raise ValueError("empty determinant")
    ring, fld = entries[0][0].ring, entries[0][0].field
    memo = {}

    def det(row, cols):
        if row == n:
            return MultiPoly.constant(ring, 1, fld)
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = MultiPoly.zero(ring, fld)
        for pos, c in enumerate(cols):
            a = entries[row][c]
            if not a:
                continue
            sub = det(row + 1, cols[:pos] + cols[pos + 1:])
            term = a * sub
            total = total - term if pos % 2 else total + term
        memo[key] = total
        return total

    return det(0, tuple(range(n)))


def _unrank_combination(n, k, r):
    """The r-th k-subset of range(n) in lexicographic order."""
    out = []
    x = 0
    for i in range(k, 0, -1):
        while comb(n - x - 1, i - 1) <= r:
            r -= comb(n - x - 1, i - 1)
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


def _index_sets(rows, cols, size, limit, seed):
    nr, nc = comb(rows, size), comb(cols, size)
    total = nr * nc
    if limit is None or total <= limit:
        if limit is None and total > MAX_UNLIMITED_COUNT:
            raise FittingError(f"{total} minors requested without a limit "
                               f"(cap {MAX_UNLIMITED_COUNT}); pass a limit")
        sets = [(r, c) for r in combinations(range(rows), size)
                for c in combinations(range(cols), size)]
        return sets, total, False
    rng = random.Random(seed)
    picks = sorted(rng.sample(range(total), limit))
    sets = [(_unrank_combination(rows, size, p // nc), _unrank_combination(cols, size, p % nc))
            for p in picks]
    return sets, total, True


def fitting_generators(req):
    """Nonzero minors of size ``rows - i`` of the matrix of linear forms."""
    rep = req.rep
    size = req.size
    if req.fitting_index >= rep.rows:
        return FittingResult([], unit_ideal=True)
    if size > req.max_size:
        raise FittingError(f"minor size {size} exceeds the maximum {req.max_size}")
    if size > rep.cols:
        return FittingResult([], total=0)
    forms = rep.linear_forms()
    sets, total, truncated = _index_sets(rep.rows, rep.cols, size, req.limit, req.seed)
    gens, kept = [], []
    for rs, cs in sets:
        m = symbolic_det([[forms[i][j] for j in cs] for i in rs])
        if m:
            gens.append(m)
            kept.append((rs, cs))
    return FittingResult(gens, kept, total, truncated, seed=req.seed)


def pullback_fitting(phi, req):
    """Generators of the pulled-back Fitting ideal in the parameter ring."""
    res = fitting_generators(req)
    if res.unit_ideal:
        return res
    gens, kept = [], []
    for g, idx in zip(res.generators, res.index_sets):
        q = substitute(g, phi.polys)
        if q:
            gens.append(q)
            kept.append(idx)
    return FittingResult(gens, kept, res.total, res.truncated, seed=res.seed)


__all__ = ["MinorRequest", "FittingResult", "fitting_generators", "pullback_fitting",
           "symbolic_det"]
