"""Acceptance criteria 1-10.

Each test records a PASS/FAIL line; the lines are printed in the pytest
terminal summary and by running this file directly.
"""

import random
import sys
from math import comb

import pytest

from fibratrix import (IMPLICIT, Matrix, MinorRequest, MultiPoly, Parameterization, ProjPoint,
                       build_matrix_rep, classify_fiber, classify_fiber_bigraded, compute_nu0,
                       corank_at, fiber_curve, fitting_generators, format_poly, membership,
                       monomial_basis, multivariate_gcd, parse_poly, pullback_fitting, rank,
                       region_admissible, unique_preimage, validate)
from fibratrix.fibers import preimage_index
from fibratrix.matrep import random_source_point
from fibratrix.poly import poly_eval

from conftest import PLANE, QUADRIC, ROMAN, SPHERE, random_forms
from oracles import fiber_degree_oracle, naive_rank
from test_linalg import displayed_sphere_m1

RESULTS = {}
TITLES = {
    1: "sphere M_1 is 3x4 with coranks 0, 1, 2 at the reference points",
    2: "sphere threshold: indeg_sat=1, nu0=1, base_locus_degree=2",
    3: "sphere line fiber over (1:0:0:-1): curve, delta=1, c=1, N_res=0, h=s0",
    4: "gcd of the 3x3 minors of sphere M_1 is X0^2-X1^2-X2^2-X3^2",
    5: "pullbacks: Fitt^0 -> 0, Fitt^(rows-1) -> I_d",
    6: "preimage round trip on sphere and a random cubic (100 points each)",
    7: "fiber degree equals the resultant oracle root count (>= 20 points)",
    8: "plane example: two line fibers, 50 random plane points finite",
    9: "bilinear quadric: region, finite fiber, preimage, membership",
    10: "property suites",
}


def record(n, ok, detail=""):
    RESULTS[n] = (ok, detail)
    print(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}: {TITLES[n]}" + (f" [{detail}]" if detail else ""))
    assert ok, detail


def sphere():
    return Parameterization.from_strings(SPHERE)


def validated_cubic():
    """First seeded random cubic that passes validation and has no base points."""
    for seed in range(100):
        phi = Parameterization.from_strings(random_forms(seed, 3))
        if validate(phi).ok and compute_nu0(phi).base_locus_empty:
            return phi, random_forms(seed, 3)
    raise RuntimeError("no validated cubic found")


REF = [(0, 0, 0, 1), (1, 0, 0, 1), (1, 0, 0, -1)]


def test_criterion_01_sphere_matrix():
    phi = sphere()
    rep = build_matrix_rep(phi, 1)
    ours = [rep.rows - rank(rep.evaluate(P)) for P in REF]
    displayed = [3 - naive_rank(displayed_sphere_m1(P)) for P in REF]
    ok = (rep.rows, rep.cols) == (3, 4) and ours == [0, 1, 2] == displayed
    record(1, ok, f"shape {rep.rows}x{rep.cols}, coranks {ours}, displayed {displayed}")


def test_criterion_02_threshold():
    info = compute_nu0(sphere())
    got = (info.indeg_sat, info.nu0, info.base_locus_degree)
    record(2, got == (1, 1, 2), f"got {got}")


def test_criterion_03_line_fiber():
    phi = sphere()
    rep = classify_fiber(phi, (1, 0, 0, -1))
    h = fiber_curve(phi, (1, 0, 0, -1))
    got = (rep.kind, rep.curve_degree, rep.hilbert_constant, rep.residual_degree, format_poly(h))
    record(3, got == ("curve", 1, 1, 0, "s0"), f"got {got}")


def test_criterion_04_implicit_equation():
    res = fitting_generators(MinorRequest(build_matrix_rep(sphere(), 1), 0))
    g = multivariate_gcd(res.generators)
    target = parse_poly("X0^2-X1^2-X2^2-X3^2", IMPLICIT)
    record(4, res.total == 4 and g == target,
           f"{res.total} minors, {len(res.generators)} nonzero, gcd {format_poly(g)}")


def test_criterion_05_pullbacks():
    phi = sphere()
    rep = build_matrix_rep(phi, 1)
    zero = pullback_fitting(phi, MinorRequest(rep, 0)).generators
    top = pullback_fitting(phi, MinorRequest(rep, rep.rows - 1)).generators
    vecs = [g.coefficient_vector(phi.degree) for g in top]
    ivecs = [f.coefficient_vector(phi.degree) for f in phi.polys]
    span_ok = rank(Matrix.from_rows(vecs)) == rank(Matrix.from_rows(ivecs)) \
        == rank(Matrix.from_rows(vecs + ivecs)) == 4
    record(5, zero == [] and span_ok, f"Fitt^0 pullback size {len(zero)}, top span equal {span_ok}")


def _round_trip(phi, n, seed):
    rng = random.Random(seed)
    skipped = bad = 0
    for _ in range(n):
        s = random_source_point(phi, rng)
        image = phi(s)
        if not any(image):
            skipped += 1
            continue
        rep = classify_fiber(phi, ProjPoint(image, field=phi.field))
        if rep.kind != "finite" or rep.degree < 1:
            skipped += 1
            continue
        if rep.degree == 1:
            if unique_preimage(phi, ProjPoint(image)) != s:
                bad += 1
        else:
            skipped += 1
    return skipped, bad


def test_criterion_06_preimage_round_trip():
    cubic, _ = validated_cubic()
    out = {name: _round_trip(phi, 100, 606) for name, phi in (("sphere", sphere()), ("cubic", cubic))}
    ok = all(bad == 0 and skipped < 10 for skipped, bad in out.values())
    record(6, ok, ", ".join(f"{k}: skipped {s}, mismatches {b}" for k, (s, b) in out.items()))


def test_criterion_07_oracle_equivalence():
    roman = Parameterization.from_strings(ROMAN)
    cubic, cubic_texts = validated_cubic()
    rng = random.Random(707)
    cases = [(roman, ROMAN, (1, 0, 0, 0))]
    cases += [(roman, ROMAN, roman((1, a, 0))) for a in (2, -3)]
    cases += [(roman, ROMAN, roman((a, 0, 1))) for a in (5,)]
    cases += [(roman, ROMAN, roman(random_source_point(roman, rng))) for _ in range(8)]
    cases += [(cubic, cubic_texts, cubic(random_source_point(cubic, rng))) for _ in range(10)]
    mismatches = []
    degrees = []
    for phi, texts, P in cases:
        rep = classify_fiber(phi, P)
        assert rep.kind == "finite"
        ref = fiber_degree_oracle(texts, P)
        degrees.append(rep.degree)
        if rep.degree != ref:
            mismatches.append((str(ProjPoint(P)), rep.degree, ref))
    record(7, len(cases) >= 20 and not mismatches,
           f"{len(cases)} points, degrees {sorted(set(degrees))}, mismatches {mismatches}")


def test_criterion_08_plane_example():
    phi = Parameterization.from_strings(PLANE)
    curves = []
    for P, h in (((1, 0, 0, 0), "s0"), ((0, 1, 0, 0), "s1")):
        rep = classify_fiber(phi, P)
        curves.append(rep.kind == "curve" and rep.curve_degree == 1
                      and format_poly(fiber_curve(phi, P)) == h)
    rng = random.Random(808)
    kinds = []
    while len(kinds) < 50:
        a, b, c = (rng.randint(-30, 30) for _ in range(3))
        if c == 0 or not (a or b):
            continue
        kinds.append(classify_fiber(phi, (a, b, c, c)).kind)
    finite = kinds.count("finite")
    record(8, all(curves) and finite == 50, f"line fibers {curves}, finite {finite}/50")


def test_criterion_09_bilinear_quadric():
    phi = Parameterization.from_strings(QUADRIC, ring="tensor")
    region = [region_admissible((1, 1), nu) for nu in ((0, 0), (0, 1), (1, 0), (1, 1))]
    rep = classify_fiber_bigraded(phi, (1, 0, 0, 0))
    pre = str(unique_preimage(phi, (1, 0, 0, 0)))
    mem = membership(phi, (1, 0, 0, 1))
    ok = region == [False, True, True, True] and (rep.kind, rep.degree) == ("finite", 1) \
        and pre == "((1:0),(1:0))" and mem is False
    record(9, ok, f"region {region}, fiber {rep.kind}/{rep.degree}, preimage {pre}, membership {mem}")


def _props():
    failures = []
    phi = sphere()
    roman = Parameterization.from_strings(ROMAN)
    cubic, _ = validated_cubic()
    quadric = Parameterization.from_strings(QUADRIC, ring="tensor")
    plane = Parameterization.from_strings(PLANE)

    # finite fibers: corank constant over nu, nu+1, nu+2
    for p in (phi, roman, cubic):
        nu0 = max(compute_nu0(p).nu0, 1)
        rng = random.Random(1010)
        pts = [p(random_source_point(p, rng)) for _ in range(5)]
        if p is roman:
            pts += [(1, 0, 0, 0), roman((1, 2, 0))]
        for P in pts:
            if classify_fiber(p, P).kind != "finite":
                continue
            rs = [corank_at(p, nu, P) for nu in (nu0, nu0 + 1, nu0 + 2)]
            if len(set(rs)) != 1:
                failures.append(f"corank not constant at {P}: {rs}")

    # affine growth with slope delta on the line fiber, nu0-1 .. nu0+2
    nu0 = compute_nu0(phi).nu0
    growth = [corank_at(phi, nu, (1, 0, 0, -1)) for nu in range(nu0 - 1, nu0 + 3)]
    if growth != [nu + 1 for nu in range(nu0 - 1, nu0 + 3)]:
        failures.append(f"line fiber coranks {growth}")

    # no full corank over 200 fuzzed points
    rng = random.Random(1011)
    fuzz = [phi(random_source_point(phi, rng)) for _ in range(100)]
    fuzz += [tuple(rng.randint(-4, 4) for _ in range(4)) for _ in range(100)]
    fuzz = [P for P in fuzz if any(P)]
    for nu in (nu0, nu0 + 1):
        for P in fuzz + [(1, 0, 0, -1)]:
            if corank_at(phi, nu, P) >= comb(nu + 2, 2):
                failures.append(f"full corank at {P}, nu={nu}")
    if len(fuzz) < 200:
        failures.append("fewer than 200 fuzz points")

    # curve fibers: d * deg(h) <= base locus degree
    for p, pts in ((phi, [(1, 0, 0, -1)]), (plane, [(1, 0, 0, 0), (0, 1, 0, 0)])):
        for P in pts:
            rep = classify_fiber(p, P)
            if rep.kind == "curve":
                bound = compute_nu0(p).base_locus_degree
                if p.degree * rep.curve_equation.total_degree() > bound:
                    failures.append(f"degree bound fails at {P}")

    # left-kernel membership of the monomial evaluation vector at known preimages
    for p in (phi, cubic, quadric):
        nu = preimage_index(p)
        rep = build_matrix_rep(p, nu)
        basis = monomial_basis(p.ring, nu)
        rng = random.Random(1012)
        for _ in range(10):
            s = random_source_point(p, rng)
            image = p(s)
            if not any(image):
                continue
            v = [poly_eval(MultiPoly(p.ring, {m: 1}), s.coords) for m in basis]
            if any(x != 0 for x in rep.evaluate(image).transpose() @ v):
                failures.append(f"kernel membership fails at {s}")

    # syzygy identity on every matrix built above
    built = 0
    for p in (phi, roman, cubic, quadric, plane):
        for key, rep in list(p._cache.items()):
            if not (isinstance(key, tuple) and key[0] == "rep"):
                continue
            built += 1
            for g in rep.syzygies():
                total = MultiPoly.zero(p.ring, p.field)
                for gi, fi in zip(g, p.polys):
                    total = total + gi * fi
                if total:
                    failures.append(f"syzygy identity fails for nu={rep.index}")
    return failures, built


def test_criterion_10_properties():
    failures, built = _props()
    record(10, not failures, f"{built} matrices checked; " + ("; ".join(failures[:3]) or "no failures"))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
