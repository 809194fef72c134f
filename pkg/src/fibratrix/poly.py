"""Polynomial rings used throughout: bases of graded pieces, sparse
multivariate arithmetic, a small text parser, and exact multivariate gcd.

Exponent tuples are flat: ``(a0, a1, a2)`` in the triangular ring
``k[s0,s1,s2]``, ``(a0, a1, b0, b1)`` in the tensor ring ``k[s0,s1,t0,t1]``
and ``(e0, e1, e2, e3)`` in the implicit ring ``k[X0..X3]``.
"""

import re
from fractions import Fraction
from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .fields import QQ, format_elem


@dataclass(frozen=True)
class Ring:
    kind: str
    names: tuple

    @property
    def nvars(self):
        return len(self.names)

    def __repr__(self):
        return f"Ring({self.kind}: {','.join(self.names)})"


TRIANGULAR = Ring("triangular", ("s0", "s1", "s2"))
TENSOR = Ring("tensor", ("s0", "s1", "t0", "t1"))
IMPLICIT = Ring("implicit", ("X0", "X1", "X2", "X3"))

RINGS = {"triangular": TRIANGULAR, "tensor": TENSOR, "implicit": IMPLICIT}


def ring_from_kind(kind):
    try:
        return RINGS[kind]
    except KeyError:
        raise ValueError(f"unknown ring kind {kind!r}") from None


class PolySyntaxError(ValueError):
    def __init__(self, msg, pos, text=""):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos
        self.text = text


# ---------------------------------------------------------------------------
# monomial bases

def _compositions_desc(total, parts):
    """All tuples of ``parts`` naturals summing to ``total``, lex descending."""
    if parts == 1:
        return [(total,)]
    out = []
    for a in range(total, -1, -1):
        for rest in _compositions_desc(total - a, parts - 1):
            out.append((a,) + rest)
    return out


@lru_cache(maxsize=None)
def monomial_basis(ring, deg):
    """Ordered exponent tuples spanning the degree ``deg`` piece.

    Triangular: lex descending on (a0, a1). Tensor: ``deg = (n1, n2)``,
    descending on (a0, b0) with the s-part as the major key.
    """
    if ring.kind == "tensor":
        n1, n2 = deg
        if n1 < 0 or n2 < 0:
            return ()
        return tuple(a + b for a in _compositions_desc(n1, 2)
                     for b in _compositions_desc(n2, 2))
    if isinstance(deg, tuple):
        raise ValueError(f"{ring.kind} ring takes an integer degree")
    if deg < 0:
        return ()
    return tuple(_compositions_desc(deg, ring.nvars))


@lru_cache(maxsize=None)
def basis_index(ring, deg):
    return {m: i for i, m in enumerate(monomial_basis(ring, deg))}


def basis_size(ring, deg):
    if ring.kind == "tensor":
        return (deg[0] + 1) * (deg[1] + 1) if min(deg) >= 0 else 0
    return comb(deg + ring.nvars - 1, ring.nvars - 1) if deg >= 0 else 0


def add_degrees(a, b):
    if isinstance(a, tuple):
        return (a[0] + b[0], a[1] + b[1])
    return a + b


# ---------------------------------------------------------------------------
# sparse polynomials

def _grlex_key(e):
    return (sum(e), e)


class MultiPoly:
    """Sparse polynomial: a dict from exponent tuples to nonzero scalars."""

    __slots__ = ("ring", "terms", "field")

    def __init__(self, ring, terms=None, field=QQ):
        self.ring = ring
        self.field = field
        clean = {}
        if terms:
            n = ring.nvars
            for e, c in terms.items():
                if len(e) != n:
                    raise ValueError(f"exponent {e} has wrong arity for {ring}")
                c = field(c)
                if c:
                    clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, ring, terms, field):
        p = object.__new__(cls)
        p.ring = ring
        p.field = field
        p.terms = terms
        return p

    @classmethod
    def constant(cls, ring, c, field=QQ):
        return cls(ring, {(0,) * ring.nvars: c}, field)

    @classmethod
    def variable(cls, ring, name, field=QQ):
        i = ring.names.index(name)
        e = [0] * ring.nvars
        e[i] = 1
        return cls(ring, {tuple(e): 1}, field)

    @classmethod
    def zero(cls, ring, field=QQ):
        return cls._raw(ring, {}, field)

    # -- basic predicates ---------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i):
        return max((e[i] for e in self.terms), default=-1)

    def variables(self):
        """Indices of variables that actually occur."""
        used = set()
        for e in self.terms:
            used.update(i for i, a in enumerate(e) if a)
        return sorted(used)

    def homogeneous_degree(self):
        """Degree (int, or pair for the tensor ring) if homogeneous, else None.

        The zero polynomial returns None.
        """
        if not self.terms:
            return None
        if self.ring.kind == "tensor":
            degs = {(e[0] + e[1], e[2] + e[3]) for e in self.terms}
        else:
            degs = {sum(e) for e in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def leading_term(self):
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other):
        if other.ring != self.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
        if other.field != self.field:
            raise ValueError(f"field mismatch: {self.field!r} vs {other.field!r}")

    def _lift(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(self.ring, other, self.field)

    def __add__(self, other):
        other = self._lift(other)
        res = dict(self.terms)
        for e, c in other.terms.items():
            v = res.get(e)
            v = c if v is None else v + c
            if v:
                res[e] = v
            else:
                res.pop(e, None)
        return MultiPoly._raw(self.ring, res, self.field)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.ring, {e: -c for e, c in self.terms.items()}, self.field)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c):
        c = self.field(c)
        if not c:
            return MultiPoly.zero(self.ring, self.field)
        return MultiPoly._raw(self.ring, {e: c * v for e, v in self.terms.items()}, self.field)

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        res = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = res.get(e)
                res[e] = c1 * c2 if v is None else v + c1 * c2
        return MultiPoly._raw(self.ring, {e: c for e, c in res.items() if c}, self.field)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative exponent")
        out = MultiPoly.constant(self.ring, 1, self.field)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def mul_monomial(self, mono, c=1):
        c = self.field(c)
        return MultiPoly._raw(
            self.ring,
            {tuple(a + b for a, b in zip(e, mono)): c * v for e, v in self.terms.items()},
            self.field)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self.terms == other.terms
        if not self.terms:
            return other == 0
        return self.is_constant() and self.terms.get((0,) * self.ring.nvars) == other

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # -- evaluation ---------------------------------------------------------

    def __call__(self, *point):
        return poly_eval(self, point)

    def monic(self):
        """Scale so the grlex-leading coefficient is 1."""
        if not self.terms:
            return self
        _, lc = self.leading_term()
        inv = 1 / lc
        return MultiPoly._raw(self.ring, {e: c * inv for e, c in self.terms.items()}, self.field)

    def coefficient_vector(self, deg):
        """Dense coefficients over ``monomial_basis(ring, deg)``."""
        idx = basis_index(self.ring, deg)
        vec = [self.field.zero] * len(idx)
        for e, c in self.terms.items():
            try:
                vec[idx[e]] = c
            except KeyError:
                raise ValueError(f"term {e} is not of degree {deg}") from None
        return vec

    @classmethod
    def from_vector(cls, ring, deg, vec, field=QQ):
        basis = monomial_basis(ring, deg)
        return cls(ring, {m: c for m, c in zip(basis, vec) if c}, field)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({format_poly(self)!r})"


def format_poly(p):
    """Canonical text form, grlex descending, re-parseable by :func:`parse_poly`."""
    if not p.terms:
        return "0"
    out = []
    for e, c in p.sorted_terms():
        mono = "*".join(
            name if a == 1 else f"{name}^{a}"
            for name, a in zip(p.ring.names, e) if a)
        neg = False
        if p.field.characteristic == 0 and c < 0:
            neg, c = True, -c
        cs = format_elem(c)
        if not mono:
            body = cs
        elif c == 1:
            body = mono
        else:
            body = f"{cs}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def poly_eval(p, point):
    if len(point) != p.ring.nvars:
        raise ValueError(f"point has arity {len(point)}, ring needs {p.ring.nvars}")
    point = [p.field(x) for x in point]
    total = p.field.zero
    for e, c in p.terms.items():
        t = c
        for x, a in zip(point, e):
            if a:
                t = t * x ** a
        total = total + t
    return total


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S)")


def _tokenize(text):
    toks = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if m.group(1):
            toks.append(("num", m.group(1), pos))
        elif m.group(2):
            toks.append(("name", m.group(2), pos))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise PolySyntaxError(f"unexpected character {ch!r}", pos, text)
            toks.append((ch, ch, pos))
        pos = m.end()
    toks.append(("end", "", n))
    return toks


MAX_EXPONENT = 1000


class _Parser:
    def __init__(self, text, ring, field):
        self.text = text
        self.ring = ring
        self.field = field
        self.toks = _tokenize(text)
        self.i = 0
        # implicit-space polynomials may be written with lowercase x
        self.aliases = {}
        for j, name in enumerate(ring.names):
            self.aliases[name] = j
            if ring.kind == "implicit":
                self.aliases["x" + name[1:]] = j

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise PolySyntaxError(f"expected {kind!r}, found {what}", tok[2], self.text)
        self.i += 1
        return tok

    def parse(self):
        if self.peek()[0] == "end":
            raise PolySyntaxError("empty polynomial", 0, self.text)
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise PolySyntaxError(f"unexpected {tok[1]!r}", tok[2], self.text)
        return p

    def expr(self):
        p = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.factor()
        while self.peek()[0] == "*":
            self.take()
            p = p * self.factor()
        return p

    def factor(self):
        b = self.base()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take("num")
            n = int(tok[1])
            if n > MAX_EXPONENT:
                raise PolySyntaxError(f"exponent {n} too large", tok[2], self.text)
            b = b ** n
        return b

    def base(self):
        tok = self.peek()
        kind = tok[0]
        if kind == "num":
            self.take()
            num = int(tok[1])
            if self.peek()[0] == "/":
                self.take()
                den_tok = self.take("num")
                den = int(den_tok[1])
                if den == 0:
                    raise PolySyntaxError("zero denominator", den_tok[2], self.text)
                return MultiPoly.constant(self.ring, self.field(Fraction(num, den)), self.field)
            return MultiPoly.constant(self.ring, num, self.field)
        if kind == "name":
            self.take()
            j = self.aliases.get(tok[1])
            if j is None:
                raise PolySyntaxError(
                    f"unknown variable {tok[1]!r} (ring has {', '.join(self.ring.names)})",
                    tok[2], self.text)
            e = [0] * self.ring.nvars
            e[j] = 1
            return MultiPoly(self.ring, {tuple(e): 1}, self.field)
        if kind == "(":
            self.take()
            p = self.expr()
            self.take(")")
            return p
        if kind == "-":
            # unary minus binds looser than '^': -s0^2 == -(s0^2)
            self.take()
            return -self.factor()
        what = "end of input" if kind == "end" else repr(tok[1])
        raise PolySyntaxError(f"unexpected {what}", tok[2], self.text)


def parse_poly(text, ring=TRIANGULAR, field=QQ):
    """Parse a polynomial. Homogeneity is not checked here."""
    return _Parser(text, ring, field).parse()


# ---------------------------------------------------------------------------
# division and gcd

class NotDivisibleError(ArithmeticError):
    pass


def poly_divmod(a, b):
    """Multivariate division of ``a`` by the single divisor ``b`` (grlex).

    Returns ``(q, r)`` with ``a = q*b + r`` and no term of ``r`` divisible
    by the leading monomial of ``b``.
    """
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    lm, lc = b.leading_term()
    inv = 1 / lc
    q = {}
    r = {}
    rem = dict(a.terms)
    while rem:
        e = max(rem, key=_grlex_key)
        c = rem[e]
        if all(x >= y for x, y in zip(e, lm)):
            shift = tuple(x - y for x, y in zip(e, lm))
            f = c * inv
            q[shift] = f
            for eb, cb in b.terms.items():
                t = tuple(x + y for x, y in zip(eb, shift))
                v = rem.get(t)
                v = -f * cb if v is None else v - f * cb
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        else:
            r[e] = c
            del rem[e]
    return MultiPoly._raw(a.ring, q, a.field), MultiPoly._raw(a.ring, r, a.field)


def divide_exact(a, b):
    q, r = poly_divmod(a, b)
    if r:
        raise NotDivisibleError(f"{b} does not divide {a}")
    return q


def _coeffs_in(p, v):
    """Split ``p`` as a polynomial in variable index ``v``: {degree: coefficient}."""
    parts = {}
    for e, c in p.terms.items():
        k = e[v]
        e0 = e[:v] + (0,) + e[v + 1:]
        parts.setdefault(k, {})[e0] = c
    return {k: MultiPoly._raw(p.ring, t, p.field) for k, t in parts.items()}


def _var_power(p, v, k):
    e = [0] * p.ring.nvars
    e[v] = k
    return tuple(e)


def _content_pp(p, v):
    coeffs = list(_coeffs_in(p, v).values())
    cont = coeffs[0]
    for c in coeffs[1:]:
        cont = _gcd2(cont, c)
        if cont.is_constant():
            break
    cont = cont.monic()
    pp = divide_exact(p, cont) if not cont.is_constant() else p
    return cont, pp.monic()


def _prem(a, b, v):
    """Pseudo-remainder of ``a`` by ``b`` viewed as polynomials in ``v``."""
    n = b.degree_in(v)
    lcb = _coeffs_in(b, v)[n]
    while a and a.degree_in(v) >= n:
        m = a.degree_in(v)
        lca = _coeffs_in(a, v)[m]
        a = lcb * a - (lca * b).mul_monomial(_var_power(a, v, m - n))
    return a


def _gcd2(a, b):
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    vs = sorted(set(a.variables()) | set(b.variables()))
    if not vs:
        return MultiPoly.constant(a.ring, 1, a.field)
    v = vs[-1]
    if a.degree_in(v) < b.degree_in(v):
        a, b = b, a
    if b.degree_in(v) <= 0:
        # b is free of v: gcd divides every v-coefficient of a
        ca, _ = _content_pp(a, v)
        return _gcd2(ca, b)
    ca, pa = _content_pp(a, v)
    cb, pb = _content_pp(b, v)
    c = _gcd2(ca, cb)
    while pb and pb.degree_in(v) > 0:
        r = _prem(pa, pb, v)
        pa = pb
        pb = _content_pp(r, v)[1] if r else r
    if pb:
        # remainder dropped to degree 0 in v: primitive parts are coprime
        g = MultiPoly.constant(a.ring, 1, a.field)
    else:
        g = pa
    return (c * g).monic()


def multivariate_gcd(polys):
    """Monic gcd (grlex leading coefficient 1) of the nonzero inputs."""
    polys = list(polys)
    nonzero = [p for p in polys if p]
    if not nonzero:
        raise ValueError("gcd of all-zero input is undefined")
    g = nonzero[0].monic()
    for p in nonzero[1:]:
        if g.is_constant():
            break
        g = _gcd2(g, p)
    return g


# ---------------------------------------------------------------------------
# graded pieces and substitution

@dataclass(frozen=True)
class GradedPoly:
    """Dense element of one graded piece, coefficients over ``monomial_basis``."""

    ring: Ring
    degree: object
    coeffs: tuple
    field: object = QQ

    def __post_init__(self):
        if len(self.coeffs) != basis_size(self.ring, self.degree):
            raise ValueError("coefficient vector does not match basis size")

    @classmethod
    def from_poly(cls, p, deg):
        return cls(p.ring, deg, tuple(p.coefficient_vector(deg)), p.field)

    def to_poly(self):
        return MultiPoly.from_vector(self.ring, self.degree, self.coeffs, self.field)

    def __str__(self):
        return format_poly(self.to_poly())


def substitute(p, images):
    """Compose ``p(X0..X3)`` with ``Xi -> images[i]`` (pull-back along the map)."""
    images = [q.to_poly() if isinstance(q, GradedPoly) else q for q in images]
    if len(images) != p.ring.nvars:
        raise ValueError(f"need {p.ring.nvars} images, got {len(images)}")
    ring = images[0].ring
    field = images[0].field
    for q in images[1:]:
        if q.ring != ring or q.field != field:
            raise ValueError("images must share one ring and field")
    if field != p.field:
        raise ValueError("field mismatch")
    powers = [{0: MultiPoly.constant(ring, 1, field)} for _ in images]

    def pw(i, k):
        cache = powers[i]
        if k not in cache:
            cache[k] = pw(i, k - 1) * images[i]
        return cache[k]

    out = MultiPoly.zero(ring, field)
    for e, c in p.terms.items():
        t = MultiPoly.constant(ring, c, field)
        for i, k in enumerate(e):
            if k:
                t = t * pw(i, k)
        out = out + t
    return out
