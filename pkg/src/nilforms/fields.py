"""Exact scalar arithmetic over the three supported fields.

Field spec strings select the field:

    gf(p)      prime field F_p
    q          rational numbers
    gf(p)(t)   rational functions over F_p in the variable t

Every element is immutable and kept in canonical form, so equality of
values is equality of representations: residues live in [0, p), rationals
are reduced fractions (``fractions.Fraction``), and rational functions are
reduced fractions of polynomials with a monic denominator.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterator

from .errors import BadParameters, DivisionByZero, FieldMismatch

_FIELD_RE = re.compile(r"^gf\((\d+)\)(\(t\))?$")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# prime field elements
# ---------------------------------------------------------------------------

class FpElement:
    """Residue in [0, p) with arithmetic mod p."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _other(self, x):
        if isinstance(x, FpElement):
            if x.p != self.p:
                raise FieldMismatch(f"gf({self.p}) vs gf({x.p})")
            return x.v
        if isinstance(x, int):
            return x
        return None

    def __add__(self, x):
        w = self._other(x)
        return NotImplemented if w is None else FpElement(self.v + w, self.p)

    __radd__ = __add__

    def __sub__(self, x):
        w = self._other(x)
        return NotImplemented if w is None else FpElement(self.v - w, self.p)

    def __rsub__(self, x):
        w = self._other(x)
        return NotImplemented if w is None else FpElement(w - self.v, self.p)

    def __mul__(self, x):
        w = self._other(x)
        return NotImplemented if w is None else FpElement(self.v * w, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElement(-self.v, self.p)

    def inv(self) -> "FpElement":
        if self.v == 0:
            raise DivisionByZero(f"inverse of 0 in gf({self.p})")
        return FpElement(pow(self.v, self.p - 2, self.p), self.p)

    def __eq__(self, x):
        if isinstance(x, FpElement):
            return self.p == x.p and self.v == x.v
        if isinstance(x, int):
            return self.v == x % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v}"


# ---------------------------------------------------------------------------
# dense polynomials over F_p (coefficient tuples, low degree first)
# ---------------------------------------------------------------------------

def _ptrim(c: list) -> tuple:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_add(a, b, p):
    n = max(len(a), len(b))
    return _ptrim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p
                   for i in range(n)])


def poly_neg(a, p):
    return tuple((-c) % p for c in a)


def poly_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _ptrim(out)


def poly_divmod(a, b, p):
    b = _ptrim(list(b))
    if not b:
        raise DivisionByZero("polynomial division by zero")
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    binv = pow(b[-1], p - 2, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        coef = a[-1] * binv % p
        deg = len(a) - len(b)
        q[deg] = coef
        for i, c in enumerate(b):
            a[deg + i] = (a[deg + i] - coef * c) % p
        while a and a[-1] == 0:
            a.pop()
    return _ptrim(q), _ptrim(a)


def poly_gcd(a, b, p):
    while b:
        a, b = b, poly_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], p - 2, p)
        a = tuple(c * inv % p for c in a)
    return a


def poly_eval(a, x, p):
    out = 0
    for c in reversed(a):
        out = (out * x + c) % p
    return out


def poly_str(a) -> str:
    if not a:
        return "0"
    terms = []
    for k in range(len(a) - 1, -1, -1):
        c = a[k]
        if c == 0:
            continue
        if k == 0:
            terms.append(str(c))
        elif k == 1:
            terms.append("t" if c == 1 else f"{c}t")
        else:
            terms.append(f"t^{k}" if c == 1 else f"{c}t^{k}")
    return "+".join(terms)


_TERM_RE = re.compile(r"^([+-]?)(\d+)?\*?(t(?:\^(\d+))?)?$")


def poly_parse(s: str, p: int) -> tuple:
    s = s.replace(" ", "").replace("*", "")
    if s in ("", "0"):
        return ()
    chunks = re.findall(r"[+-]?[^+-]+", s)
    coeffs: dict[int, int] = {}
    for chunk in chunks:
        m = _TERM_RE.match(chunk)
        if not m or (m.group(2) is None and m.group(3) is None):
            raise BadParameters(f"cannot parse polynomial term {chunk!r}")
        sign = -1 if m.group(1) == "-" else 1
        c = int(m.group(2)) if m.group(2) is not None else 1
        if m.group(3) is None:
            k = 0
        else:
            k = int(m.group(4)) if m.group(4) is not None else 1
        coeffs[k] = (coeffs.get(k, 0) + sign * c) % p
    if not coeffs:
        return ()
    out = [0] * (max(coeffs) + 1)
    for k, c in coeffs.items():
        out[k] = c
    return _ptrim(out)


class RationalFunction:
    """Reduced fraction of polynomials over F_p with a monic denominator."""

    __slots__ = ("num", "den", "p")

    def __init__(self, num, den, p, _canonical=False):
        if not _canonical:
            num = _ptrim([c % p for c in num])
            den = _ptrim([c % p for c in den])
        if not den:
            raise DivisionByZero(f"zero denominator in gf({p})(t)")
        if not _canonical:
            if not num:
                den = (1,)
            else:
                g = poly_gcd(num, den, p)
                if len(g) > 1 or g != (1,):
                    num = poly_divmod(num, g, p)[0]
                    den = poly_divmod(den, g, p)[0]
                lead_inv = pow(den[-1], p - 2, p)
                if lead_inv != 1:
                    num = tuple(c * lead_inv % p for c in num)
                    den = tuple(c * lead_inv % p for c in den)
        self.num = num
        self.den = den
        self.p = p

    def _check(self, x):
        if isinstance(x, RationalFunction):
            if x.p != self.p:
                raise FieldMismatch(f"gf({self.p})(t) vs gf({x.p})(t)")
            return x
        if isinstance(x, int):
            return RationalFunction(_ptrim([x % self.p]), (1,), self.p, _canonical=True)
        return None

    def __add__(self, x):
        o = self._check(x)
        if o is None:
            return NotImplemented
        p = self.p
        num = poly_add(poly_mul(self.num, o.den, p), poly_mul(o.num, self.den, p), p)
        return RationalFunction(num, poly_mul(self.den, o.den, p), p)

    __radd__ = __add__

    def __sub__(self, x):
        o = self._check(x)
        return NotImplemented if o is None else self + (-o)

    def __rsub__(self, x):
        o = self._check(x)
        return NotImplemented if o is None else o + (-self)

    def __mul__(self, x):
        o = self._check(x)
        if o is None:
            return NotImplemented
        p = self.p
        return RationalFunction(poly_mul(self.num, o.num, p),
                                poly_mul(self.den, o.den, p), p)

    __rmul__ = __mul__

    def __neg__(self):
        return RationalFunction(poly_neg(self.num, self.p), self.den, self.p,
                                _canonical=True)

    def inv(self) -> "RationalFunction":
        if not self.num:
            raise DivisionByZero(f"inverse of 0 in gf({self.p})(t)")
        return RationalFunction(self.den, self.num, self.p)

    def evaluate(self, t0: int) -> FpElement:
        den = poly_eval(self.den, t0, self.p)
        if den == 0:
            raise DivisionByZero(f"denominator vanishes at t={t0}")
        return FpElement(poly_eval(self.num, t0, self.p) * pow(den, self.p - 2, self.p),
                         self.p)

    def __eq__(self, x):
        if isinstance(x, RationalFunction):
            return self.p == x.p and self.num == x.num and self.den == x.den
        if isinstance(x, int):
            return self.den == (1,) and self.num == _ptrim([x % self.p])
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den, self.p))

    def __bool__(self):
        return bool(self.num)

    def __repr__(self):
        if self.den == (1,):
            return poly_str(self.num)
        return f"({poly_str(self.num)})/({poly_str(self.den)})"


# ---------------------------------------------------------------------------
# field objects
# ---------------------------------------------------------------------------

class Field:
    """Factory and canonicaliser for one of the three supported fields."""

    spec: str
    char: int
    order: int | None  # None for infinite fields

    @property
    def is_finite(self) -> bool:
        return self.order is not None

    def zero(self):
        return self.of(0)

    def one(self):
        return self.of(1)

    def of(self, x):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def parse(self, s: str):
        raise NotImplementedError

    def format(self, a) -> str:
        raise NotImplementedError

    def elements(self) -> Iterator:
        """All field elements in canonical order (finite fields only)."""
        raise BadParameters(f"cannot enumerate the infinite field {self.spec}")

    def small_elements(self) -> Iterator:
        """Endless ladder of elements ordered by size, for bounded searches."""
        raise NotImplementedError

    def random(self, rng):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Field) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    def __repr__(self):
        return self.spec


class PrimeField(Field):
    def __init__(self, p: int):
        if not is_prime(p):
            raise BadParameters(f"{p} is not prime")
        self.p = p
        self.spec = f"gf({p})"
        self.char = p
        self.order = p

    def of(self, x):
        if isinstance(x, FpElement):
            if x.p != self.p:
                raise FieldMismatch(f"{self.spec} vs gf({x.p})")
            return x
        if isinstance(x, int):
            return FpElement(x, self.p)
        raise FieldMismatch(f"cannot coerce {x!r} into {self.spec}")

    def inv(self, a):
        return self.of(a).inv()

    def parse(self, s: str):
        return FpElement(int(s), self.p)

    def format(self, a) -> str:
        return str(self.of(a).v)

    def elements(self):
        for i in range(self.p):
            yield FpElement(i, self.p)

    small_elements = elements

    def random(self, rng):
        return FpElement(rng.randrange(self.p), self.p)

    def int_value(self, a) -> int:
        return self.of(a).v


class RationalField(Field):
    def __init__(self):
        self.spec = "q"
        self.char = 0
        self.order = None

    def of(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        raise FieldMismatch(f"cannot coerce {x!r} into q")

    def inv(self, a):
        a = self.of(a)
        if a == 0:
            raise DivisionByZero("inverse of 0 in q")
        return 1 / a

    def parse(self, s: str):
        return Fraction(s)

    def format(self, a) -> str:
        return str(self.of(a))

    def small_elements(self):
        yield Fraction(0)
        k = 1
        while True:
            yield Fraction(k)
            yield Fraction(-k)
            k += 1

    def random(self, rng):
        return Fraction(rng.randint(-9, 9), rng.randint(1, 9))


class RationalFunctionField(Field):
    def __init__(self, p: int):
        if not is_prime(p):
            raise BadParameters(f"{p} is not prime")
        self.p = p
        self.spec = f"gf({p})(t)"
        self.char = p
        self.order = None

    def of(self, x):
        if isinstance(x, RationalFunction):
            if x.p != self.p:
                raise FieldMismatch(f"{self.spec} vs gf({x.p})(t)")
            return x
        if isinstance(x, FpElement):
            if x.p != self.p:
                raise FieldMismatch(f"{self.spec} vs gf({x.p})")
            return RationalFunction(_ptrim([x.v]), (1,), self.p, _canonical=True)
        if isinstance(x, int):
            return RationalFunction(_ptrim([x % self.p]), (1,), self.p, _canonical=True)
        raise FieldMismatch(f"cannot coerce {x!r} into {self.spec}")

    def variable(self):
        return RationalFunction((0, 1), (1,), self.p, _canonical=True)

    def from_polys(self, num, den=(1,)):
        return RationalFunction(tuple(c % self.p for c in num),
                                tuple(c % self.p for c in den), self.p)

    def inv(self, a):
        return self.of(a).inv()

    def parse(self, s: str):
        s = s.strip()
        if "/" in s:
            num_s, den_s = s.split("/", 1)
            num_s = num_s.strip()
            den_s = den_s.strip()
            if num_s.startswith("(") and num_s.endswith(")"):
                num_s = num_s[1:-1]
            if den_s.startswith("(") and den_s.endswith(")"):
                den_s = den_s[1:-1]
            return RationalFunction(poly_parse(num_s, self.p),
                                    poly_parse(den_s, self.p), self.p)
        if s.startswith("(") and s.endswith(")"):
            s = s[1:-1]
        return RationalFunction(poly_parse(s, self.p), (1,), self.p)

    def format(self, a) -> str:
        return repr(self.of(a))

    def small_elements(self):
        # graded by degree: constants, then all polynomials of degree 1, 2, ...
        from itertools import product

        p = self.p
        for c in range(p):
            yield self.of(c)
        deg = 1
        while True:
            for lead in range(1, p):
                for lower in product(range(p), repeat=deg):
                    yield RationalFunction(lower + (lead,), (1,), p, _canonical=True)
            deg += 1

    def random(self, rng, max_degree: int = 2, fraction_rate: float = 0.25):
        num = _ptrim([rng.randrange(self.p) for _ in range(rng.randint(1, max_degree + 1))])
        if rng.random() < fraction_rate:
            den = _ptrim([rng.randrange(self.p) for _ in range(rng.randint(1, max_degree))]
                         + [rng.randrange(1, self.p)])
        else:
            den = (1,)
        return RationalFunction(num, den, self.p)


_Q = RationalField()


def parse_field(spec: str) -> Field:
    """Resolve a field spec string ("gf(5)", "q", "gf(5)(t)")."""
    s = spec.strip().lower()
    if s == "q":
        return _Q
    m = _FIELD_RE.match(s)
    if not m:
        raise BadParameters(f"unknown field spec {spec!r}")
    p = int(m.group(1))
    if m.group(2):
        return RationalFunctionField(p)
    return PrimeField(p)
