"""Symbolic chi-bounding functions and certified comparison against them.

Every function evaluates at a natural number to an :class:`Interval` of
rationals. Closed forms built from integers give point intervals; the one
transcendental ingredient, ``x ** log2(x)``, is enclosed with outward
rounded interval arithmetic and can be tightened by raising the working
precision.

Expressions have a small text syntax, e.g. ``x^2+3``, ``2^(1*(x-1))``,
``const 5/2``, ``star(x)``, ``polystar(1)``, ``supermultstar(2^(1*(x-1)))``,
``expstar(2)``, ``kglue(x, 1)``, ``floorpow(x+3, 2)`` and
``table(1, 2, 4)``; :func:`parse` and ``str`` round-trip.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv
from mpmath.libmp import to_rational

from .certificate import Certificate, Verdict
from .errors import DomainError, ParseError

DEFAULT_PRECISION = 64
MAX_PRECISION = 4096

_iv_lock = threading.Lock()


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    @classmethod
    def point(cls, x) -> "Interval":
        x = Fraction(x)
        return cls(x, x)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __mul__(self, other: "Interval") -> "Interval":
        ps = [a * b for a in (self.lo, self.hi) for b in (other.lo, other.hi)]
        return Interval(min(ps), max(ps))

    def __pow__(self, e: int) -> "Interval":
        if e == 0:
            return Interval.point(1)
        a, b = self.lo ** e, self.hi ** e
        if self.lo < 0 < self.hi and e % 2 == 0:
            return Interval(Fraction(0), max(a, b))
        return Interval(min(a, b), max(a, b))

    def floor(self) -> "Interval":
        return Interval(Fraction(math.floor(self.lo)), Fraction(math.floor(self.hi)))


def _pow_log2(x: int, bits: int) -> Interval:
    """Enclosure of ``x ** log2(x)`` for ``x >= 1``."""
    if x & (x - 1) == 0:
        e = x.bit_length() - 1
        return Interval.point(2 ** (e * e))
    with _iv_lock:
        saved = iv.prec
        iv.prec = bits
        try:
            ln = iv.log(iv.mpf(x))
            val = iv.exp(ln * ln / iv.log(2))
            lo_raw, hi_raw = val._mpi_
        finally:
            iv.prec = saved
    return Interval(Fraction(*to_rational(lo_raw)), Fraction(*to_rational(hi_raw)))


class BoundFn:
    """A non-decreasing map N -> R given in closed form."""

    def evaluate(self, n: int, bits: int = DEFAULT_PRECISION) -> Interval:
        raise NotImplementedError

    def __call__(self, n: int, bits: int = DEFAULT_PRECISION) -> Interval:
        if n < 0:
            raise DomainError("bounding functions are evaluated at natural numbers")
        return self.evaluate(n, bits)

    @property
    def exact(self) -> bool:
        return True


@dataclass(frozen=True)
class Constant(BoundFn):
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", Fraction(self.c))

    def evaluate(self, n, bits=DEFAULT_PRECISION):
        return Interval.point(self.c)

    def __str__(self):
        return f"const {self.c}"


@dataclass(frozen=True)
class Polynomial(BoundFn):
    """Non-negative integer coefficients, lowest degree first."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        cs = tuple(int(c) for c in self.coeffs)
        if any(c < 0 for c in cs):
            raise DomainError("polynomial coefficients must be non-negative")
        while len(cs) > 1 and cs[-1] == 0:
            cs = cs[:-1]
        object.__setattr__(self, "coeffs", cs or (0,))

    @classmethod
    def monomial(cls, degree: int) -> "Polynomial":
        return cls((0,) * degree + (1,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def evaluate(self, n, bits=DEFAULT_PRECISION):
        return Interval.point(sum(c * n ** i for i, c in enumerate(self.coeffs)))

    def __str__(self):
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
                continue
            var = "x" if i == 1 else f"x^{i}"
            terms.append(var if c == 1 else f"{c}*{var}")
        return "+".join(terms) or "0"


@dataclass(frozen=True)
class Exponential(BoundFn):
    """``2 ** (c * (x - 1))``."""

    c: int

    def evaluate(self, n, bits=DEFAULT_PRECISION):
        return Interval.point(Fraction(2) ** (self.c * (n - 1)))

    def __str__(self):
        return f"2^({self.c}*(x-1))"


@dataclass(frozen=True)
class Tabulated(BoundFn):
    """Explicit values on ``0..N``; evaluation beyond ``N`` is refused."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(Fraction(v) for v in self.values)
        if not vals:
            raise DomainError("a tabulated bound needs at least one value")
        if any(a > b for a, b in zip(vals, vals[1:])):
            raise DomainError("tabulated bound must be non-decreasing")
        object.__setattr__(self, "values", vals)

    def evaluate(self, n, bits=DEFAULT_PRECISION):
        if n >= len(self.values):
            raise DomainError(f"tabulated bound only covers 0..{len(self.values) - 1}")
        return Interval.point(self.values[n])

    def __str__(self):
        return "table(" + ", ".join(str(v) for v in self.values) + ")"


@dataclass(frozen=True)
class StarPower(BoundFn):
    """``k -> inner(k) ** k``; equals 1 at 0."""

    inner: BoundFn

    def evaluate(self, n, bits=DEFAULT_PRECISION):
        return self.inner(n, bits) ** n

    @property
    def exact(self):
        return self.inner.exact

    def __str__(self):
        return f"star({self.inner})"


@dataclass(frozen=True)
class PolyStar(BoundFn):
    """``x ** (3A + 11)`` for a base class bounded by ``x ** A``."""

    A: int

    def __post_init__(self):
        if self.A < 1:
            raise DomainError("polystar exponent A must be positive")

    @property
    def B(self) -> int:
        return 2 * self.A + 11

    @property
    def exponent(self) -> int:
        return 3 * self.A + 11

    def evaluate(self, n, bits=DEFAULT_PRECISION):
        return Interval.point(n ** self.exponent)

    def __str__(self):
        return f"polystar({self.A})"


@dataclass(frozen=True)
class SupermultStar(BoundFn):
    """``0`` at 0, else ``inner(x) * x ** log2(x)``."""

    inner: BoundFn

    def evaluate(self, n, bits=DEFAULT_PRECISION):
        if n == 0:
            return Interval.point(0)
        return self.inner(n, bits) * _pow_log2(n, bits)

    @property
    def exact(self):
        return False

    def __str__(self):
        return f"supermultstar({self.inner})"


@dataclass(frozen=True)
class ExpStar(BoundFn):
    """``2 ** ((c + 1) x)``."""

    c: int

    def evaluate(self, n, bits=DEFAULT_PRECISION):
        return Interval.point(2 ** ((self.c + 1) * n))

    def __str__(self):
        return f"expstar({self.c})"


@dataclass(frozen=True)
class KGlueShift(BoundFn):
    """``n -> inner(n) + 2k^2 - 1``."""

    inner: BoundFn
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise DomainError("k must be a positive integer")

    @property
    def slack(self) -> int:
        return 2 * self.k * self.k - 1

    def evaluate(self, n, bits=DEFAULT_PRECISION):
        return self.inner(n, bits) + Interval.point(self.slack)

    @property
    def exact(self):
        return self.inner.exact

    def __str__(self):
        return f"kglue({self.inner}, {self.k})"


@dataclass(frozen=True)
class FloorPower(BoundFn):
    """``x -> floor(inner(x)) ** e``: the depth bound with ``e = d + 1``."""

    inner: BoundFn
    e: int

    def evaluate(self, n, bits=DEFAULT_PRECISION):
        return self.inner(n, bits).floor() ** self.e

    @property
    def exact(self):
        return self.inner.exact

    def __str__(self):
        return f"floorpow({self.inner}, {self.e})"


# -- the derived bounds -------------------------------------------------------

def star_bound(f: BoundFn) -> BoundFn:
    return StarPower(f)


def poly_star_bound(A: int) -> PolyStar:
    return PolyStar(A)


def supermult_star_bound(f: BoundFn, check_up_to: int = 64) -> SupermultStar:
    if not check_supermultiplicative(f, check_up_to):
        raise DomainError(f"{f} is not supermultiplicative on 1..{check_up_to}")
    return SupermultStar(f)


def exp_star_bound(c: int) -> ExpStar:
    if c < 1:
        raise DomainError("c must be a positive integer")
    return ExpStar(c)


def kglue_bound(f: BoundFn, k: int) -> KGlueShift:
    return KGlueShift(f, k)


def floor_value(f: BoundFn, n: int) -> int:
    """``floor(f(n))``, refining precision until the floor is determined."""
    bits = DEFAULT_PRECISION
    while True:
        iv_ = f(n, bits).floor()
        if iv_.is_point:
            return int(iv_.lo)
        if bits >= MAX_PRECISION:
            # sound choice for palette sizes: never claim more than certain
            return int(iv_.lo)
        bits *= 2


def compare_le(a: tuple[BoundFn, int] | Fraction | int, b: tuple[BoundFn, int] | Fraction | int) -> Verdict:
    """Decide ``a <= b`` where each side is a number or ``(f, n)`` meaning ``f(n)``.

    Returns PASS/FAIL when decided and INCONCLUSIVE when the enclosures still
    overlap at :data:`MAX_PRECISION`.
    """
    bits = DEFAULT_PRECISION
    while True:
        ia = a[0](a[1], bits) if isinstance(a, tuple) else Interval.point(a)
        ib = b[0](b[1], bits) if isinstance(b, tuple) else Interval.point(b)
        if ia.hi <= ib.lo:
            return Verdict.PASS
        if ia.lo > ib.hi:
            return Verdict.FAIL
        if bits >= MAX_PRECISION:
            return Verdict.INCONCLUSIVE
        bits *= 2


def check_supermultiplicative(f: BoundFn, N: int) -> bool:
    """``f(m) f(n) <= f(mn)`` for all ``1 <= m, n`` with ``mn <= N``."""
    for m in range(1, N + 1):
        for n in range(1, N // m + 1):
            bits = DEFAULT_PRECISION
            while True:
                lhs = f(m, bits) * f(n, bits)
                rhs = f(m * n, bits)
                if lhs.hi <= rhs.lo:
                    break
                if lhs.lo > rhs.hi or bits >= MAX_PRECISION:
                    return False
                bits *= 2
    return True


def check_certificate(
    cert: Certificate, bits: int = DEFAULT_PRECISION, max_bits: int = MAX_PRECISION
) -> Verdict:
    """Set and return ``cert.verdict``: pass iff ``colors_used <= lo(bound(omega))``.

    Precision doubles while the verdict is undecided, up to ``max_bits``.
    """
    while True:
        value = cert.bound(cert.omega, bits)
        cert.bound_interval = (value.lo, value.hi)
        if cert.colors_used <= value.lo:
            cert.verdict = Verdict.PASS
            break
        if cert.colors_used > value.hi:
            cert.verdict = Verdict.FAIL
            break
        if bits >= max_bits:
            cert.verdict = Verdict.INCONCLUSIVE
            break
        bits *= 2
    return cert.verdict


# -- parsing ------------------------------------------------------------------

_NUM = re.compile(r"\d+(?:/\d+)?")
_INT = re.compile(r"\d+")
_EXP = re.compile(r"2\^\((?:(\d+)\*\(x-1\)|x-1)\)")
_TERM = re.compile(r"(?:(\d+)\*?)?x(?:\^(\d+))?|(\d+)")


class _Parser:
    def __init__(self, text: str):
        self.s = text
        self.i = 0

    def error(self, msg: str) -> ParseError:
        return ParseError(f"bound expression {self.s!r}, offset {self.i}: {msg}")

    def skip(self) -> None:
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def eat(self, tok: str) -> bool:
        self.skip()
        if self.s.startswith(tok, self.i):
            self.i += len(tok)
            return True
        return False

    def expect(self, tok: str) -> None:
        if not self.eat(tok):
            raise self.error(f"expected {tok!r}")

    def match(self, rx: re.Pattern) -> re.Match:
        self.skip()
        m = rx.match(self.s, self.i)
        if not m:
            raise self.error(f"expected {rx.pattern}")
        self.i = m.end()
        return m

    def integer(self) -> int:
        return int(self.match(_INT).group())

    def expr(self) -> BoundFn:
        self.skip()
        for name, build in (
            ("supermultstar(", lambda: SupermultStar(self.expr())),
            ("polystar(", lambda: PolyStar(self.integer())),
            ("expstar(", lambda: ExpStar(self.integer())),
            ("star(", lambda: StarPower(self.expr())),
        ):
            if self.eat(name):
                out = build()
                self.expect(")")
                return out
        for name, cls in (("kglue(", KGlueShift), ("floorpow(", FloorPower)):
            if self.eat(name):
                inner = self.expr()
                self.expect(",")
                n = self.integer()
                self.expect(")")
                return cls(inner, n)
        if self.eat("table("):
            vals = [Fraction(self.match(_NUM).group())]
            while self.eat(","):
                vals.append(Fraction(self.match(_NUM).group()))
            self.expect(")")
            return Tabulated(tuple(vals))
        if self.eat("const"):
            neg = self.eat("-")
            c = Fraction(self.match(_NUM).group())
            return Constant(-c if neg else c)
        self.skip()
        m = _EXP.match(self.s, self.i)
        if m:
            self.i = m.end()
            return Exponential(int(m.group(1) or 1))
        return self.polynomial()

    def polynomial(self) -> Polynomial:
        coeffs: dict[int, int] = {}
        while True:
            m = self.match(_TERM)
            if m.group(3) is not None:
                deg, c = 0, int(m.group(3))
            else:
                c = int(m.group(1)) if m.group(1) else 1
                deg = int(m.group(2)) if m.group(2) else 1
            coeffs[deg] = coeffs.get(deg, 0) + c
            if not self.eat("+"):
                break
        top = max(coeffs)
        return Polynomial(tuple(coeffs.get(i, 0) for i in range(top + 1)))


def parse(text: str) -> BoundFn:
    p = _Parser(text)
    out = p.expr()
    p.skip()
    if p.i != len(p.s):
        raise p.error("trailing input")
    return out
