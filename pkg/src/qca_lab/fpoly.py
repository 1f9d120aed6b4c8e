"""Laurent polynomials in d variables with coefficients in F2.

A polynomial is the set of exponent vectors whose coefficient is 1.  Values
are immutable.  In one variable, polynomials whose exponent span is below
``BITSET_SPAN`` are stored as ``(low, bits)`` where bit ``i`` of the Python
integer ``bits`` is the coefficient of ``u**(low + i)``; addition is then an
XOR and multiplication a carry-less product.  Everything else is stored as a
frozenset of exponent tuples.

Text form::

    poly   := term ('+' term)*
    term   := '0' | '1' | factor ('*'? factor)*
    factor := var ('^' signed-int)?
    var    := 'u' (d = 1) | 'u1' ... 'ud'
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Sequence

BITSET_SPAN = 1 << 20
INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1

Exponent = tuple  # tuple[int, ...] of length d


class DimensionMismatch(ValueError):
    pass


class ExponentOverflow(OverflowError):
    pass


class PolySyntaxError(ValueError):
    def __init__(self, msg: str, text: str, pos: int):
        super().__init__(f"{msg} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


def _check(e: int) -> int:
    if e < INT64_MIN or e > INT64_MAX:
        raise ExponentOverflow(f"exponent {e} outside the 64-bit range")
    return e


def _bits_iter(bits: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def _clmul(a: int, b: int) -> int:
    """Carry-less product of two bit vectors."""
    if a.bit_count() > b.bit_count():
        a, b = b, a
    out = 0
    for i in _bits_iter(a):
        out ^= b << i
    return out


class LaurentPoly:
    """An element of F2[u1^±1, ..., ud^±1]."""

    __slots__ = ("dim", "_low", "_bits", "_set", "_hash")

    def __init__(self, terms: Iterable[Sequence[int]] = (), dim: int = 1):
        if dim < 1:
            raise ValueError("dim must be >= 1")
        acc: set[tuple] = set()
        for t in terms:
            t = tuple(int(x) for x in t)
            if len(t) != dim:
                raise DimensionMismatch(f"exponent {t} does not have {dim} components")
            for x in t:
                _check(x)
            acc ^= {t}
        self._init_from_set(frozenset(acc), dim)

    # -- construction helpers ------------------------------------------------

    def _init_from_set(self, s: frozenset, dim: int) -> None:
        self.dim = dim
        self._hash = None
        if dim == 1 and s:
            lo = min(t[0] for t in s)
            hi = max(t[0] for t in s)
            if hi - lo < BITSET_SPAN:
                bits = 0
                for (e,) in s:
                    bits |= 1 << (e - lo)
                self._low, self._bits, self._set = lo, bits, None
                return
        if dim == 1 and not s:
            self._low, self._bits, self._set = 0, 0, None
            return
        self._low, self._bits, self._set = 0, 0, s

    @classmethod
    def _from_bits(cls, low: int, bits: int) -> "LaurentPoly":
        self = object.__new__(cls)
        self.dim = 1
        self._hash = None
        if bits == 0:
            self._low, self._bits, self._set = 0, 0, None
            return self
        tz = (bits & -bits).bit_length() - 1
        if tz:
            bits >>= tz
            low += tz
        _check(low)
        _check(low + bits.bit_length() - 1)
        if bits.bit_length() > BITSET_SPAN:
            self._init_from_set(frozenset((low + i,) for i in _bits_iter(bits)), 1)
            return self
        self._low, self._bits, self._set = low, bits, None
        return self

    @classmethod
    def _from_set(cls, s: frozenset, dim: int) -> "LaurentPoly":
        self = object.__new__(cls)
        self._init_from_set(s, dim)
        return self

    @classmethod
    def zero(cls, dim: int = 1) -> "LaurentPoly":
        return cls((), dim)

    @classmethod
    def one(cls, dim: int = 1) -> "LaurentPoly":
        return cls.monomial((0,) * dim)

    @classmethod
    def monomial(cls, k: Sequence[int] | int) -> "LaurentPoly":
        if isinstance(k, int):
            k = (k,)
        k = tuple(k)
        if len(k) == 1:
            return cls._from_bits(_check(k[0]), 1)
        return cls([k], len(k))

    # -- representation ------------------------------------------------------

    @property
    def _is_bits(self) -> bool:
        return self._set is None

    def _as_set(self) -> frozenset:
        if self._set is not None:
            return self._set
        return frozenset((self._low + i,) for i in _bits_iter(self._bits))

    @property
    def terms(self) -> tuple:
        """Exponent tuples in ascending lexicographic order."""
        if self._is_bits:
            return tuple((self._low + i,) for i in _bits_iter(self._bits))
        return tuple(sorted(self._set))

    def exponents_1d(self) -> list[int]:
        """Exponents of a one-variable polynomial, ascending."""
        if self.dim != 1:
            raise DimensionMismatch("exponents_1d needs a one-variable polynomial")
        return [t[0] for t in self.terms]

    def __contains__(self, k) -> bool:
        if isinstance(k, int):
            k = (k,)
        k = tuple(k)
        if self._is_bits:
            i = k[0] - self._low
            return i >= 0 and bool((self._bits >> i) & 1)
        return k in self._set

    def __iter__(self):
        return iter(self.terms)

    def __len__(self) -> int:
        return self.weight()

    def weight(self) -> int:
        if self._is_bits:
            return self._bits.bit_count()
        return len(self._set)

    def __bool__(self) -> bool:
        return bool(self._bits) if self._is_bits else bool(self._set)

    def is_monomial(self) -> bool:
        return self.weight() == 1

    def is_constant(self) -> bool:
        return not self or self == LaurentPoly.one(self.dim)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if self.dim != other.dim:
            return False
        if self._is_bits and other._is_bits:
            return self._low == other._low and self._bits == other._bits
        return self._as_set() == other._as_set()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dim, self._as_set()))
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPoly({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)

    # -- arithmetic ----------------------------------------------------------

    def _same_dim(self, other: "LaurentPoly") -> None:
        if self.dim != other.dim:
            raise DimensionMismatch(f"dims {self.dim} and {other.dim} differ")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._same_dim(other)
        if self._is_bits and other._is_bits:
            if not self._bits:
                return other
            if not other._bits:
                return self
            lo = min(self._low, other._low)
            bits = (self._bits << (self._low - lo)) ^ (other._bits << (other._low - lo))
            return LaurentPoly._from_bits(lo, bits)
        return LaurentPoly._from_set(self._as_set() ^ other._as_set(), self.dim)

    __sub__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return self

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._same_dim(other)
        if not self or not other:
            return LaurentPoly.zero(self.dim)
        if self._is_bits and other._is_bits:
            return LaurentPoly._from_bits(
                _check(self._low + other._low), _clmul(self._bits, other._bits)
            )
        acc: set = set()
        for a in self._as_set():
            for b in other._as_set():
                acc ^= {tuple(_check(x + y) for x, y in zip(a, b))}
        return LaurentPoly._from_set(frozenset(acc), self.dim)

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if not self.is_monomial():
                raise ValueError("only monomials have negative powers")
            (k,) = self.terms
            return LaurentPoly.monomial(tuple(_check(-n * x) for x in k))
        result = LaurentPoly.one(self.dim)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, k: Sequence[int] | int) -> "LaurentPoly":
        """Multiply by the monomial u^k."""
        if isinstance(k, int):
            k = (k,)
        if len(k) != self.dim:
            raise DimensionMismatch(f"shift {k} has wrong length for dim {self.dim}")
        if self._is_bits:
            if not self._bits:
                return self
            return LaurentPoly._from_bits(_check(self._low + k[0]), self._bits)
        return LaurentPoly._from_set(
            frozenset(tuple(_check(x + y) for x, y in zip(t, k)) for t in self._set),
            self.dim,
        )

    def involute(self) -> "LaurentPoly":
        """r(u) -> r(1/u)."""
        if self._is_bits:
            if not self._bits:
                return self
            n = self._bits.bit_length()
            rev = int(format(self._bits, f"0{n}b")[::-1], 2)
            return LaurentPoly._from_bits(_check(-(self._low + n - 1)), rev)
        return LaurentPoly._from_set(
            frozenset(tuple(_check(-x) for x in t) for t in self._set), self.dim
        )

    def is_palindromic(self) -> bool:
        return self == self.involute()

    def deg_extremes(self) -> tuple[tuple[int, int], ...]:
        """Per-variable (min, max) exponent."""
        if not self:
            raise ValueError("deg_extremes is undefined for the zero polynomial")
        if self._is_bits:
            return ((self._low, self._low + self._bits.bit_length() - 1),)
        cols = list(zip(*self._set))
        return tuple((min(c), max(c)) for c in cols)


def add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p + q


def mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def involute(p: LaurentPoly) -> LaurentPoly:
    return p.involute()


def weight(p: LaurentPoly) -> int:
    return p.weight()


def deg_extremes(p: LaurentPoly) -> tuple[tuple[int, int], ...]:
    return p.deg_extremes()


def support_union(polys: Iterable[LaurentPoly]) -> int:
    """Number of distinct exponents occurring in any of ``polys``."""
    polys = [p for p in polys if p]
    if not polys:
        return 0
    if all(p._is_bits for p in polys):
        lo = min(p._low for p in polys)
        acc = 0
        for p in polys:
            acc |= p._bits << (p._low - lo)
        return acc.bit_count()
    out: set = set()
    for p in polys:
        out |= p._as_set()
    return len(out)


def exponent_set(polys: Iterable[LaurentPoly]) -> set:
    out: set = set()
    for p in polys:
        out |= p._as_set()
    return out


# -- text form ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>u\d*)|(?P<op>[+*^-]))")


def _tokens(text: str):
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PolySyntaxError("unexpected character", text, bad)
        kind = m.lastgroup
        start = m.start(kind)
        yield kind, m.group(kind), start
        pos = m.end()
    yield "end", "", len(text)


def parse_poly(text: str, d: int = 1) -> LaurentPoly:
    """Parse the polynomial text form; identical terms cancel in pairs."""
    toks = list(_tokens(text))
    i = 0

    def peek():
        return toks[i]

    def take():
        nonlocal i
        tok = toks[i]
        i += 1
        return tok

    def signed_int() -> int:
        sign = 1
        kind, val, pos = peek()
        if kind == "op" and val in "+-":
            take()
            sign = -1 if val == "-" else 1
            kind, val, pos = peek()
        if kind != "num":
            raise PolySyntaxError("expected exponent", text, pos)
        take()
        return _check(sign * int(val))

    def var_index(val: str, pos: int) -> int:
        if val == "u":
            if d != 1:
                raise PolySyntaxError(f"bare 'u' is ambiguous with {d} variables", text, pos)
            return 0
        idx = int(val[1:])
        if not 1 <= idx <= d:
            raise PolySyntaxError(f"variable index {idx} out of range 1..{d}", text, pos)
        return idx - 1

    def term():
        # Returns an exponent tuple or None for the zero term.
        exp = [0] * d
        zero = False
        seen = False
        while True:
            kind, val, pos = peek()
            if kind == "num":
                take()
                if val == "0":
                    zero = True
                elif val != "1":
                    raise PolySyntaxError("coefficients must be 0 or 1", text, pos)
            elif kind == "var":
                take()
                j = var_index(val, pos)
                e = 1
                if peek()[:2] == ("op", "^"):
                    take()
                    e = signed_int()
                exp[j] = _check(exp[j] + e)
            else:
                if not seen:
                    raise PolySyntaxError("expected a term", text, pos)
                break
            seen = True
            kind, val, pos = peek()
            if kind == "op" and val == "*":
                take()
                if peek()[0] not in ("num", "var"):
                    raise PolySyntaxError("expected a factor after '*'", text, peek()[2])
            elif kind in ("num", "var"):
                continue
            else:
                break
        return None if zero else tuple(exp)

    acc: set = set()
    while True:
        t = term()
        if t is not None:
            acc ^= {t}
        kind, val, pos = peek()
        if kind == "end":
            break
        if kind == "op" and val == "+":
            take()
            continue
        raise PolySyntaxError(f"unexpected {val!r}", text, pos)
    return LaurentPoly._from_set(frozenset(acc), d)


def _format_term(t: tuple) -> str:
    if all(x == 0 for x in t):
        return "1"
    names = ["u"] if len(t) == 1 else [f"u{i + 1}" for i in range(len(t))]
    parts = []
    for name, e in zip(names, t):
        if e == 0:
            continue
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def format_poly(p: LaurentPoly) -> str:
    if not p:
        return "0"
    return " + ".join(_format_term(t) for t in p.terms)
