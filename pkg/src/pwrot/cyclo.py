"""Exact arithmetic in the cyclotomic field Q(zeta_m).

Every coordinate in the package is a ``CycloNum``: a vector of rationals over
the power basis ``1, zeta, ..., zeta^(d-1)`` reduced modulo the m-th
cyclotomic polynomial, where ``m = lcm(4, q)`` so that ``i`` and every
rational planar point ``x + i*y`` live in the same field as the rotation
``lambda = zeta^(m*p/q)``.

Equality of field elements is equality of coefficient vectors (the
representation is canonical), and the sign of a real element is decided by an
exact zero test followed by interval evaluation at doubling precision, so no
decision in the package ever rests on floating point alone.
"""

from __future__ import annotations

import enum
import math
import threading
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

from mpmath.ctx_iv import MPIntervalContext

from .errors import DomainError, ParameterError, WrongContextError

_ZERO = Fraction(0)
_EPS = 2.0 ** -52


class Sign(enum.IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (low degree first) of the n-th cyclotomic polynomial.

    Computed by the classical exact division
    ``Phi_n(x) = (x^n - 1) / prod(Phi_k(x) for k | n, k < n)``.
    """
    if n < 1:
        raise ParameterError("cyclotomic index must be >= 1")
    return _cyclotomic(n)


@lru_cache(maxsize=None)
def _cyclotomic(n: int) -> tuple[int, ...]:
    if n == 1:
        return (-1, 1)
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1
    for k in range(1, n):
        if n % k == 0:
            num = _poly_divexact(num, _cyclotomic(k))
    return tuple(num)


def _poly_divexact(num: Sequence[int], den: Sequence[int]) -> list[int]:
    """Exact division of integer polynomials with monic-leading divisor."""
    num = list(num)
    dn, dd = len(num) - 1, len(den) - 1
    assert den[dd] == 1
    out = [0] * (dn - dd + 1)
    for i in range(dn - dd, -1, -1):
        c = num[i + dd]
        out[i] = c
        if c:
            for j in range(dd + 1):
                num[i + j] -= c * den[j]
    assert not any(num), "division was not exact"
    return out


def _euler_phi(n: int) -> int:
    result, m = n, n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


class ComplexBox(NamedTuple):
    """A rectangular complex enclosure with exact rational endpoints."""

    re_lo: Fraction
    re_hi: Fraction
    im_lo: Fraction
    im_hi: Fraction

    @property
    def mid(self) -> complex:
        return complex((self.re_lo + self.re_hi) / 2, (self.im_lo + self.im_hi) / 2)

    @property
    def width(self) -> Fraction:
        return max(self.re_hi - self.re_lo, self.im_hi - self.im_lo)

    def contains_zero(self) -> bool:
        return self.re_lo <= 0 <= self.re_hi and self.im_lo <= 0 <= self.im_hi


def _raw_mpf_to_fraction(raw) -> Fraction:
    sign, man, exp, _ = raw
    if man == 0 and exp != 0:
        raise DomainError("non-finite interval endpoint")
    val = Fraction(int(man), 1) * (Fraction(2) ** exp)
    return -val if sign else val


def _iv_to_fractions(x) -> tuple[Fraction, Fraction]:
    lo, hi = x._mpi_
    return _raw_mpf_to_fraction(lo), _raw_mpf_to_fraction(hi)


class FieldContext:
    """Immutable arithmetic context for Q(zeta_m) with m = lcm(4, q).

    Carries the rotation ``lambda_ = zeta^(m*p/q)``, the imaginary unit
    ``i_unit = zeta^(m/4)``, and the integer reduction tables all arithmetic
    runs on.  Construct through :func:`make_field`.
    """

    __slots__ = (
        "p", "q", "m", "d", "phi_m", "lambda_", "i_unit",
        "_zeta_vecs", "_conj_of_basis", "_cos", "_sin", "_sign_margin",
        "_iv_cache", "_iv_lock", "_lam_pows", "_extras",
    )

    def __init__(self, p: int, q: int):
        if q < 3:
            raise ParameterError(f"rotation denominator must be >= 3, got {q}")
        if not 0 < p < q:
            raise ParameterError(f"rotation numerator must satisfy 0 < p < q, got {p}")
        if math.gcd(p, q) != 1:
            raise ParameterError(f"rotation fraction {p}/{q} is not in lowest terms")
        self.p = p
        self.q = q
        self.m = math.lcm(4, q)
        self.phi_m = cyclotomic_polynomial(self.m)
        self.d = len(self.phi_m) - 1
        assert self.d == _euler_phi(self.m)
        self._zeta_vecs = self._build_zeta_table()
        self._conj_of_basis = tuple(
            self._zeta_vecs[(self.m - j) % self.m] for j in range(self.d)
        )
        self._cos = tuple(math.cos(2.0 * math.pi * j / self.m) for j in range(self.d))
        self._sin = tuple(math.sin(2.0 * math.pi * j / self.m) for j in range(self.d))
        self._sign_margin = (4 * self.d + 64) * _EPS
        self._iv_cache: dict[int, tuple] = {}
        self._iv_lock = threading.Lock()
        self.lambda_ = self.zeta_pow(self.m * p // q)
        self.i_unit = self.zeta_pow(self.m // 4)
        self._lam_pows = tuple(
            self.zeta_pow((self.m * p // q) * t % self.m) for t in range(q)
        )
        self._extras: dict = {}

    def _build_zeta_table(self) -> tuple[tuple[int, ...], ...]:
        d, phi = self.d, self.phi_m
        vecs = []
        cur = [0] * d
        cur[0] = 1
        for _ in range(self.m):
            vecs.append(tuple(cur))
            top = cur[d - 1]
            nxt = [0] + cur[: d - 1]
            if top:
                for i in range(d):
                    nxt[i] -= top * phi[i]
            cur = nxt
        assert tuple(cur) == vecs[0], "zeta^m must reduce to 1"
        return tuple(vecs)

    # -- constructors -------------------------------------------------------

    def num(self, coeffs: Sequence[Fraction]) -> "CycloNum":
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != self.d:
            raise ParameterError(f"coefficient vector must have length {self.d}")
        return CycloNum(self, coeffs)

    def zero(self) -> "CycloNum":
        return CycloNum(self, (_ZERO,) * self.d)

    def one(self) -> "CycloNum":
        return self.from_rational(1)

    def from_rational(self, x) -> "CycloNum":
        coeffs = [_ZERO] * self.d
        coeffs[0] = Fraction(x)
        return CycloNum(self, tuple(coeffs))

    def zeta_pow(self, e: int) -> "CycloNum":
        return CycloNum(self, tuple(Fraction(c) for c in self._zeta_vecs[e % self.m]))

    def lam_pow(self, t: int) -> "CycloNum":
        """lambda^t, cached for t modulo q."""
        return self._lam_pows[t % self.q]

    def point(self, x, y) -> "CycloNum":
        """Embed the rational planar point (x, y) as x + i*y."""
        return self.from_rational(x) + self.i_unit * Fraction(y)

    def __repr__(self):
        return f"FieldContext(p={self.p}, q={self.q}, m={self.m}, d={self.d})"

    # -- interval machinery --------------------------------------------------

    def _iv_nodes(self, prec: int):
        with self._iv_lock:
            cached = self._iv_cache.get(prec)
            if cached is None:
                ctx = MPIntervalContext()
                ctx.prec = prec
                two_pi = 2 * ctx.pi
                cos = tuple(ctx.cos(two_pi * j / self.m) for j in range(self.d))
                sin = tuple(ctx.sin(two_pi * j / self.m) for j in range(self.d))
                cached = (ctx, cos, sin)
                self._iv_cache[prec] = cached
            return cached

    def _iv_eval(self, coeffs: Sequence[Fraction], prec: int):
        """Rigorous complex enclosure of sum(c_j * zeta^j) at e^(2*pi*i/m)."""
        ctx, cos, sin = self._iv_nodes(prec)
        re = ctx.zero
        im = ctx.zero
        for j, c in enumerate(coeffs):
            if not c:
                continue
            cf = ctx.mpf(c.numerator) / ctx.mpf(c.denominator)
            re += cf * cos[j]
            im += cf * sin[j]
        return re, im

    def _float_combo(self, coeffs: Sequence[Fraction], nodes: Sequence[float]):
        """(value, certified absolute error bound) of sum(c_j * node_j) in doubles.

        Raises OverflowError when a coefficient does not fit a double; callers
        fall through to interval evaluation.
        """
        total = 0.0
        abssum = 0.0
        for j, c in enumerate(coeffs):
            if not c:
                continue
            cf = float(c)
            if math.isinf(cf):
                raise OverflowError
            total += cf * nodes[j]
            abssum += abs(cf)
        return total, abssum * self._sign_margin


class CycloNum:
    """An element of Q(zeta_m) as a length-d rational coefficient vector.

    Values are immutable; arithmetic is exact and keeps the representation
    canonical, so ``==`` on coefficient vectors is field equality.
    """

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldContext, coeffs: tuple[Fraction, ...]):
        self.ctx = ctx
        self.coeffs = coeffs

    # -- helpers -------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CycloNum):
            if other.ctx is not self.ctx:
                raise WrongContextError("operands belong to different field contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.from_rational(other)
        return None

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise DomainError("element is not rational")
        return self.coeffs[0]

    # -- ring operations ------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CycloNum(self.ctx, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CycloNum(self.ctx, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return CycloNum(self.ctx, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return CycloNum(self.ctx, tuple(a * f for a in self.coeffs))
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        d = self.ctx.d
        prod = [_ZERO] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    prod[i + j] += a * b
        out = list(prod[:d])
        vecs = self.ctx._zeta_vecs
        for e in range(d, 2 * d - 1):
            c = prod[e]
            if c:
                vec = vecs[e]
                for i in range(d):
                    if vec[i]:
                        out[i] += c * vec[i]
        return CycloNum(self.ctx, tuple(out))

    __rmul__ = __mul__

    def mul_zeta(self, e: int) -> "CycloNum":
        """Multiply by zeta^e (fast path used by the affine calculus)."""
        d = self.ctx.d
        vecs = self.ctx._zeta_vecs
        m = self.ctx.m
        out = [_ZERO] * d
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            vec = vecs[(j + e) % m]
            for i in range(d):
                if vec[i]:
                    out[i] += c * vec[i]
        return CycloNum(self.ctx, tuple(out))

    def inverse(self) -> "CycloNum":
        """Multiplicative inverse via the extended Euclidean algorithm
        against the (irreducible) cyclotomic modulus."""
        if self.is_zero():
            raise DomainError("0 has no inverse")
        mod = [Fraction(c) for c in self.ctx.phi_m]
        r0, r1 = mod, list(self.coeffs)
        s0, s1 = [_ZERO], [Fraction(1)]
        while True:
            r1, top = _poly_trim(r1)
            if len(r1) == 1:
                inv = 1 / r1[0]
                coeffs = [c * inv for c in s1] + [_ZERO] * self.ctx.d
                return CycloNum(self.ctx, tuple(coeffs[: self.ctx.d]))
            q_poly, rem = _poly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q_poly, s1))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            if not f:
                raise DomainError("division by zero")
            return CycloNum(self.ctx, tuple(a / f for a in self.coeffs))
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ctx.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- involution and parts --------------------------------------------------

    def conj(self) -> "CycloNum":
        """Complex conjugation, the automorphism zeta -> zeta^(m-1)."""
        d = self.ctx.d
        out = [_ZERO] * d
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            vec = self.ctx._conj_of_basis[j]
            for i in range(d):
                if vec[i]:
                    out[i] += c * vec[i]
        return CycloNum(self.ctx, tuple(out))

    def real(self) -> "CycloNum":
        return (self + self.conj()) / 2

    def imag(self) -> "CycloNum":
        return (self - self.conj()) / (self.ctx.i_unit * 2)

    def squared_abs(self) -> "CycloNum":
        return self * self.conj()

    # -- comparisons -------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.from_rational(other)
        if not isinstance(other, CycloNum):
            return NotImplemented
        return self.ctx is other.ctx and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.ctx), self.coeffs))

    # -- rendering ---------------------------------------------------------------

    def __str__(self):
        terms = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            mag = abs(c)
            if j == 0:
                body = str(mag)
            else:
                var = "z" if j == 1 else f"z^{j}"
                body = var if mag == 1 else f"{mag}*{var}"
            if not terms:
                terms.append(body if c > 0 else f"-{body}")
            else:
                terms.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(terms) if terms else "0"

    def __repr__(self):
        return f"<CycloNum {self} (m={self.ctx.m})>"

    def to_complex(self) -> complex:
        """53-bit numeric shadow; for display and plotting only."""
        re = sum(float(c) * self.ctx._cos[j] for j, c in enumerate(self.coeffs) if c)
        im = sum(float(c) * self.ctx._sin[j] for j, c in enumerate(self.coeffs) if c)
        return complex(re, im)


def _poly_trim(p):
    while len(p) > 1 and not p[-1]:
        p = p[:-1]
    return list(p), p[-1]


def _poly_divmod(num, den):
    num = list(num)
    dd = len(den) - 1
    lead = den[dd]
    q_out = [_ZERO] * max(1, len(num) - dd)
    for i in range(len(num) - dd - 1, -1, -1):
        c = num[i + dd] / lead
        q_out[i] = c
        if c:
            for j in range(dd + 1):
                num[i + j] -= c * den[j]
    rem = num[:dd]
    return q_out, (rem if rem else [_ZERO])


def _poly_mul(a, b):
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [_ZERO] * (n - len(a))
    b = list(b) + [_ZERO] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


@lru_cache(maxsize=None)
def make_field(p: int, q: int) -> FieldContext:
    """Field context for the rotation by 2*pi*p/q (requires gcd(p, q) = 1, q >= 3)."""
    return FieldContext(p, q)


# -- module-level operation aliases ------------------------------------------------


def add(a: CycloNum, b: CycloNum) -> CycloNum:
    return a + b


def mul(a: CycloNum, b: CycloNum) -> CycloNum:
    return a * b


def neg(a: CycloNum) -> CycloNum:
    return -a


def inverse(a: CycloNum) -> CycloNum:
    return a.inverse()


def conj(a: CycloNum) -> CycloNum:
    return a.conj()


def real_part(a: CycloNum) -> CycloNum:
    return a.real()


def imag_part(a: CycloNum) -> CycloNum:
    return a.imag()


def embed_rational_point(ctx: FieldContext, x, y) -> CycloNum:
    return ctx.point(x, y)


def sign_of_real(a: CycloNum) -> Sign:
    """Exact sign of a real field element.

    Zero is decided on the coefficient vector; otherwise a certified floating
    point evaluation decides most cases and interval arithmetic at doubling
    precision settles the rest.  Raises ``DomainError`` on non-real input.
    """
    if a != a.conj():
        raise DomainError("sign_of_real requires a conjugation-fixed element")
    return _sign_real_unchecked(a)


def _sign_real_unchecked(a: CycloNum) -> Sign:
    if a.is_zero():
        return Sign.ZERO
    ctx = a.ctx
    try:
        val, err = ctx._float_combo(a.coeffs, ctx._cos)
        if abs(val) > err:
            return Sign.POSITIVE if val > 0 else Sign.NEGATIVE
    except OverflowError:
        pass
    prec = 64
    while True:
        re, _ = ctx._iv_eval(a.coeffs, prec)
        if 0 not in re:
            return Sign.POSITIVE if re.a > 0 else Sign.NEGATIVE
        prec *= 2


def sign_of_imag(a: CycloNum) -> Sign:
    """Exact sign of Im(a); the predicate behind the branch choice."""
    diff = a - a.conj()
    if diff.is_zero():
        return Sign.ZERO
    ctx = a.ctx
    try:
        # Im(a) = sum c_j sin(2 pi j / m); the conj-difference above already
        # certified it is nonzero.
        val, err = ctx._float_combo(a.coeffs, ctx._sin)
        if abs(val) > err:
            return Sign.POSITIVE if val > 0 else Sign.NEGATIVE
    except OverflowError:
        pass
    prec = 64
    while True:
        _, im = ctx._iv_eval(a.coeffs, prec)
        if 0 not in im:
            return Sign.POSITIVE if im.a > 0 else Sign.NEGATIVE
        prec *= 2


def approx(a: CycloNum, bits: int = 64) -> ComplexBox:
    """Certified complex enclosure of the numeric embedding of ``a``.

    The box width is at most ``2^(1-bits) * (1 + |a|)``.
    """
    if bits < 16:
        raise ParameterError("bits must be >= 16")
    ctx = a.ctx
    prec = bits + 16
    while True:
        re, im = ctx._iv_eval(a.coeffs, prec)
        re_lo, re_hi = _iv_to_fractions(re)
        im_lo, im_hi = _iv_to_fractions(im)
        box = ComplexBox(re_lo, re_hi, im_lo, im_hi)
        lo_abs = max(
            _ZERO,
            max(abs(box.re_lo + box.re_hi), abs(box.im_lo + box.im_hi)) / 2
            - box.width,
        )
        if box.width <= Fraction(2) ** (1 - bits) * (1 + lo_abs):
            return box
        prec *= 2


# -- golden-ratio subfield formatting (fields with m == 20) --------------------------


class SubfieldBasis:
    """Exact coordinates of field elements over a fixed Q-basis of a subfield."""

    def __init__(self, elements: Sequence[CycloNum]):
        self.elements = tuple(elements)
        self.ctx = elements[0].ctx
        self._cols = [e.coeffs for e in elements]

    def coords(self, a: CycloNum):
        """Rational coordinates of ``a`` over the basis, or None if outside."""
        if a.ctx is not self.ctx:
            raise WrongContextError("element from a different field context")
        k = len(self._cols)
        d = self.ctx.d
        rows = [[self._cols[c][r] for c in range(k)] + [a.coeffs[r]] for r in range(d)]
        pivots = []
        rank = 0
        for col in range(k):
            piv = next((r for r in range(rank, d) if rows[r][col]), None)
            if piv is None:
                continue
            rows[rank], rows[piv] = rows[piv], rows[rank]
            inv = 1 / rows[rank][col]
            rows[rank] = [x * inv for x in rows[rank]]
            for r in range(d):
                if r != rank and rows[r][col]:
                    f = rows[r][col]
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
            pivots.append(col)
            rank += 1
        if rank < k:
            raise ParameterError("basis elements are linearly dependent")
        for r in range(rank, d):
            if rows[r][k]:
                return None
        out = [_ZERO] * k
        for r, col in enumerate(pivots):
            out[col] = rows[r][k]
        return tuple(out)


def golden_elements(ctx: FieldContext):
    """(phi, sqrt(2+phi), basis over {1, phi, i*sqrt(2+phi), i*phi*sqrt(2+phi)}).

    Only fields with conductor 20 contain the golden ratio this way.
    """
    if ctx.m != 20:
        raise WrongContextError("golden-ratio formatting needs conductor 20")
    cached = ctx._extras.get("golden")
    if cached is None:
        z5 = ctx.zeta_pow(4)
        phi = ctx.one() + z5 + z5.conj()
        i_sqrt = z5 - z5.conj()          # i * sqrt(2 + phi)
        sqrt2phi = i_sqrt / ctx.i_unit
        assert sqrt2phi * sqrt2phi == phi + 2
        assert phi * phi == phi + 1
        basis = SubfieldBasis([ctx.one(), phi, i_sqrt, i_sqrt * phi])
        cached = (phi, sqrt2phi, basis)
        ctx._extras["golden"] = cached
    return cached


def golden_coords(a: CycloNum):
    """(x, y, u, v) with a = x + y*phi + (u + v*phi)*sqrt(2+phi)*i, or None."""
    _, _, basis = golden_elements(a.ctx)
    return basis.coords(a)


def _frac_str(f: Fraction) -> str:
    return str(f)


def _linear_str(a: Fraction, b: Fraction, unit: str) -> str:
    """Render a + b*unit with conventional sign handling."""
    parts = []
    if a:
        parts.append(_frac_str(a))
    if b:
        body = unit if abs(b) == 1 else f"{_frac_str(abs(b))}*{unit}"
        if not parts:
            parts.append(body if b > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if b > 0 else f"- {body}")
    return " ".join(parts) if parts else "0"


def format_golden(a: CycloNum) -> str:
    """Render in the form ``x + y*phi + (u + v*phi)*sqrt(2+phi)*i``."""
    coords = golden_coords(a)
    if coords is None:
        return str(a)
    x, y, u, v = coords
    real = _linear_str(x, y, "phi")
    if not u and not v:
        return real
    inner = _linear_str(u, v, "phi")
    if inner == "1":
        imag = "sqrt(2+phi)*i"
    elif inner == "-1":
        imag = "-sqrt(2+phi)*i"
    elif "+" not in inner and "- " not in inner:
        imag = f"{inner}*sqrt(2+phi)*i"
    else:
        imag = f"({inner})*sqrt(2+phi)*i"
    if imag.startswith("-"):
        return f"{real} - {imag[1:]}" if real != "0" else imag
    return f"{real} + {imag}" if real != "0" else imag
