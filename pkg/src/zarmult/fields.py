"""Exact coefficient domains: the rationals, prime fields and small simple extensions.

Every domain exposes ``zero``, ``one``, ``characteristic`` and ``convert``;
its elements support ``+ - * /`` and ``**`` with ints.  Rationals are plain
:class:`fractions.Fraction` values.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from . import dense
from .errors import DomainMismatchError, InvalidInputError, NotInvertibleError


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldDescriptor:
    """Characteristic of the coefficient field: 0 for Q, a prime p for F_p."""

    characteristic: int = 0

    def __post_init__(self):
        c = self.characteristic
        if c != 0 and not is_prime(c):
            raise InvalidInputError(f"characteristic must be 0 or prime, got {c}")

    @property
    def domain(self):
        return QQ if self.characteristic == 0 else GF(self.characteristic)


class RationalField:
    characteristic = 0
    degree = 1
    is_finite = False
    zero = Fraction(0)
    one = Fraction(1)
    base = None

    def convert(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, PrimeFieldElement):
            raise DomainMismatchError("cannot convert F_p element to Q")
        return Fraction(x)

    def from_fraction(self, q):
        return Fraction(q)

    def pth_root(self, a):
        raise InvalidInputError("p-th roots only exist in characteristic p")

    def __repr__(self):
        return "QQ"

    def __str__(self):
        return "Q"

    def __reduce__(self):
        return "QQ"


QQ = RationalField()


class PrimeFieldElement:
    """Residue class modulo a prime."""

    __slots__ = ("value", "modulus")

    def __init__(self, value, modulus):
        self.value = value % modulus
        self.modulus = modulus

    def _coerce(self, other):
        if isinstance(other, PrimeFieldElement):
            if other.modulus != self.modulus:
                raise DomainMismatchError(
                    f"F_{self.modulus} and F_{other.modulus} elements do not mix")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            if other.denominator % self.modulus == 0:
                raise InvalidInputError(
                    f"denominator {other.denominator} divisible by characteristic {self.modulus}")
            return other.numerator * pow(other.denominator, -1, self.modulus)
        return None

    def __add__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return PrimeFieldElement(self.value + v, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return PrimeFieldElement(self.value - v, self.modulus)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return PrimeFieldElement(v - self.value, self.modulus)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return PrimeFieldElement(self.value * v, self.modulus)

    __rmul__ = __mul__

    def inverse(self):
        if self.value == 0:
            raise NotInvertibleError(f"0 has no inverse in F_{self.modulus}")
        return PrimeFieldElement(pow(self.value, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        if v % self.modulus == 0:
            raise NotInvertibleError(f"division by zero in F_{self.modulus}")
        return PrimeFieldElement(self.value * pow(v, -1, self.modulus), self.modulus)

    def __rtruediv__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return PrimeFieldElement(v, self.modulus) / self

    def __neg__(self):
        return PrimeFieldElement(-self.value, self.modulus)

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return PrimeFieldElement(pow(self.value, n, self.modulus), self.modulus)

    def __eq__(self, other):
        if isinstance(other, PrimeFieldElement):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"PrimeFieldElement({self.value}, {self.modulus})"

    def __str__(self):
        return str(self.value)


class PrimeField:
    is_finite = True
    degree = 1
    base = None

    def __init__(self, p):
        if not is_prime(p):
            raise InvalidInputError(f"{p} is not prime")
        self.characteristic = p
        self.zero = PrimeFieldElement(0, p)
        self.one = PrimeFieldElement(1, p)

    @property
    def size(self):
        return self.characteristic

    def convert(self, x):
        p = self.characteristic
        if isinstance(x, PrimeFieldElement):
            if x.modulus != p:
                raise DomainMismatchError(f"element of F_{x.modulus} used in F_{p}")
            return x
        if isinstance(x, int):
            return PrimeFieldElement(x, p)
        if isinstance(x, Fraction):
            return self.from_fraction(x)
        raise DomainMismatchError(f"cannot convert {x!r} to F_{p}")

    def from_fraction(self, q):
        q = Fraction(q)
        p = self.characteristic
        if q.denominator % p == 0:
            raise InvalidInputError(
                f"denominator {q.denominator} divisible by characteristic {p}")
        return PrimeFieldElement(q.numerator * pow(q.denominator, -1, p), p)

    def elements(self):
        return [PrimeFieldElement(v, self.characteristic) for v in range(self.characteristic)]

    def pth_root(self, a):
        # Frobenius is the identity on F_p
        return a

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("GF", self.characteristic))

    def __repr__(self):
        return f"GF({self.characteristic})"

    def __str__(self):
        return f"F_{self.characteristic}"


@lru_cache(maxsize=None)
def GF(p):
    return PrimeField(p)


class ExtElement:
    """Element of base[z]/(m(z)) stored as a reduced coefficient tuple."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs, field):
        self.field = field
        zero = field.base.zero
        c = list(coeffs)
        if len(c) > field.degree:
            c = dense.divmod_(dense.trim(c), list(field.modulus), zero)[1]
        c = list(c) + [zero] * (field.degree - len(c))
        self.coeffs = tuple(c)

    def _coerce(self, other):
        if isinstance(other, ExtElement):
            if other.field != self.field:
                raise DomainMismatchError("elements of different extensions")
            return other
        if isinstance(other, (int, Fraction, PrimeFieldElement)):
            return self.field.convert(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExtElement([a + b for a, b in zip(self.coeffs, o.coeffs)], self.field)

    __radd__ = __add__

    def __neg__(self):
        return ExtElement([-a for a in self.coeffs], self.field)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        zero = self.field.base.zero
        return ExtElement(dense.mul(list(self.coeffs), list(o.coeffs), zero), self.field)

    __rmul__ = __mul__

    def inverse(self):
        zero = self.field.base.zero
        one = self.field.base.one
        a = dense.trim(self.coeffs)
        if not a:
            raise NotInvertibleError("0 has no inverse")
        # extended Euclid: s*a + t*m = 1
        r0, r1 = list(self.field.modulus), a
        s0, s1 = [], [one]
        while r1:
            q, r = dense.divmod_(r0, r1, zero)
            r0, r1 = r1, r
            s0, s1 = s1, dense.sub(s0, dense.mul(q, s1, zero))
        if len(r0) != 1:
            raise NotInvertibleError("modulus is reducible; element is a zero divisor")
        inv_c = 1 / r0[0]
        return ExtElement(dense.scale(s0, inv_c), self.field)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, ExtElement) else other
        if o is None:
            return NotImplemented
        return o.field == self.field and o.coeffs == self.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"ExtElement({list(self.coeffs)})"

    def __str__(self):
        g = self.field.name
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else (g if i == 1 else f"{g}^{i}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        if not parts:
            return "0"
        text = " + ".join(parts).replace("+ -", "- ")
        return text if len(parts) == 1 and "*" not in text and " " not in text else f"({text})"


class ExtensionField:
    """Simple algebraic extension base[z]/(m(z)) with m monic irreducible."""

    def __init__(self, base, modulus, name="a"):
        m = dense.monic([base.convert(c) for c in modulus])
        if len(m) < 3:
            raise InvalidInputError("extension modulus must have degree >= 2")
        self.base = base
        self.modulus = tuple(m)
        self.degree = len(m) - 1
        self.name = name
        self.characteristic = base.characteristic
        self.is_finite = base.is_finite
        self.zero = ExtElement([], self)
        self.one = ExtElement([base.one], self)

    @property
    def generator(self):
        return ExtElement([self.base.zero, self.base.one], self)

    @property
    def size(self):
        return self.base.size ** self.degree

    def convert(self, x):
        if isinstance(x, ExtElement):
            if x.field != self:
                raise DomainMismatchError("element of a different extension")
            return x
        return ExtElement([self.base.convert(x)], self)

    def from_fraction(self, q):
        return ExtElement([self.base.from_fraction(q)], self)

    def elements(self):
        for cs in product(self.base.elements(), repeat=self.degree):
            yield ExtElement(cs, self)

    def pth_root(self, a):
        if not self.is_finite:
            raise InvalidInputError("p-th roots only exist in characteristic p")
        # inverse Frobenius on F_{p^d} is a -> a^(p^(d-1))
        return a ** (self.characteristic ** (self.degree - 1))

    def minpoly_str(self):
        terms = []
        for i, c in reversed(list(enumerate(self.modulus))):
            if not c:
                continue
            mono = "1" if i == 0 else (self.name if i == 1 else f"{self.name}^{i}")
            terms.append(mono if c == 1 and i else f"{c}*{mono}" if i else str(c))
        return " + ".join(terms).replace("+ -", "- ")

    def __eq__(self, other):
        return (isinstance(other, ExtensionField) and other.base == self.base
                and other.modulus == self.modulus)

    def __hash__(self):
        return hash(("ext", self.base, self.modulus))

    def __repr__(self):
        return f"ExtensionField({self.base!r}, {self.minpoly_str()})"


def base_field(domain):
    """Prime field or Q underneath a (possibly extended) coefficient domain."""
    while getattr(domain, "base", None) is not None:
        domain = domain.base
    return domain
