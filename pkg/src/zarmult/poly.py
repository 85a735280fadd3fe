"""Sparse multivariate polynomials over an exact coefficient domain."""

from fractions import Fraction

from .errors import DomainMismatchError, InvalidInputError, ResourceLimitError
from .fields import QQ

MAX_VARIABLES = 6
MAX_TOTAL_DEGREE = 64


class MultiPoly:
    """Immutable polynomial: a map from exponent tuples to nonzero coefficients.

    Variables are kept sorted by name, so two polynomials over the same
    variables and domain are equal exactly when their term maps are equal.
    Arithmetic between polynomials over different variable sets works on the
    union of the variables.
    """

    __slots__ = ("variables", "terms", "domain", "_hash")

    def __init__(self, terms, variables, domain=QQ):
        variables = tuple(variables)
        if list(variables) != sorted(set(variables)):
            order = sorted(set(variables))
            perm = [variables.index(v) for v in order]
            terms = {tuple(e[i] for i in perm): c for e, c in terms.items()}
            variables = tuple(order)
        n = len(variables)
        clean = {}
        for e, c in terms.items():
            if len(e) != n:
                raise InvalidInputError(f"exponent {e} does not match variables {variables}")
            if c:
                clean[tuple(e)] = c
        self.variables = variables
        self.terms = clean
        self.domain = domain
        self._hash = None

    # construction -------------------------------------------------------

    @classmethod
    def zero(cls, variables=(), domain=QQ):
        return cls({}, variables, domain)

    @classmethod
    def constant(cls, c, variables=(), domain=QQ):
        variables = tuple(sorted(set(variables)))
        return cls({(0,) * len(variables): domain.convert(c)}, variables, domain)

    @classmethod
    def var(cls, name, variables=None, domain=QQ):
        variables = tuple(sorted(set(variables or ()) | {name}))
        e = tuple(1 if v == name else 0 for v in variables)
        return cls({e: domain.one}, variables, domain)

    def with_variables(self, variables):
        """Re-express over a superset of the current variables."""
        target = tuple(sorted(set(variables)))
        if target == self.variables:
            return self
        missing = set(self.variables) - set(target)
        if missing:
            raise DomainMismatchError(f"variables {sorted(missing)} would be dropped")
        idx = [self.variables.index(v) if v in self.variables else None for v in target]
        terms = {tuple(e[i] if i is not None else 0 for i in idx): c
                 for e, c in self.terms.items()}
        return MultiPoly(terms, target, self.domain)

    def drop_unused(self):
        used = [i for i, _ in enumerate(self.variables)
                if any(e[i] for e in self.terms)]
        return MultiPoly({tuple(e[i] for i in used): c for e, c in self.terms.items()},
                         [self.variables[i] for i in used], self.domain)

    def _unify(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(other, self.variables, self.domain)
        if other.domain != self.domain:
            raise DomainMismatchError(f"{self.domain!r} vs {other.domain!r}")
        if other.variables == self.variables:
            return self, other
        vs = set(self.variables) | set(other.variables)
        return self.with_variables(vs), other.with_variables(vs)

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        a, b = self._unify(other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return MultiPoly(terms, a.variables, a.domain)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({e: -c for e, c in self.terms.items()}, self.variables, self.domain)

    def __sub__(self, other):
        a, b = self._unify(other)
        return a + (-b)

    def __rsub__(self, other):
        a, b = self._unify(other)
        return b + (-a)

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = self.domain.convert(other)
            return MultiPoly({e: v * c for e, v in self.terms.items()}, self.variables, self.domain)
        a, b = self._unify(other)
        terms = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                v = c1 * c2
                terms[e] = terms[e] + v if e in terms else v
        return MultiPoly(terms, a.variables, a.domain)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise InvalidInputError("negative powers of polynomials are not polynomials")
        result = MultiPoly.constant(1, self.variables, self.domain)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c):
        return MultiPoly({e: v * c for e, v in self.terms.items()}, self.variables, self.domain)

    # comparison ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            if isinstance(other, (int, Fraction)) or other == 0:
                return self == MultiPoly.constant(other, self.variables, self.domain) \
                    if other else not self.terms
            return NotImplemented
        if self.domain != other.domain:
            return False
        if self.variables != other.variables:
            try:
                a, b = self._unify(other)
            except DomainMismatchError:
                return False
            return a.terms == b.terms
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            p = self.drop_unused()
            self._hash = hash((p.variables, frozenset(p.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # inspection ---------------------------------------------------------

    def index(self, var):
        try:
            return self.variables.index(var)
        except ValueError:
            return None

    def degree(self, var=None):
        """Degree in ``var``, or total degree.  The zero polynomial has degree -1."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        i = self.index(var)
        if i is None:
            return 0
        return max(e[i] for e in self.terms)

    total_degree = degree

    def ord(self, var):
        """Least exponent of ``var`` among the terms (x-adic order)."""
        if not self.terms:
            return float("inf")
        i = self.index(var)
        if i is None:
            return 0
        return min(e[i] for e in self.terms)

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * len(self.variables), self.domain.zero)

    def coeffs_in(self, var):
        """Map degree -> coefficient polynomial (same variables, ``var`` absent)."""
        i = self.index(var)
        if i is None:
            return {0: self} if self.terms else {}
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            e2 = e[:i] + (0,) + e[i + 1:]
            out.setdefault(k, {})[e2] = c
        return {k: MultiPoly(t, self.variables, self.domain) for k, t in out.items()}

    def coeff(self, var, k):
        return self.coeffs_in(var).get(k, MultiPoly.zero(self.variables, self.domain))

    def leading_coeff(self, var):
        cs = self.coeffs_in(var)
        if not cs:
            return MultiPoly.zero(self.variables, self.domain)
        return cs[max(cs)]

    def leading_term(self):
        """Lexicographically largest exponent and its coefficient."""
        e = max(self.terms)
        return e, self.terms[e]

    @classmethod
    def from_coeffs(cls, var, coeffs, variables, domain):
        variables = tuple(sorted(set(variables) | {var}))
        i = variables.index(var)
        terms = {}
        for k, c in coeffs.items():
            c = c.with_variables(variables)
            for e, v in c.terms.items():
                e2 = e[:i] + (e[i] + k,) + e[i + 1:]
                terms[e2] = terms[e2] + v if e2 in terms else v
        return cls(terms, variables, domain)

    # calculus and substitution -------------------------------------------

    def diff(self, var):
        i = self.index(var)
        if i is None:
            return MultiPoly.zero(self.variables, self.domain)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                terms[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
        return MultiPoly(terms, self.variables, self.domain)

    def evaluate(self, values, zero=None, one=None):
        """Evaluate at a full assignment ``{var: value}``; values may be series."""
        vals = [values[v] for v in self.variables]
        acc = self.domain.zero if zero is None else zero
        powers = [{} for _ in vals]
        for e, c in self.terms.items():
            term = c if one is None else one * c
            for j, k in enumerate(e):
                if k:
                    pw = powers[j].get(k)
                    if pw is None:
                        pw = vals[j] ** k
                        powers[j][k] = pw
                    term = term * pw
            acc = acc + term
        return acc

    def subs(self, mapping):
        """Substitute polynomials (or scalars) for some variables.

        The result keeps every variable of ``self`` not substituted, plus the
        variables of the substituted polynomials.
        """
        keep = [v for v in self.variables if v not in mapping]
        extra = set()
        polys = {}
        for v, p in mapping.items():
            if isinstance(p, MultiPoly):
                if p.domain != self.domain:
                    raise DomainMismatchError("substitution across domains")
                extra |= set(p.variables)
                polys[v] = p
            else:
                polys[v] = p
        allv = tuple(sorted(set(keep) | extra))
        one = MultiPoly.constant(1, allv, self.domain)
        for v, p in polys.items():
            polys[v] = p.with_variables(allv) if isinstance(p, MultiPoly) \
                else one.scale(self.domain.convert(p))
        result = MultiPoly.zero(allv, self.domain)
        cache = {}
        keep_idx = [(allv.index(v), self.variables.index(v)) for v in keep]
        for e, c in self.terms.items():
            mono = [0] * len(allv)
            for ai, si in keep_idx:
                mono[ai] = e[si]
            term = MultiPoly({tuple(mono): c}, allv, self.domain)
            for v, p in polys.items():
                k = e[self.variables.index(v)]
                if k:
                    key = (v, k)
                    if key not in cache:
                        cache[key] = p ** k
                    term = term * cache[key]
            result = result + term
        return result

    def translate(self, shifts):
        """Substitute ``v -> v + shifts[v]``."""
        mapping = {}
        for v, a in shifts.items():
            if a:
                mapping[v] = MultiPoly.var(v, self.variables, self.domain) + \
                    MultiPoly.constant(a, self.variables, self.domain)
        return self.subs(mapping) if mapping else self

    def exact_div(self, other):
        """Quotient when ``other`` divides ``self``; raises otherwise."""
        a, b = self._unify(other)
        if not b:
            raise ZeroDivisionError("division by the zero polynomial")
        lb, cb = b.leading_term()
        inv = 1 / cb if not hasattr(cb, "inverse") else cb.inverse()
        q = {}
        r = dict(a.terms)
        n = len(a.variables)
        while r:
            er = max(r)
            if any(er[i] < lb[i] for i in range(n)):
                raise InvalidInputError("polynomial is not divisible")
            c = r[er] * inv
            shift = tuple(er[i] - lb[i] for i in range(n))
            q[shift] = c
            for eb, vb in b.terms.items():
                e = tuple(x + y for x, y in zip(eb, shift))
                v = r.get(e, a.domain.zero) - c * vb
                if v:
                    r[e] = v
                else:
                    r.pop(e, None)
        return MultiPoly(q, a.variables, a.domain)

    def divides(self, other):
        try:
            other.exact_div(self)
            return True
        except InvalidInputError:
            return False

    def map_coeffs(self, fn, domain):
        return MultiPoly({e: fn(c) for e, c in self.terms.items()}, self.variables, domain)

    def check_limits(self):
        if len(self.drop_unused().variables) > MAX_VARIABLES:
            raise ResourceLimitError(f"more than {MAX_VARIABLES} variables")
        if self.degree() > MAX_TOTAL_DEGREE:
            raise ResourceLimitError(f"total degree exceeds {MAX_TOTAL_DEGREE}")
        return self

    # rendering ----------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(v if k == 1 else f"{v}^{k}"
                            for v, k in zip(self.variables, e) if k)
            neg = _is_negative(c)
            mag = -c if neg else c
            if not mono:
                body = _coeff_str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{_coeff_str(mag)}*{mono}"
            if not out:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        return "".join(out)

    def __repr__(self):
        return f"MultiPoly({str(self)!r}, vars={self.variables}, domain={self.domain!r})"


def _is_negative(c):
    return isinstance(c, (int, Fraction)) and c < 0


def _coeff_str(c):
    s = str(c)
    if isinstance(c, (int, Fraction)) or s.isdigit():
        return s
    return s if s.startswith("(") else f"({s})"
