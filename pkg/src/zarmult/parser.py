"""Text input: polynomials, series and projective points.

Polynomial grammar::

    expr     := ['-'] term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := base ('^' nat)?
    base     := rational | var | '(' expr ')'
    rational := int ('/' posint)?
    var      := [a-z][a-z0-9]*

Multiplication is always explicit.  Series text uses the same shape with
rational exponents in parentheses, e.g. ``1/2*t^(3/2) - t^(2) + O(t^(5/2))``;
tower variables are ``t1``, ``t2``, ``t3``.
"""

import re
from fractions import Fraction

from .errors import InvalidInputError, ParseError
from .fields import QQ
from .poly import MultiPoly
from .series import INF, MAX_TOWER_DEPTH, PuiseuxSeries, SeriesDomain

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9]*)|(\S))")


class _Tok:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind, self.text, self.line, self.col = kind, text, line, col


def tokenize(text):
    toks = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        for i in range(pos, start):
            if text[i] == "\n":
                line, line_start = line + 1, i + 1
        col = start - line_start + 1
        if m.group(1):
            toks.append(_Tok("int", m.group(1), line, col))
        elif m.group(2):
            toks.append(_Tok("name", m.group(2), line, col))
        elif m.group(3):
            ch = m.group(3)
            if ch not in "+-*/^():":
                raise ParseError(f"unexpected character {ch!r}", line, col)
            toks.append(_Tok(ch, ch, line, col))
        pos = m.end()
    end_line = text.count("\n") + 1
    end_col = len(text) - (text.rfind("\n") + 1) + 1
    toks.append(_Tok("end", "", end_line, end_col))
    return toks


class _Parser:
    """Recursive descent over the token list; semantics supplied by subclasses."""

    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def accept(self, kind):
        if self.tok.kind == kind:
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, kind, what=None):
        t = self.accept(kind)
        if t is None:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {what or kind!r}, found {found!r}")
        return t

    def parse(self):
        v = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return v

    def expr(self):
        neg = self.accept("-")
        acc = self.term()
        if neg:
            acc = self.negate(acc)
        while self.tok.kind in "+-" and self.tok.kind != "end":
            op = self.tok.kind
            self.i += 1
            rhs = self.term()
            acc = self.add(acc, rhs) if op == "+" else self.add(acc, self.negate(rhs))
        return acc

    def term(self):
        acc = self.factor()
        while self.accept("*"):
            acc = self.mul(acc, self.factor())
        return acc

    def factor(self):
        base_tok = self.tok
        b = self.base()
        if self.accept("^"):
            return self.power(b, base_tok)
        return b

    def base(self):
        t = self.tok
        if t.kind == "int":
            self.i += 1
            num = int(t.text)
            if self.accept("/"):
                d = self.expect("int", "positive integer denominator")
                den = int(d.text)
                if den == 0:
                    raise self.error("zero denominator", d)
                return self.number(Fraction(num, den), t)
            return self.number(Fraction(num), t)
        if t.kind == "name":
            self.i += 1
            return self.variable(t)
        if t.kind == "(":
            self.i += 1
            v = self.expr()
            self.expect(")", "')'")
            return v
        found = t.text or "end of input"
        raise self.error(f"expected a number, variable or '(', found {found!r}")

    def nat(self):
        return int(self.expect("int", "natural exponent").text)


class _PolyParser(_Parser):
    def __init__(self, text, variables, domain):
        super().__init__(text)
        self.variables = tuple(sorted(set(variables)))
        self.domain = domain

    def number(self, q, tok):
        try:
            c = self.domain.from_fraction(q)
        except InvalidInputError as err:
            raise self.error(str(err), tok) from None
        return MultiPoly.constant(c, self.variables, self.domain)

    def variable(self, tok):
        if tok.text not in self.variables or not tok.text.islower():
            raise self.error(f"unknown variable {tok.text!r}", tok)
        return MultiPoly.var(tok.text, self.variables, self.domain)

    def power(self, b, tok):
        return b ** self.nat()

    def negate(self, a):
        return -a

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b


def parse_polynomial(text, variables, field=QQ):
    """Parse ``text`` into a MultiPoly over ``field`` in the declared ``variables``."""
    domain = field if hasattr(field, "convert") else field.domain
    for v in variables:
        if not re.fullmatch(r"[a-z][a-z0-9]*", v):
            raise InvalidInputError(f"invalid variable name {v!r}")
    p = _PolyParser(text, variables, domain).parse()
    p.check_limits()
    return p


# ---------------------------------------------------------------------------
# series and points


class _Trunc:
    """The ``O(t^q)`` marker; absorbs into a sum by truncating it."""

    def __init__(self, order):
        self.order = order


def _tower_vars(text):
    names = set(re.findall(r"[A-Za-z][A-Za-z0-9]*", text)) - {"O"}
    if not names or names == {"t"}:
        return ["t"]
    levels = []
    for n in names:
        m = re.fullmatch(r"t([1-9])", n)
        if not m:
            raise InvalidInputError(f"unknown series variable {n!r}")
        levels.append(int(m.group(1)))
    depth = max(levels)
    if depth > MAX_TOWER_DEPTH:
        raise InvalidInputError(f"tower deeper than {MAX_TOWER_DEPTH}")
    return [f"t{i}" for i in range(1, depth + 1)]


def tower_domains(base, names):
    """Coefficient domain of each level: ``[base, K1, ..., K_{N-1}]``."""
    doms = [base]
    for n in names[:-1]:
        doms.append(SeriesDomain(doms[-1], n))
    return doms


def embed(value, level, doms, names):
    """Lift a scalar or a lower-level series to a series at ``level`` (1-based)."""
    dom = doms[level - 1]
    var = names[level - 1]
    if isinstance(value, PuiseuxSeries) and value.var == var:
        return value
    if level > 1:
        value = embed(value, level - 1, doms, names)
    return PuiseuxSeries({0: dom.convert(value)}, 1, INF, dom, var)


class _SeriesParser(_Parser):
    def __init__(self, text, base, names):
        super().__init__(text)
        self.base_field = base
        self.names = names
        self.doms = tower_domains(base, names)
        self.top = len(names)

    def number(self, q, tok):
        try:
            c = self.base_field.from_fraction(q)
        except InvalidInputError as err:
            raise self.error(str(err), tok) from None
        return embed(c, self.top, self.doms, self.names)

    def variable(self, tok):
        if tok.text not in self.names:
            raise self.error(f"unknown variable {tok.text!r}", tok)
        level = self.names.index(tok.text) + 1
        dom = self.doms[level - 1]
        return embed(PuiseuxSeries({1: dom.one}, 1, INF, dom, tok.text),
                     self.top, self.doms, self.names)

    def base(self):
        t = self.tok
        if t.kind == "name" and t.text == "O":
            self.i += 1
            self.expect("(", "'('")
            inner = self.expr()
            self.expect(")", "')'")
            if isinstance(inner, _Trunc) or len(inner.coeffs) != 1 or not inner.is_exact \
                    or inner.leading_coefficient() != inner.domain.one:
                raise self.error("O(...) takes a single monomial of the top variable", t)
            return _Trunc(inner.valuation())
        return super().base()

    def power(self, b, tok):
        if isinstance(b, _Trunc):
            raise self.error("order terms cannot be raised to a power", tok)
        if self.accept("("):
            neg = self.accept("-")
            n = int(self.expect("int", "exponent").text)
            d = 1
            if self.accept("/"):
                d = int(self.expect("int", "positive denominator").text)
                if d == 0:
                    raise self.error("zero denominator")
            self.expect(")", "')'")
            q = Fraction(-n if neg else n, d)
        else:
            q = Fraction(self.nat())
        if q.denominator == 1:
            try:
                return b ** int(q)
            except ZeroDivisionError:
                raise self.error("negative power of zero", tok) from None
        if len(b.coeffs) != 1 or not b.is_exact or b.coeffs.get(b.ramification) != b.domain.one:
            raise self.error("fractional exponents apply to the top series variable only", tok)
        return PuiseuxSeries.from_terms({q: b.domain.one}, INF, b.domain, b.var)

    def negate(self, a):
        if isinstance(a, _Trunc):
            raise self.error("cannot negate an order term")
        return -a

    def add(self, a, b):
        if isinstance(b, _Trunc):
            a, b = b, a
        if isinstance(a, _Trunc):
            if isinstance(b, _Trunc):
                return _Trunc(min(a.order, b.order))
            return b.truncate(a.order)
        return a + b

    def mul(self, a, b):
        if isinstance(a, _Trunc) or isinstance(b, _Trunc):
            raise self.error("order terms cannot be multiplied")
        return a * b


def _parse_series(text, field, names):
    p = _SeriesParser(text, field, names)
    v = p.parse()
    if isinstance(v, _Trunc):
        return PuiseuxSeries({}, 1, v.order, p.doms[-1], names[-1])
    return v


def parse_series(text, field=QQ):
    """Parse series text into a PuiseuxSeries at the top level of its tower."""
    return _parse_series(text, field, _tower_vars(text))


def _split_point(text):
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ParseError("a point is written '(expr : ... : expr)'", 1, 1)
    parts, cur, depth = [], [], 0
    for ch in s[1:-1]:
        depth += (ch == "(") - (ch == ")")
        if ch == ":" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    if len(parts) < 2:
        raise ParseError("a point needs at least two coordinates", 1, 1)
    if any(not p.strip() for p in parts):
        raise ParseError("empty coordinate", 1, 1)
    return s[1:-1], parts


def parse_point(text, field=QQ):
    """Parse ``(expr : expr : ... : expr)`` into a ProjPoint.

    A point whose coordinates are all constants is returned over the base
    field itself.
    """
    from .specialisation import ProjPoint
    body, parts = _split_point(text)
    names = _tower_vars(body)
    coords = [_parse_series(part, field, names) for part in parts]
    if names == ["t"] and all(c.is_exact and set(c.coeffs) <= {0} for c in coords):
        return ProjPoint([c.coefficient(0) for c in coords])
    return ProjPoint(coords)


def parse_rational(text, field=QQ):
    try:
        q = Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise InvalidInputError(f"not a rational number: {text!r}") from None
    return field.from_fraction(q)
