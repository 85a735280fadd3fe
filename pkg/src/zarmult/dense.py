"""Dense univariate polynomials over a field, as coefficient lists (low degree first).

Small helpers used for extension-field arithmetic and for root finding on the
characteristic polynomials met during branch expansion.  Coefficients are
domain elements; the zero polynomial is the empty list.
"""


def trim(a):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def add(a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        if i < len(a) and i < len(b):
            out.append(a[i] + b[i])
        elif i < len(a):
            out.append(a[i])
        else:
            out.append(b[i])
    return trim(out)


def neg(a):
    return [-c for c in a]


def sub(a, b):
    return add(a, neg(b))


def mul(a, b, zero):
    if not a or not b:
        return []
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return trim(out)


def scale(a, c):
    return trim([c * x for x in a])


def divmod_(a, b, zero):
    """Quotient and remainder of ``a`` by nonzero ``b``."""
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = trim(a)
    if len(r) < len(b):
        return [], r
    inv_lc = 1 / b[-1] if not hasattr(b[-1], "inverse") else b[-1].inverse()
    q = [zero] * (len(r) - len(b) + 1)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] * inv_lc
        q[shift] = c
        for i, y in enumerate(b):
            r[i + shift] = r[i + shift] - c * y
        r = trim(r[:-1]) if not r[-1] else trim(r)
    return trim(q), r


def monic(a):
    a = trim(a)
    if not a:
        return a
    lc = a[-1]
    inv = lc.inverse() if hasattr(lc, "inverse") else 1 / lc
    return [c * inv for c in a]


def gcd(a, b, zero):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_(a, b, zero)[1]
    return monic(a)


def evaluate(a, x, zero):
    acc = zero
    for c in reversed(a):
        acc = acc * x + c
    return acc


def derivative(a):
    return trim([c * i for i, c in enumerate(a)][1:])


def degree(a):
    return len(trim(a)) - 1
