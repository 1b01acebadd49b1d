"""Dense univariate polynomials over Q and exact real-root isolation.

Polynomials are lists of coefficients, constant term first.  Everything
here is exact (``int`` / ``Fraction``); floating point never participates
in a decision.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Poly = list  # list[Fraction], constant term first


def trim(p: Sequence) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: Sequence) -> int:
    return len(trim(p)) - 1


def to_fractions(p: Sequence) -> list:
    return [Fraction(c) for c in p]


def add(p: Sequence, q: Sequence) -> list:
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def sub(p: Sequence, q: Sequence) -> list:
    return add(p, [-c for c in q])


def mul(p: Sequence, q: Sequence) -> list:
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def scale(p: Sequence, c) -> list:
    return trim([c * a for a in p])


def divmod_(p: Sequence, q: Sequence) -> tuple[list, list]:
    """Euclidean division over Q."""
    p = to_fractions(trim(p))
    q = to_fractions(trim(q))
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    dq = len(q) - 1
    lead = q[-1]
    if len(p) - 1 < dq:
        return [], p
    quot = [Fraction(0)] * (len(p) - dq)
    rem = p[:]
    for k in range(len(p) - 1 - dq, -1, -1):
        c = rem[k + dq] / lead
        quot[k] = c
        if c:
            for j in range(dq + 1):
                rem[k + j] -= c * q[j]
    return trim(quot), trim(rem[:dq])


def monic(p: Sequence) -> list:
    p = trim(p)
    if not p:
        return []
    lead = Fraction(p[-1])
    return [Fraction(c) / lead for c in p]


def gcd(p: Sequence, q: Sequence) -> list:
    a, b = trim(p), trim(q)
    while b:
        a, b = b, divmod_(a, b)[1]
    return monic(a)


def deriv(p: Sequence) -> list:
    return trim([i * p[i] for i in range(1, len(p))])


def evaluate(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def sturm_sequence(p: Sequence) -> list[list]:
    seq = [to_fractions(trim(p)), to_fractions(deriv(p))]
    while True:
        r = divmod_(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def _sign_changes(values) -> int:
    signs = [v for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_roots(seq: list[list], a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots in the half-open interval (a, b]."""
    va = _sign_changes(evaluate(s, a) for s in seq)
    vb = _sign_changes(evaluate(s, b) for s in seq)
    return va - vb


def root_bound(p: Sequence) -> Fraction:
    """Cauchy bound: every root satisfies |z| < bound."""
    p = to_fractions(trim(p))
    lead = abs(p[-1])
    return 1 + max((abs(c) / lead for c in p[:-1]), default=Fraction(0))


def isolate_real_roots(p: Sequence) -> list[tuple[Fraction, Fraction]]:
    """Disjoint isolating intervals for the real roots of a squarefree ``p``.

    Each returned pair ``(lo, hi)`` is either degenerate (an exact rational
    root) or satisfies ``p(lo) * p(hi) < 0`` with exactly one root inside.
    Intervals come back sorted in increasing order.
    """
    p = to_fractions(trim(p))
    if len(p) <= 1:
        return []
    seq = sturm_sequence(p)
    bound = root_bound(p)
    # round the bound up to a power of two so all endpoints stay dyadic
    b = Fraction(1)
    while b < bound:
        b *= 2
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(-b, b)]
    while stack:
        lo, hi = stack.pop()
        n = count_roots(seq, lo, hi)
        if n == 0:
            continue
        if n == 1:
            if evaluate(p, hi) == 0:
                out.append((hi, hi))
            else:
                out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    # shrink the half-open (lo, hi] intervals to proper sign-change brackets
    result = []
    for lo, hi in sorted(out):
        # a neighbouring exact root may sit on lo; move lo inward
        while lo != hi and evaluate(p, lo) == 0:
            mid = (lo + hi) / 2
            if evaluate(p, mid) == 0:
                lo = hi = mid
            elif count_roots(seq, lo, mid) == 1:
                hi = mid
            else:
                lo = mid
        result.append((lo, hi))
    return result


def bisect_root(p: Sequence, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """One bisection step on a sign-change bracket; returns the half holding the root."""
    if lo == hi:
        return lo, hi
    mid = (lo + hi) / 2
    fm = evaluate(p, mid)
    if fm == 0:
        return mid, mid
    if (evaluate(p, lo) > 0) != (fm > 0):
        return lo, mid
    return mid, hi


def charpoly(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Characteristic polynomial det(xI - M) via Faddeev-LeVerrier, constant first."""
    n = len(matrix)
    M = [[Fraction(v) for v in row] for row in matrix]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    # N_k = M * N_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(M N_k) / k
    N = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        MN = [[sum(M[i][t] * N[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        c = -sum(MN[i][i] for i in range(n)) / k
        coeffs[n - k] = c
        N = [[MN[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
    assert all(c.denominator == 1 for c in coeffs)
    return [int(c) for c in coeffs]
