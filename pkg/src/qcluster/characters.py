"""Schur polynomials for rectangular shapes and the Q-system identities.

These are the classical characters of the rectangular highest-weight
representations, computed through the Jacobi-Trudi determinant over complete
homogeneous polynomials.  A brute-force semistandard-tableau enumeration is
provided as an independent oracle, and the bridge to the cluster engine
specializes q and the frozen variables to 1.
"""

from __future__ import annotations

from itertools import permutations
from typing import Iterator, Mapping, Optional

from .errors import OutOfRange
from .qtorus import CommLaurent


class SymPoly:
    """Sparse commutative polynomial over Z in a fixed number of variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Optional[Mapping[tuple, int]] = None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for v, c in terms.items():
                if c:
                    self.terms[tuple(v)] = int(c)

    @classmethod
    def constant(cls, nvars: int, value: int) -> "SymPoly":
        return cls(nvars, {(0,) * nvars: value} if value else {})

    def __add__(self, other: "SymPoly") -> "SymPoly":
        out = dict(self.terms)
        for v, c in other.terms.items():
            s = out.get(v, 0) + c
            if s:
                out[v] = s
            elif v in out:
                del out[v]
        return SymPoly(self.nvars, out)

    def __sub__(self, other: "SymPoly") -> "SymPoly":
        return self + other.scale(-1)

    def scale(self, c: int) -> "SymPoly":
        return SymPoly(self.nvars, {v: c * x for v, x in self.terms.items()})

    def __mul__(self, other: "SymPoly") -> "SymPoly":
        out: dict = {}
        for u, cu in self.terms.items():
            for v, cv in other.terms.items():
                w = tuple(a + b for a, b in zip(u, v))
                s = out.get(w, 0) + cu * cv
                if s:
                    out[w] = s
                elif w in out:
                    del out[w]
        return SymPoly(self.nvars, out)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SymPoly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __bool__(self) -> bool:
        return bool(self.terms)

    def at_ones(self) -> int:
        return sum(self.terms.values())

    def swap_variables(self, i: int, j: int) -> "SymPoly":
        out = {}
        for v, c in self.terms.items():
            w = list(v)
            w[i], w[j] = w[j], w[i]
            out[tuple(w)] = c
        return SymPoly(self.nvars, out)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for v, c in sorted(self.terms.items()):
            mono = "*".join(f"x{i + 1}^{e}" for i, e in enumerate(v) if e)
            bits.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(bits)


def complete_homogeneous(n: int, m: int) -> SymPoly:
    """h_m(x_1..x_n): the sum of all degree-m monomials; h_0 = 1, h_{<0} = 0."""
    if m < 0:
        return SymPoly(n)
    out: dict = {}

    def rec(i: int, rem: int, cur: list) -> None:
        if i == n - 1:
            out[tuple(cur + [rem])] = 1
            return
        for e in range(rem + 1):
            rec(i + 1, rem - e, cur + [e])

    rec(0, m, [])
    return SymPoly(n, out)


def schur_rect(n: int, k: int, l: int) -> SymPoly:
    """The Schur polynomial of the k x l rectangle in n variables.

    Jacobi-Trudi: det(h_{l - i + j})_{1 <= i, j <= k}; the k = 0 case is 1
    and k = n collapses to (x_1 ... x_n)^l.
    """
    if not (0 <= k <= n) or l < 0:
        raise OutOfRange((n, k, l))
    if k == 0 or l == 0:
        return SymPoly.constant(n, 1)
    if k == n:
        return SymPoly(n, {(l,) * n: 1})
    h = {}
    for m in range(l - k + 1, l + k):
        h[m] = complete_homogeneous(n, m)
    total = SymPoly(n)
    for sigma in permutations(range(k)):
        sign = _perm_sign(sigma)
        prod = SymPoly.constant(n, 1)
        for i in range(k):
            prod = prod * h[l - (i + 1) + (sigma[i] + 1)]
            if not prod:
                break
        total = total + (prod if sign > 0 else prod.scale(-1))
    return total


def _perm_sign(sigma) -> int:
    sign = 1
    for i in range(len(sigma)):
        for j in range(i + 1, len(sigma)):
            if sigma[i] > sigma[j]:
                sign = -sign
    return sign


def semistandard_rectangles(n: int, k: int, l: int) -> Iterator[tuple]:
    """All semistandard fillings of the k x l rectangle with entries in [1, n].

    Rows weakly increase, columns strictly increase; yields the columns
    top-to-bottom reading, used only as an independent oracle.
    """
    if k == 0 or l == 0:
        yield ()
        return

    def columns(prev_col, col_idx):
        # entries strictly increase down a column and weakly along rows
        def build(row, cur):
            if row == k:
                yield tuple(cur)
                return
            lo = max(cur[-1] + 1 if cur else 1, prev_col[row] if prev_col else 1)
            for v in range(lo, n + 1):
                yield from build(row + 1, cur + [v])

        yield from build(0, [])

    def rec(col_idx, prev_col, acc):
        if col_idx == l:
            yield tuple(acc)
            return
        for col in columns(prev_col, col_idx):
            yield from rec(col_idx + 1, col, acc + [col])

    yield from rec(0, None, [])


def schur_rect_by_tableaux(n: int, k: int, l: int) -> SymPoly:
    """Tableau-sum oracle for schur_rect; exponential, test scale only."""
    if not (0 <= k <= n) or l < 0:
        raise OutOfRange((n, k, l))
    out: dict = {}
    for filling in semistandard_rectangles(n, k, l):
        weight = [0] * n
        for col in filling:
            for v in col:
                weight[v - 1] += 1
        w = tuple(weight)
        out[w] = out.get(w, 0) + 1
    return SymPoly(n, out)


def dimension_of(n: int, k: int, l: int) -> int:
    """schur_rect at all-ones, cross-checked against the hook-content product."""
    val = schur_rect(n, k, l).at_ones()
    num, den = 1, 1
    for i in range(1, k + 1):
        for j in range(1, n - k + 1):
            num *= l + i + j - 1
            den *= i + j - 1
    if den == 0 or val * den != num:
        raise OutOfRange(f"dimension mismatch for {(n, k, l)}: {val} vs {num}/{den}")
    return val


def q_system_check(n: int, k: int, l: int) -> tuple[bool, dict]:
    """s_{(l^k)}^2 = s_{((l+1)^k)} s_{((l-1)^k)} + s_{(l^(k-1))} s_{(l^(k+1))}.

    Exact polynomial identity; returns (verdict, witness).
    """
    if not (1 <= k <= n - 1) or l < 1:
        raise OutOfRange((n, k, l))
    lhs = schur_rect(n, k, l) * schur_rect(n, k, l)
    rhs = schur_rect(n, k, l + 1) * schur_rect(n, k, l - 1) + schur_rect(n, k - 1, l) * schur_rect(
        n, k + 1, l
    )
    ok = lhs == rhs
    witness = {} if ok else {"lhs": repr(lhs), "rhs": repr(rhs)}
    return ok, witness


def classical_cluster_q_system(ctx, k: int, l: int) -> bool:
    """The Q-system recursion for specialized cluster variables.

    specialize(X_{k,l+1}) specialize(X_{k,l-1}) =
        specialize(X_{k,l})^2 + specialize(X_{k-1,l}) specialize(X_{k+1,l})
    with q -> 1, frozen variables -> 1, and unit boundary factors.
    """
    n = ctx.n
    if not 1 <= k <= n - 1:
        raise OutOfRange((n, k, l))
    frozen_pos = [ctx.pair.b._pos[(n, 0)], ctx.pair.b._pos[(n, 1)]]

    def spec(kk: int, ll: int) -> CommLaurent:
        if kk == 0 or kk == n:
            return CommLaurent.constant(2 * n - 2, 1)
        return ctx.extended_variable(kk, ll).specialize(frozen_pos)

    lhs = spec(k, l + 1) * spec(k, l - 1)
    rhs = spec(k, l) * spec(k, l) + spec(k - 1, l) * spec(k + 1, l)
    return lhs == rhs
