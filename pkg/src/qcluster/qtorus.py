"""Exact arithmetic in Z[q^{1/2}, q^{-1/2}] and in quantum tori.

Conventions
-----------
All q-exponents are stored as integers counting *halves*: the stored
exponent ``e`` stands for ``q^(e/2)``.  A commutation matrix ``L`` is an
integer skew-symmetric matrix in whole q-units, so the monomial product
rule ``X^u X^v = q^((1/2) u^T L v) X^(u+v)`` contributes the integer
``u^T L v`` in half-units.  Exponent vectors are tuples of ints.
"""

from __future__ import annotations

import heapq
import hashlib
import json
from typing import Iterable, Iterator, Mapping, Optional, Sequence

import numpy as np

from .errors import (
    ExactDivisionFailed,
    NotBarProportional,
    NotQCommuting,
    TorusMismatch,
)

# Pairs below this product size are multiplied by plain dict loops; above it
# the numpy bulk path kicks in.
_BULK_THRESHOLD = 1 << 14
# Coefficient mass bound under which float64 accumulation is exact.
_FLOAT_SAFE = 1 << 52


def _qdict_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            k = e1 + e2
            v = out.get(k, 0) + c1 * c2
            if v:
                out[k] = v
            elif k in out:
                del out[k]
    return out


def _qdict_add_inplace(out: dict, b: dict, sign: int = 1) -> None:
    for e, c in b.items():
        v = out.get(e, 0) + sign * c
        if v:
            out[e] = v
        elif e in out:
            del out[e]


class QScalar:
    """A Laurent polynomial in q^(1/2) with integer coefficients.

    Immutable value type; the zero scalar has an empty term map.
    """

    __slots__ = ("_c",)

    def __init__(self, terms: Optional[Mapping[int, int]] = None):
        c = {}
        if terms:
            for e, v in terms.items():
                if v:
                    c[int(e)] = int(v)
        self._c = c

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "QScalar":
        return cls()

    @classmethod
    def one(cls) -> "QScalar":
        return cls({0: 1})

    @classmethod
    def of(cls, coeff: int, half_exponent: int = 0) -> "QScalar":
        """coeff * q^(half_exponent / 2)."""
        return cls({half_exponent: coeff})

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "QScalar") -> "QScalar":
        out = dict(self._c)
        _qdict_add_inplace(out, other._c)
        return QScalar._wrap(out)

    def __sub__(self, other: "QScalar") -> "QScalar":
        out = dict(self._c)
        _qdict_add_inplace(out, other._c, -1)
        return QScalar._wrap(out)

    def __neg__(self) -> "QScalar":
        return QScalar._wrap({e: -c for e, c in self._c.items()})

    def __mul__(self, other: "QScalar") -> "QScalar":
        return QScalar._wrap(_qdict_mul(self._c, other._c))

    def shift(self, halves: int) -> "QScalar":
        """Multiply by q^(halves/2)."""
        if not halves:
            return self
        return QScalar._wrap({e + halves: c for e, c in self._c.items()})

    def bar(self) -> "QScalar":
        """q -> q^(-1)."""
        return QScalar._wrap({-e: c for e, c in self._c.items()})

    # -- queries -----------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self._c)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, QScalar) and self._c == other._c

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._c.items())))

    def items(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self._c.items()))

    def unit_part(self) -> Optional[tuple[int, int]]:
        """(half_exponent, sign) if this is a unit +-q^(e/2), else None."""
        if len(self._c) != 1:
            return None
        (e, c), = self._c.items()
        return (e, c) if c in (1, -1) else None

    def at_q_one(self) -> int:
        return sum(self._c.values())

    def coefficient_mass(self) -> int:
        """Sum of absolute coefficient values (used for overflow guards)."""
        return sum(abs(c) for c in self._c.values())

    def __repr__(self) -> str:
        if not self._c:
            return "0"
        bits = []
        for e, c in sorted(self._c.items()):
            if e == 0:
                bits.append(f"{c}")
            elif e % 2 == 0:
                bits.append(f"{c}*q^{e // 2}")
            else:
                bits.append(f"{c}*q^{e}/2".replace("^", "^(") + ")")
        return " + ".join(bits)

    def to_json(self) -> list:
        """[[halfUnits, "coeff"], ...] with big integers as decimal strings."""
        return [[e, str(c)] for e, c in sorted(self._c.items())]

    @classmethod
    def from_json(cls, data: Iterable) -> "QScalar":
        return cls({int(e): int(c) for e, c in data})

    @classmethod
    def _wrap(cls, c: dict) -> "QScalar":
        obj = cls.__new__(cls)
        obj._c = c
        return obj


class CommLaurent:
    """Commutative integer Laurent polynomial, sparse over Z^n.

    The target of :meth:`TorusElement.specialize`; only the little arithmetic
    needed by the Q-system checks lives here.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Optional[Mapping[tuple, int]] = None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for v, c in terms.items():
                if c:
                    self.terms[tuple(v)] = int(c)

    @classmethod
    def constant(cls, nvars: int, value: int) -> "CommLaurent":
        return cls(nvars, {(0,) * nvars: value} if value else {})

    def __add__(self, other: "CommLaurent") -> "CommLaurent":
        out = dict(self.terms)
        for v, c in other.terms.items():
            s = out.get(v, 0) + c
            if s:
                out[v] = s
            elif v in out:
                del out[v]
        return CommLaurent(self.nvars, out)

    def __mul__(self, other: "CommLaurent") -> "CommLaurent":
        out: dict = {}
        for u, cu in self.terms.items():
            for v, cv in other.terms.items():
                w = tuple(x + y for x, y in zip(u, v))
                s = out.get(w, 0) + cu * cv
                if s:
                    out[w] = s
                elif w in out:
                    del out[w]
        return CommLaurent(self.nvars, out)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, CommLaurent)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for v, c in sorted(self.terms.items()):
            mono = "*".join(f"x{i + 1}^{e}" for i, e in enumerate(v) if e)
            bits.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(bits)


class QuantumTorus:
    """Quantum torus T_q(L) for an integer skew-symmetric matrix L (q-units)."""

    def __init__(self, L: Sequence[Sequence[int]], labels: Optional[Sequence] = None):
        rank = len(L)
        rows = []
        for i, row in enumerate(L):
            if len(row) != rank:
                raise ValueError("L must be square")
            rows.append(tuple(int(x) for x in row))
        for i in range(rank):
            if rows[i][i] != 0:
                raise ValueError(f"L[{i}][{i}] must vanish")
            for j in range(i + 1, rank):
                if rows[i][j] != -rows[j][i]:
                    raise ValueError(f"L not skew-symmetric at ({i},{j})")
        self.rank = rank
        self.L = rows
        self.labels = list(labels) if labels is not None else None
        self._np_L = np.array(rows, dtype=np.int64) if rank else np.zeros((0, 0), np.int64)
        self.ident = hashlib.sha256(
            json.dumps({"L": [list(r) for r in rows]}, sort_keys=True).encode()
        ).hexdigest()[:16]

    # -- element constructors ----------------------------------------------

    def element(self, terms: Mapping[tuple, QScalar | Mapping[int, int]]) -> "TorusElement":
        out: dict = {}
        for v, c in terms.items():
            vv = tuple(int(x) for x in v)
            if len(vv) != self.rank:
                raise ValueError("exponent vector length != rank")
            cd = dict(c._c) if isinstance(c, QScalar) else {int(e): int(x) for e, x in c.items() if x}
            if cd:
                out[vv] = cd
        return TorusElement(self, out)

    def monomial(self, v: Sequence[int], coeff: int = 1, half_exponent: int = 0) -> "TorusElement":
        vv = tuple(int(x) for x in v)
        if len(vv) != self.rank:
            raise ValueError("exponent vector length != rank")
        if not coeff:
            return TorusElement(self, {})
        return TorusElement(self, {vv: {half_exponent: coeff}})

    def unit(self) -> "TorusElement":
        return self.monomial((0,) * self.rank)

    def zero(self) -> "TorusElement":
        return TorusElement(self, {})

    def generator(self, i: int) -> "TorusElement":
        v = [0] * self.rank
        v[i] = 1
        return self.monomial(v)

    def twist_halves(self, u: Sequence[int], v: Sequence[int]) -> int:
        """u^T L v, the half-unit exponent in X^u X^v = q^(uLv/2) X^(u+v)."""
        L = self.L
        total = 0
        for i, ui in enumerate(u):
            if ui:
                row = L[i]
                total += ui * sum(row[j] * vj for j, vj in enumerate(v) if vj)
        return total

    def __eq__(self, other: object) -> bool:
        return isinstance(other, QuantumTorus) and self.L == other.L

    def __repr__(self) -> str:
        return f"QuantumTorus(rank={self.rank}, id={self.ident})"


def _grlex_key(v: tuple) -> tuple:
    return (sum(v), v)


class TorusElement:
    """Finite Z[q^{1/2},q^{-1/2}]-combination of monomials X^v in a torus.

    Internal storage is ``{exponent tuple: {half_exponent: int}}`` with no
    zero coefficients; instances are treated as immutable values.
    """

    __slots__ = ("torus", "_terms")

    def __init__(self, torus: QuantumTorus, terms: dict):
        self.torus = torus
        self._terms = terms

    # -- views ---------------------------------------------------------------

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def exponents(self) -> Iterator[tuple]:
        return iter(self._terms)

    def coefficient(self, v: Sequence[int]) -> QScalar:
        return QScalar(self._terms.get(tuple(v), {}))

    def terms(self) -> Iterator[tuple[tuple, QScalar]]:
        for v, c in self._terms.items():
            yield v, QScalar(c)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, TorusElement)
            and self.torus.L == other.torus.L
            and self._terms == other._terms
        )

    def is_monomial(self) -> bool:
        return len(self._terms) == 1 and len(next(iter(self._terms.values()))) == 1

    def coefficient_mass(self) -> int:
        return sum(abs(c) for cd in self._terms.values() for c in cd.values())

    # -- additive structure --------------------------------------------------

    def _check_same_torus(self, other: "TorusElement") -> None:
        if self.torus.L != other.torus.L:
            raise TorusMismatch(self.torus.ident, other.torus.ident)

    def __add__(self, other: "TorusElement") -> "TorusElement":
        self._check_same_torus(other)
        out = {v: dict(c) for v, c in self._terms.items()}
        for v, c in other._terms.items():
            cur = out.get(v)
            if cur is None:
                out[v] = dict(c)
            else:
                _qdict_add_inplace(cur, c)
                if not cur:
                    del out[v]
        return TorusElement(self.torus, out)

    def __sub__(self, other: "TorusElement") -> "TorusElement":
        return self + (-other)

    def __neg__(self) -> "TorusElement":
        return TorusElement(
            self.torus, {v: {e: -c for e, c in cd.items()} for v, cd in self._terms.items()}
        )

    def scale(self, coeff: QScalar) -> "TorusElement":
        out = {}
        for v, cd in self._terms.items():
            prod = _qdict_mul(cd, coeff._c)
            if prod:
                out[v] = prod
        return TorusElement(self.torus, out)

    def q_shift(self, halves: int) -> "TorusElement":
        """Multiply by the central unit q^(halves/2)."""
        if not halves:
            return self
        return TorusElement(
            self.torus, {v: {e + halves: c for e, c in cd.items()} for v, cd in self._terms.items()}
        )

    # -- multiplication ----------------------------------------------------

    def __mul__(self, other: "TorusElement") -> "TorusElement":
        self._check_same_torus(other)
        a, b = self._terms, other._terms
        if not a or not b:
            return TorusElement(self.torus, {})
        npairs = len(a) * len(b)
        flat_a = sum(len(c) for c in a.values())
        flat_b = sum(len(c) for c in b.values())
        flat_pairs = flat_a * flat_b
        if flat_pairs <= _BULK_THRESHOLD:
            return self._mul_small(other)
        if flat_pairs <= 8 * npairs:
            # coefficients mostly short: flatten all (v, q) pairs wholesale
            return self._mul_bulk(other)
        # long coefficients: convolve them densely, term pair by term pair
        return self._mul_conv(other)

    def _mul_small(self, other: "TorusElement") -> "TorusElement":
        torus = self.torus
        L = torus.L
        rank = torus.rank
        out: dict = {}
        bl = [
            (v, cv, tuple(sum(L[i][j] * v[j] for j in range(rank) if v[j]) for i in range(rank)))
            for v, cv in other._terms.items()
        ]
        for u, cu in self._terms.items():
            for v, cv, Lv in bl:
                h = sum(u[i] * Lv[i] for i in range(rank) if u[i])
                w = tuple(x + y for x, y in zip(u, v))
                cur = out.get(w)
                if cur is None:
                    cur = out[w] = {}
                for e1, c1 in cu.items():
                    for e2, c2 in cv.items():
                        k = e1 + e2 + h
                        s = cur.get(k, 0) + c1 * c2
                        if s:
                            cur[k] = s
                        elif k in cur:
                            del cur[k]
            # prune freshly cancelled exponents lazily at the end
        return TorusElement(torus, {v: c for v, c in out.items() if c})

    def _mul_bulk(self, other: "TorusElement") -> "TorusElement":
        """Bulk numpy path; falls back to the dict loops when guards fail.

        Exponent sums are packed per multiplication into a single int64 key
        via per-coordinate radix fields sized from the actual ranges (packing
        is linear, so packed(u+v) = packed(u) + packed(v) + const).  The
        q-exponents join through a second int64 keying stage, and float64
        coefficient accumulation is exact because the total coefficient mass
        of the product stays below 2^52 (checked up front).
        """
        if self.coefficient_mass() * other.coefficient_mass() >= _FLOAT_SAFE:
            return self._mul_small(other)
        torus = self.torus
        rank = torus.rank

        def flatten(el: TorusElement):
            vs, qs, cs = [], [], []
            for v, cd in el._terms.items():
                for e, c in cd.items():
                    vs.append(v)
                    qs.append(e)
                    cs.append(c)
            return (
                np.array(vs, dtype=np.int64).reshape(len(vs), rank),
                np.array(qs, dtype=np.int64),
                np.array(cs, dtype=np.float64),
            )

        EU, QU, CU = flatten(self)
        EV, QV, CV = flatten(other)

        lo_u = EU.min(axis=0)
        hi_u = EU.max(axis=0)
        lo_v = EV.min(axis=0)
        hi_v = EV.max(axis=0)
        lo_w = lo_u + lo_v
        widths = (hi_u + hi_v) - lo_w + 1
        shifts = np.zeros(rank, dtype=np.int64)
        bits = 0
        for i in range(rank - 1, -1, -1):
            shifts[i] = bits
            bits += max(1, int(widths[i]).bit_length())
        if bits > 62:
            return self._mul_small(other)
        radix = (np.int64(1) << shifts).astype(np.int64)
        PU = EU @ radix
        PV = EV @ radix
        offset = int(-(lo_w @ radix))

        H = EU @ (torus._np_L @ EV.T)
        q_lo = int(QU.min()) + int(QV.min()) + int(H.min())
        q_hi = int(QU.max()) + int(QV.max()) + int(H.max())
        q_span = q_hi - q_lo + 1

        nu, nv = len(EU), len(EV)
        pw = np.empty(nu * nv, dtype=np.int64)
        qt = np.empty(nu * nv, dtype=np.int64)
        vals = np.empty(nu * nv, dtype=np.float64)
        pv_off = PV + offset
        chunk = max(1, (1 << 22) // max(1, nv))
        for start in range(0, nu, chunk):
            stop = min(start + chunk, nu)
            sl = slice(start * nv, stop * nv)
            np.add(PU[start:stop, None], pv_off[None, :], out=pw[sl].reshape(-1, nv))
            np.add(QU[start:stop, None], QV[None, :] + H[start:stop], out=qt[sl].reshape(-1, nv))
            np.multiply(CU[start:stop, None], CV[None, :], out=vals[sl].reshape(-1, nv))
        uniq_v, gid = np.unique(pw, return_inverse=True)
        if len(uniq_v) * q_span >= (1 << 62):
            return self._mul_small(other)
        key2 = gid.astype(np.int64) * q_span + (qt - q_lo)
        del pw, qt, gid
        uniq2, inv2 = np.unique(key2, return_inverse=True)
        sums = np.zeros(len(uniq2), dtype=np.float64)
        np.add.at(sums, inv2, vals)
        nz = sums != 0
        all_v = uniq_v[(uniq2[nz] // q_span)]
        all_q = (uniq2[nz] % q_span) + q_lo
        all_s = sums[nz]

        masks = [(1 << max(1, int(widths[i]).bit_length())) - 1 for i in range(rank)]
        out: dict = {}
        lo_w_list = [int(x) for x in lo_w]
        shift_list = [int(x) for x in shifts]
        vcache: dict = {}
        for t in range(len(all_v)):
            pv = int(all_v[t])
            v = vcache.get(pv)
            if v is None:
                v = tuple(
                    ((pv >> shift_list[i]) & masks[i]) + lo_w_list[i] for i in range(rank)
                )
                vcache[pv] = v
            c = int(all_s[t])
            if not c:
                continue
            q = int(all_q[t])
            cd = out.get(v)
            if cd is None:
                cd = out[v] = {}
            s2 = cd.get(q, 0) + c
            if s2:
                cd[q] = s2
            elif q in cd:
                del cd[q]
        return TorusElement(torus, {v: c for v, c in out.items() if c})

    def _mul_conv(self, other: "TorusElement") -> "TorusElement":
        """Term-pair path for long coefficients.

        Coefficients are densified over their exponent span and multiplied as
        exact int64 convolutions; each result term accumulates into one dense
        window covering the full possible exponent range.  Falls back to the
        plain dict loops when int64 bounds may be exceeded.
        """
        torus = self.torus
        rank = torus.rank
        avs = list(self._terms)
        bvs = list(other._terms)

        def dense(cd: dict):
            emin = min(cd)
            arr = np.zeros(max(cd) - emin + 1, dtype=np.int64)
            for e, c in cd.items():
                arr[e - emin] = c
            return emin, arr

        # rigorous int64 bound: every convolution entry and every partial
        # accumulation is bounded by the product of total coefficient masses
        if self.coefficient_mass() * other.coefficient_mass() >= 1 << 62:
            return self._mul_small(other)
        try:
            da = [dense(self._terms[v]) for v in avs]
            db = [dense(other._terms[v]) for v in bvs]
        except OverflowError:
            return self._mul_small(other)

        EU = np.array(avs, dtype=np.int64).reshape(len(avs), rank)
        EV = np.array(bvs, dtype=np.int64).reshape(len(bvs), rank)
        H = EU @ (torus._np_L @ EV.T)
        # per-term windows (lo, array), grown on demand: global spans explode
        out: dict = {}
        for i, va in enumerate(avs):
            ea, ca = da[i]
            hrow = H[i].tolist()
            for j, vb in enumerate(bvs):
                eb, cb = db[j]
                w = tuple(x + y for x, y in zip(va, vb))
                conv = np.convolve(ca, cb)
                start = ea + eb + hrow[j]
                acc = out.get(w)
                if acc is None:
                    out[w] = [start, conv.copy()]
                else:
                    lo, arr = acc
                    hi = lo + len(arr)
                    new_lo = min(lo, start)
                    new_hi = max(hi, start + len(conv))
                    if new_lo < lo or new_hi > hi:
                        grown = np.zeros(new_hi - new_lo, dtype=np.int64)
                        grown[lo - new_lo: lo - new_lo + len(arr)] = arr
                        arr = grown
                        acc[0] = lo = new_lo
                        acc[1] = arr
                    arr[start - lo: start - lo + len(conv)] += conv
        result: dict = {}
        for w, (lo, arr) in out.items():
            nz = np.flatnonzero(arr)
            if len(nz):
                result[w] = {int(e) + lo: int(arr[e]) for e in nz}
        return TorusElement(torus, result)

    def __pow__(self, n: int) -> "TorusElement":
        if n < 0:
            return self.inverse() ** (-n)
        out = self.torus.unit()
        base = self
        while n:
            if n & 1:
                out = out * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n >>= 1
        return out

    def inverse(self) -> "TorusElement":
        """Inverse of a monomial c*q^(e/2) X^v with c = +-1; X^v X^{-v} = 1."""
        if not self.is_monomial():
            raise ExactDivisionFailed("only unit monomials are invertible")
        (v, cd), = self._terms.items()
        (e, c), = cd.items()
        if c not in (1, -1):
            raise ExactDivisionFailed("monomial coefficient is not a unit")
        return self.torus.monomial([-x for x in v], c, -e)

    # -- bar involution ------------------------------------------------------

    def bar(self) -> "TorusElement":
        """The anti-automorphism fixing every X^v and sending q to q^(-1)."""
        return TorusElement(
            self.torus, {v: {-e: c for e, c in cd.items()} for v, cd in self._terms.items()}
        )

    def bar_shift_halves(self) -> int:
        """h with bar(self) = q^(h/2) * self, else NotBarProportional."""
        if not self._terms:
            return 0
        h = None
        for v, cd in self._terms.items():
            # bar(a) = q^(hv/2) a forces c[e] == c[-e-hv]: support symmetric
            # about -hv/2, which pins hv from the extreme exponents
            hv = -(min(cd) + max(cd))
            if {(-e - hv): c for e, c in cd.items()} != cd:
                raise NotBarProportional(f"coefficient at {v} is not bar-symmetric")
            if h is None:
                h = hv
            elif h != hv:
                raise NotBarProportional(f"terms need shifts {h} and {hv}")
        return h

    def bar_normalize(self) -> tuple[int, "TorusElement"]:
        """(s, q^(s/2)*self) with the result bar-invariant; s in half-units."""
        h = self.bar_shift_halves()
        if h % 2:
            raise NotBarProportional("shift is an odd number of half-units")
        s = h // 2
        return s, self.q_shift(s)

    def is_bar_invariant(self) -> bool:
        try:
            return self.bar_shift_halves() == 0
        except NotBarProportional:
            return False

    # -- commutation -------------------------------------------------------

    def lambda_halves(self, other: "TorusElement") -> Optional[int]:
        """h with other*self = q^(h/2) self*other, or None.

        This is the exponent Lambda(self, other) in half-units.
        """
        self._check_same_torus(other)
        ab = (self * other)._terms
        ba = (other * self)._terms
        if len(ab) != len(ba):
            return None
        h = None
        for v, cd in ab.items():
            cd2 = ba.get(v)
            if cd2 is None or len(cd) != len(cd2):
                return None
            d = min(cd2) - min(cd)
            if {e + d: c for e, c in cd.items()} != cd2:
                return None
            if h is None:
                h = d
            elif h != d:
                return None
        return 0 if h is None else h

    def odot(self, other: "TorusElement") -> "TorusElement":
        """Normalized product q^(Lambda/2) * self * other."""
        h = self.lambda_halves(other)
        if h is None:
            raise NotQCommuting("factors do not q-commute")
        if h % 2:
            raise NotQCommuting("odd half-unit commutation exponent")
        return (self * other).q_shift(h // 2)

    # -- specialization ------------------------------------------------------

    def specialize(self, set_one: Iterable[int] = ()) -> CommLaurent:
        """q -> 1 and the listed index positions dropped (variables -> 1)."""
        drop = sorted(set(set_one))
        keep = [i for i in range(self.torus.rank) if i not in drop]
        out: dict = {}
        for v, cd in self._terms.items():
            w = tuple(v[i] for i in keep)
            s = out.get(w, 0) + sum(cd.values())
            if s:
                out[w] = s
            elif w in out:
                del out[w]
        return CommLaurent(len(keep), out)

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        terms = [
            {"v": list(v), "coeff": QScalar(cd).to_json()}
            for v, cd in sorted(self._terms.items(), key=lambda kv: _grlex_key(kv[0]))
        ]
        return {"torus": self.torus.ident, "terms": terms}

    @classmethod
    def from_json(cls, torus: QuantumTorus, data: Mapping) -> "TorusElement":
        if data.get("torus") not in (None, torus.ident):
            raise TorusMismatch(data.get("torus"), torus.ident)
        return torus.element(
            {tuple(t["v"]): QScalar.from_json(t["coeff"]) for t in data["terms"]}
        )

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        bits = []
        for v, cd in sorted(self._terms.items(), key=lambda kv: _grlex_key(kv[0])):
            bits.append(f"({QScalar(cd)!r})*X^{list(v)}")
        return " + ".join(bits[:8]) + (" + ..." if len(bits) > 8 else "")


def left_divide_exact(d: TorusElement, p: TorusElement, max_steps: int = 10**6) -> TorusElement:
    """The exact Q with d*Q = p.

    Greedy elimination in graded-lexicographic order: the leading term of the
    running remainder is cancelled against the leading term of ``d``.  When a
    quotient exists the leading monomials multiply without cancellation, so
    each step recovers one true term of Q and the remainder hits zero, which
    is itself the certificate that d*Q = p (the remainder *is* p - d*Q,
    maintained exactly).  Divergence is cut off by ``max_steps``.

    Requires the leading coefficient of ``d`` to be a unit +-q^(m/2); all
    cluster-variable divisors in scope satisfy this.

    Exponent vectors are packed into single integers with a top degree field,
    so grlex comparison becomes integer comparison and exponent sums become
    integer addition.  For an exact quotient Newton(p) = Newton(d) +
    Newton(Q) bounds every exponent the elimination can visit, so escaping
    the packed layout certifies that no quotient exists.
    """
    d._check_same_torus(p)
    if not p:
        return p.torus.zero()
    if not d:
        raise ExactDivisionFailed("division by zero")
    torus = d.torus
    rank = torus.rank

    lead_u = max(d._terms, key=_grlex_key)
    unit = QScalar(d._terms[lead_u]).unit_part()
    if unit is None:
        raise ExactDivisionFailed("divisor leading coefficient is not a unit")
    lead_e, lead_sign = unit

    if d.is_monomial():
        # fast path: every term divides by one monomial
        out = {}
        for w, cw in p._terms.items():
            wq = tuple(a - b for a, b in zip(w, lead_u))
            shift = -torus.twist_halves(lead_u, wq) - lead_e
            out[wq] = {e + shift: c * lead_sign for e, c in cw.items()}
        return TorusElement(torus, out)

    # layout bounds: exact-quotient coords live in [min_p - max_d, max_p - min_d]
    # and remainder coords in range(p) union (range(d) + range(Q))
    mins_p = [min(v[i] for v in p._terms) for i in range(rank)]
    maxs_p = [max(v[i] for v in p._terms) for i in range(rank)]
    mins_d = [min(v[i] for v in d._terms) for i in range(rank)]
    maxs_d = [max(v[i] for v in d._terms) for i in range(rank)]
    q_lo = [mins_p[i] - maxs_d[i] for i in range(rank)]
    q_hi = [maxs_p[i] - mins_d[i] for i in range(rank)]
    r_lo = [min(mins_p[i], mins_d[i] + q_lo[i]) for i in range(rank)]
    r_hi = [max(maxs_p[i], maxs_d[i] + q_hi[i]) for i in range(rank)]

    shifts = [0] * rank
    bits = 0
    masks = [0] * rank
    for i in range(rank - 1, -1, -1):
        width = max(1, (r_hi[i] - r_lo[i] + 1).bit_length())
        shifts[i] = bits
        masks[i] = (1 << width) - 1
        bits += width
    deg_shift = bits

    def pack(v) -> int:
        # plain addition keeps pack linear (up to one constant) even when
        # evaluated outside the field ranges, e.g. for the zero vector
        total = (sum(v) - sum(r_lo)) << deg_shift
        for i in range(rank):
            total += (v[i] - r_lo[i]) << shifts[i]
        return total

    pack_zero = pack((0,) * rank)

    def unpack(key: int) -> tuple:
        return tuple(((key >> shifts[i]) & masks[i]) + r_lo[i] for i in range(rank))

    d_offsets = []
    d_coeffs = []
    d_exps = []
    for u, cu in d._terms.items():
        if u == lead_u:
            continue
        d_offsets.append(pack(u) - pack_zero)
        d_coeffs.append(tuple(cu.items()))
        d_exps.append(u)
    lead_off = pack(lead_u) - pack_zero
    nd = len(d_offsets)
    # (u^T L) rows for every non-leading divisor term, for per-step twists
    UL = (np.array(d_exps, dtype=np.int64).reshape(nd, rank) @ torus._np_L)
    lead_L = [sum(lead_u[i] * torus.L[i][j] for i in range(rank)) for j in range(rank)]

    rem: dict = {}
    for v, c in p._terms.items():
        rem[pack(v)] = dict(c)
    heap = [-k for k in rem]
    heapq.heapify(heap)
    quot: dict = {}
    steps = 0
    while rem:
        steps += 1
        if steps > max_steps:
            raise ExactDivisionFailed(f"no exact quotient within {max_steps} steps")
        while heap:
            wkey = -heap[0]
            if wkey in rem:
                break
            heapq.heappop(heap)
        else:
            raise ExactDivisionFailed("heap exhausted with nonzero remainder")
        cw = rem.pop(wkey)
        w = unpack(wkey)
        wq = tuple(a - b for a, b in zip(w, lead_u))
        if any(not (q_lo[i] <= wq[i] <= q_hi[i]) for i in range(rank)):
            raise ExactDivisionFailed("quotient support escaped the Newton bound")
        shift = -sum(lead_L[j] * wq[j] for j in range(rank) if wq[j]) - lead_e
        cq = {e + shift: c * lead_sign for e, c in cw.items()}
        quot[wq] = cq
        if not nd:
            continue
        wq_key = wkey - lead_off
        twists = (UL @ np.array(wq, dtype=np.int64)).tolist()
        cq_items = list(cq.items())
        cq_single = cq_items[0] if len(cq_items) == 1 else None
        for j in range(nd):
            w2 = d_offsets[j] + wq_key
            cur = rem.get(w2)
            if cur is None:
                cur = rem[w2] = {}
                heapq.heappush(heap, -w2)
            h2 = twists[j]
            cu_items = d_coeffs[j]
            if cq_single is not None and len(cu_items) == 1:
                e1, c1 = cu_items[0]
                e2, c2 = cq_single
                k = e1 + e2 + h2
                s = cur.get(k, 0) - c1 * c2
                if s:
                    cur[k] = s
                else:
                    del cur[k]
            else:
                for e1, c1 in cu_items:
                    for e2, c2 in cq_items:
                        k = e1 + e2 + h2
                        s = cur.get(k, 0) - c1 * c2
                        if s:
                            cur[k] = s
                        elif k in cur:
                            del cur[k]
            if not cur:
                del rem[w2]
    return TorusElement(torus, quot)


def lambda_exponent(a: TorusElement, b: TorusElement) -> Optional[int]:
    """Lambda(a, b) in half-units: b*a = q^(Lambda/2)*a*b, or None."""
    return a.lambda_halves(b)
