"""Exchange matrices, compatible pairs, matrix mutation, and quiver views.

An exchange matrix is stored with one row per index and one column per
exchangeable index (columns in the order the exchangeable indices appear in
``indices``).  The quiver convention is fixed once and for all as

    b_ij = #(arrows j -> i) - #(arrows i -> j),

matching the reference matrix fixtures; quiver pictures drawn with the
reversed orientation are not ground truth.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Optional, Sequence

from .errors import FrozenMutation, NotCompatible, NotSkewSymmetric


def _as_rows(m: Sequence[Sequence[int]]) -> list[list[int]]:
    return [[int(x) for x in row] for row in m]


def skew_symmetrizer(B: Sequence[Sequence[int]]) -> Optional[list[int]]:
    """A positive integer diagonal D with D*B skew-symmetric, or None.

    Ratios d_j/d_i are propagated along nonzero entries; any inconsistency
    (including nonzero b_ii or same-sign opposite entries) means B is not
    skew-symmetrizable.
    """
    n = len(B)
    for i in range(n):
        if B[i][i] != 0:
            return None
        for j in range(n):
            if (B[i][j] == 0) != (B[j][i] == 0):
                return None
            if B[i][j] * B[j][i] > 0:
                return None
    ratio: list[Optional[Fraction]] = [None] * n
    for start in range(n):
        if ratio[start] is not None:
            continue
        ratio[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if B[i][j] == 0:
                    continue
                # d_i b_ij = -d_j b_ji
                want = ratio[i] * Fraction(-B[i][j], B[j][i])
                if ratio[j] is None:
                    ratio[j] = want
                    stack.append(j)
                elif ratio[j] != want:
                    return None
    lcm = 1
    for r in ratio:
        assert r is not None
        lcm = lcm * r.denominator // _gcd(lcm, r.denominator)
    d = [int(r * lcm) for r in ratio]
    if any(x <= 0 for x in d):
        return None
    g = 0
    for x in d:
        g = _gcd(g, x)
    return [x // g for x in d]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a) if a else abs(b)


class ExchangeData:
    """An integer exchange matrix with a frozen/exchangeable index partition.

    ``indices`` are arbitrary hashable ids (tuples like ``(k, l)`` for the
    GL_n family, ints for word positions); ``B[i][c]`` is the entry for row
    index ``indices[i]`` and column ``exchangeable()[c]``.
    """

    def __init__(
        self,
        indices: Sequence[Hashable],
        frozen: Iterable[Hashable],
        B: Sequence[Sequence[int]],
        labels: Optional[Mapping[Hashable, Hashable]] = None,
        validate: bool = True,
    ):
        self.indices = list(indices)
        if len(set(self.indices)) != len(self.indices):
            raise ValueError("duplicate indices")
        self.frozen = frozenset(frozen)
        unknown = self.frozen - set(self.indices)
        if unknown:
            raise ValueError(f"frozen ids not among indices: {unknown}")
        self.B = _as_rows(B)
        self._pos = {ix: i for i, ix in enumerate(self.indices)}
        ex = self.exchangeable()
        if len(self.B) != len(self.indices) or any(len(r) != len(ex) for r in self.B):
            raise ValueError("B shape does not match indices/frozen split")
        self.labels = dict(labels) if labels else None
        if validate:
            if skew_symmetrizer(self.principal_part()) is None:
                raise NotSkewSymmetric("principal part is not skew-symmetrizable")

    # -- index bookkeeping ---------------------------------------------------

    def exchangeable(self) -> list[Hashable]:
        return [ix for ix in self.indices if ix not in self.frozen]

    def row(self, ix: Hashable) -> list[int]:
        return self.B[self._pos[ix]]

    def entry(self, row: Hashable, col: Hashable) -> int:
        return self.B[self._pos[row]][self._col_pos(col)]

    def _col_pos(self, ix: Hashable) -> int:
        ex = self.exchangeable()
        try:
            return ex.index(ix)
        except ValueError:
            raise KeyError(f"{ix} is not exchangeable") from None

    def column(self, ix: Hashable) -> list[int]:
        c = self._col_pos(ix)
        return [row[c] for row in self.B]

    def principal_part(self) -> list[list[int]]:
        ex = self.exchangeable()
        return [[self.entry(i, j) for j in ex] for i in ex]

    # -- mutation ------------------------------------------------------------

    def mutation_matrices(self, k: Hashable) -> tuple[list[list[int]], list[list[int]]]:
        """The auxiliary (E, F) for mutation at k: mu_k(B) = E*B*F."""
        if k in self.frozen:
            raise FrozenMutation(k)
        n = len(self.indices)
        ex = self.exchangeable()
        m = len(ex)
        ki = self._pos[k]
        kc = ex.index(k)
        col = [row[kc] for row in self.B]
        E = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        for i in range(n):
            E[i][ki] = -1 if i == ki else max(0, -col[i])
        F = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
        for j in range(m):
            F[kc][j] = -1 if j == kc else max(0, self.B[ki][j])
        return E, F

    def mutate(self, k: Hashable) -> "ExchangeData":
        """mu_k(B) = E*B*F; involutive, preserves skew-symmetrizability."""
        E, F = self.mutation_matrices(k)
        EB = _mat_mul(E, self.B)
        return ExchangeData(
            self.indices,
            self.frozen,
            _mat_mul(EB, F),
            labels=self.labels,
            validate=False,
        )

    # -- quiver view ---------------------------------------------------------

    def to_quiver(self) -> dict[tuple[Hashable, Hashable], int]:
        """Arrow multiset {(source, target): count}; frozen-frozen omitted.

        Requires a skew-symmetric principal part so that arrows are well
        defined; b_ij = #(j -> i) - #(i -> j).
        """
        pr = self.principal_part()
        for i in range(len(pr)):
            for j in range(len(pr)):
                if pr[i][j] != -pr[j][i]:
                    raise NotSkewSymmetric("quiver view needs a skew-symmetric principal part")
        arrows: dict[tuple[Hashable, Hashable], int] = {}
        ex = self.exchangeable()
        for a, ix in enumerate(ex):
            for b_, jx in enumerate(ex):
                if a >= b_:
                    continue
                val = self.entry(ix, jx)
                if val > 0:
                    arrows[(jx, ix)] = val
                elif val < 0:
                    arrows[(ix, jx)] = -val
        for ix in self.frozen:
            for jx in ex:
                val = self.entry(ix, jx)
                if val > 0:
                    arrows[(jx, ix)] = val
                elif val < 0:
                    arrows[(ix, jx)] = -val
        return arrows

    @classmethod
    def from_quiver(
        cls,
        indices: Sequence[Hashable],
        frozen: Iterable[Hashable],
        arrows: Mapping[tuple[Hashable, Hashable], int],
    ) -> "ExchangeData":
        frozen = frozenset(frozen)
        ex = [ix for ix in indices if ix not in frozen]
        pos = {ix: i for i, ix in enumerate(indices)}
        col = {ix: c for c, ix in enumerate(ex)}
        B = [[0] * len(ex) for _ in indices]
        for (s, t), m in arrows.items():
            if s in frozen and t in frozen:
                raise ValueError("frozen-frozen arrows are not recorded")
            # m arrows s -> t: +m at b_{t,s}, -m at b_{s,t}
            if s in col:
                B[pos[t]][col[s]] += m
            if t in col:
                B[pos[s]][col[t]] -= m
        return cls(indices, frozen, B)

    def has_oriented_3cycle_at(self, k: Hashable) -> bool:
        """True iff unfrozen vertex k lies on an oriented 3-cycle."""
        pr = self.principal_part()
        ex = self.exchangeable()
        n = len(ex)
        for i in range(n):
            for j in range(n):
                if pr[i][j] != -pr[j][i]:
                    raise NotSkewSymmetric("3-cycle test needs a skew-symmetric principal part")
        ki = ex.index(k)
        for a in range(n):
            for b in range(n):
                # k -> a -> b -> k means b_{a,k} > 0, b_{b,a} > 0, b_{k,b} > 0
                if pr[a][ki] > 0 and pr[b][a] > 0 and pr[ki][b] > 0:
                    return True
        return False

    # -- export ----------------------------------------------------------------

    def reorder(self, new_order: Sequence[Hashable]) -> "ExchangeData":
        """Same data with rows (and columns) permuted to ``new_order``."""
        if set(new_order) != set(self.indices):
            raise ValueError("new_order must be a permutation of indices")
        new_ex = [ix for ix in new_order if ix not in self.frozen]
        old_ex = self.exchangeable()
        B = [[self.B[self._pos[ix]][old_ex.index(jx)] for jx in new_ex] for ix in new_order]
        return ExchangeData(new_order, self.frozen, B, labels=self.labels, validate=False)

    def to_dot(self, colors: Optional[Mapping[Hashable, str]] = None) -> str:
        lines = ["digraph quiver {"]
        for ix in self.indices:
            shape = "box" if ix in self.frozen else "ellipse"
            extra = ""
            if colors and ix in colors:
                extra = f', style=filled, fillcolor="{colors[ix]}"'
            lines.append(f'  "{_dot_id(ix)}" [shape={shape}{extra}];')
        for (s, t), m in sorted(self.to_quiver().items(), key=lambda kv: (str(kv[0]))):
            for _ in range(m):
                lines.append(f'  "{_dot_id(s)}" -> "{_dot_id(t)}";')
        lines.append("}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "indices": [_json_id(ix) for ix in self.indices],
            "frozen": [_json_id(ix) for ix in sorted(self.frozen, key=str)],
            "B": [list(r) for r in self.B],
            "labels": (
                [[_json_id(k), _json_id(v)] for k, v in self.labels.items()]
                if self.labels
                else None
            ),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "ExchangeData":
        indices = [_unjson_id(ix) for ix in data["indices"]]
        frozen = [_unjson_id(ix) for ix in data["frozen"]]
        labels = (
            {_unjson_id(k): _unjson_id(v) for k, v in data["labels"]}
            if data.get("labels")
            else None
        )
        return cls(indices, frozen, data["B"], labels=labels)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ExchangeData)
            and self.indices == other.indices
            and self.frozen == other.frozen
            and self.B == other.B
        )

    def __repr__(self) -> str:
        return f"ExchangeData({len(self.indices)} indices, {len(self.frozen)} frozen)"


def _dot_id(ix: Hashable) -> str:
    if isinstance(ix, tuple):
        return ",".join(str(x) for x in ix)
    return str(ix)


def _json_id(ix: Hashable):
    return list(ix) if isinstance(ix, tuple) else ix


def _unjson_id(ix):
    return tuple(ix) if isinstance(ix, list) else ix


def _mat_mul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> list[list[int]]:
    cols = len(B[0]) if B else 0
    out = [[0] * cols for _ in A]
    for i, row in enumerate(A):
        oi = out[i]
        for t, a in enumerate(row):
            if a:
                bt = B[t]
                for j in range(cols):
                    oi[j] += a * bt[j]
    return out


class CompatiblePair:
    """A compatible pair (L, B): L*B vanishes off the principal diagonal of
    its principal part, where it carries positive integers.

    L is a full square integer matrix over all indices, in whole q-units.
    """

    def __init__(self, L: Sequence[Sequence[int]], b: ExchangeData, validate: bool = True):
        self.L = _as_rows(L)
        self.b = b
        n = len(b.indices)
        if len(self.L) != n or any(len(r) != n for r in self.L):
            raise ValueError("L shape does not match index count")
        for i in range(n):
            for j in range(n):
                if self.L[i][j] != -self.L[j][i]:
                    raise NotSkewSymmetric(f"L not skew-symmetric at ({i},{j})")
        self.diag = self.check_compatible() if validate else None

    def check_compatible(self) -> list[int]:
        """The positive diagonal of the principal part of L*B.

        Raises NotCompatible with the offending coordinates if any other
        entry of L*B is nonzero or a diagonal entry fails to be a positive
        integer.
        """
        P = _mat_mul(self.L, self.b.B)
        ex = self.b.exchangeable()
        diag = []
        for j, jx in enumerate(ex):
            for i, ix in enumerate(self.b.indices):
                val = P[i][j]
                if ix == jx:
                    if val <= 0:
                        raise NotCompatible(ix, jx, val)
                    diag.append(val)
                elif val != 0:
                    raise NotCompatible(ix, jx, val)
        return diag

    def mutate(self, k: Hashable) -> "CompatiblePair":
        """(mu_k(L), mu_k(B)) = (E^T L E, E B F); preserves L*B."""
        E, _F = self.b.mutation_matrices(k)
        ET = [[E[j][i] for j in range(len(E))] for i in range(len(E))]
        newL = _mat_mul(_mat_mul(ET, self.L), E)
        return CompatiblePair(newL, self.b.mutate(k), validate=False)

    def entry_L(self, i: Hashable, j: Hashable) -> int:
        pos = self.b._pos
        return self.L[pos[i]][pos[j]]

    def reorder(self, new_order: Sequence[Hashable]) -> "CompatiblePair":
        pos = self.b._pos
        L = [[self.L[pos[i]][pos[j]] for j in new_order] for i in new_order]
        return CompatiblePair(L, self.b.reorder(new_order), validate=False)

    def to_json(self) -> dict:
        return {"L": [list(r) for r in self.L], "b": self.b.to_json()}

    @classmethod
    def from_json(cls, data: Mapping) -> "CompatiblePair":
        return cls(data["L"], ExchangeData.from_json(data["b"]), validate=False)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CompatiblePair) and self.L == other.L and self.b == other.b

    def __repr__(self) -> str:
        return f"CompatiblePair(rank={len(self.b.indices)})"
