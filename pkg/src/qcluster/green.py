"""Principal framings, green/red status, and maximal green sequences.

The framed quiver attaches one frozen vertex v' per unfrozen v with a single
arrow v -> v' (entry b_{v,v'} = -1 under the fixed arrow convention).  A
vertex is green while no framing vertex has an arrow into it; after a
maximal green sequence everything is red and the state matches the
co-framed quiver (arrows v' -> v) under a unique unfrozen-vertex bijection.
Sign-coherence (each framing row all-nonnegative or all-nonpositive) is an
external theorem; it is checked at every step rather than assumed, and a
violation is a hard error.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Optional, Sequence

from .errors import NotSkewSymmetric, QClusterError, RedVertexMutation
from .exchange import ExchangeData


def _square_mutate(B: list[list[int]], k: int) -> list[list[int]]:
    n = len(B)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == k or j == k:
                out[i][j] = -B[i][j]
            else:
                p = B[i][k] * B[k][j]
                if B[i][k] > 0 and B[k][j] > 0:
                    out[i][j] = B[i][j] + p
                elif B[i][k] < 0 and B[k][j] < 0:
                    out[i][j] = B[i][j] - p
                else:
                    out[i][j] = B[i][j]
    return out


class FramedQuiver:
    """State of a principally framed quiver under mutation.

    ``vertices`` are the unfrozen ids; the framing vertex of vertices[i] is
    row/column m + i of the (2m x 2m) state matrix.
    """

    def __init__(
        self,
        vertices: Sequence[Hashable],
        state: list[list[int]],
        history: Sequence = (),
        base0: Optional[list[list[int]]] = None,
    ):
        self.vertices = list(vertices)
        self.state = state
        self.history = list(history)
        m = len(self.vertices)
        self.base0 = base0 if base0 is not None else [row[:m] for row in state[:m]]

    @classmethod
    def frame(cls, base: ExchangeData) -> "FramedQuiver":
        """Frame the unfrozen part of ``base``; all vertices start green."""
        pr = base.principal_part()
        m = len(pr)
        for i in range(m):
            for j in range(m):
                if pr[i][j] != -pr[j][i]:
                    raise NotSkewSymmetric("framing needs a skew-symmetric principal part")
        state = [[0] * (2 * m) for _ in range(2 * m)]
        for i in range(m):
            for j in range(m):
                state[i][j] = pr[i][j]
            state[i][m + i] = -1
            state[m + i][i] = 1
        return cls(base.exchangeable(), state, base0=pr)

    @property
    def m(self) -> int:
        return len(self.vertices)

    def base_matrix(self) -> list[list[int]]:
        m = self.m
        return [row[:m] for row in self.state[:m]]

    def framing_arrows_into(self, v: Hashable) -> int:
        """Number of arrows from framing vertices into v."""
        m = self.m
        j = self.vertices.index(v)
        return sum(max(0, -self.state[m + i][j]) for i in range(m))

    def is_green(self, v: Hashable) -> bool:
        m = self.m
        j = self.vertices.index(v)
        return all(self.state[m + i][j] >= 0 for i in range(m))

    def is_red(self, v: Hashable) -> bool:
        m = self.m
        j = self.vertices.index(v)
        return all(self.state[m + i][j] <= 0 for i in range(m))

    def check_sign_coherence(self) -> None:
        for v in self.vertices:
            if not (self.is_green(v) or self.is_red(v)):
                raise QClusterError(f"sign-coherence violated at {v}")

    def mutate(self, v: Hashable) -> "FramedQuiver":
        j = self.vertices.index(v)
        out = FramedQuiver(
            self.vertices, _square_mutate(self.state, j), self.history + [v], base0=self.base0
        )
        out.check_sign_coherence()
        return out

    def run_green(self, seq: Iterable[Hashable]) -> "FramedQuiver":
        """Mutate along ``seq``, requiring each step to be green when reached."""
        fq = self
        for step, v in enumerate(seq):
            if not fq.is_green(v):
                raise RedVertexMutation(f"step {step} at {v}")
            fq = fq.mutate(v)
        return fq

    def all_red(self) -> bool:
        return all(self.is_red(v) for v in self.vertices)

    def coframed_permutation(self) -> Optional[dict]:
        """The vertex bijection onto the co-framed quiver, if the state is one.

        Searches unfrozen bijections, pruned by requiring each vertex to map
        onto one whose framing column is the matching negated unit vector;
        the bijection must also transport the base quiver.  Returns
        {vertex: image} or None.
        """
        m = self.m
        # candidate image of i: the j whose framing behaviour matches -e_i
        candidates: list[list[int]] = []
        for i in range(m):
            cand = []
            for j in range(m):
                if all(
                    self.state[m + t][j] == (-1 if t == i else 0) for t in range(m)
                ) and all(self.state[j][m + t] == (1 if t == i else 0) for t in range(m)):
                    cand.append(j)
            if not cand:
                return None
            candidates.append(cand)
        original = self.base0  # the co-framed base quiver is the original one

        def backtrack(i: int, used: set, p: list) -> Optional[list]:
            if i == m:
                return p
            for j in candidates[i]:
                if j in used:
                    continue
                ok = True
                for t in range(i):
                    if (
                        self.state[p[t]][j] != original[t][i]
                        or self.state[j][p[t]] != original[i][t]
                    ):
                        ok = False
                        break
                if ok and self.state[j][j] == 0:
                    res = backtrack(i + 1, used | {j}, p + [j])
                    if res is not None:
                        return res
            return None

        p = backtrack(0, set(), [])
        if p is None:
            return None
        return {self.vertices[i]: self.vertices[p[i]] for i in range(m)}

    def is_maximal_green(self) -> Optional[dict]:
        """The DT permutation if the current state ends a maximal green run."""
        if not self.all_red():
            return None
        return self.coframed_permutation()

    def colors(self) -> dict:
        return {
            v: ("green" if self.is_green(v) else "red" if self.is_red(v) else "mixed")
            for v in self.vertices
        }

    def to_exchange_data(self) -> ExchangeData:
        m = self.m
        framing = [("f", v) for v in self.vertices]
        indices = list(self.vertices) + framing
        cols = [row[:m] for row in self.state]
        return ExchangeData(indices, framing, cols, validate=False)

    def to_dot(self) -> str:
        colors = {v: ("palegreen" if c == "green" else "lightcoral") for v, c in self.colors().items()}
        return self.to_exchange_data().to_dot(colors=colors)

    def to_json(self) -> dict:
        return {
            "vertices": [list(v) if isinstance(v, tuple) else v for v in self.vertices],
            "state": [list(r) for r in self.state],
            "history": [list(v) if isinstance(v, tuple) else v for v in self.history],
            "colors": {str(v): c for v, c in self.colors().items()},
        }


def run_green(fq: FramedQuiver, seq: Iterable[Hashable]) -> FramedQuiver:
    return fq.run_green(seq)


def is_maximal_green(fq: FramedQuiver, seq: Iterable[Hashable]) -> Optional[dict]:
    return fq.run_green(seq).is_maximal_green()


def kedem_sequence(n: int) -> list[tuple[int, int]]:
    """Column-by-column maximal green candidate on the unfrozen GL_n quiver.

    Mutate at the slots holding X_{k,0} (increasing k), then X_{k,1}, and so
    on; after n rounds the labels reach the window [n, n+1].  Since the
    variable X_{k,m} sits in slot (k, m mod 2), the slot sequence alternates
    columns.
    """
    if n < 2:
        raise ValueError("n >= 2 required")
    seq = []
    for j in range(n):
        seq.extend((k, j % 2) for k in range(1, n))
    return seq
