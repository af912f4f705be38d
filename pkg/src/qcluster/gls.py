"""Compatible pairs from a symmetric Cartan matrix and a reduced word.

Word positions are 1-based throughout, matching the usual combinatorics
(k+-, k_min, t_j, k[j]).  The exchange-matrix antisymmetrization is fixed by
requiring the pair to be compatible with a *positive* diagonal and to agree
with the mutated GL_n pair under the canonical index identification; see
``gls_b_entry`` for the case list.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import OutOfRange, ParityMismatch
from .exchange import CompatiblePair, ExchangeData


class CartanDatum:
    """A symmetric generalized Cartan matrix (2 on the diagonal, <= 0 off)."""

    def __init__(self, matrix: Sequence[Sequence[int]]):
        a = [[int(x) for x in row] for row in matrix]
        r = len(a)
        for i in range(r):
            if len(a[i]) != r:
                raise ValueError("Cartan matrix must be square")
            if a[i][i] != 2:
                raise ValueError("Cartan diagonal must be 2")
            for j in range(r):
                if i != j and a[i][j] > 0:
                    raise ValueError("off-diagonal Cartan entries must be <= 0")
                if a[i][j] != a[j][i]:
                    raise ValueError("only symmetric Cartan matrices are supported")
        self.a = a
        self.rank = r

    @classmethod
    def affine_a1(cls) -> "CartanDatum":
        """The rank-2 matrix [[2,-2],[-2,2]]."""
        return cls([[2, -2], [-2, 2]])

    @classmethod
    def finite_a(cls, n: int) -> "CartanDatum":
        """Type A_n tridiagonal matrix of size n."""
        return cls(
            [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)] for i in range(n)]
        )

    def __repr__(self) -> str:
        return f"CartanDatum(rank={self.rank})"


@dataclass(frozen=True)
class Weight:
    """lambda = sum c_i omega_i + sum x_j alpha_j over a fixed Cartan datum."""

    fundamental: tuple
    root: tuple

    @classmethod
    def fundamental_weight(cls, rank: int, i: int) -> "Weight":
        return cls(tuple(1 if j == i else 0 for j in range(rank)), (0,) * rank)

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(
            tuple(a + b for a, b in zip(self.fundamental, other.fundamental)),
            tuple(a + b for a, b in zip(self.root, other.root)),
        )

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(
            tuple(a - b for a, b in zip(self.fundamental, other.fundamental)),
            tuple(a - b for a, b in zip(self.root, other.root)),
        )

    def in_root_lattice(self) -> bool:
        return all(c == 0 for c in self.fundamental)


def pairing(cartan: CartanDatum, w: Weight, i: int) -> int:
    """<lambda, alpha_i-check> = c_i + sum_j x_j a_ij."""
    return w.fundamental[i] + sum(x * cartan.a[i][j] for j, x in enumerate(w.root))


def reflect(cartan: CartanDatum, w: Weight, i: int) -> Weight:
    """Simple reflection s_i(lambda) = lambda - <lambda, alpha_i-check> alpha_i."""
    if not 0 <= i < cartan.rank:
        raise OutOfRange(i)
    p = pairing(cartan, w, i)
    root = list(w.root)
    root[i] -= p
    return Weight(w.fundamental, tuple(root))


def bilinear_root_weight(cartan: CartanDatum, beta: Weight, lam: Weight) -> int:
    """(beta | lambda) for beta in the root lattice.

    With (alpha_i | alpha_j) = a_ij and (alpha_i | omega_j) = delta_ij (the
    invariant form normalized for a symmetric datum), the pairing against a
    root-lattice vector is always defined, even in affine type where the full
    form on the weight lattice is degenerate.
    """
    if not beta.in_root_lattice():
        raise ValueError("first argument must lie in the root lattice")
    x = beta.root
    total = sum(xi * ci for xi, ci in zip(x, lam.fundamental))
    a = cartan.a
    for i, xi in enumerate(x):
        if xi:
            total += xi * sum(a[i][j] * yj for j, yj in enumerate(lam.root) if yj)
    return total


class ReducedWord:
    """A word in the Cartan index set; reducedness is the caller's burden."""

    def __init__(self, letters: Sequence[int], rank: int):
        self.letters = tuple(int(x) for x in letters)
        for x in self.letters:
            if not 0 <= x < rank:
                raise OutOfRange(x)
        self.rank = rank

    def __len__(self) -> int:
        return len(self.letters)

    def k_plus(self, k: int) -> int:
        """min{k < l <= r : i_l = i_k} or r+1."""
        for l in range(k + 1, len(self.letters) + 1):
            if self.letters[l - 1] == self.letters[k - 1]:
                return l
        return len(self.letters) + 1

    def k_minus(self, k: int) -> int:
        """max{1 <= l < k : i_l = i_k} or 0."""
        for l in range(k - 1, 0, -1):
            if self.letters[l - 1] == self.letters[k - 1]:
                return l
        return 0

    def occurrences_before(self, k: int, j: int) -> int:
        """k[j] = #{1 <= s <= k-1 : i_s = j}."""
        return sum(1 for s in range(k - 1) if self.letters[s] == j)

    def letter_count(self, j: int) -> int:
        """t_j, the number of appearances of j."""
        return self.letters.count(j)

    def frozen_positions(self) -> set[int]:
        """Last occurrence of each letter: {k : k+ = r+1}."""
        r = len(self.letters)
        return {k for k in range(1, r + 1) if self.k_plus(k) == r + 1}

    def __repr__(self) -> str:
        return f"ReducedWord({list(self.letters)})"


def betas(cartan: CartanDatum, word: ReducedWord) -> list[Weight]:
    """beta_k = omega_{i_k} - s_{i_1}...s_{i_k} omega_{i_k}, k = 1..r.

    Every beta_k lies in the root lattice.
    """
    out = []
    for k in range(1, len(word) + 1):
        i_k = word.letters[k - 1]
        w = Weight.fundamental_weight(cartan.rank, i_k)
        for l in range(k, 0, -1):
            w = reflect(cartan, w, word.letters[l - 1])
        beta = Weight.fundamental_weight(cartan.rank, i_k) - w
        if not beta.in_root_lattice():
            raise ValueError(f"beta_{k} escaped the root lattice")
        out.append(beta)
    return out


def gls_pair(cartan: CartanDatum, word: ReducedWord) -> CompatiblePair:
    """The compatible pair (L(i), B(i)) of a symmetric datum and a word.

    Indices are the word positions 1..r; frozen positions are the last
    occurrence of each letter.  The one-sided case list

        f(k, l) = a_{i_k i_l}  if k < l < k+ <= l+
                  1            if k = l-
                  0            otherwise

    is antisymmetrized as b_{k,l} = f(l,k) - f(k,l): this is the direction
    forced by compatibility (positive diagonal) and by agreement with the
    mutated GL_n pair; the opposite choice matches sources whose quiver
    arrows are globally reversed.  Compatibility is verified on construction.
    """
    r = len(word)
    if word.rank != cartan.rank:
        raise ValueError("word and Cartan datum rank mismatch")
    bs = betas(cartan, word)

    lam = [[0] * r for _ in range(r)]
    for k in range(1, r + 1):
        for l in range(1, r + 1):
            if k < l:
                i_l = word.letters[l - 1]
                two_omega = Weight(
                    tuple(2 if j == i_l else 0 for j in range(cartan.rank)),
                    (0,) * cartan.rank,
                )
                lam[k - 1][l - 1] = bilinear_root_weight(
                    cartan, bs[k - 1], two_omega - Weight((0,) * cartan.rank, bs[l - 1].root)
                )
            elif k > l:
                i_k = word.letters[k - 1]
                two_omega = Weight(
                    tuple(2 if j == i_k else 0 for j in range(cartan.rank)),
                    (0,) * cartan.rank,
                )
                lam[k - 1][l - 1] = -bilinear_root_weight(
                    cartan, bs[l - 1], two_omega - Weight((0,) * cartan.rank, bs[k - 1].root)
                )

    a = cartan.a

    def f(s: int, t: int) -> int:
        if s < t < word.k_plus(s) <= word.k_plus(t):
            return a[word.letters[s - 1]][word.letters[t - 1]]
        if s == word.k_minus(t):
            return 1
        return 0

    frozen = word.frozen_positions()
    exch = [l for l in range(1, r + 1) if l not in frozen]
    B = [[f(l, k) - f(k, l) for l in exch] for k in range(1, r + 1)]
    ed = ExchangeData(list(range(1, r + 1)), frozen, B)
    return CompatiblePair(lam, ed)


def distinguished_sequence(word: ReducedWord) -> list[int]:
    """The distinguished mutation sequence, as a list of word positions.

    Step k (for k = 1..r) mutates, in increasing order, the lowest
    t_{i_k} - 1 - k[i_k] positions carrying the letter i_k.
    """
    r = len(word)
    seq: list[int] = []
    for k in range(1, r + 1):
        j = word.letters[k - 1]
        count = word.letter_count(j) - 1 - word.occurrences_before(k, j)
        if count <= 0:
            continue
        positions = [p for p in range(1, r + 1) if word.letters[p - 1] == j]
        seq.extend(positions[:count])
    return seq


def minor_to_variable(b: int, d: int, n: int) -> tuple[int, int]:
    """The (k, l) with the position minor [b, d] matching variable X_{k,l}.

    For the word (01)^n positions b, d address the same letter exactly when
    b = d mod 2; k = 1 + (d-b)/2 and l = n + 1 - (b+d)/2.
    """
    if not 1 <= b <= d:
        raise OutOfRange((b, d))
    if (d - b) % 2:
        raise ParityMismatch((b, d))
    return 1 + (d - b) // 2, n + 1 - (b + d) // 2
