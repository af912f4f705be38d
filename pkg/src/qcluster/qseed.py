"""Quantum seeds: cluster variables as exact Laurent data in a fixed torus.

A seed carries the current compatible pair together with one TorusElement
per index, always expressed in the torus of the *initial* L matrix.  The
mutated variable is produced by one exact left division:

    x_k * x'_k  =  q^(-S+/2) A+  +  q^(-S-/2) A-

where A+- are the bar-normalized ordered products of the current variables
with exponents [+-b_ik]_+ and S+- = sum_i [+-b_ik]_+ lambda_ik reads off the
current L.  This is the toric-frame normalization made explicit; dividing
the combined numerator (rather than each summand) is what makes repeated
and backtracking mutations work, since the summands alone need not be
Laurent.  Compatibility forces the two q-shifts to differ by exactly half
the compatibility diagonal entry d_k, with the positive side on top.
"""

from __future__ import annotations

import hashlib
import json
from typing import Hashable, Iterable, Optional, Sequence

from .errors import ExactDivisionFailed, FrozenMutation, LaurentFailure, NotQCommuting
from .exchange import CompatiblePair
from .qtorus import QuantumTorus, TorusElement, left_divide_exact


class QuantumSeed:
    """A compatible pair plus cluster variables in the initial ambient torus."""

    def __init__(
        self,
        pair: CompatiblePair,
        torus: QuantumTorus,
        variables: Sequence[TorusElement],
        history: Sequence = (),
        slot_labels: Optional[dict] = None,
        check: str = "light",
    ):
        self.pair = pair
        self.torus = torus
        self.vars = list(variables)
        if len(self.vars) != len(pair.b.indices):
            raise ValueError("one variable per index required")
        self.history = list(history)
        # mutable per-slot tags, e.g. the (k, l) currently sitting in a slot
        self.slot_labels = dict(slot_labels) if slot_labels else None
        self.check = check

    # -- construction --------------------------------------------------------

    @classmethod
    def initial(cls, pair: CompatiblePair, slot_labels: Optional[dict] = None, check: str = "light") -> "QuantumSeed":
        """The canonical seed with x_i = X^{e_i} in the torus of pair.L."""
        pair.check_compatible()
        torus = QuantumTorus(pair.L, labels=list(pair.b.indices))
        variables = [torus.generator(i) for i in range(torus.rank)]
        return cls(pair, torus, variables, slot_labels=slot_labels, check=check)

    def variable(self, ix: Hashable) -> TorusElement:
        return self.vars[self.pair.b._pos[ix]]

    # -- mutation --------------------------------------------------------------

    def mutate(self, k: Hashable) -> "QuantumSeed":
        """Seed mutation in direction k.

        Raises FrozenMutation for frozen k and LaurentFailure if the exact
        division fails or the new variable is not bar-invariant (either one
        signals an engine bug: the quantum Laurent phenomenon guarantees
        success).
        """
        b = self.pair.b
        if k in b.frozen:
            raise FrozenMutation(k)
        ki = b._pos[k]
        a_pos, a_neg, s_pos, s_neg = self.exchange_parts(k)
        numerator = a_pos.q_shift(-s_pos) + a_neg.q_shift(-s_neg)
        try:
            new_var = left_divide_exact(self.vars[ki], numerator)
        except ExactDivisionFailed as exc:
            raise LaurentFailure(f"mutation at {k}: {exc}") from exc
        try:
            shift = new_var.bar_shift_halves()
        except Exception as exc:
            raise LaurentFailure(f"mutation at {k}: new variable not bar-proportional") from exc
        if shift != 0:
            raise LaurentFailure(f"mutation at {k}: new variable has bar shift {shift}")

        new_vars = list(self.vars)
        new_vars[ki] = new_var
        seed = QuantumSeed(
            self.pair.mutate(k),
            self.torus,
            new_vars,
            history=self.history + [k],
            slot_labels=self.slot_labels,
            check=self.check,
        )
        if self.check == "full":
            report = seed.verify_consistency()
            if not report["passed"]:
                raise LaurentFailure(f"mutation at {k}: {report['failures']}")
        return seed

    def run_sequence(self, ks: Iterable[Hashable]) -> "QuantumSeed":
        seed = self
        for step, k in enumerate(ks):
            try:
                seed = seed.mutate(k)
            except (FrozenMutation, LaurentFailure) as exc:
                raise type(exc)(f"step {step} at {k}: {exc}") from exc
        return seed

    def exchange_parts(self, k: Hashable) -> tuple[TorusElement, TorusElement, int, int]:
        """(A+, A-, s+, s-) with x_k * mu_k(x_k) = q^(-s+/2) A+ + q^(-s-/2) A-."""
        b = self.pair.b
        if k in b.frozen:
            raise FrozenMutation(k)
        col = b.column(k)
        ki = b._pos[k]
        out = []
        for sign in (1, -1):
            prod = self.torus.unit()
            s_half = 0
            for i, c in enumerate(col):
                m = max(0, sign * c)
                if m:
                    prod = prod * (self.vars[i] ** m)
                    s_half += m * self.pair.L[i][ki]
            _, normalized = prod.bar_normalize()
            out.append((normalized, s_half))
        (ap, sp), (an, sn) = out
        return ap, an, sp, sn

    # -- cluster monomials --------------------------------------------------

    def cluster_monomial(self, a: Sequence[int]) -> TorusElement:
        """Bar-invariant normalized product of vars[i]^(a_i); order-free."""
        if len(a) != len(self.vars):
            raise ValueError("one exponent per index required")
        if any(x < 0 for x in a):
            raise ValueError("cluster monomials take nonnegative exponents")
        prod = self.torus.unit()
        for i, m in enumerate(a):
            for _ in range(int(m)):
                prod = prod * self.vars[i]
        try:
            _, normalized = prod.bar_normalize()
        except Exception as exc:
            raise NotQCommuting(str(exc)) from exc
        return normalized

    # -- consistency -----------------------------------------------------------

    def verify_consistency(self, max_pairs: Optional[int] = None) -> dict:
        """Check the seed invariants; returns a report with witnesses.

        Verifies every variable is bar-invariant and that the pairwise
        q-commutation exponents match -L of the current pair (the Laurent
        property holds by construction: variables live in the initial torus).
        """
        failures = []
        for ix, x in zip(self.pair.b.indices, self.vars):
            if not x.is_bar_invariant():
                failures.append({"check": "bar", "index": ix})
        n = len(self.vars)
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        if max_pairs is not None:
            pairs = pairs[:max_pairs]
        for i, j in pairs:
            lam = self.vars[i].lambda_halves(self.vars[j])
            want = -2 * self.pair.L[i][j]
            if lam != want:
                failures.append(
                    {
                        "check": "lambda",
                        "pair": [self.pair.b.indices[i], self.pair.b.indices[j]],
                        "got": lam,
                        "want": want,
                    }
                )
        try:
            self.pair.check_compatible()
        except Exception as exc:
            failures.append({"check": "compatible", "error": str(exc)})
        return {"passed": not failures, "failures": failures}

    # -- serialization -----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "pair": self.pair.to_json(),
            "torus_L": [list(r) for r in self.torus.L],
            "vars": [x.to_json() for x in self.vars],
            "history": [list(h) if isinstance(h, tuple) else h for h in self.history],
            "slot_labels": (
                [[list(k), list(v)] for k, v in self.slot_labels.items()]
                if self.slot_labels
                else None
            ),
        }

    @classmethod
    def from_json(cls, data: dict) -> "QuantumSeed":
        pair = CompatiblePair.from_json(data["pair"])
        torus = QuantumTorus(data["torus_L"], labels=list(pair.b.indices))
        variables = [TorusElement.from_json(torus, x) for x in data["vars"]]
        history = [tuple(h) if isinstance(h, list) else h for h in data["history"]]
        labels = (
            {tuple(k): tuple(v) for k, v in data["slot_labels"]}
            if data.get("slot_labels")
            else None
        )
        return cls(pair, torus, variables, history=history, slot_labels=labels)

    def fingerprint(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, QuantumSeed)
            and self.pair == other.pair
            and self.vars == other.vars
        )

    def __repr__(self) -> str:
        return f"QuantumSeed(rank={len(self.vars)}, history={self.history})"
