"""Truncated polynomial algebras with an unstable Steenrod action.

A presentation fixes an odd prime p and even-degree generators y_i of
degree 2*m_i, truncated at height p+1 (y_i^{p+1} = 0, y_i^p != 0).  The
action table stores P^k on each generator for 1 <= k <= m_i; everything
else is derived: P^0 is the identity, P^k vanishes for k > m_i, the
Bockstein acts as zero (all degrees are even), and products follow the
Cartan formula.  ``validate_action`` checks that the table really defines
an action: the unstable conditions on generators plus every Adem relation
instance that lands inside the degree range.

Presentations are immutable after construction (caches are internal and
value-transparent); all operations are pure.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

from .fp import FpMatrix, Subspace, check_odd_prime
from .steenrod import (
    SteenrodElement,
    SteenrodMonomial,
    adem_rewrite,
)

Exponents = tuple[int, ...]


class AlgebraError(ValueError):
    pass


class UnknownActionEntry(LookupError):
    """Raised when evaluation touches an action entry left unassigned."""

    def __init__(self, gen_index: int, k: int):
        super().__init__(f"action entry P^{k} on generator {gen_index} is unassigned")
        self.gen_index = gen_index
        self.k = k


class AlgebraElement:
    """A linear combination of truncated monomials, tied to a presentation."""

    __slots__ = ("presentation", "terms")

    def __init__(self, presentation: "AlgebraPresentation", terms: dict[Exponents, int]):
        self.presentation = presentation
        p = presentation.p
        clean: dict[Exponents, int] = {}
        for exps, c in terms.items():
            if len(exps) != presentation.l:
                raise AlgebraError("exponent vector has wrong length")
            if any(e < 0 for e in exps):
                raise AlgebraError("negative exponent")
            if any(e > p for e in exps):
                continue  # beyond truncation height, the monomial is zero
            c %= p
            if c:
                clean[exps] = c
        self.terms = clean

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int | None:
        degs = {self.presentation.monomial_degree(e) for e in self.terms}
        return degs.pop() if len(degs) == 1 else None

    @property
    def is_homogeneous(self) -> bool:
        return len({self.presentation.monomial_degree(e) for e in self.terms}) <= 1

    def in_filtration(self, t: int) -> bool:
        """Whether every monomial is a product of at least t generators."""
        return all(sum(e) >= t for e in self.terms)

    def monomials(self) -> list[tuple[Exponents, int]]:
        return sorted(self.terms.items())

    def coefficient(self, exps: Exponents) -> int:
        return self.terms.get(tuple(exps), 0)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = (terms.get(e, 0) + c) % self.presentation.p
        return AlgebraElement(self.presentation, terms)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + other.scale(-1)

    def scale(self, c: int) -> "AlgebraElement":
        return AlgebraElement(self.presentation, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        p = self.presentation.p
        terms: dict[Exponents, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if any(x > p for x in e):
                    continue
                terms[e] = (terms.get(e, 0) + c1 * c2) % p
        return AlgebraElement(self.presentation, terms)

    def __pow__(self, n: int) -> "AlgebraElement":
        result = self.presentation.one()
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AlgebraElement)
            and self.presentation is other.presentation
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((id(self.presentation), tuple(sorted(self.terms.items()))))

    def __repr__(self):
        return f"AlgebraElement({render_polynomial(self)})"

    def _check(self, other: "AlgebraElement") -> None:
        if self.presentation is not other.presentation:
            raise AlgebraError("presentation mismatch")


def render_polynomial(x: AlgebraElement) -> str:
    if x.is_zero():
        return "0"
    names = x.presentation.names
    parts = []
    for exps, c in x.monomials():
        factors = []
        for name, e in zip(names, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if not factors:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(factors))
        else:
            parts.append("*".join([str(c)] + factors))
    return " + ".join(parts)


class AlgebraPresentation:
    """Generators, degrees and the reduced-power table of a truncated algebra."""

    def __init__(
        self,
        p: int,
        generators: list[tuple[str, int]],
        action: dict[tuple[str, int], dict[Exponents, int]] | None = None,
        allow_unknown: bool = False,
    ):
        check_odd_prime(p)
        self.p = p
        if not all(m >= 1 for _, m in generators):
            raise AlgebraError("half-degrees must be >= 1")
        if [m for _, m in generators] != sorted(m for _, m in generators):
            raise AlgebraError("generators must be listed with ascending half-degree")
        names = [name for name, _ in generators]
        if len(set(names)) != len(names):
            raise AlgebraError("duplicate generator name")
        self.names: tuple[str, ...] = tuple(names)
        self.half_degrees: tuple[int, ...] = tuple(m for _, m in generators)
        self._index = {name: i for i, name in enumerate(names)}
        self._action: dict[tuple[int, int], dict[Exponents, int] | None] = {}
        self.autofilled: tuple[tuple[str, int], ...] = ()
        self._basis_cache: dict[int, list[Exponents]] = {}
        self._power_cache: dict[tuple[int, Exponents], dict[Exponents, int]] = {}

        action = action or {}
        filled = []
        for key, poly in action.items():
            name, k = key
            if name not in self._index:
                raise AlgebraError(f"unknown generator {name!r}")
            if k < 1:
                raise AlgebraError("action entries start at P^1")
            self._action[(self._index[name], k)] = (
                None if poly is None else dict(poly)
            )
        for i, m in enumerate(self.half_degrees):
            if (i, m) not in self._action:
                # The top reduced power on a generator is forced to the p-th
                # power by unstability; fill it in and record that we did.
                exps = tuple(p if j == i else 0 for j in range(self.l))
                self._action[(i, m)] = {exps: 1}
                filled.append((self.names[i], m))
        self.autofilled = tuple(filled)
        if not allow_unknown and any(v is None for v in self._action.values()):
            raise AlgebraError("unassigned action entries require allow_unknown")
        for (i, k), poly in self._action.items():
            if poly is None:
                continue
            want = 2 * self.half_degrees[i] + 2 * k * (p - 1)
            for exps in poly:
                if len(exps) != self.l:
                    raise AlgebraError("action polynomial has wrong arity")
                if (
                    all(0 <= e <= p for e in exps)
                    and self.monomial_degree(exps) != want
                ):
                    raise AlgebraError(
                        f"P^{k} {self.names[i]} entry has degree "
                        f"{self.monomial_degree(exps)}, expected {want}"
                    )

    # -- structure ----------------------------------------------------------

    @property
    def l(self) -> int:
        return len(self.names)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(2 * m for m in self.half_degrees)

    @property
    def top_degree(self) -> int:
        return sum(2 * m * self.p for m in self.half_degrees)

    def monomial_degree(self, exps: Exponents) -> int:
        return sum(2 * m * e for m, e in zip(self.half_degrees, exps))

    def basis_of_degree(self, d: int) -> list[Exponents]:
        """All monomials of degree d with exponents <= p, lexicographic."""
        if d < 0:
            return []
        cached = self._basis_cache.get(d)
        if cached is None:
            out = []
            for exps in itertools.product(range(self.p + 1), repeat=self.l):
                if self.monomial_degree(exps) == d:
                    out.append(exps)
            cached = sorted(out)
            self._basis_cache[d] = cached
        return list(cached)

    def dim(self, d: int) -> int:
        return len(self.basis_of_degree(d))

    def nonzero_degrees(self) -> list[int]:
        return [d for d in range(self.top_degree + 1) if self.dim(d)]

    # -- elements ------------------------------------------------------------

    def element(self, terms: dict[Exponents, int]) -> AlgebraElement:
        return AlgebraElement(self, terms)

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, {})

    def one(self) -> AlgebraElement:
        return AlgebraElement(self, {tuple([0] * self.l): 1})

    def gen(self, i: int) -> AlgebraElement:
        exps = tuple(1 if j == i else 0 for j in range(self.l))
        return AlgebraElement(self, {exps: 1})

    def generator(self, name: str) -> AlgebraElement:
        return self.gen(self._index[name])

    def coords(self, x: AlgebraElement, d: int) -> tuple[int, ...]:
        """Coordinates of a degree-d element in the monomial basis."""
        basis = self.basis_of_degree(d)
        index = {e: i for i, e in enumerate(basis)}
        v = [0] * len(basis)
        for exps, c in x.terms.items():
            if self.monomial_degree(exps) != d:
                raise AlgebraError("element is not concentrated in the given degree")
            v[index[exps]] = c
        return tuple(v)

    def from_coords(self, v, d: int) -> AlgebraElement:
        basis = self.basis_of_degree(d)
        return self.element({e: c for e, c in zip(basis, v)})

    # -- action --------------------------------------------------------------

    def action_entry(self, i: int, k: int) -> AlgebraElement:
        """P^k on generator i as stored/derived (k=0 identity, k>m_i zero)."""
        return self.element(dict(self._entry_raw(i, k)))

    def stored_entries(self) -> list[tuple[int, int]]:
        return sorted(self._action)

    # Internal action arithmetic runs on raw {exponents: coeff} dicts; the
    # AlgebraElement wrappers exist for the public surface only.

    def _mul_raw(self, t1: dict, t2: dict) -> dict:
        p = self.p
        out: dict[Exponents, int] = {}
        for e1, c1 in t1.items():
            for e2, c2 in t2.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if any(x > p for x in e):
                    continue
                v = (out.get(e, 0) + c1 * c2) % p
                if v:
                    out[e] = v
                elif e in out:
                    del out[e]
        return out

    def _entry_raw(self, i: int, k: int) -> dict:
        if k == 0:
            return {tuple(1 if j == i else 0 for j in range(self.l)): 1}
        stored = self._action.get((i, k))
        if stored is None:
            if (i, k) in self._action:
                raise UnknownActionEntry(i, k)
            return {}
        return stored

    def _act_power_raw(self, k: int, exps: Exponents) -> dict:
        key = (k, exps)
        cached = self._power_cache.get(key)
        if cached is not None:
            return cached
        # Total-power series of the monomial:  prod_i (sum_j P^j y_i t^j)^{e_i},
        # tracked as raw term dicts indexed by t-degree up to k.
        p = self.p
        poly: list[dict] = [{tuple([0] * self.l): 1}] + [{} for _ in range(k)]
        for i, e in enumerate(exps):
            if not e:
                continue
            series = [
                self._entry_raw(i, j)
                for j in range(min(k, self.half_degrees[i]) + 1)
            ]
            for _ in range(e):
                nxt: list[dict] = [{} for _ in range(k + 1)]
                for a in range(k + 1):
                    if not poly[a]:
                        continue
                    for b, g in enumerate(series):
                        if a + b > k:
                            break
                        if not g:
                            continue
                        target = nxt[a + b]
                        for e1, c1 in poly[a].items():
                            for e2, c2 in g.items():
                                ee = tuple(x + y for x, y in zip(e1, e2))
                                if any(x > p for x in ee):
                                    continue
                                v = (target.get(ee, 0) + c1 * c2) % p
                                if v:
                                    target[ee] = v
                                elif ee in target:
                                    del target[ee]
                poly = nxt
        self._power_cache[key] = poly[k]
        return poly[k]

    def _act_power_terms(self, k: int, terms: dict) -> dict:
        p = self.p
        out: dict[Exponents, int] = {}
        for exps, c in terms.items():
            for e, v in self._act_power_raw(k, exps).items():
                w = (out.get(e, 0) + c * v) % p
                if w:
                    out[e] = w
                elif e in out:
                    del out[e]
        return out

    def _act_word_terms(self, mono: SteenrodMonomial, terms: dict) -> dict:
        if mono.eps[-1]:
            return {}
        out = terms
        for i in range(len(mono.pows) - 1, -1, -1):
            out = self._act_power_terms(mono.pows[i], out)
            if mono.eps[i] or not out:
                return {} if mono.eps[i] else out
        return out

    def act_power(self, k: int, x: AlgebraElement) -> AlgebraElement:
        """P^k on an element, by the Cartan formula on each monomial."""
        if k < 0:
            raise AlgebraError("negative reduced power")
        if k == 0:
            return x
        return self.element(self._act_power_terms(k, x.terms))

    def act_word(self, mono: SteenrodMonomial, x: AlgebraElement) -> AlgebraElement:
        """Apply a word right-to-left; the Bockstein kills everything here."""
        if mono.p != self.p:
            raise AlgebraError("prime mismatch")
        return self.element(self._act_word_terms(mono, x.terms))

    def act(self, theta: SteenrodElement, x: AlgebraElement) -> AlgebraElement:
        if theta.p != self.p:
            raise AlgebraError("prime mismatch")
        p = self.p
        out: dict[Exponents, int] = {}
        for mono, c in theta.terms.items():
            for e, v in self._act_word_terms(mono, x.terms).items():
                w = (out.get(e, 0) + c * v) % p
                if w:
                    out[e] = w
                elif e in out:
                    del out[e]
        return self.element(out)

    def __repr__(self):
        gens = ", ".join(f"{n}:{2 * m}" for n, m in zip(self.names, self.half_degrees))
        return f"AlgebraPresentation(p={self.p}, [{gens}])"


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class AdemFailure:
    a: int
    b: int
    monomial: Exponents
    degree: int


@dataclass(frozen=True)
class ActionValidation:
    ok: bool
    unstable_failures: tuple[str, ...]
    adem_failures: tuple[AdemFailure, ...]
    instances_checked: int
    instances_skipped: int  # touched unassigned entries (partial tables only)


@functools.lru_cache(maxsize=None)
def adem_instances(p: int, degrees: tuple[int, ...], top: int) -> tuple[tuple[int, int, int], ...]:
    """All (a, b, source degree) with a < p*b whose two sides can act within
    the degree range [0, top] on a class of one of the given degrees."""
    out = []
    for d in degrees:
        for b in range(1, d // 2 + 1):
            for a in range(1, p * b):
                if d + 2 * (a + b) * (p - 1) <= top:
                    out.append((a, b, d))
    return tuple(sorted(out, key=lambda t: (t[0] + t[1], t[2], t[0])))


def adem_instance_holds(
    a: AlgebraPresentation, a_exp: int, b_exp: int, exps: Exponents
) -> bool:
    """Whether P^a P^b and its admissible normal form agree on one monomial."""
    p = a.p
    x = {exps: 1}
    lhs = a._act_power_terms(a_exp, a._act_power_terms(b_exp, x))
    nf = adem_rewrite(SteenrodMonomial(p, (0, 0, 0), (a_exp, b_exp)))
    rhs: dict[Exponents, int] = {}
    for mono, c in nf.terms.items():
        for e, v in a._act_word_terms(mono, x).items():
            w = (rhs.get(e, 0) + c * v) % p
            if w:
                rhs[e] = w
            elif e in rhs:
                del rhs[e]
    return lhs == rhs


def validate_action(a: AlgebraPresentation, partial: bool = False) -> ActionValidation:
    """Check unstability on generators and all in-range Adem instances.

    Instances of relations with an interposed Bockstein hold automatically
    (the Bockstein acts as zero in even degrees), so only the P^a P^b family
    is enumerated.  With ``partial=True``, instances that touch unassigned
    entries are skipped and counted instead of failing.
    """
    p = a.p
    unstable: list[str] = []
    for i, m in enumerate(a.half_degrees):
        name = a.names[i]
        try:
            top_entry = a.action_entry(i, m)
        except UnknownActionEntry:
            top_entry = None
        want = a.gen(i) ** p
        if top_entry is not None and top_entry != want:
            unstable.append(f"P^{m} {name} != {name}^{p}")
        for (j, k) in a.stored_entries():
            if j != i or k <= m:
                continue
            try:
                entry = a.action_entry(i, k)
            except UnknownActionEntry:
                continue
            if not entry.is_zero():
                unstable.append(f"P^{k} {name} must vanish (k > {m})")

    failures: list[AdemFailure] = []
    checked = skipped = 0
    degrees = a.nonzero_degrees()
    by_degree = {d: a.basis_of_degree(d) for d in degrees}
    for a_exp, b_exp, d in adem_instances(p, tuple(degrees), a.top_degree):
        for exps in by_degree[d]:
            try:
                holds = adem_instance_holds(a, a_exp, b_exp, exps)
            except UnknownActionEntry:
                if partial:
                    skipped += 1
                    continue
                raise
            checked += 1
            if not holds:
                failures.append(AdemFailure(a_exp, b_exp, exps, d))
    return ActionValidation(
        ok=not unstable and not failures,
        unstable_failures=tuple(unstable),
        adem_failures=tuple(failures),
        instances_checked=checked,
        instances_skipped=skipped,
    )


# ---------------------------------------------------------------------------
# filtration and indecomposables


def filtration(a: AlgebraPresentation, t: int, d: int) -> Subspace:
    """The span, inside the degree-d piece, of monomials that are products
    of at least t generators (t-fold decomposables; t=2 is the decomposable
    module)."""
    if t < 1:
        raise AlgebraError("filtration level must be >= 1")
    basis = a.basis_of_degree(d)
    n = len(basis)
    rows = []
    for idx, exps in enumerate(basis):
        if sum(exps) >= t:
            rows.append([1 if j == idx else 0 for j in range(n)])
    return Subspace.from_vectors(a.p, n, rows)


@dataclass(frozen=True)
class QSpace:
    """The degree-d indecomposables A^d / (decomposables), with a section."""

    presentation: AlgebraPresentation
    degree: int
    gen_indices: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.gen_indices)

    def project(self, x: AlgebraElement) -> tuple[int, ...]:
        """Coordinates of the class of x; decomposable monomials die."""
        out = []
        for i in self.gen_indices:
            exps = tuple(1 if j == i else 0 for j in range(self.presentation.l))
            out.append(x.terms.get(exps, 0))
        return tuple(out)

    def section(self, idx: int) -> AlgebraElement:
        return self.presentation.gen(self.gen_indices[idx])

    def lift(self, coords) -> AlgebraElement:
        out = self.presentation.zero()
        for c, i in zip(coords, self.gen_indices):
            out = out + self.presentation.gen(i).scale(c)
        return out


def indecomposables(a: AlgebraPresentation, d: int) -> QSpace:
    gens = tuple(i for i, m in enumerate(a.half_degrees) if 2 * m == d)
    return QSpace(a, d, gens)


def induced_q_map(a: AlgebraPresentation, theta: SteenrodElement, e: int) -> FpMatrix:
    """The matrix of theta on indecomposables, from degree e to e + deg theta.

    Well defined because the action preserves the decomposable filtration
    (Cartan formula), so the choice of section does not matter.
    """
    deg = theta.degree()
    if deg is None:
        raise AlgebraError("theta must be homogeneous")
    source = indecomposables(a, e)
    target = indecomposables(a, e + deg)
    cols = []
    for idx in range(source.dim):
        cols.append(target.project(a.act(theta, source.section(idx))))
    rows = [[cols[c][r] for c in range(source.dim)] for r in range(target.dim)]
    return FpMatrix.from_rows(a.p, rows, source.dim)
