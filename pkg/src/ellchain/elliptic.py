"""Exact symbolic algebra on one elliptic component with two marked points.

A component carries two marked points P and Q.  Its degree-0 class group is
modeled as a formal abelian group

    Z * (P - Q)  (+)  Z^(generic symbols)  (+)  (+)_i  Z/n_i * (torsion symbols)

with genericity taken as an axiom of the model: P - Q is never torsion,
generic symbols satisfy no accidental relations, and torsion symbols of
declared order n contribute residues mod n.  A class is trivial exactly when
every coordinate vanishes.  No floating point and no actual curve arithmetic
appear anywhere; all statements are decided by integer bookkeeping.

Line bundles are recorded as O(a*P + b*Q) twisted by a degree-0 class, and a
vector bundle on the component is an ordered list of slots, each either a
line-bundle class or an indecomposable (Atiyah-type) summand of recorded rank
and degree.  Sections are identified, up to scalar, by the slot they live in
and their vanishing orders at P and Q, with flags telling whether each order
is exact or only a lower bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterator, Union


class AlgebraError(ValueError):
    """Raised when an operation is applied outside its domain."""


# ---------------------------------------------------------------------------
# degree-0 classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Degree0Class:
    """Formal degree-0 divisor class on one elliptic component.

    ``pq`` is the coefficient of (P - Q), ``generic`` maps generic-symbol
    names to integer coefficients, and ``torsion`` maps torsion-symbol names
    to (order, residue) with the residue stored reduced mod the order.
    """

    pq: int = 0
    generic: tuple[tuple[str, int], ...] = ()
    torsion: tuple[tuple[str, int, int], ...] = ()

    def __post_init__(self) -> None:
        gen = tuple(sorted((s, c) for s, c in self.generic if c != 0))
        seen: dict[str, int] = {}
        for name, order, _ in self.torsion:
            if order < 2:
                raise AlgebraError(f"torsion symbol {name!r} needs order >= 2, got {order}")
            if seen.setdefault(name, order) != order:
                raise AlgebraError(f"torsion symbol {name!r} declared with two orders")
        tor = tuple(
            sorted((name, order, res % order) for name, order, res in self.torsion if res % order)
        )
        if len({s for s, _ in gen}) != len(gen):
            raise AlgebraError("repeated generic symbol")
        object.__setattr__(self, "generic", gen)
        object.__setattr__(self, "torsion", tor)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "Degree0Class":
        return cls()

    @classmethod
    def of_pq(cls, n: int) -> "Degree0Class":
        return cls(pq=n)

    @classmethod
    def of_generic(cls, name: str, coeff: int = 1) -> "Degree0Class":
        return cls(generic=((name, coeff),))

    @classmethod
    def of_torsion(cls, name: str, order: int, residue: int = 1) -> "Degree0Class":
        return cls(torsion=((name, order, residue),))

    # -- group operations ---------------------------------------------------

    @property
    def is_trivial(self) -> bool:
        return self.pq == 0 and not self.generic and not self.torsion

    def __add__(self, other: "Degree0Class") -> "Degree0Class":
        gen: dict[str, int] = dict(self.generic)
        for name, coeff in other.generic:
            gen[name] = gen.get(name, 0) + coeff
        tor: dict[str, tuple[int, int]] = {n: (o, r) for n, o, r in self.torsion}
        for name, order, res in other.torsion:
            prev_order, prev_res = tor.get(name, (order, 0))
            if prev_order != order:
                raise AlgebraError(f"torsion symbol {name!r} declared with two orders")
            tor[name] = (order, prev_res + res)
        return Degree0Class(
            pq=self.pq + other.pq,
            generic=tuple(gen.items()),
            torsion=tuple((n, o, r) for n, (o, r) in tor.items()),
        )

    def __neg__(self) -> "Degree0Class":
        return Degree0Class(
            pq=-self.pq,
            generic=tuple((s, -c) for s, c in self.generic),
            torsion=tuple((n, o, o - r) for n, o, r in self.torsion),
        )

    def __sub__(self, other: "Degree0Class") -> "Degree0Class":
        return self + (-other)

    def scaled(self, n: int) -> "Degree0Class":
        return Degree0Class(
            pq=n * self.pq,
            generic=tuple((s, n * c) for s, c in self.generic),
            torsion=tuple((name, o, n * r) for name, o, r in self.torsion),
        )


# ---------------------------------------------------------------------------
# bundle slots
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LineBundleClass:
    """The class O(a*P + b*Q) tensored by a degree-0 twist; degree is a + b."""

    a: int
    b: int
    twist: Degree0Class = Degree0Class()

    @property
    def degree(self) -> int:
        return self.a + self.b

    def tensor(self, other: "LineBundleClass") -> "LineBundleClass":
        return LineBundleClass(self.a + other.a, self.b + other.b, self.twist + other.twist)

    def inverse(self) -> "LineBundleClass":
        return LineBundleClass(-self.a, -self.b, -self.twist)

    def special_index(self) -> int | None:
        """Return k with self isomorphic to O(k*P + (d-k)*Q), if one exists.

        Genericity makes such a k unique: it exists only when the twist is a
        pure multiple of (P - Q), and then k = a + pq must land in [0, d].
        """
        if self.twist.generic or self.twist.torsion:
            return None
        k = self.a + self.twist.pq
        return k if 0 <= k <= self.degree else None


@dataclass(frozen=True)
class IndecomposableSlot:
    """An indecomposable (Atiyah-type) summand of recorded rank and degree.

    The twist records a degree-0 line class tensoring the reference
    indecomposable bundle of this rank and degree.  ``twisted`` node twists
    applied through :meth:`BundleOnComponent.twisted` only track rank and
    degree for these slots; nothing downstream consults an atom's twist after
    a node twist.
    """

    rank: int
    degree: int
    twist: Degree0Class = Degree0Class()

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise AlgebraError("slot rank must be positive")

    @property
    def gcd(self) -> int:
        return math.gcd(self.rank, self.degree)


Slot = Union[LineBundleClass, IndecomposableSlot]


def slot_rank(slot: Slot) -> int:
    return 1 if isinstance(slot, LineBundleClass) else slot.rank


def slot_degree(slot: Slot) -> int:
    return slot.degree


@dataclass(frozen=True)
class BundleOnComponent:
    """A vector bundle on one component as an ordered sum of slots.

    Slot order is significant: gluing data and section tables refer to slots
    by index.
    """

    slots: tuple[Slot, ...]

    @property
    def rank(self) -> int:
        return sum(slot_rank(s) for s in self.slots)

    @property
    def degree(self) -> int:
        return sum(slot_degree(s) for s in self.slots)

    def twisted(self, at_p: int, at_q: int) -> "BundleOnComponent":
        """Tensor by O(-at_p * P - at_q * Q), slot by slot."""
        out: list[Slot] = []
        for s in self.slots:
            if isinstance(s, LineBundleClass):
                out.append(LineBundleClass(s.a - at_p, s.b - at_q, s.twist))
            else:
                out.append(replace(s, degree=s.degree - s.rank * (at_p + at_q)))
        return BundleOnComponent(tuple(out))


# ---------------------------------------------------------------------------
# sections and tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SectionSymbol:
    """A section, up to scalar: its slot and vanishing orders at P and Q.

    ``exact_p`` / ``exact_q`` say whether the order is known exactly or is
    only a lower bound (sections of indecomposable slots carry exact P-orders
    but unconstrained Q-orders).
    """

    slot: int
    ord_p: int
    ord_q: int
    exact_p: bool = True
    exact_q: bool = True

    @property
    def order_sum(self) -> int:
        return self.ord_p + self.ord_q

    def shifted(self, dp: int, dq: int) -> "SectionSymbol":
        return replace(self, ord_p=self.ord_p - dp, ord_q=self.ord_q - dq)


@dataclass(frozen=True)
class VanishingTable:
    """A space of sections given as a list of rows, one per basis element."""

    rows: tuple[SectionSymbol, ...]

    @property
    def dimension(self) -> int:
        return len(self.rows)

    def per_slot_orders_distinct(self) -> bool:
        """Distinct exact P-orders within each slot (independence within a slot)."""
        seen: set[tuple[int, int]] = set()
        for row in self.rows:
            key = (row.slot, row.ord_p)
            if row.exact_p and key in seen:
                return False
            seen.add(key)
        return True


@dataclass(frozen=True)
class SectionBasis:
    """The sections s_0 .. s_{d-1} of a degree-d line class.

    ``sections[k]`` vanishes to order k at P and d-k-1 at Q, except around a
    coincidence index: when the class is O(c*P + (d-c)*Q) the entries at
    c-1 and c are one and the same section, of orders (c, d-c).  At the
    boundary values c = 0 and c = d no pair is merged; the edge entry is
    promoted to order sum d instead.
    """

    sections: tuple[SectionSymbol, ...]
    coincidence: int | None

    @property
    def distinct_rows(self) -> tuple[SectionSymbol, ...]:
        out: list[SectionSymbol] = []
        for s in self.sections:
            if not out or out[-1] != s:
                out.append(s)
        return tuple(out)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def class_difference(l1: LineBundleClass, l2: LineBundleClass) -> Degree0Class:
    """The degree-0 class of l1 (x) l2^{-1}; requires equal degrees."""
    if l1.degree != l2.degree:
        raise AlgebraError("class_difference needs classes of equal degree")
    return Degree0Class.of_pq(l1.a - l2.a) + l1.twist - l2.twist


def class_isomorphic(l1: LineBundleClass, l2: LineBundleClass) -> bool:
    """Equal degree and trivial difference class, under the genericity axioms."""
    return l1.degree == l2.degree and class_difference(l1, l2).is_trivial


def h0_slot(slot: Slot) -> int:
    d = slot_degree(slot)
    if d > 0:
        return d
    if d < 0:
        return 0
    if isinstance(slot, LineBundleClass):
        return 1 if class_isomorphic(slot, LineBundleClass(0, 0)) else 0
    # degree-0 indecomposable: the self-extension tower of O has a unique
    # section; any nontrivial twist of it has none
    return 1 if slot.twist.is_trivial else 0


def h0_component(e: BundleOnComponent) -> int:
    """Global sections on one elliptic component, slot by slot (Riemann-Roch)."""
    return sum(h0_slot(s) for s in e.slots)


def section_basis(l: LineBundleClass, slot: int = 0) -> SectionBasis:
    """The distinguished sections s_0 .. s_{d-1} of a degree-d class.

    s_k is the unique section vanishing to order at least k at P and at
    least d-k-1 at Q; both orders are exact unless the class is special,
    in which case the two entries adjacent to the coincidence index merge
    into the single section of order sum d.
    """
    d = l.degree
    if d < 1:
        raise AlgebraError(f"section_basis needs degree >= 1, got {d}")
    c = l.special_index()
    rows: list[SectionSymbol] = []
    for k in range(d):
        if c is not None and k in (c - 1, c):
            rows.append(SectionSymbol(slot, c, d - c))
        else:
            rows.append(SectionSymbol(slot, k, d - k - 1))
    return SectionBasis(tuple(rows), c)


def section_space(l: LineBundleClass, u: int, t: int, slot: int = 0) -> VanishingTable:
    """The unique t-dimensional space of sections with contiguous orders.

    For a special class O(a*P + (d-a)*Q) with the coincidence inside the
    window (u+1 <= a <= u+t) the rows are spanned by s_u .. s_{u+t} with the
    merged pair counted once; the row at P-order a has order sum d.  The
    boundary forms u = -1 (only for a = 0) and u+t = d (only for a = d) are
    accepted, with the edge row promoted.  Otherwise the rows are
    s_u .. s_{u+t-1} with plain orders (u+j, d-u-j-1); this requires the
    window to avoid the coincidence pair entirely.
    """
    d = l.degree
    if t < 0:
        raise AlgebraError("section_space needs t >= 0")
    if t == 0:
        return VanishingTable(())
    a = l.special_index()
    rows: list[SectionSymbol] = []
    if a is not None and u + 1 <= a <= u + t:
        if u < -1 or (u == -1 and a != 0):
            raise AlgebraError(f"window start {u} invalid for coincidence at {a}")
        if u + t > d or (u + t == d and a != d):
            raise AlgebraError(f"window end {u + t} invalid for degree {d}")
        for m in range(u, u + t + 1):
            if m == a - 1:
                continue
            if m == a:
                rows.append(SectionSymbol(slot, a, d - a))
            else:
                rows.append(SectionSymbol(slot, m, d - m - 1))
    else:
        if u < 0 or u + t > d:
            raise AlgebraError(f"window [{u}, {u + t - 1}] outside [0, {d - 1}]")
        if a is not None and not (a < u or a > u + t):
            raise AlgebraError(
                f"window [{u}, {u + t - 1}] touches the coincidence pair at {a}"
            )
        rows = [SectionSymbol(slot, u + j, d - u - j - 1) for j in range(t)]
    return VanishingTable(tuple(rows))


def twist_sections(e: BundleOnComponent, alpha: int) -> VanishingTable:
    """Sections of e vanishing to order >= alpha at P, for a balanced e.

    e must be a direct sum of h slots of equal rank r/h and equal degree d/h
    (line slots count as rank 1).  Writing d = r*d1 + d2 with 0 <= d2 < r and
    k1 = d1 - alpha, the space has dimension r*k1 + d2 and P-orders d1
    (d2 times) followed by d1-1 .. d1-k1, r times each; Q-orders are
    unconstrained and flagged inexact.  Rows are listed by descending
    P-order, grouped by slot within each order.
    """
    if not e.slots:
        raise AlgebraError("twist_sections needs a nonempty bundle")
    shapes = {(slot_rank(s), slot_degree(s)) for s in e.slots}
    if len(shapes) != 1:
        raise AlgebraError(f"twist_sections needs uniform slots, got shapes {sorted(shapes)}")
    r, d = e.rank, e.degree
    d1, d2 = divmod(d, r)
    k1 = d1 - alpha
    (r_sub, d_sub) = next(iter(shapes))
    d2_sub = d_sub - r_sub * d1
    rows: list[SectionSymbol] = []
    for level in range(d1, d1 - max(k1, 0) - 1, -1):
        per_slot = d2_sub if level == d1 else r_sub
        for slot_index in range(len(e.slots)):
            for _ in range(per_slot):
                rows.append(SectionSymbol(slot_index, level, 0, exact_p=True, exact_q=False))
    return VanishingTable(tuple(rows))


def end_decomposition(e: BundleOnComponent) -> BundleOnComponent:
    """Hom(e, e) = e* (x) e as a direct sum of degree-0 line classes.

    Requires all slots of e to share one (rank, degree) shape.  Rank-1 slot
    pairs (i, j) contribute the single class twist_j - twist_i.  For slots of
    rank r' > 1 (which must have gcd(r', degree) = 1) each pair contributes
    the full formal r'-torsion lattice (Z/r')^2 tensored by twist_j -
    twist_i, built on two torsion symbols attached to the shape; exactly one
    lattice class per diagonal pair is trivial.  Output order is pair-major
    (i, then j), lattice classes in lexicographic order.
    """
    if not e.slots:
        raise AlgebraError("end_decomposition needs a nonempty bundle")
    shapes = set()
    for s in e.slots:
        if isinstance(s, IndecomposableSlot) and s.rank > 1 and s.gcd != 1:
            raise AlgebraError(f"slot of rank {s.rank}, degree {s.degree} has gcd {s.gcd} != 1")
        shapes.add((slot_rank(s), slot_degree(s)))
    if len(shapes) != 1:
        raise AlgebraError(f"end_decomposition needs uniform slots, got shapes {sorted(shapes)}")
    (r_sub, d_sub) = next(iter(shapes))

    def base_class(s: Slot) -> Degree0Class:
        if isinstance(s, LineBundleClass):
            return Degree0Class.of_pq(s.a) + s.twist
        return s.twist

    lattice: list[Degree0Class] = [Degree0Class.zero()]
    if r_sub > 1:
        tau_p = f"end{r_sub}d{d_sub}.p"
        tau_q = f"end{r_sub}d{d_sub}.q"
        lattice = [
            Degree0Class.of_torsion(tau_p, r_sub, m) + Degree0Class.of_torsion(tau_q, r_sub, n)
            for m in range(r_sub)
            for n in range(r_sub)
        ]
    out: list[Slot] = []
    for si in e.slots:
        for sj in e.slots:
            diff = base_class(sj) - base_class(si)
            for cls in lattice:
                out.append(LineBundleClass(0, 0, diff + cls))
    return BundleOnComponent(tuple(out))


def iter_trivial_slots(e: BundleOnComponent) -> Iterator[int]:
    for i, s in enumerate(e.slots):
        if slot_degree(s) == 0 and h0_slot(s) == 1:
            yield i
