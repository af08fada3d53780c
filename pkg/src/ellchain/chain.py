"""Chains of elliptic curves and limit linear series on them.

A chain glues Q_i on component i to P_{i+1} on component i+1; marked points
are generic, so each elliptic component carries the symbolic class algebra of
:mod:`ellchain.elliptic`.  A limit linear series is per-component bundle and
vanishing-table data together with node gluing, a section pairing across each
node, and one positive integer ``a``; its three defining conditions are
checked by :func:`validate_lls`:

  (1)  sum(d_i) - r*(M-1)*a = d,
  (2)  paired rows satisfy ord_Q + ord_P >= a at every node,
  (3)  a*r <= d_i < (a+1)*r on every elliptic component (the arithmetic
       form: twisting by a*P or a*Q leaves sections determined by their
       value at the point).

Degree redistribution twists the series by node-supported divisors, moving
degree between components while keeping residues mod r, and filters each
table down to the rows that survive the new vanishing thresholds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ellchain.elliptic import (
    AlgebraError,
    BundleOnComponent,
    LineBundleClass,
    SectionSymbol,
    Slot,
    VanishingTable,
    slot_rank,
)

ELLIPTIC = "elliptic"
RATIONAL = "rational"


@dataclass(frozen=True)
class ChainCurve:
    """Components in order; Q_i is glued to P_{i+1} for i = 1..M-1."""

    kinds: tuple[str, ...]

    def __post_init__(self) -> None:
        bad = [k for k in self.kinds if k not in (ELLIPTIC, RATIONAL)]
        if bad:
            raise AlgebraError(f"unknown component kinds {bad}")

    @property
    def components(self) -> int:
        return len(self.kinds)

    @property
    def genus(self) -> int:
        return sum(1 for k in self.kinds if k == ELLIPTIC)


def elliptic_chain(g: int) -> ChainCurve:
    if g < 1:
        raise AlgebraError("need at least one component")
    return ChainCurve(tuple([ELLIPTIC] * g))


@dataclass(frozen=True)
class NodeGluing:
    """Gluing of projectivized fibers at one node.

    ``matched`` is either None (generic gluing) or a tuple of slot-index
    pairs (left slot at Q_i, right slot at P_{i+1}); matched slots must have
    equal rank.
    """

    matched: tuple[tuple[int, int], ...] | None = None

    @property
    def is_generic(self) -> bool:
        return self.matched is None


@dataclass(frozen=True)
class GluingData:
    """Per-node gluing plus optional distinguished-subspace matchings.

    ``distinguished`` records, per node, section rows whose spans are matched
    beyond the slot-level data (used at the last node of the rank-r series
    constructions); entries are (node index, tuple of section ids).
    """

    nodes: tuple[NodeGluing, ...]
    distinguished: tuple[tuple[int, tuple[int, ...]], ...] = ()


def generic_gluing(m: int) -> GluingData:
    return GluingData(tuple(NodeGluing() for _ in range(m - 1)))


@dataclass(frozen=True)
class LimitLinearSeries:
    """Per-component bundles and k-dimensional vanishing tables on a chain.

    Table rows are indexed by global section id: row t of every component is
    the aspect of section t, and ``pairings`` (default: identity) records
    which row of V_i pairs with which row of V_{i+1} at each node.
    """

    chain: ChainCurve
    rank: int
    degree: int
    dimension: int
    a: int
    bundles: tuple[BundleOnComponent, ...]
    tables: tuple[VanishingTable, ...]
    gluing: GluingData
    pairings: tuple[tuple[tuple[int, int], ...], ...] | None = None

    def node_pairs(self, node: int) -> tuple[tuple[int, int], ...]:
        if self.pairings is not None:
            return self.pairings[node]
        return tuple((t, t) for t in range(self.dimension))

    @property
    def component_degrees(self) -> tuple[int, ...]:
        return tuple(b.degree for b in self.bundles)


@dataclass(frozen=True)
class ValidationReport:
    structural_errors: tuple[str, ...]
    condition_degree: bool
    condition_nodes: bool
    condition_determined: bool
    failures: tuple[str, ...]

    @property
    def conditions(self) -> tuple[bool, bool, bool]:
        return (self.condition_degree, self.condition_nodes, self.condition_determined)

    @property
    def ok(self) -> bool:
        return not self.structural_errors and all(self.conditions)


def _row_class_conflict(slot: Slot, row: SectionSymbol) -> str | None:
    """A stated row that no section of the slot's class can realize.

    For a line slot of degree d the order sum is at most d, with equality
    only for the class O(ord_p*P + ord_q*Q) itself; an exact sum of d - 1 is
    impossible at the two indices merged by a coincidence.  For
    indecomposable slots the exact P-order cannot exceed the slope.
    """
    if isinstance(slot, LineBundleClass):
        d = slot.degree
        total = row.ord_p + row.ord_q
        if total > d:
            return f"order sum {total} exceeds slot degree {d}"
        special = slot.special_index()
        if total == d and special != row.ord_p:
            return f"order sum {total} = degree in a class not of that shape"
        if total == d - 1 and row.exact_p and row.exact_q:
            if special is not None and special in (row.ord_p, row.ord_p + 1):
                return f"exact orders ({row.ord_p}, {row.ord_q}) claim a merged section"
    else:
        if row.exact_p and slot.rank * row.ord_p > slot.degree:
            return f"P-order {row.ord_p} exceeds the slope bound"
    return None


def validate_lls(series: LimitLinearSeries) -> ValidationReport:
    """Check the three series conditions; structural defects are reported apart."""
    structural: list[str] = []
    failures: list[str] = []
    m = series.chain.components
    if len(series.bundles) != m or len(series.tables) != m:
        structural.append(
            f"chain has {m} components but {len(series.bundles)} bundles"
            f" / {len(series.tables)} tables"
        )
        return ValidationReport(tuple(structural), False, False, False, ())
    for i, (bundle, table) in enumerate(zip(series.bundles, series.tables)):
        if bundle.rank != series.rank:
            structural.append(f"component {i + 1}: rank {bundle.rank} != {series.rank}")
        if table.dimension != series.dimension:
            structural.append(
                f"component {i + 1}: table dimension {table.dimension} != {series.dimension}"
            )
        for row in table.rows:
            if not 0 <= row.slot < len(bundle.slots):
                structural.append(f"component {i + 1}: row in missing slot {row.slot}")
                continue
            conflict = _row_class_conflict(bundle.slots[row.slot], row)
            if conflict:
                structural.append(f"component {i + 1}, slot {row.slot}: {conflict}")
    if len(series.gluing.nodes) != m - 1:
        structural.append(f"{len(series.gluing.nodes)} gluing nodes for {m} components")
    else:
        for n, node in enumerate(series.gluing.nodes):
            if node.matched is None:
                continue
            for left, right in node.matched:
                try:
                    rl = slot_rank(series.bundles[n].slots[left])
                    rr = slot_rank(series.bundles[n + 1].slots[right])
                except IndexError:
                    structural.append(f"node {n + 1}: matched slot out of range")
                    continue
                if rl != rr:
                    structural.append(f"node {n + 1}: matched slots of ranks {rl} != {rr}")
    if series.pairings is not None and len(series.pairings) != m - 1:
        structural.append("pairings do not cover every node")
    if structural:
        return ValidationReport(tuple(structural), False, False, False, ())

    lhs = sum(series.component_degrees) - series.rank * (m - 1) * series.a
    cond1 = lhs == series.degree
    if not cond1:
        failures.append(f"degree bookkeeping: {lhs} != {series.degree}")

    cond2 = True
    for n in range(m - 1):
        left, right = series.tables[n], series.tables[n + 1]
        for tl, tr in series.node_pairs(n):
            got = left.rows[tl].ord_q + right.rows[tr].ord_p
            if got < series.a:
                cond2 = False
                failures.append(
                    f"node {n + 1}: rows ({tl}, {tr}) have order sum {got} < a = {series.a}"
                )

    cond3 = True
    for i, bundle in enumerate(series.bundles):
        if series.chain.kinds[i] != ELLIPTIC:
            continue
        d_i = bundle.degree
        if not series.a * series.rank <= d_i < (series.a + 1) * series.rank:
            cond3 = False
            failures.append(
                f"component {i + 1}: degree {d_i} outside"
                f" [{series.a * series.rank}, {(series.a + 1) * series.rank})"
            )
    return ValidationReport((), cond1, cond2, cond3, tuple(failures))


@dataclass(frozen=True)
class Rank1Report:
    crude: bool
    refined: bool


def validate_rank1(series: LimitLinearSeries) -> Rank1Report:
    """Node vanishing-sequence inequalities for a rank-1 series.

    At each node the sorted Q-orders a_1 <= .. <= a_k on the left and sorted
    P-orders b_1 <= .. <= b_k on the right must satisfy a_j + b_{k-j+1} >= d;
    the series is refined when every inequality is an equality.
    """
    if series.rank != 1:
        raise AlgebraError("validate_rank1 needs a rank-1 series")
    crude = refined = True
    k, d = series.dimension, series.degree
    for n in range(series.chain.components - 1):
        q_orders = sorted(row.ord_q for row in series.tables[n].rows)
        p_orders = sorted(row.ord_p for row in series.tables[n + 1].rows)
        for j in range(k):
            total = q_orders[j] + p_orders[k - 1 - j]
            if total < d:
                crude = False
            if total != d:
                refined = False
    return Rank1Report(crude, crude and refined)


# ---------------------------------------------------------------------------
# canonical series
# ---------------------------------------------------------------------------


def canonical_series(g: int) -> LimitLinearSeries:
    """The canonical limit linear series on a chain of g elliptic curves.

    Component i carries O(2(i-1)*P + 2(g-i)*Q) with the g-dimensional table
    whose P-orders run i-2, .., 2i-4, then 2i-2, .., g+i-2 (leading run empty
    for i = 1) and whose row i is the distinguished section of orders
    (2(i-1), 2(g-i)).
    """
    from ellchain.elliptic import LineBundleClass, section_space

    if g < 2:
        raise AlgebraError(f"canonical series needs genus >= 2, got {g}")
    bundles: list[BundleOnComponent] = []
    tables: list[VanishingTable] = []
    for i in range(1, g + 1):
        cls = LineBundleClass(2 * (i - 1), 2 * (g - i))
        bundles.append(BundleOnComponent((cls,)))
        tables.append(section_space(cls, i - 2, g))
    return LimitLinearSeries(
        chain=elliptic_chain(g),
        rank=1,
        degree=2 * g - 2,
        dimension=g,
        a=2 * g - 2,
        bundles=tuple(bundles),
        tables=tuple(tables),
        gluing=generic_gluing(g),
    )


# ---------------------------------------------------------------------------
# degree redistribution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Redistribution:
    """A series re-expressed with target component degrees d'_i.

    ``a_parts`` are the integers with d'_i = a_i * r + (d_i mod r); the
    vanishing thresholds on component i are (sum of a_j for j < i, sum for
    j > i).  ``tables`` hold the surviving rows with thresholds subtracted,
    ``survivors`` their original row ids.  Applying :meth:`redistribute`
    with new targets twists relative to this state, so re-applying the same
    targets is the identity.
    """

    dprime: tuple[int, ...]
    a_parts: tuple[int, ...]
    thresholds: tuple[tuple[int, int], ...]
    bundles: tuple[BundleOnComponent, ...]
    tables: tuple[VanishingTable, ...]
    survivors: tuple[tuple[int, ...], ...]
    total_degree: int
    rank: int

    @property
    def empty_components(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, t in enumerate(self.tables) if t.dimension == 0)

    def alive(self, component: int, row: SectionSymbol) -> bool:
        """Whether a row (with orders stated on the un-twisted series) survives.

        Exact orders below a threshold mean the section dies on the
        component; inexact orders are lower bounds, so they can only
        certify survival, never death.
        """
        th_p, th_q = self.thresholds[component]
        if row.exact_p and row.ord_p < th_p:
            return False
        if row.exact_q and row.ord_q < th_q:
            return False
        return True

    def redistribute(self, dprime: Sequence[int]) -> "Redistribution":
        """Re-target this redistribution (delta twist against current state)."""
        dprime = tuple(dprime)
        _check_targets(dprime, self.dprime, self.total_degree, self.rank)
        a2 = tuple((dp - (cur % self.rank)) // self.rank for dp, cur in zip(dprime, self.dprime))
        delta = tuple(x - y for x, y in zip(a2, self.a_parts))
        return _apply_parts(
            base_bundles=self.bundles,
            base_tables=self.tables,
            base_ids=self.survivors,
            parts=delta,
            dprime=dprime,
            a_parts=a2,
            abs_thresholds=_thresholds(a2),
            total_degree=self.total_degree,
            rank=self.rank,
        )


def _thresholds(parts: Sequence[int]) -> tuple[tuple[int, int], ...]:
    m = len(parts)
    prefix = [0]
    for p in parts:
        prefix.append(prefix[-1] + p)
    total = prefix[-1]
    return tuple((prefix[i], total - prefix[i + 1]) for i in range(m))


def _check_targets(
    dprime: tuple[int, ...], current: Sequence[int], total: int, rank: int
) -> None:
    if len(dprime) != len(current):
        raise AlgebraError("one target degree per component required")
    if sum(dprime) != total:
        raise AlgebraError(f"target degrees sum to {sum(dprime)}, need {total}")
    for i, (dp, cur) in enumerate(zip(dprime, current)):
        if (dp - cur) % rank:
            raise AlgebraError(
                f"component {i + 1}: target {dp} not congruent to {cur} mod {rank}"
            )


def _apply_parts(
    base_bundles: Sequence[BundleOnComponent],
    base_tables: Sequence[VanishingTable],
    base_ids: Sequence[Sequence[int]] | None,
    parts: Sequence[int],
    dprime: tuple[int, ...],
    a_parts: tuple[int, ...],
    abs_thresholds: tuple[tuple[int, int], ...],
    total_degree: int,
    rank: int,
) -> Redistribution:
    rel = _thresholds(parts)
    bundles: list[BundleOnComponent] = []
    tables: list[VanishingTable] = []
    survivors: list[tuple[int, ...]] = []
    for i, (bundle, table) in enumerate(zip(base_bundles, base_tables)):
        th_p, th_q = rel[i]
        new_bundle = bundle.twisted(th_p, th_q)
        if new_bundle.degree != dprime[i]:
            raise AlgebraError(
                f"component {i + 1}: twisted degree {new_bundle.degree} != target {dprime[i]}"
            )
        kept_rows: list[SectionSymbol] = []
        kept_ids: list[int] = []
        for t, row in enumerate(table.rows):
            dead = (row.exact_p and row.ord_p < th_p) or (row.exact_q and row.ord_q < th_q)
            if dead:
                continue
            kept_rows.append(row.shifted(th_p, th_q))
            kept_ids.append(base_ids[i][t] if base_ids is not None else t)
        bundles.append(new_bundle)
        tables.append(VanishingTable(tuple(kept_rows)))
        survivors.append(tuple(kept_ids))
    return Redistribution(
        dprime=dprime,
        a_parts=a_parts,
        thresholds=abs_thresholds,
        bundles=tuple(bundles),
        tables=tuple(tables),
        survivors=tuple(survivors),
        total_degree=total_degree,
        rank=rank,
    )


def redistribute(series: LimitLinearSeries, dprime: Sequence[int]) -> Redistribution:
    """Move degree between components, keeping residues mod r.

    Targets must satisfy sum(d'_i) = d and d'_i = d_i mod r.  Writing
    d'_i = a_i*r + (d_i mod r), component i is twisted by
    O(-(sum_{j<i} a_j)*P_i - (sum_{j>i} a_j)*Q_i) and its table keeps exactly
    the rows meeting both thresholds, with the thresholds subtracted from the
    surviving orders.  An empty surviving table is legal (all sections die on
    that component) and is reported by ``empty_components``.
    """
    dprime = tuple(dprime)
    _check_targets(dprime, series.component_degrees, series.degree, series.rank)
    a_parts = tuple(
        (dp - (d_i % series.rank)) // series.rank
        for dp, d_i in zip(dprime, series.component_degrees)
    )
    return _apply_parts(
        base_bundles=series.bundles,
        base_tables=series.tables,
        base_ids=None,
        parts=a_parts,
        dprime=dprime,
        a_parts=a_parts,
        abs_thresholds=_thresholds(a_parts),
        total_degree=series.degree,
        rank=series.rank,
    )


# ---------------------------------------------------------------------------
# stability of glued bundles (sufficient criterion)
# ---------------------------------------------------------------------------

STABLE_BY_CRITERION = "stable-by-criterion"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class StabilityVerdict:
    verdict: str
    reason: str


def _component_is_stable(bundle: BundleOnComponent) -> bool:
    # a single indecomposable slot with coprime rank and degree
    if len(bundle.slots) != 1:
        return False
    slot = bundle.slots[0]
    from ellchain.elliptic import IndecomposableSlot

    return isinstance(slot, IndecomposableSlot) and slot.gcd == 1 and slot.rank >= 1


def check_stability(
    bundles: Sequence[BundleOnComponent],
    gluing: GluingData,
    destabilizing: Sequence[Sequence[int]],
) -> StabilityVerdict:
    """Sufficient stability check for a bundle glued along the chain.

    Stable if some component bundle is stable outright; if instead every
    component is strictly semistable, stable provided the declared
    destabilizing sub-slots never glue with each other all the way across
    the chain, i.e. no chain-spanning path of declared slots is matched at
    every node (a single generic node breaks every path).  Anything else is
    inconclusive: the criterion is sufficient only.
    """
    if len(destabilizing) != len(bundles):
        raise AlgebraError("one destabilizing-slot list per component required")
    if any(_component_is_stable(b) for b in bundles):
        return StabilityVerdict(STABLE_BY_CRITERION, "a component bundle is stable")
    reachable = set(destabilizing[0])
    for n, node in enumerate(gluing.nodes):
        if node.matched is None or not reachable:
            reachable = set()
            break
        matched = {(l, r) for l, r in node.matched}
        reachable = {
            r for (l, r) in matched if l in reachable and r in destabilizing[n + 1]
        }
    if reachable:
        return StabilityVerdict(
            INCONCLUSIVE, "declared destabilizing sub-slots glue across every node"
        )
    return StabilityVerdict(
        STABLE_BY_CRITERION,
        "all components strictly semistable and no destabilizing sub-slots glue",
    )
