"""JSON encoding of series, redistributions, certificates and verdicts.

Every top-level payload carries ``"schema": 1`` and a ``"type"`` tag; the
full field-by-field layout is documented in ``docs/schema.md``.  Encoding is
deterministic (sorted keys, no timestamps), and ``loads``/``from_payload``
invert ``dumps``/``to_payload`` for every payload type:
``from_payload(to_payload(x)) == x``.
"""

from __future__ import annotations

import json
from typing import Any

from ellchain.chain import (
    ChainCurve,
    GluingData,
    LimitLinearSeries,
    NodeGluing,
    Redistribution,
    StabilityVerdict,
    ValidationReport,
)
from ellchain.elliptic import (
    BundleOnComponent,
    Degree0Class,
    IndecomposableSlot,
    LineBundleClass,
    SectionSymbol,
    Slot,
    VanishingTable,
)
from ellchain.independence import Certificate, EliminationPass, Survivor
from ellchain.pipelines import Audit, DistributionInfo, OracleBlock, Verdict

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    pass


# ---------------------------------------------------------------------------
# encoders
# ---------------------------------------------------------------------------


def _class0(c: Degree0Class) -> dict:
    return {
        "pq": c.pq,
        "generic": {name: coeff for name, coeff in c.generic},
        "torsion": {name: [order, residue] for name, order, residue in c.torsion},
    }


def _slot(s: Slot) -> dict:
    if isinstance(s, LineBundleClass):
        return {"kind": "line", "a": s.a, "b": s.b, "twist": _class0(s.twist)}
    return {"kind": "atom", "rank": s.rank, "degree": s.degree, "twist": _class0(s.twist)}


def _bundle(b: BundleOnComponent) -> dict:
    return {"slots": [_slot(s) for s in b.slots]}


def _row(r: SectionSymbol) -> dict:
    return {
        "slot": r.slot,
        "ord_p": r.ord_p,
        "ord_q": r.ord_q,
        "exact_p": r.exact_p,
        "exact_q": r.exact_q,
    }


def _table(t: VanishingTable) -> dict:
    return {"rows": [_row(r) for r in t.rows]}


def _gluing(g: GluingData) -> dict:
    return {
        "nodes": [
            {"matched": None if n.matched is None else [list(p) for p in n.matched]}
            for n in g.nodes
        ],
        "distinguished": [[node, list(ids)] for node, ids in g.distinguished],
    }


def to_payload(obj: Any) -> dict:
    """Encode a supported object as a schema-tagged JSON payload."""
    if isinstance(obj, LimitLinearSeries):
        return {
            "schema": SCHEMA_VERSION,
            "type": "series",
            "chain": {"kinds": list(obj.chain.kinds)},
            "rank": obj.rank,
            "degree": obj.degree,
            "dimension": obj.dimension,
            "a": obj.a,
            "bundles": [_bundle(b) for b in obj.bundles],
            "tables": [_table(t) for t in obj.tables],
            "gluing": _gluing(obj.gluing),
            "pairings": None
            if obj.pairings is None
            else [[list(p) for p in node] for node in obj.pairings],
        }
    if isinstance(obj, ValidationReport):
        return {
            "schema": SCHEMA_VERSION,
            "type": "validation",
            "structural_errors": list(obj.structural_errors),
            "conditions": {
                "degree": obj.condition_degree,
                "nodes": obj.condition_nodes,
                "determined": obj.condition_determined,
            },
            "failures": list(obj.failures),
            "ok": obj.ok,
        }
    if isinstance(obj, Redistribution):
        return {
            "schema": SCHEMA_VERSION,
            "type": "redistribution",
            "dprime": list(obj.dprime),
            "a_parts": list(obj.a_parts),
            "thresholds": [list(t) for t in obj.thresholds],
            "bundles": [_bundle(b) for b in obj.bundles],
            "tables": [_table(t) for t in obj.tables],
            "survivors": [list(s) for s in obj.survivors],
            "total_degree": obj.total_degree,
            "rank": obj.rank,
            "empty_components": list(obj.empty_components),
        }
    if isinstance(obj, Certificate):
        return {
            "schema": SCHEMA_VERSION,
            "type": "certificate",
            "product_count": obj.product_count,
            "thresholds": [list(t) for t in obj.thresholds],
            "passes": [
                {
                    "component": p.component,
                    "survivors": [
                        {
                            "product": s.product,
                            "slot": s.slot,
                            "ord_p": s.ord_p,
                            "exact_p": s.exact_p,
                            "ord_q": s.ord_q,
                            "exact_q": s.exact_q,
                        }
                        for s in p.survivors
                    ],
                }
                for p in obj.passes
            ],
        }
    if isinstance(obj, Verdict):
        return {
            "schema": SCHEMA_VERSION,
            "type": "verdict",
            "kind": obj.kind,
            "params": dict(obj.params),
            "case": obj.case,
            "status": obj.status,
            "expected_products": obj.expected_products,
            "product_count": obj.product_count,
            "audits": [
                {"name": a.name, "expected": _plain(a.expected), "actual": _plain(a.actual), "ok": a.ok}
                for a in obj.audits
            ],
            "distribution": None
            if obj.distribution is None
            else {
                "dprime": list(obj.distribution.dprime),
                "thresholds": [list(t) for t in obj.distribution.thresholds],
                "quoted_thresholds": None
                if obj.distribution.quoted_thresholds is None
                else [list(t) for t in obj.distribution.quoted_thresholds],
                "matches_quoted": obj.distribution.matches_quoted,
            },
            "certificate": None if obj.certificate is None else to_payload(obj.certificate),
            "certificate_error": obj.certificate_error,
            "oracle": None
            if obj.oracle is None
            else {
                "prime": obj.oracle.prime,
                "trials": obj.oracle.trials,
                "seeds": list(obj.oracle.seeds),
                "ranks": list(obj.oracle.ranks),
                "expected": obj.oracle.expected,
                "agreed": obj.oracle.agreed,
            },
            "stability": None
            if obj.stability is None
            else {"verdict": obj.stability.verdict, "reason": obj.stability.reason},
            "notes": list(obj.notes),
        }
    raise SchemaError(f"cannot serialize {type(obj).__name__}")


def _plain(value: Any) -> Any:
    if isinstance(value, tuple):
        return [_plain(v) for v in value]
    return value


def dumps(obj: Any) -> str:
    return json.dumps(to_payload(obj), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# decoders
# ---------------------------------------------------------------------------


def _load_class0(p: dict) -> Degree0Class:
    return Degree0Class(
        pq=p["pq"],
        generic=tuple(sorted(p["generic"].items())),
        torsion=tuple(sorted((n, o, r) for n, (o, r) in p["torsion"].items())),
    )


def _load_slot(p: dict) -> Slot:
    if p["kind"] == "line":
        return LineBundleClass(p["a"], p["b"], _load_class0(p["twist"]))
    if p["kind"] == "atom":
        return IndecomposableSlot(p["rank"], p["degree"], _load_class0(p["twist"]))
    raise SchemaError(f"unknown slot kind {p['kind']!r}")


def _load_bundle(p: dict) -> BundleOnComponent:
    return BundleOnComponent(tuple(_load_slot(s) for s in p["slots"]))


def _load_row(p: dict) -> SectionSymbol:
    return SectionSymbol(p["slot"], p["ord_p"], p["ord_q"], p["exact_p"], p["exact_q"])


def _load_table(p: dict) -> VanishingTable:
    return VanishingTable(tuple(_load_row(r) for r in p["rows"]))


def _load_gluing(p: dict) -> GluingData:
    nodes = tuple(
        NodeGluing(
            None if n["matched"] is None else tuple(tuple(pair) for pair in n["matched"])
        )
        for n in p["nodes"]
    )
    distinguished = tuple((node, tuple(ids)) for node, ids in p["distinguished"])
    return GluingData(nodes, distinguished)


def _deep_tuple(value: Any) -> Any:
    if isinstance(value, list):
        return tuple(_deep_tuple(v) for v in value)
    return value


def from_payload(p: dict) -> Any:
    """Decode a schema-tagged payload back into its object."""
    if p.get("schema") != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema version {p.get('schema')!r}")
    kind = p.get("type")
    if kind == "series":
        return LimitLinearSeries(
            chain=ChainCurve(tuple(p["chain"]["kinds"])),
            rank=p["rank"],
            degree=p["degree"],
            dimension=p["dimension"],
            a=p["a"],
            bundles=tuple(_load_bundle(b) for b in p["bundles"]),
            tables=tuple(_load_table(t) for t in p["tables"]),
            gluing=_load_gluing(p["gluing"]),
            pairings=None
            if p["pairings"] is None
            else tuple(tuple(tuple(q) for q in node) for node in p["pairings"]),
        )
    if kind == "validation":
        return ValidationReport(
            structural_errors=tuple(p["structural_errors"]),
            condition_degree=p["conditions"]["degree"],
            condition_nodes=p["conditions"]["nodes"],
            condition_determined=p["conditions"]["determined"],
            failures=tuple(p["failures"]),
        )
    if kind == "redistribution":
        return Redistribution(
            dprime=tuple(p["dprime"]),
            a_parts=tuple(p["a_parts"]),
            thresholds=tuple(tuple(t) for t in p["thresholds"]),
            bundles=tuple(_load_bundle(b) for b in p["bundles"]),
            tables=tuple(_load_table(t) for t in p["tables"]),
            survivors=tuple(tuple(s) for s in p["survivors"]),
            total_degree=p["total_degree"],
            rank=p["rank"],
        )
    if kind == "certificate":
        return Certificate(
            passes=tuple(
                EliminationPass(
                    q["component"],
                    tuple(
                        Survivor(
                            s["product"], s["slot"], s["ord_p"], s["exact_p"],
                            s["ord_q"], s["exact_q"],
                        )
                        for s in q["survivors"]
                    ),
                )
                for q in p["passes"]
            ),
            product_count=p["product_count"],
            thresholds=tuple(tuple(t) for t in p["thresholds"]),
        )
    if kind == "verdict":
        return Verdict(
            kind=p["kind"],
            params=dict(p["params"]),
            case=p["case"],
            status=p["status"],
            expected_products=p["expected_products"],
            product_count=p["product_count"],
            audits=tuple(
                Audit(a["name"], _deep_tuple(a["expected"]), _deep_tuple(a["actual"]))
                for a in p["audits"]
            ),
            distribution=None
            if p["distribution"] is None
            else DistributionInfo(
                dprime=tuple(p["distribution"]["dprime"]),
                thresholds=tuple(tuple(t) for t in p["distribution"]["thresholds"]),
                quoted_thresholds=None
                if p["distribution"]["quoted_thresholds"] is None
                else tuple(tuple(t) for t in p["distribution"]["quoted_thresholds"]),
            ),
            certificate=None
            if p["certificate"] is None
            else from_payload(p["certificate"]),
            certificate_error=p["certificate_error"],
            oracle=None
            if p["oracle"] is None
            else OracleBlock(
                prime=p["oracle"]["prime"],
                trials=p["oracle"]["trials"],
                seeds=tuple(p["oracle"]["seeds"]),
                ranks=tuple(p["oracle"]["ranks"]),
                expected=p["oracle"]["expected"],
            ),
            stability=None
            if p["stability"] is None
            else StabilityVerdict(p["stability"]["verdict"], p["stability"]["reason"]),
            notes=tuple(p["notes"]),
        )
    raise SchemaError(f"unknown payload type {kind!r}")


def loads(text: str) -> Any:
    return from_payload(json.loads(text))
