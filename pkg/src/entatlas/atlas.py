"""Atlas machinery: enumerate the {0,1} forms, discover signature classes,
build adherence graphs, and verify every golden evaluation table.

Class discovery evaluates a covariant signature on each filtered form and
partitions by signature.  The default basis is the summary list that the
printed evaluation tables use (the T vector extended with the invariant
bits and the degree-6 covariants feeding V''); the full 170-entry catalog
is available behind ``basis="full"``.  Enumeration parallelizes over
forms with multiprocessing; ENTATLAS_THREADS caps the pool.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from .catalog import EXTENDED_T_IDS, T_IDS, build_catalog
from .classify import GOLDEN, IntegrityError
from .invariants import inv_B, inv_D, inv_L, inv_M
from .qstate import decode_form

_GR3PP = frozenset({65267, 65509, 65507, 65269, 65510, 65231})


def _invariant_bits(s):
    return (
        0 if not inv_B(s) else 1,
        0 if not inv_L(s) else 1,
        0 if not inv_M(s) else 1,
        0 if not inv_D(s, "xy") else 1,
    )


def nullcone_filter(s) -> bool:
    return _invariant_bits(s) == (0, 0, 0, 0)


def secant3_filter(s) -> bool:
    bits = _invariant_bits(s)
    return bits[1] == 0 and bits[2] == 0


_FILTERS = {"nullcone": nullcone_filter, "secant3": secant3_filter, "all": lambda s: True}


def enumerate_forms(filter_spec="all", processes: int | None = None) -> list:
    """All n in 0..65535 whose decoded state satisfies the filter."""
    pred = _FILTERS[filter_spec] if isinstance(filter_spec, str) else filter_spec
    if pred is _FILTERS["all"]:
        return list(range(65536))
    return [n for n in range(65536) if pred(decode_form(n))]


@dataclass
class ClassTable:
    """Signature-keyed partition of a form set."""

    basis: tuple
    classes: dict = field(default_factory=dict)  # signature -> sorted members
    representatives: dict = field(default_factory=dict)  # signature -> rep label

    @property
    def representative_set(self) -> set:
        return set(self.representatives.values())

    def members_of(self, rep: int) -> list:
        for sig, r in self.representatives.items():
            if r == rep:
                return self.classes[sig]
        raise KeyError(rep)

    def signature_of(self, rep: int) -> tuple:
        for sig, r in self.representatives.items():
            if r == rep:
                return sig
        raise KeyError(rep)

    def class_of_form(self, n: int):
        for sig, members in self.classes.items():
            if n in members:
                return self.representatives[sig]
        raise KeyError(n)


def _resolve_basis(basis):
    if basis == "extended" or basis is None:
        return EXTENDED_T_IDS
    if basis == "T":
        return T_IDS
    if basis == "full":
        cat = build_catalog()
        return tuple(cat.order)
    return tuple(basis)


def _signature_worker(args):
    ns, basis_key = args
    cat = build_catalog()
    ids = _resolve_basis(basis_key)
    out = []
    for n in ns:
        s = decode_form(n)
        out.append((n, _invariant_bits(s) + cat.signature(s, ids)))
    return out


def _pool_size(processes):
    if processes is not None:
        return max(1, processes)
    env = os.environ.get("ENTATLAS_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def signatures_for(forms, basis="extended", processes: int | None = None) -> dict:
    """n -> (invariant bits + covariant signature) for every form, in parallel."""
    nproc = _pool_size(processes)
    forms = list(forms)
    if nproc <= 1 or len(forms) < 256:
        return dict(_signature_worker((forms, basis)))
    import multiprocessing as mp

    chunks = [forms[i::nproc] for i in range(nproc)]
    with mp.Pool(nproc) as pool:
        parts = pool.map(_signature_worker, [(c, basis) for c in chunks])
    out = {}
    for part in parts:
        out.update(part)
    return out


def discover_classes(forms, basis="extended", processes: int | None = None) -> ClassTable:
    """Partition forms by signature; the representative is the known class
    label when one lies in the class, else the maximal member."""
    sigs = signatures_for(forms, basis, processes)
    table = ClassTable(basis=_resolve_basis(basis))
    for n, sig in sigs.items():
        table.classes.setdefault(sig, []).append(n)
    known = set(GOLDEN.tables["nullcone_class_list"]) | set(
        GOLDEN.tables["secant_class_list"]
    )
    for sig, members in table.classes.items():
        members.sort()
        labels = [m for m in members if m in known]
        if len(labels) > 1:
            raise IntegrityError(
                f"distinct class labels {labels} share one signature"
            )
        table.representatives[sig] = labels[0] if labels else members[-1]
    return table


@dataclass
class AdherenceGraph:
    """Hasse diagram of the signature partial order (upper covers lower)."""

    nodes: list
    edges: list  # (upper, lower, caveat)

    def cover_pairs(self) -> set:
        return {(u, l) for u, l, _ in self.edges}


def adherence_order(table: ClassTable, restrict_to=None, drop_caveats: bool = False) -> AdherenceGraph:
    """Covers of the partial order "lower's nonzero set inside upper's".

    ``restrict_to`` induces the subposet on the given representative labels.
    Edges between the second-derivative class 59510 and the join classes it
    does not actually contain are flagged (caveat=True): the order reports
    adherence of signatures there, not inclusion of varieties.  With
    ``drop_caveats`` those relations are removed before cover computation,
    which yields the geometry-vetted diagrams of the printed figures.
    """
    sigs = {rep: sig for sig, rep in table.representatives.items()}
    if restrict_to is not None:
        keep = set(restrict_to)
        sigs = {rep: sig for rep, sig in sigs.items() if rep in keep}
    nodes = sorted(sigs)

    def leq(a, b):  # a below b
        if drop_caveats and b == 59510 and a in _GR3PP:
            return False
        sa, sb = sigs[a], sigs[b]
        return all(x <= y for x, y in zip(sa, sb))

    below = {b: [a for a in nodes if a != b and leq(a, b)] for b in nodes}
    edges = []
    for upper in nodes:
        direct = set(below[upper])
        for mid in below[upper]:
            direct -= set(below[mid])
        for lower in sorted(direct):
            caveat = (upper == 59510 and lower in _GR3PP) or (
                lower == 59510 and upper in _GR3PP
            )
            edges.append((upper, lower, caveat))
    return AdherenceGraph(nodes=nodes, edges=sorted(edges))


def export_graph(graph: AdherenceGraph, fmt: str = "dot") -> str:
    if fmt == "dot":
        lines = ["digraph adherence {"]
        for n in sorted(graph.nodes):
            lines.append(f'  "{n}";')
        for u, l, caveat in sorted(graph.edges):
            style = " [style=dashed]" if caveat else ""
            lines.append(f'  "{u}" -> "{l}"{style};')
        lines.append("}")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return json.dumps(
            {
                "nodes": sorted(graph.nodes),
                "edges": [
                    {"upper": u, "lower": l, "caveat": c}
                    for u, l, c in sorted(graph.edges)
                ],
            },
            indent=2,
        ) + "\n"
    raise ValueError(f"unknown graph format {fmt!r}")


def graph_from_json(text: str) -> AdherenceGraph:
    doc = json.loads(text)
    return AdherenceGraph(
        nodes=list(doc["nodes"]),
        edges=[(e["upper"], e["lower"], e["caveat"]) for e in doc["edges"]],
    )


# ---------------------------------------------------------------------------
# Golden-table verification.


@dataclass
class Report:
    lines: list = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = ""):
        self.lines.append((name, ok, detail))

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.lines)

    def __str__(self):
        out = []
        for name, ok, detail in self.lines:
            mark = "PASS" if ok else "FAIL"
            out.append(f"{mark} {name}" + (f": {detail}" if detail else ""))
        out.append(("OK" if self.ok else "MISMATCHES FOUND") + f" ({len(self.lines)} checks)")
        return "\n".join(out)


def verify_tables(catalog=None) -> Report:
    """Recompute every printed evaluation block and diff against the golden
    transcriptions; mismatches become report content, not exceptions."""
    from .catalog import split_T

    catalog = catalog or build_catalog()
    tables = GOLDEN.tables
    report = Report()
    for label_s, rows in tables["evaluation_blocks"].items():
        n = int(label_s)
        got = split_T(catalog.vector_T(decode_form(n)))
        want = [list(r) for r in rows]
        report.add(f"blocks[{n}]", got == want, "" if got == want else f"{got} != {want}")
    strata = {}
    for rec in GOLDEN.orbits.values():
        strata.setdefault(rec.group, []).append(rec.label)
    for gr, want in tables["strata_V"].items():
        for label in sorted(strata.get(gr, [])):
            if label == 0:
                continue
            got = list(catalog.vector_V(decode_form(label)))
            report.add(f"strata_V[{gr}][{label}]", got == list(want),
                       "" if got == list(want) else f"{got} != {list(want)}")
    got = list(catalog.vector_V(decode_form(0)))
    report.add("strata_V[Gr_0][0]", got == tables["strata_V"]["Gr_0"])
    for label_s, row in tables["vprime_classes"].items():
        n = int(label_s)
        got = list(catalog.vector_Vp(decode_form(n)))
        report.add(f"vprime[{n}]", got == row["vprime"],
                   "" if got == row["vprime"] else f"{got} != {row['vprime']}")
    for label_s, row in tables["vpp_classes"].items():
        n = int(label_s)
        got = list(catalog.vector_Vpp(decode_form(n)))
        report.add(f"vpp[{n}]", got == row["vpp"],
                   "" if got == row["vpp"] else f"{got} != {row['vpp']}")
    for label_s, row in tables["vpp_classes"].items():
        n = int(label_s)
        want = tables["strata_W"][row["stratum"]]
        got = list(catalog.vector_W(decode_form(n)))
        report.add(f"W[{row['stratum']}][{n}]", got == want,
                   "" if got == want else f"{got} != {want}")
    return report
