"""Reconcile typeset formulas with the numerically trusted path.

Every typeset formula is registered with a family of candidate readings.  A
candidate is the printed text plus a set of :class:`Edit` s: an ``operator``
edit fills a fused term boundary with ``+`` or ``-`` (the text as printed
reads the juxtaposition as a product), ``index`` and ``term`` edits repair a
misprinted subscript or term.  Candidates are tried in order of increasing
edit count over a parameter sweep; the first whose maximum absolute deviation
from the reference stays within :data:`ACCEPT_TOL` is accepted.

References are the closed-form pipeline for whole-matrix quantities and
dense products (built on :mod:`wheelgreen.oracle`) for the
intermediates.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import closed_form, metrics, pipeline
from .errors import LedgerStateError, UnresolvedReconstructionError
from .oracle import solve_dense
from .wheel import WheelParams, cycle_green_matrix, spoke_vertices

__all__ = [
    "ACCEPT_TOL",
    "PRINTED_TOL",
    "REQUIRED_IDS",
    "Candidate",
    "Edit",
    "ErrataLedger",
    "ErrataRecord",
    "Reconciliation",
    "default_sweep",
    "errata_report",
    "FORMULAS",
]

ACCEPT_TOL = 1e-8
PRINTED_TOL = 1e-9
STATUSES = ("verified-as-printed", "reconstructed", "unresolved")
REQUIRED_IDS = (
    "thm21_Nk",
    "thm21_border",
    "thm21_corner",
    "prop31_Rij",
    "prop31_Rhub",
    "prop31_kirchhoff",
    "cor32_kirchhoff",
)
OPS = ("*", "+", "-")
AC_PAIRS = ((1.0, 1.0), (2.0, 0.5), (0.3, 1.7))


def default_sweep(ms=range(2, 7), ds=range(1, 6), ac=AC_PAIRS) -> list[WheelParams]:
    """Parameter grid sorted by ``(m, d, a, c)``; 75 points by default."""
    pts = {(m, d, float(a), float(c)) for m in ms for d in ds for a, c in ac}
    return [WheelParams(*t) for t in sorted(pts)]


@dataclass(frozen=True)
class Edit:
    kind: str  # operator | index | term
    text: str


@dataclass(frozen=True)
class Candidate:
    label: str
    edits: tuple
    options: dict = field(hash=False, compare=False)

    @property
    def operators_only(self) -> bool:
        return all(e.kind == "operator" for e in self.edits)


@dataclass
class ErrataRecord:
    formula_id: str
    paper_location: str
    printed_fragment: str
    reconstruction: str
    status: str
    max_abs_deviation: float
    sweep_size: int
    edits: list = field(default_factory=list)
    candidates_tried: int = 0
    candidates_matching: int = 0
    accepted_options: dict | None = None

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class ErrataLedger:
    records: list

    def __post_init__(self):
        ids = [r.formula_id for r in self.records]
        missing = [f for f in REQUIRED_IDS if f not in ids]
        dupes = {f for f in ids if ids.count(f) > 1}
        if missing or dupes:
            raise LedgerStateError(f"ledger incomplete: missing={missing}, duplicated={sorted(dupes)}")

    def __getitem__(self, formula_id: str) -> ErrataRecord:
        for r in self.records:
            if r.formula_id == formula_id:
                return r
        raise KeyError(formula_id)

    def __iter__(self):
        return iter(self.records)

    def unresolved(self) -> list[str]:
        return [r.formula_id for r in self.records if r.status == "unresolved"]

    def as_list(self) -> list[dict]:
        return [r.as_dict() for r in self.records]

    def to_json(self, **kw) -> str:
        return json.dumps(self.as_list(), **kw)


# ---------------------------------------------------------------- references

class _References:
    """Per-point trusted quantities, computed on first use."""

    def __init__(self, p: WheelParams):
        self.p = p
        self._cache = {}

    def _get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def green(self):
        return self._get("green", lambda: pipeline.assemble_group_inverse(self.p))

    @property
    def resistances(self):
        return self._get("R", lambda: metrics.resistance_matrix(self.green))

    @property
    def cycle_green(self):
        return self._get("G", lambda: cycle_green_matrix(self.p.n, self.p.c))

    def _dense_chain(self):
        p = self.p
        m, n = p.m, p.n
        sp = spoke_vertices(p)
        G = self.cycle_green
        GR = (G - (n * n - 1) / (12.0 * p.c * n))[np.ix_(sp, sp)]
        P = p.a / m * (m * np.eye(m) - np.ones((m, m)))
        GRinv = solve_dense(GR, np.eye(m))
        MR = solve_dense(GRinv + P, np.eye(m))
        F = np.zeros((n, n))
        F[np.ix_(sp, sp)] = P - P @ MR @ P
        H = G @ F
        K = H @ G
        return {"GR": GR, "MR": MR, "F": F, "H": H, "K": K, "M": G - K,
                "Gs": G @ pipeline.spoke_vector(p)}

    @property
    def dense(self):
        return self._get("dense", self._dense_chain)


# ------------------------------------------------------------ formula checks

def _max_dev(pairs, limit):
    worst = 0.0
    for got, want in pairs:
        dev = abs(got - want)
        if not np.isfinite(dev):
            return float("inf")
        if dev > worst:
            worst = dev
            if worst > limit:
                return worst
    return worst


def _block_indices(p):
    for k in range(1, p.m + 1):
        for i in range(1, p.d + 1):
            for h in range(p.d):
                yield k, i, h


def _check_nk(p, ref, opt, limit):
    A = ref.green
    d = p.d
    return _max_dev(
        ((closed_form.theorem_block_entry(p, k, i, h, opt["ops"], opt["index"]), A[i - 1, (k - 1) * d + h])
         for k, i, h in _block_indices(p)),
        limit,
    )


def _check_border(p, ref, opt, limit):
    A = ref.green
    return _max_dev(
        ((closed_form.theorem_border_entry(p, i, opt["reading"]), A[(k - 1) * p.d + i - 1, p.n])
         for k in range(1, p.m + 1) for i in range(1, p.d + 1)),
        limit,
    )


def _check_corner(p, ref, opt, limit):
    return _max_dev([(closed_form.theorem_corner(p), ref.green[p.n, p.n])], limit)


def _check_rij(p, ref, opt, limit):
    R = ref.resistances
    n = p.n
    return _max_dev(
        ((metrics.resistance_closed(p, i, j, pair=opt), R[i, j]) for i in range(n) for j in range(i + 1, n)),
        limit,
    )


def _check_rhub(p, ref, opt, limit):
    R = ref.resistances
    return _max_dev(((metrics.resistance_closed(p, i, p.n, hub=opt), R[i, p.n]) for i in range(p.n)), limit)


def _check_kirchhoff(p, ref, opt, limit):
    return _max_dev([(metrics.kirchhoff_closed(p, opt["final"]), metrics.kirchhoff_green(ref.green))], limit)


def _check_wheel(p, ref, opt, limit):
    return _max_dev([(metrics.kirchhoff_wheel(p, opt["op"]), metrics.kirchhoff_green(ref.green))], limit)


def _check_grinv(p, ref, opt, limit):
    row = np.array(pipeline.reduced_green_inverse_row(p.m, opt["reading"]))
    inv = pipeline.Circulant.from_row(12.0 * p.c / (p.n * (p.m**2 - 1)) * row).dense()
    prod = ref.dense["GR"] @ inv
    return _max_dev(zip(prod.ravel(), np.eye(p.m).ravel()), limit)


def _check_mr(p, ref, opt, limit):
    return _max_dev(zip(pipeline.mr_matrix(p).row, ref.dense["MR"][0]), limit)


def _check_f(p, ref, opt, limit):
    sp = spoke_vertices(p)
    return _max_dev(zip(pipeline.f_coeffs(p), ref.dense["F"][0, sp]), limit)


def _check_h(p, ref, opt, limit):
    H = ref.dense["H"]
    return _max_dev(
        ((pipeline.h_entry(p, k, i, opt["op"]), H[i - 1, (k - 1) * p.d])
         for k in range(1, p.m + 1) for i in range(1, p.d + 1)),
        limit,
    )


def _check_k(p, ref, opt, limit):
    K = ref.dense["K"]
    return _max_dev(
        ((pipeline.k_block_entry(p, k, i, h), K[i - 1, (k - 1) * p.d + h]) for k, i, h in _block_indices(p)),
        limit,
    )


def _check_m(p, ref, opt, limit):
    M = ref.dense["M"]
    return _max_dev(
        ((pipeline.m_block_entry(p, k, i, h, opt["op"], opt["index"]), M[i - 1, (k - 1) * p.d + h])
         for k, i, h in _block_indices(p)),
        limit,
    )


def _check_gs(p, ref, opt, limit):
    return _max_dev(zip(pipeline.gs_vector(p), ref.dense["Gs"][: p.d]), limit)


# -------------------------------------------------------- candidate families

def _op_edit(slot, op):
    return () if op == "*" else (Edit("operator", f"insert '{op}' at {slot}"),)


INDEX_EDIT = Edit("index", "|i-1-k(d-1)-h| -> |i-1-(k-1)d-h|")


def _nk_candidates():
    slots = ("n(h-i+1)(V_{k-1}-V_{m-k}) | (an/c(i-1)(h-d)-nd)(U_{k-2}+U_{m-k})",
             "-nd | (2kd-3d+2h-n)(i-1)",
             "(1/(n+1))(...) | (a(d^2-1)+12cd)/(6a(n+1)^2)")
    for index in ("printed", "shifted"):
        for ops in itertools.product(OPS, repeat=3):
            edits = sum((_op_edit(s, o) for s, o in zip(slots, ops)), ())
            if index == "shifted":
                edits += (INDEX_EDIT,)
            yield Candidate(f"ops={''.join(ops)} index={index}", edits, {"ops": ops, "index": index})


def _border_candidates():
    yield Candidate("printed", (), {"reading": "printed"})
    yield Candidate("corrected", (Edit("term", "(a(d^2-1)/(12cd) + n + 2) n -> (1 + a(d^2-1)/(12cd)) j + (n+1) n"),),
                    {"reading": "corrected"})


def _rij_candidates():
    slot = "(V_{k'-1}-V_{m-k'}) | (a/c^2 h1(h2-d) - d/c)(U_{k'-2}+U_{m-k'})"
    for op, index, dcoef, trailing in itertools.product(OPS, ("printed", "shifted"),
                                                        ("printed", "corrected"), (True, False)):
        edits = _op_edit(slot, op)
        if index == "shifted":
            edits += (Edit("index", "|h1-h2-k'(d-1)| -> |h1-h2-(k'-1)d|"),)
        if dcoef == "corrected":
            edits += (Edit("term", "(3h1-2h2)d -> 2(h1-h2)d"),)
        if not trailing:
            edits += (Edit("term", "drop -(n-1)^2(d^2-1)/(6c(n+1)^2)"),)
        yield Candidate(f"op={op} index={index} dcoef={dcoef} trailing={trailing}", edits,
                        {"op": op, "index": index, "dcoef": dcoef, "trailing": trailing})


def _rhub_candidates():
    s1 = "(d/(an))(V_{m-1}-1) | (1/(2cn))(...)U_{m-1}"
    s2 = "(12cd(n^2+1)+an^2(d^2-1))/(12acn(n+1)^2) | (6h1^2-6h1d-1)/(6c(n+1)^2)(...)"
    for op1 in OPS:
        for op2 in OPS:
            yield Candidate(f"op1={op1} op2={op2} tail=printed", _op_edit(s1, op1) + _op_edit(s2, op2),
                            {"op1": op1, "op2": op2, "tail": "printed"})
        yield Candidate(f"op1={op1} tail=hub",
                        _op_edit(s1, op1) + (Edit("term", "terms after the bracket -> 1/(ma)"),),
                        {"op1": op1, "op2": "+", "tail": "hub"})


def _kirchhoff_candidates():
    yield Candidate("final=printed", (), {"final": "printed"})
    yield Candidate("final=corrected", (Edit("term", "(d-1)^2 n/(12c) -> (d^2-1) n/(12c)"),), {"final": "corrected"})


def _wheel_candidates():
    for op in OPS:
        yield Candidate(f"op={op}", _op_edit("[...] | 1/a", op), {"op": op})


def _grinv_candidates():
    yield Candidate("printed", (), {"reading": "printed"})
    yield Candidate("offset", (Edit("term", "m=2: single off-diagonal slot holds -(2b1-1), "
                                            "the superposition of both -b1 neighbours and the row-sum -1 pattern"),),
                    {"reading": "offset"})


def _h_candidates():
    for op in OPS:
        yield Candidate(f"op={op}", _op_edit("(i-1)(V_{k-1}-V_{m-k}) | (d/c)[a(i-1)+c](U_{k-2}+U_{m-k})", op),
                        {"op": op})


def _m_candidates():
    for index in ("printed", "shifted"):
        for op in OPS:
            edits = _op_edit("n(h-i+1)(V_{k-1}-V_{m-k}) | (an/c(i-1)(h-d)-nd)(U_{k-2}+U_{m-k})", op)
            if index == "shifted":
                edits += (INDEX_EDIT,)
            yield Candidate(f"op={op} index={index}", edits, {"op": op, "index": index})


def _as_printed():
    yield Candidate("printed", (), {})


@dataclass(frozen=True)
class FormulaSpec:
    formula_id: str
    paper_location: str
    printed_fragment: str
    candidates: Callable
    check: Callable
    applies: Callable = lambda p: True


FORMULAS = (
    FormulaSpec("thm21_Nk", "main theorem, top-left blocks N_k",
                r"\bigg[ n(h-i+1)(V_{k-1}(q)-V_{m-k}(q)) \Big(\frac{an}{c}(i-1)(h-d)-nd\Big)(U_{k-2}(q)+U_{m-k}(q)) ..."
                r" +dh+nh-nd (2kd-3d+2h-n)(i-1) ... \frac{1}{n+1}(\dots) \frac{a(d^2-1)+12cd}{6a(n+1)^2}",
                _nk_candidates, _check_nk),
    FormulaSpec("thm21_border", "main theorem, hub column L'_12",
                r"-\frac{d}{a(n+1)^2}\left(\frac{a}{12cd}(d^2-1)+n+2\right){\sf n}\otimes{\sf j}_m",
                _border_candidates, _check_border),
    FormulaSpec("thm21_corner", "main theorem, hub diagonal L'_22",
                r"\frac{12cdn+an(d^2-1)}{12ac(n+1)^2}", _as_printed, _check_corner),
    FormulaSpec("prop31_Rij", "resistance proposition, case a (two cycle vertices)",
                r"\frac{1}{c}(h_2-h_1)(V_{k'-1}(q)-V_{m-k'}(q)) \Big(\frac{a}{c^2}h_1(h_2-d)-\frac{d}{c}\Big)"
                r"(U_{k'-2}(q)+U_{m-k'}(q)) ... +(3h_1-2h_2)d ... -\frac{(n-1)^2(d^2-1)}{6c(n+1)^2}",
                _rij_candidates, _check_rij),
    FormulaSpec("prop31_Rhub", "resistance proposition, case b (cycle vertex to hub)",
                r"\frac{d}{an}(V_{m-1}(q)-1) \frac{1}{2cn}(\dots)U_{m-1}(q) ... "
                r"+\frac{12cd(n^2+1)+an^2(d^2-1)}{12acn(n+1)^2} \frac{(6h_1^2-6h_1d-1)}{6c(n+1)^2}(\dots)",
                _rhub_candidates, _check_rhub),
    FormulaSpec("prop31_kirchhoff", "resistance proposition, Kirchhoff index",
                r"\dots+\frac{d}{a}+\frac{dn(n+1)}{6c}-\frac{(d-1)^2n}{12c}", _kirchhoff_candidates, _check_kirchhoff),
    FormulaSpec("cor32_kirchhoff", "complete-wheel corollary, Kirchhoff index",
                r"\bigg[\dots\bigg] \frac{1}{a}+\frac{n(n+1)}{6c}", _wheel_candidates, _check_wheel,
                applies=lambda p: p.d == 1),
    FormulaSpec("grinv_circulant", "reduced Green inverse lemma",
                r"\mbox{circ}(b_0,-b_1,-1,\ldots,-1,-b_1)", _grinv_candidates, _check_grinv),
    FormulaSpec("mr_entries", "reduced inverse lemma, entries m_j",
                r"m_j=\frac{[U_{j-2}(q)+U_{m-j}(q)]d}{2c[T_m(q)-1]}-\frac{12c+ad(m^2-1)}{12acm}",
                _as_printed, _check_mr),
    FormulaSpec("f_entries", "spoke matrix lemma, entries f_i",
                r"f_i=a\delta_{i1}-\frac{a^2d}{2c}\frac{U_{i-2}(q)+U_{m-i}(q)}{T_m(q)-1}", _as_printed, _check_f),
    FormulaSpec("h_columns", "H = GF lemma, blocks k >= 2",
                r"\Big[(i-1)(V_{k-1}(q)-V_{m-k}(q)) \frac{d}{c}[a(i-1)+c](U_{k-2}(q)+U_{m-k}(q))\Big]",
                _h_candidates, _check_h),
    FormulaSpec("k_blocks", "K = GFG lemma, blocks K_k",
                r"-\frac{1}{2cn}\frac{1}{T_m(q)-1}\bigg[\dots\bigg]+dh+nh-nd-\frac{n^2}{6}+\frac{d^2}{6}+\dots",
                _as_printed, _check_k),
    FormulaSpec("m_blocks", "Schur complement proposition, blocks M_k",
                r"\left|i-1-k(d-1)-h\right| \dots (V_{k-1}(q)-V_{m-k}(q)) \Big(\frac{an}{c}(i-1)(h-d)-nd\Big)",
                _m_candidates, _check_m),
    FormulaSpec("gs_vector", "Gs lemma, vector n",
                r"({\sf n})_i=-\frac{a}{12cn}\Big(n(6+d)+5m+6mi(i-d-2)\Big)", _as_printed, _check_gs),
)


def _describe(candidate: Candidate) -> str:
    if not candidate.edits:
        return "as printed"
    return "; ".join(e.text for e in candidate.edits)


class Reconciliation:
    """Batch reconciliation of every registered formula over a sweep.

    ``operators_only`` restricts candidates to pure operator insertions.
    """

    def __init__(self, sweep=None, operators_only: bool = False, formulas=FORMULAS):
        self.sweep = sorted(default_sweep() if sweep is None else sweep,
                            key=lambda p: (p.m, p.d, p.a, p.c))
        self.operators_only = operators_only
        self.formulas = formulas
        self._refs = {}
        self._ledger = None

    def references(self, p: WheelParams) -> _References:
        key = (p.m, p.d, p.a, p.c)
        if key not in self._refs:
            self._refs[key] = _References(p)
        return self._refs[key]

    def _evaluate(self, spec, candidate, points, limit):
        worst = 0.0
        for p in points:
            worst = max(worst, spec.check(p, self.references(p), candidate.options, limit))
            if worst > limit:
                break
        return worst

    def _reconcile(self, spec: FormulaSpec) -> ErrataRecord:
        points = [p for p in self.sweep if spec.applies(p)]
        cands = list(spec.candidates())
        if self.operators_only:
            cands = [c for c in cands if c.operators_only]
        order = sorted(range(len(cands)), key=lambda k: (len(cands[k].edits), k))
        accepted, accepted_dev, matching = None, None, 0
        best_dev = float("inf")
        for k in order:
            cand = cands[k]
            limit = PRINTED_TOL if not cand.edits else ACCEPT_TOL
            dev = self._evaluate(spec, cand, points, limit)
            best_dev = min(best_dev, dev)
            if dev <= limit:
                matching += 1
                if accepted is None:
                    accepted, accepted_dev = cand, dev
        if accepted is None:
            status, recon, dev, edits, opts = "unresolved", "no candidate reading matched", best_dev, [], None
        else:
            status = "verified-as-printed" if not accepted.edits else "reconstructed"
            recon, dev, opts = _describe(accepted), accepted_dev, dict(accepted.options)
            edits = [asdict(e) for e in accepted.edits]
        if opts is not None:
            opts = {k: list(v) if isinstance(v, tuple) else v for k, v in opts.items()}
        return ErrataRecord(
            formula_id=spec.formula_id,
            paper_location=spec.paper_location,
            printed_fragment=spec.printed_fragment,
            reconstruction=recon,
            status=status,
            max_abs_deviation=float(dev),
            sweep_size=len(points),
            edits=edits,
            candidates_tried=len(cands),
            candidates_matching=matching,
            accepted_options=opts,
        )

    def run(self) -> ErrataLedger:
        self._ledger = ErrataLedger([self._reconcile(spec) for spec in self.formulas])
        return self._ledger

    @property
    def has_run(self) -> bool:
        return self._ledger is not None

    def report(self) -> ErrataLedger:
        if self._ledger is None:
            raise LedgerStateError("reconciliation sweep has not run; call run() first")
        return self._ledger

    def require_resolved(self, formula_id: str) -> ErrataRecord:
        record = self.report()[formula_id]
        if record.status == "unresolved":
            raise UnresolvedReconstructionError(f"{formula_id}: no reading matched within {ACCEPT_TOL:g}")
        return record


def errata_report(reconciliation: Reconciliation) -> ErrataLedger:
    """Finalized ledger of a reconciliation; raises if the sweep has not run."""
    return reconciliation.report()
