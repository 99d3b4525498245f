"""Realization witnesses, the census of splitting modules, and audits.

The census walks a fixed family of finite kernels A, every class of
H^2(G, A), builds the splitting module of each extension and tabulates its
Tate cohomology.  Audits then scan the table for the divisibility and
non-vanishing laws known for these modules.
"""

from __future__ import annotations

import csv
import io
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import prod

from sympy import divisors, factorint
from sympy.utilities.iterables import partitions

from .cohomology import (DEFAULT_COCHAIN_CAP, CapExceeded, Cocycle2, h2, tate)
from .exactla import AbelianInvariants, IntMatrix
from .extensions import GroupExtensionData, splitting_module
from .gmodules import (GModule, ModuleMap, augmentation_ideal, direct_sum, group_ring_mod,
                       map_cokernel, map_kernel, trivial_module)
from .groups import FiniteGroup, is_p_group, subgroups

__all__ = [
    "TheoremError",
    "h0_realization_witness",
    "h2_realization_witness",
    "h_minus2_realization_witness",
    "find_h_minus2_vanisher",
    "NotFoundWithinBound",
    "KernelSpec",
    "census_kernels",
    "abelian_profiles",
    "small_targets",
    "census_run",
    "CensusReport",
    "InstanceRecord",
    "AuditVerdict",
    "order_divisibility_audit",
    "nonvanishing_audit",
    "herbrand_audit",
    "exponent_audit",
    "gw_realization_audit",
    "SCHEMA",
]

SCHEMA = "tatecoh.census/1"
DEFAULT_CENSUS_WINDOW = (-2, 2)


class TheoremError(ValueError):
    """A witness construction was called outside its hypotheses."""


def _require_killed(G: FiniteGroup, X: AbelianInvariants) -> None:
    if not X.is_finite or not X.killed_by(G.order):
        raise TheoremError(f"{X} is not killed by #G = {G.order}")


# --------------------------------------------------------------------------
# witnesses


def h0_realization_witness(G: FiniteGroup, X: AbelianInvariants, **kw) -> tuple[GModule, AbelianInvariants]:
    """M = X (trivial action) ⊕ I_G; then Ĥ^0(G, M) ≅ X."""
    _require_killed(G, X)
    M = direct_sum(trivial_module(G, X), augmentation_ideal(G))
    return M, tate(G, M, 0, **kw)


def _free_cover(G: FiniteGroup, Y: GModule) -> ModuleMap:
    """(Z/n)[G]^r -> Y sending the j-th free generator to the j-th canonical generator of Y."""
    n = G.order
    r = Y.canonical_rank
    F = group_ring_mod(G, n, r)
    cols = []
    for j in range(r):
        y = Y.lift([int(i == j) for i in range(r)])
        for h in range(n):
            cols.append(Y.act(h, y))
    mat = IntMatrix.from_rows([[c[i] for c in cols] for i in range(Y.ambient_rank)], n * r) \
        if Y.ambient_rank else IntMatrix.zeros(0, n * r)
    return ModuleMap(F, Y, mat)


def _syzygy(G: FiniteGroup, Y: GModule) -> GModule:
    K, _ = map_kernel(_free_cover(G, Y))
    return K


def h2_realization_witness(G: FiniteGroup, X: AbelianInvariants, **kw) -> tuple[GModule, AbelianInvariants]:
    """Two syzygies of X over (Z/n)[G], plus I_G; Ĥ^2 of the result is X.

    With 0 -> Y -> (Z/n)[G]^r -> X -> 0 and 0 -> Z -> (Z/n)[G]^s -> Y -> 0,
    the free modules are cohomologically trivial, so
    Ĥ^2(Z) ≅ Ĥ^1(Y) ≅ Ĥ^0(X) ≅ X, and I_G adds nothing in degree 2.
    """
    _require_killed(G, X)
    Xm = trivial_module(G, X)
    Y = _syzygy(G, Xm)
    Z = _syzygy(G, Y)
    M = direct_sum(Z, augmentation_ideal(G))
    return M, tate(G, M, 2, **kw)


def _norm_embedding(G: FiniteGroup, X: AbelianInvariants) -> ModuleMap:
    """X ↪ (Z/n)[G]^r, i-th generator of order d ↦ (n/d)·(norm element of copy i)."""
    n = G.order
    Xm = trivial_module(G, X)
    r = Xm.ambient_rank
    F = group_ring_mod(G, n, r)
    rows = [[0] * r for _ in range(n * r)]
    for i, d in enumerate(X.factors):
        for h in range(n):
            rows[i * n + h][i] = n // d
    return ModuleMap(Xm, F, IntMatrix.from_rows(rows, r) if r else IntMatrix.zeros(n * r, 0))


def h_minus2_realization_witness(G: FiniteGroup, M0: GModule, X: AbelianInvariants,
                                 **kw) -> tuple[GModule, AbelianInvariants]:
    """M0 ⊕ Y with Y = (Z/n)[G]^r / X; needs Ĥ^{-2}(G, M0) = 0.

    The embedding lands in the fixed points, and the middle term is
    cohomologically trivial, so Ĥ^{-2}(Y) ≅ Ĥ^{-1}(X) = X[n] = X.
    """
    _require_killed(G, X)
    base = tate(G, M0, -2, **kw)
    if not base.is_trivial:
        raise TheoremError(f"Ĥ^-2(G, M0) = {base} is not trivial")
    Y, _ = map_cokernel(_norm_embedding(G, X))
    M = direct_sum(M0, Y)
    return M, tate(G, M, -2, **kw)


def small_targets(n: int, max_factors: int = 2) -> list[AbelianInvariants]:
    """Every abelian group killed by n with at most ``max_factors`` invariant factors."""
    out = {AbelianInvariants()}
    chains = [()]
    for _ in range(max_factors):
        chains = [c + (d,) for c in chains for d in divisors(n) if d > 1 and (not c or d % c[-1] == 0)]
        out.update(AbelianInvariants(c) for c in chains)
    return sorted(out, key=lambda X: (X.order, X.factors))


# --------------------------------------------------------------------------
# kernel family


def abelian_profiles(order: int) -> list[AbelianInvariants]:
    """All abelian groups of the given order, sorted by invariant factors."""
    per_prime = []
    for p, k in sorted(factorint(order).items()):
        opts = []
        for part in partitions(k):
            opts.append([p ** e for e, mult in part.items() for _ in range(mult)])
        per_prime.append(opts)
    out = []
    for combo in itertools.product(*per_prime):
        out.append(AbelianInvariants.from_diagonal([d for ds in combo for d in ds]))
    return sorted(out, key=lambda X: X.factors)


@dataclass(frozen=True)
class KernelSpec:
    """One kernel of the census: trivial, sign (through an index-2 subgroup) or permutation."""

    kind: str                      # "trivial" | "sign" | "perm"
    invariants: tuple[int, ...]    # abelian invariants of the kernel
    modulus: int = 0               # coefficient ring Z/m for sign / perm kernels
    subgroup: tuple[int, ...] = () # kernel of the sign character, or the stabilizer H

    @property
    def label(self) -> str:
        inv = "[" + ",".join(map(str, self.invariants)) + "]"
        if self.kind == "trivial":
            return f"trivial{inv}"
        sub = "{" + ",".join(map(str, self.subgroup)) + "}"
        if self.kind == "sign":
            return f"sign{inv}@{sub}"
        return f"perm(Z/{self.modulus})[G/{sub}]"

    @property
    def order(self) -> int:
        return prod(self.invariants)

    def sort_key(self):
        return (self.invariants, ("trivial", "sign", "perm").index(self.kind), self.subgroup)

    def build(self, G: FiniteGroup) -> GModule:
        if self.kind == "trivial":
            return trivial_module(G, AbelianInvariants(self.invariants))
        m, H = self.modulus, set(self.subgroup)
        if self.kind == "sign":
            acts = [[[1 if g in H else -1]] for g in range(G.order)]
            return GModule(G, 1, [[m]], acts, name=self.label)
        cosets = []
        seen = set()
        for g in range(G.order):
            if g not in seen:
                c = frozenset(G.mul[g][h] for h in H)
                seen |= c
                cosets.append(c)
        where = {x: i for i, c in enumerate(cosets) for x in c}
        k = len(cosets)
        acts = []
        for g in range(G.order):
            rows = [[0] * k for _ in range(k)]
            for i, c in enumerate(cosets):
                rows[where[G.mul[g][min(c)]]][i] = 1
            acts.append(rows)
        return GModule(G, k, [[m * (i == j) for j in range(k)] for i in range(k)], acts,
                       name=self.label)


def census_kernels(G: FiniteGroup, bound: int, p_power_only: bool = False) -> list[KernelSpec]:
    """Trivial kernels of every order ≤ bound, sign kernels Z/m (m ≥ 3), permutation kernels."""
    specs = set()
    p = is_p_group(G)
    for order in range(1, bound + 1):
        if p_power_only and p and order > 1 and _prime_power_of(order) != p:
            continue
        for X in abelian_profiles(order):
            specs.add(KernelSpec("trivial", X.factors))
    subs = subgroups(G) if G.order > 1 else []
    index2 = [tuple(sorted(H)) for H in subs if 2 * len(H) == G.order]
    for m in range(3, bound + 1):
        if p_power_only and p and _prime_power_of(m) != p:
            continue
        for H in index2:
            specs.add(KernelSpec("sign", AbelianInvariants.from_diagonal([m]).factors, m, H))
    for H in subs:
        idx = G.order // len(H)
        if idx == 1:
            continue
        for m in range(2, bound + 1):
            if m ** idx > bound:
                break
            if p_power_only and p and _prime_power_of(m) != p:
                continue
            inv = AbelianInvariants.from_diagonal([m] * idx).factors
            specs.add(KernelSpec("perm", inv, m, tuple(sorted(H))))
    return sorted(specs, key=KernelSpec.sort_key)


def _prime_power_of(m: int) -> int | None:
    if m == 1:
        return None
    f = factorint(m)
    return next(iter(f)) if len(f) == 1 else 0


# --------------------------------------------------------------------------
# vanisher search


@dataclass(frozen=True)
class NotFoundWithinBound:
    """The search exhausted its bound without finding a vanishing Ĥ^{-2}."""

    bound: int
    kernels_searched: int
    classes_searched: int

    def __bool__(self) -> bool:
        return False


def find_h_minus2_vanisher(G: FiniteGroup, bound: int, **kw) -> GroupExtensionData | NotFoundWithinBound:
    """First extension (kernel order ≤ bound) whose splitting module has Ĥ^{-2} = 0.

    Only p-power kernels are searched: a prime-to-p part of the kernel splits
    off the splitting module and has vanishing cohomology, so it can never
    change the answer.
    """
    p = is_p_group(G)
    if G.order > 1 and p is None:
        raise TheoremError("the vanisher search is defined for p-groups")
    zero = trivial_module(G, AbelianInvariants())
    if G.order == 1 or (G.is_cyclic() and tate(G, augmentation_ideal(G), -2, **kw).is_trivial):
        return GroupExtensionData.split(G, zero)
    kernels = classes = 0
    for spec in census_kernels(G, bound, p_power_only=True):
        A = spec.build(G)
        kernels += 1
        desc = h2(G, A)
        for f in desc.representatives:
            classes += 1
            eps = GroupExtensionData(G, A, f)
            if tate(G, splitting_module(eps), -2, **kw).is_trivial:
                return eps
    return NotFoundWithinBound(bound, kernels, classes)


# --------------------------------------------------------------------------
# census


@dataclass
class InstanceRecord:
    kernel: str
    kernel_invariants: list[int]
    class_index: int
    class_count: int
    profile: dict[int, list[int]]
    status: str = "ok"

    @property
    def witness_id(self) -> str:
        return f"{self.kernel}#{self.class_index}"

    def to_json(self) -> dict:
        return {
            "kernel": self.kernel,
            "kernel_invariants": self.kernel_invariants,
            "class_index": self.class_index,
            "class_count": self.class_count,
            "profile": {str(i): v for i, v in sorted(self.profile.items())},
            "status": self.status,
        }


@dataclass
class AuditVerdict:
    name: str
    passed: bool
    applicable: bool = True
    violations: list[str] = field(default_factory=list)
    note: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "applicable": self.applicable,
                "violations": self.violations, "note": self.note}


@dataclass
class CensusReport:
    group: str
    group_order: int
    group_is_abelian: bool
    group_is_cyclic: bool
    window: tuple[int, int]
    degrees: list[int]
    kernel_order_bound: int
    instances: list[InstanceRecord]
    complete: bool
    notes: list[str] = field(default_factory=list)
    audits: dict[str, AuditVerdict] = field(default_factory=dict)

    def observed(self) -> dict[int, list[AbelianInvariants]]:
        """Per degree: sorted, deduplicated Tate groups seen in the census."""
        out = {}
        for i in self.degrees:
            seen = {AbelianInvariants(tuple(r.profile[i])) for r in self.instances
                    if r.status == "ok"}
            out[i] = sorted(seen, key=lambda X: (X.order, X.factors))
        return out

    def first_witness(self, i: int, X: AbelianInvariants) -> InstanceRecord | None:
        for r in self.instances:
            if r.status == "ok" and tuple(r.profile[i]) == X.factors:
                return r
        return None

    def to_json(self) -> dict:
        observed = self.observed()
        return {
            "schema": SCHEMA,
            "group": self.group,
            "group_order": self.group_order,
            "window": list(self.window),
            "degrees": self.degrees,
            "kernel_order_bound": self.kernel_order_bound,
            "complete": self.complete,
            "notes": self.notes,
            "observed": {
                str(i): [{"invariants": list(X.factors),
                          "label_for_p_groups": f"H^{i + 2}",
                          "witness": self.first_witness(i, X).witness_id}
                         for X in observed[i]]
                for i in self.degrees
            },
            "audits": {k: v.to_json() for k, v in sorted(self.audits.items())},
            "instances": [r.to_json() for r in self.instances],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["degree", "invariant_factors", "multiplicity", "witness_id"])
        for i in self.degrees:
            counts: dict[tuple[int, ...], int] = {}
            for r in self.instances:
                if r.status == "ok":
                    key = tuple(r.profile[i])
                    counts[key] = counts.get(key, 0) + 1
            for X in self.observed()[i]:
                w.writerow([i, str(X), counts[X.factors], self.first_witness(i, X).witness_id])
        return buf.getvalue()


def _evaluate(task):
    G, A, table, degrees, cochain_cap = task
    f = Cocycle2(G, A, table, check=False)
    M = splitting_module(GroupExtensionData(G, A, f))
    try:
        return {i: list(tate(G, M, i, cochain_cap=cochain_cap).factors) for i in degrees}
    except CapExceeded:
        return None


def census_run(G: FiniteGroup, kernel_order_bound: int,
               window: tuple[int, int] = DEFAULT_CENSUS_WINDOW, *, jobs: int = 1,
               cochain_cap: int = DEFAULT_COCHAIN_CAP, audits: bool = True) -> CensusReport:
    """Tabulate Ĥ^i of splitting modules over the kernel family.

    Degrees -1 and 0 are always included because the audits read them.
    Output order is canonical, independent of ``jobs``.
    """
    lo, hi = window
    if lo > hi:
        raise ValueError(f"empty degree window {lo}..{hi}")
    if G.order > 1 and is_p_group(G) is None:
        raise TheoremError("the census is defined for p-groups")
    degrees = sorted(set(range(lo, hi + 1)) | {-1, 0})
    tasks, meta = [], []
    complete = True
    notes = []
    for spec in census_kernels(G, kernel_order_bound):
        A = spec.build(G)
        try:
            desc = h2(G, A)
        except CapExceeded as exc:
            complete = False
            notes.append(f"{spec.label}: {exc}")
            continue
        if not desc.complete:
            complete = False
            notes.append(f"{spec.label}: only {len(desc.representatives)} of "
                         f"{desc.class_group.order} classes enumerated")
        for j, f in enumerate(desc.representatives):
            tasks.append((G, A, f.table, degrees, cochain_cap))
            meta.append((spec, j, len(desc.representatives)))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_evaluate, tasks, chunksize=1))
    else:
        results = [_evaluate(t) for t in tasks]
    records = []
    for (spec, j, count), prof in zip(meta, results):
        if prof is None:
            complete = False
            records.append(InstanceRecord(spec.label, list(spec.invariants), j, count,
                                          {i: [] for i in degrees}, "cap"))
        else:
            records.append(InstanceRecord(spec.label, list(spec.invariants), j, count, prof))
    report = CensusReport(G.name or f"order {G.order}", G.order, G.is_abelian(), G.is_cyclic(),
                          (lo, hi), degrees, kernel_order_bound, records, complete, notes)
    if audits:
        report.audits["exponent"] = exponent_audit(report)
        report.audits["herbrand"] = herbrand_audit(report)
        report.audits["nonvanishing"] = nonvanishing_audit(report)
        if report.group_is_abelian:
            report.audits["divisibility"] = order_divisibility_audit(report)
    return report


# --------------------------------------------------------------------------
# audits


def _ok(report: CensusReport):
    return [r for r in report.instances if r.status == "ok"]


def exponent_audit(report: CensusReport) -> AuditVerdict:
    """Every tabulated group is killed by #G."""
    n = report.group_order
    bad = [f"{r.witness_id} degree {i}: {AbelianInvariants(tuple(v))}"
           for r in _ok(report) for i, v in sorted(r.profile.items()) if any(n % d for d in v)]
    return AuditVerdict("exponent", not bad, True, bad)


def order_divisibility_audit(report: CensusReport) -> AuditVerdict:
    """#G divides #Ĥ^{-1} for abelian G."""
    if not report.group_is_abelian:
        raise TheoremError("the divisibility audit needs an abelian group")
    n = report.group_order
    bad = [f"{r.witness_id}: #Ĥ^-1 = {prod(r.profile[-1])}"
           for r in _ok(report) if prod(r.profile[-1]) % n]
    return AuditVerdict("divisibility", not bad, True, bad)


def nonvanishing_audit(report: CensusReport) -> AuditVerdict:
    """For cyclic G no splitting module has trivial Ĥ^{-1}."""
    if not report.group_is_cyclic or report.group_order == 1:
        return AuditVerdict("nonvanishing", True, False, note="applies to nontrivial cyclic groups only")
    bad = [r.witness_id for r in _ok(report) if not r.profile[-1]]
    return AuditVerdict("nonvanishing", not bad, True, bad)


def herbrand_audit(report: CensusReport) -> AuditVerdict:
    """For cyclic G: #Ĥ^{-1} = #G · #Ĥ^0 (Herbrand quotient of I_G is 1/#G)."""
    if not report.group_is_cyclic:
        return AuditVerdict("herbrand", True, False, note="applies to cyclic groups only")
    n = report.group_order
    bad = [f"{r.witness_id}: #Ĥ^-1 = {prod(r.profile[-1])}, #Ĥ^0 = {prod(r.profile[0])}"
           for r in _ok(report) if prod(r.profile[-1]) != n * prod(r.profile[0])]
    return AuditVerdict("herbrand", not bad, True, bad)


@dataclass(frozen=True)
class RealizationResult:
    found: bool
    witness: str | None
    note: str

    def __bool__(self) -> bool:
        return self.found


def gw_realization_audit(G: FiniteGroup, X: AbelianInvariants, report: CensusReport) -> RealizationResult:
    """Look for X among the census' Ĥ^{-1} groups; absence only means 'beyond the bound'."""
    n = G.order
    if not X.is_finite or not X.killed_by(n) or X.order % n:
        raise TheoremError(f"{X} must be killed by {n} and have order divisible by {n}")
    r = report.first_witness(-1, X)
    if r is not None:
        return RealizationResult(True, r.witness_id, "found")
    return RealizationResult(False, None, f"beyond enumerated bound (kernel order ≤ "
                                          f"{report.kernel_order_bound})")
