"""The inductive intersection process on the gradient graph.

Starting from a degree slice of a characteristic cycle, intersect one
graph hypersurface w_j - df/dz_j at a time, splitting each result into
the residual part (components off the graph, carried forward) and the
distinguished part (components inside the graph).  The distinguished
parts push down to the base as the degree-j cycles, and iterated
coordinate slicing at a point extracts the point modules.  Setting f to
zero specializes the whole machine to the absolute polar package.
"""

from __future__ import annotations

from fractions import Fraction

from .abgroups import AbGroup, ZERO_GROUP
from .cycles import EnrichedCycle, empty_cycle
from .errors import (
    GenericityError,
    ImproperIntersectionError,
    InputError,
    InternalError,
)
from .gecc import (
    SheafSpec,
    StratumSpec,
    build_gecc,
    isolated_vanishing_stalk,
    nearby_gecc,
)
from .geom import (
    _child_seed,
    _is_linear_ideal,
    conormal_ideal,
    graph_ideal,
    graph_pushforward,
    intersect_hypersurface,
    local_multiplicity_at_point,
)
from .ideals import Ideal, eliminate, map_poly, split_components


class VogelDecomposition:
    """Result of the inductive process for one degree.

    residual[j] are the carried cycles (j = n+1 .. 0) and
    distinguished[j] the graph-trapped cycles (j = n .. 0); `dropped`
    lists input components contained in the graph, `disjoint` those that
    never meet it.
    """

    __slots__ = (
        "degree",
        "residual",
        "distinguished",
        "dropped",
        "disjoint",
        "seed",
        "warnings",
        "records",
    )

    def __init__(self, degree, residual, distinguished, dropped, disjoint, seed, warnings, records):
        self.degree = degree
        self.residual = residual
        self.distinguished = distinguished
        self.dropped = dropped
        self.disjoint = disjoint
        self.seed = seed
        self.warnings = warnings
        self.records = records

    def to_json(self):
        return {
            "degree": self.degree,
            "residual": {str(j): c.to_json() for j, c in sorted(self.residual.items())},
            "distinguished": {
                str(j): c.to_json() for j, c in sorted(self.distinguished.items())
            },
            "dropped": [I.generator_strings() for I in self.dropped],
            "disjoint_from_graph": [I.generator_strings() for I in self.disjoint],
            "seed": self.seed,
            "warnings": sorted(self.warnings),
            "properness_log": [
                dict(stage=j, **record.to_json()) for j, record in self.records
            ],
        }


def vogel_decompose(G_k, f, seed=0, degree=0):
    """Run the inductive graph-hypersurface process on one degree slice.

    Components contained in the graph are dropped with a warning;
    components disjoint from the graph are dropped silently (they carry
    no germ near it).  An improper step raises a genericity failure
    naming the stage and component.
    """
    ring = G_k.ring
    nbase = len(ring.base_vars)
    graph = graph_ideal(f, ring)
    f_full = map_poly(f, ring) if f.ring != ring else f

    warnings = set(G_k.warnings)
    dropped, disjoint, start = [], [], {}
    for P, coeff in G_k.items():
        if P.dimension() != nbase:
            raise InputError(
                "input component V(%s) is not purely %d-dimensional"
                % (", ".join(P.generator_strings()), nbase)
            )
        if all(P.contains(g) for g in graph.gens):
            dropped.append(P)
            warnings.add(
                "component inside the gradient graph dropped: V(%s)"
                % ", ".join(P.generator_strings())
            )
        elif P.plus(graph.gens).is_unit():
            disjoint.append(P)
        else:
            start[P] = coeff

    residual = {nbase: EnrichedCycle(ring, start, warnings)}
    distinguished = {}
    records = []
    acc_warnings = set(warnings)
    for j in range(nbase - 1, -1, -1):
        cur = residual[j + 1]
        if cur.is_zero():
            residual[j] = empty_cycle(ring)
            distinguished[j] = empty_cycle(ring)
            continue
        w = ring.var(ring.cotangent_vars[j])
        hyp = w - f_full.diff(ring.base_vars[j])
        try:
            result = intersect_hypersurface(cur, hyp, seed=_child_seed(seed, degree, j))
        except ImproperIntersectionError as exc:
            raise GenericityError(
                "improper intersection at stage %d on component V(%s)"
                % (j, ", ".join(exc.component.generator_strings())),
                stage=("vogel", j, exc.component),
            ) from exc
        for record in result.records:
            records.append((j, record))
        inside, outside = {}, {}
        for W, coeff in result.cycle.items():
            if all(W.contains(g) for g in graph.gens):
                inside[W] = coeff
            elif W.plus(graph.gens).is_unit():
                disjoint.append(W)
            else:
                outside[W] = coeff
        keep_warn = result.cycle.warnings
        acc_warnings |= keep_warn
        residual[j] = EnrichedCycle(ring, outside, keep_warn)
        distinguished[j] = EnrichedCycle(ring, inside, keep_warn)
        _check_dimensions(residual[j], j, "residual")
        _check_dimensions(distinguished[j], j, "distinguished")

    decomposition = VogelDecomposition(
        degree,
        residual,
        distinguished,
        dropped,
        disjoint,
        seed,
        frozenset(acc_warnings),
        records,
    )
    _check_set_identity(start, graph, distinguished)
    return decomposition


def _check_dimensions(cycle, j, label):
    for P in cycle.support():
        if P.dimension() != j:
            raise InternalError(
                "%s cycle at stage %d has a component of dimension %d"
                % (label, j, P.dimension())
            )


def _check_set_identity(start, graph, distinguished):
    """Radical-level identity: the union of the distinguished supports is
    the intersection of the processed support with the graph."""
    deltas = []
    for cyc in distinguished.values():
        deltas.extend(cyc.support())
    for P in start:
        J = P.plus(graph.gens)
        if J.is_unit():
            continue
        for comp in split_components(J):
            W = comp.ideal
            if not any(W.contains_ideal(D) for D in deltas):
                raise InternalError(
                    "graph component V(%s) missing from the distinguished cycles"
                    % ", ".join(W.generator_strings())
                )
    for D in deltas:
        if not all(D.contains(g) for g in graph.gens):
            raise InternalError("distinguished component escapes the graph")


def levo_cycles(decomposition, f):
    """Push each distinguished cycle down to the base ring."""
    out = {}
    for j, cyc in decomposition.distinguished.items():
        if cyc.is_zero():
            continue
        out[j] = graph_pushforward(cyc, f)
    return out


def levo_modules(cycles_by_j, point, seed=0):
    """Point modules: slice the degree-j cycle by the first j coordinate
    hyperplanes through the point, keeping only components through the
    point, then read the local multiplicity into the coefficient.
    """
    out = {}
    for j, lam in sorted(cycles_by_j.items()):
        if lam.is_zero():
            continue
        base = lam.ring
        pt = tuple(Fraction(c) for c in point)
        cur = _through_point(lam, pt)
        for i in range(j):
            if cur.is_zero():
                break
            hyp = base.var(base.vars[i]) - pt[i]
            try:
                cur = intersect_hypersurface(
                    cur, hyp, seed=_child_seed(seed, j, i)
                ).cycle
            except ImproperIntersectionError as exc:
                raise GenericityError(
                    "coordinate slice %d is improper on V(%s) for the "
                    "%d-dimensional cycle"
                    % (i, ", ".join(exc.component.generator_strings()), j),
                    stage=("slice", j, exc.component),
                ) from exc
            cur = _through_point(cur, pt)
        if cur.is_zero():
            continue
        total = None
        for W, coeff in cur.items():
            try:
                mult = local_multiplicity_at_point(W, pt)
            except InputError as exc:
                raise GenericityError(
                    "sliced cycle is not isolated at the point",
                    stage=("slice", j, W),
                ) from exc
            if mult == 0:
                continue
            contrib = coeff.tensor(AbGroup(mult))
            total = contrib if total is None else total.dsum(contrib)
        if total is not None and not total.is_zero():
            out[j] = total
    return out


def _through_point(cycle, point):
    comps = {
        P: c for P, c in cycle.components.items() if P.vanishes_at(point)
    }
    return EnrichedCycle(cycle.ring, comps, cycle.warnings)


# ---------------------------------------------------------------------------
# degree-indexed driver shared by the relative and absolute modes


class DegreePackage:
    __slots__ = ("decomposition", "cycles", "modules")

    def __init__(self, decomposition, cycles, modules):
        self.decomposition = decomposition
        self.cycles = cycles
        self.modules = modules


def decompose_all_degrees(G, f, point, seed=0):
    """VogelDecomposition, base cycles, and point modules per degree."""
    out = {}
    for k in G.degrees():
        decomposition = vogel_decompose(G.piece(k), f, seed=seed, degree=k)
        cycles = levo_cycles(decomposition, f)
        modules = levo_modules(cycles, point, seed=_child_seed(seed, k))
        out[k] = DegreePackage(decomposition, cycles, modules)
    return out


def polar_package(G, point, seed=0):
    """Absolute mode: the same process with f identically zero, so the
    graph is the zero section and the outputs are the characteristic
    polar cycles and modules."""
    base = G.ring.base_ring()
    return decompose_all_degrees(G, base.zero(), point, seed=seed)


# ---------------------------------------------------------------------------
# projectivized support sets


def polar_support_sets(G, m):
    """Base projection of the projectivized support cut by the vanishing
    of the last cotangent coordinates w_{m+1}..w_n.

    Components inside the zero section carry no projective direction and
    are discarded.  Returns (all components, the m-dimensional ones).
    """
    ring = G.ring
    cot = ring.cotangent_vars
    n = len(ring.base_vars) - 1
    if not 0 <= m <= n:
        raise InputError("index out of range")
    zero_section = [ring.var(w) for w in cot]
    cut = [ring.var(w) for w in cot[m + 1 :]]
    found = {}
    for P in G.components():
        J = P.plus(cut)
        if J.is_unit():
            continue
        for comp in split_components(J):
            if all(comp.ideal.contains(w) for w in zero_section):
                continue
            img = eliminate(comp.ideal, cot)
            found.setdefault(img.key(), img)
    raw = [found[k] for k in sorted(found)]
    # the set is a union: keep the maximal loci only
    ideals = [
        I
        for I in raw
        if not any(J.key() != I.key() and I.contains_ideal(J) for J in raw)
    ]
    m_dimensional = [I for I in ideals if I.dimension() == m]
    return ideals, m_dimensional


# ---------------------------------------------------------------------------
# independent iterated-slice oracle


def _strata_from_gecc(G):
    """Reconstruct strata from a cycle whose components are certified
    conormals of smooth (linear) closures; the oracle's precondition."""
    ring = G.ring
    per_comp = {}
    for k in G.degrees():
        for P, coeff in G.piece(k).items():
            entry = per_comp.setdefault(P.key(), (P, {}))
            entry[1][k] = coeff
    strata = []
    for key in sorted(per_comp):
        P, morse = per_comp[key]
        closure = eliminate(P, ring.cotangent_vars)
        if not _is_linear_ideal(Ideal(closure.ring, closure.groebner())):
            raise InputError(
                "iterated-slice oracle needs smooth linear closures; got V(%s)"
                % ", ".join(closure.generator_strings())
            )
        if conormal_ideal(closure, ring) != P:
            raise InputError(
                "component V(%s) is not the conormal of its base image"
                % ", ".join(P.generator_strings())
            )
        strata.append(StratumSpec(closure, morse, conormal=P))
    return SheafSpec(ring, strata=strata)


def polar_modules_iterative(spec, point, j, k, seed=0):
    """Independent route to the degree-k, index-j point module: iterate
    the nearby-cycle construction along the first j coordinates, then
    take the isolated vanishing-cycle stalk along the next one.

    Requires smooth-closure strata and an isolated stalk at every stage;
    failures surface as "coordinates not isolating for the oracle".
    """
    if not spec.in_strata_mode():
        raise InputError("the oracle requires strata input")
    for stratum in spec.strata:
        if not _is_linear_ideal(Ideal(stratum.closure.ring, stratum.closure.groebner())):
            raise InputError(
                "iterated-slice oracle needs smooth linear closures; got %s"
                % stratum.label
            )
    ring = spec.ring
    base = ring.base_ring()
    n = len(base.vars) - 1
    if not 0 <= j <= n:
        raise InputError("index out of range")
    pt = tuple(Fraction(c) for c in point)
    current = spec
    G = build_gecc(spec)
    for i in range(j):
        if G.is_zero():
            return ZERO_GROUP
        zi = base.var(base.vars[i]) - pt[i]
        try:
            G, _skipped = nearby_gecc(current, zi, seed=_child_seed(seed, i))
        except ImproperIntersectionError as exc:
            raise GenericityError(
                "coordinates not isolating for the oracle",
                stage=("oracle", i, exc.component),
            ) from exc
        if G.is_zero():
            return ZERO_GROUP
        current = _strata_from_gecc(G)
    fj = base.var(base.vars[j]) - pt[j]
    try:
        stalk = isolated_vanishing_stalk(G, fj, pt)
    except GenericityError as exc:
        raise GenericityError(
            "coordinates not isolating for the oracle", stage=exc.stage
        ) from exc
    return stalk.get(k, ZERO_GROUP)
