"""Graded enriched characteristic cycles from stratification data.

A sheaf is specified either by strata (closure ideals with their
per-degree normal-data modules) or directly as a graded enriched cycle
on conormal-type components.  From either we derive supports, nearby
cycles along a function, point stalks of vanishing cycles at isolated
points, and the critical locus.
"""

from __future__ import annotations

from .abgroups import AbGroup
from .cycles import EnrichedCycle, GradedEnrichedCycle
from .errors import GenericityError, InputError
from .geom import (
    conormal_ideal,
    constant_value_on,
    graph_ideal,
    intersect_hypersurface,
    local_multiplicity_at_point,
    relative_conormal_ideal,
)
from .ideals import eliminate, saturate, split_components


class StratumSpec:
    """Closed stratum data: closure ideal in the base ring, optional
    explicit conormal ideal in the full ring, dimension, and the map
    degree -> module of normal Morse data (trusted input, never derived
    from an actual complex of sheaves)."""

    __slots__ = ("closure", "conormal", "dim", "morse", "label")

    def __init__(self, closure, morse, conormal=None, dim=None, label=None):
        self.closure = closure
        self.morse = {int(k): g for k, g in morse.items() if not g.is_zero()}
        self.conormal = conormal
        d = closure.dimension()
        if dim is not None and dim != d:
            raise InputError(
                "declared dimension %d but the closure has dimension %d" % (dim, d)
            )
        self.dim = d
        self.label = label if label is not None else "V(%s)" % ", ".join(
            closure.generator_strings()
        )

    def is_visible(self):
        return bool(self.morse)


class SheafSpec:
    """Either a list of strata or a directly supplied graded cycle."""

    __slots__ = ("strata", "direct", "ring")

    def __init__(self, ring, strata=None, direct=None):
        if (strata is None) == (direct is None):
            raise InputError("specify exactly one of strata or a direct cycle")
        self.ring = ring
        self.strata = list(strata) if strata is not None else None
        self.direct = direct
        if self.strata is not None:
            seen = set()
            for s in self.strata:
                c = s.conormal.key() if s.conormal is not None else ("closure", s.closure.key())
                if c in seen:
                    raise InputError("strata must have pairwise distinct conormals")
                seen.add(c)

    def in_strata_mode(self):
        return self.strata is not None


def build_gecc(spec):
    """Sum, per degree, the Morse modules on the strata conormals.

    Strata with no nonzero module are invisible and contribute nothing.
    Direct mode returns the supplied cycle unchanged.
    """
    if not spec.in_strata_mode():
        return spec.direct
    ring = spec.ring
    nbase = len(ring.base_vars)
    by_degree = {}
    for stratum in spec.strata:
        if not stratum.is_visible():
            continue
        con = stratum.conormal
        if con is None:
            con = conormal_ideal(stratum.closure, ring)
            if con.dimension() != nbase:
                raise InputError(
                    "conormal computation failed for %s: got dimension %d; "
                    "supply the conormal ideal explicitly"
                    % (stratum.label, con.dimension())
                )
        for k, module in stratum.morse.items():
            piece = by_degree.setdefault(k, {})
            piece[con] = piece[con].dsum(module) if con in piece else module
    return GradedEnrichedCycle(
        ring, {k: EnrichedCycle(ring, comps) for k, comps in by_degree.items()}
    )


class SupportReport:
    __slots__ = ("per_degree", "essential", "total")

    def __init__(self, per_degree, essential, total):
        self.per_degree = per_degree
        self.essential = essential
        self.total = total

    def to_json(self):
        return {
            "per_degree": {
                str(k): [I.generator_strings() for I in ideals]
                for k, ideals in self.per_degree.items()
            },
            "essential_subvarieties": [I.generator_strings() for I in self.essential],
            "total": [I.generator_strings() for I in self.total],
        }


def support_of_gecc(G):
    """Project each component to the base: the essential subvarieties.

    `total` keeps only maximal subvarieties (those not inside another),
    whose union is the support.
    """
    ring = G.ring
    per_degree = {}
    essential = {}
    for k in G.degrees():
        ideals = []
        for comp in G.piece(k).support():
            img = eliminate(comp, ring.cotangent_vars)
            ideals.append(img)
            essential[img.key()] = img
        per_degree[k] = _dedupe(ideals)
    essential_list = [essential[key] for key in sorted(essential)]
    total = [
        I
        for I in essential_list
        if not any(
            J is not I and I.contains_ideal(J) and I.key() != J.key()
            for J in essential_list
        )
    ]
    total = _dedupe(total)
    return SupportReport(per_degree, essential_list, total)


def _dedupe(ideals):
    seen = {}
    for I in ideals:
        seen.setdefault(I.key(), I)
    return [seen[k] for k in sorted(seen)]


def nearby_gecc(spec, f, seed=0):
    """Characteristic cycle of the nearby cycles along f.

    Per visible stratum on which f is non-constant, the relative conormal
    carries the stratum's modules; the sum is then cut by V(f).  Strata
    with f constant are skipped (collected into the returned warnings).
    """
    if not spec.in_strata_mode():
        raise InputError(
            "nearby cycles need strata data; no conormal-only formula exists"
        )
    ring = spec.ring
    if f.ring != ring.base_ring():
        raise InputError("function must live in the base ring")
    skipped = []
    by_degree = {}
    for stratum in spec.strata:
        if not stratum.is_visible():
            continue
        constant, _value = constant_value_on(stratum.closure, f)
        if constant:
            skipped.append(stratum.label)
            continue
        rel = relative_conormal_ideal(stratum.closure, f, ring)
        for k, module in stratum.morse.items():
            piece = by_degree.setdefault(k, {})
            piece[rel] = piece[rel].dsum(module) if rel in piece else module
    warnings = set()
    if skipped:
        warnings.add("skipped constant strata: %s" % ", ".join(sorted(skipped)))
    out = {}
    from .ideals import map_poly

    f_full = map_poly(f, ring)
    for k, comps in by_degree.items():
        cyc = EnrichedCycle(ring, comps, warnings)
        out[k] = intersect_hypersurface(cyc, f_full, seed=seed).cycle
    result = GradedEnrichedCycle(ring, out)
    return result, sorted(skipped)


def isolated_vanishing_stalk(G, f, point):
    """Stalk modules of the vanishing cycles of f at a point where the
    intersection of the support with the gradient graph is isolated.

    Per degree, the coefficient of each component is tensored by the
    local multiplicity of (component + graph) at (p, df(p)).
    """
    ring = G.ring
    base = ring.base_ring()
    if f.ring != base:
        raise InputError("function must live in the base ring")
    point = tuple(point)
    if len(point) != len(ring.base_vars):
        raise InputError("point has wrong number of coordinates")
    grad = [f.diff(z).eval_point(point) for z in base.vars]
    lifted_point = point + tuple(grad)
    graph = graph_ideal(f, ring)

    # localized isolation check, component by component
    for comp in G.components():
        J = comp.plus(graph.gens)
        if J.is_unit():
            continue
        for piece in split_components(J):
            if piece.ideal.vanishes_at(lifted_point) and piece.ideal.dimension() > 0:
                raise GenericityError(
                    "support meets the gradient graph in positive dimension; "
                    "use the inductive decomposition route",
                    stage=("stalk", None, piece.ideal),
                )

    out = {}
    for k in G.degrees():
        total = None
        for P, coeff in G.piece(k).items():
            J = P.plus(graph.gens)
            if J.is_unit():
                continue
            J = _localize_at(J, lifted_point)
            if J is None:
                continue
            mult = local_multiplicity_at_point(J, lifted_point)
            if mult == 0:
                continue
            contrib = coeff.tensor(AbGroup(mult))
            total = contrib if total is None else total.dsum(contrib)
        if total is not None and not total.is_zero():
            out[k] = total
    return out


def _localize_at(J, point):
    """Saturate away the components missing the point; None if none remain."""
    comps = split_components(J)
    near = [c.ideal for c in comps if c.ideal.vanishes_at(point)]
    if not near:
        return None
    out = J
    for c in comps:
        if c.ideal.vanishes_at(point):
            continue
        for g in c.ideal.groebner():
            if g.eval_point(point) != 0:
                out = saturate(out, g)
                break
    return out


class CriticalComponent:
    __slots__ = ("ideal", "dim", "value")

    def __init__(self, ideal, dim, value):
        self.ideal = ideal
        self.dim = dim
        self.value = value

    def to_json(self):
        return {
            "ideal": self.ideal.generator_strings(),
            "dimension": self.dim,
            "critical_value": None if self.value is None else str(self.value),
        }


def critical_locus(G, f):
    """Base components where the support meets the gradient graph, with
    the value of f on each (None when irrational or non-unique)."""
    ring = G.ring
    base = ring.base_ring()
    graph = graph_ideal(f, ring)
    found = {}
    for comp in G.components():
        J = comp.plus(graph.gens)
        if J.is_unit():
            continue
        for piece in split_components(J):
            img = eliminate(piece.ideal, ring.cotangent_vars)
            found.setdefault(img.key(), img)
    ideals = [found[k] for k in sorted(found)]
    # drop components contained in others
    keep = []
    for I in ideals:
        if not any(
            J.key() != I.key() and I.contains_ideal(J) for J in ideals
        ):
            keep.append(I)
    out = []
    for I in keep:
        constant, value = constant_value_on(I, f)
        out.append(CriticalComponent(I, I.dimension(), value if constant else None))
    return out
