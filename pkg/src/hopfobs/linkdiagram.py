"""Oriented link diagrams from planar diagram (PD) codes.

A crossing is a 4-tuple of arc labels listed counterclockwise starting at
the incoming understrand.  Crossing signs are stored explicitly; when the
input omits them they are inferred by propagating the head/tail constraint
(every arc label terminates at exactly one of its two crossing incidences).

Arc labels in PD codes are the *edges* of the diagram, split at every
crossing passage.  Wirtinger generators correspond to over-arcs: maximal
runs of edges joined where the strand passes over.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import MalformedDiagram, SameComponent

# Tuple positions: (a, b, c, d) with a = incoming under-edge, c = outgoing
# under-edge; b and d carry the over-strand.  Sign +1 means the over-strand
# runs d -> b, sign -1 means b -> d.
POS_A, POS_B, POS_C, POS_D = range(4)


@dataclass(frozen=True)
class Crossing:
    sign: int
    arcs: tuple

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise MalformedDiagram(f"crossing sign must be +-1, got {self.sign}")
        if len(self.arcs) != 4:
            raise MalformedDiagram(f"crossing tuple arity {len(self.arcs)} != 4")

    @property
    def over_in(self) -> int:
        return self.arcs[POS_D] if self.sign > 0 else self.arcs[POS_B]

    @property
    def over_out(self) -> int:
        return self.arcs[POS_B] if self.sign > 0 else self.arcs[POS_D]


@dataclass(frozen=True)
class PDCode:
    """Validated planar-diagram code with resolved crossing signs."""

    crossings: tuple
    arc_count: int

    def crossing(self, i: int) -> Crossing:
        return self.crossings[i]


def parse_pd(text: str) -> PDCode:
    """Parse the diagram text format or its JSON equivalent.

    Text: semicolon-separated ``X[a,b,c,d]`` with an optional leading ``+``
    or ``-`` sign per crossing; ``#`` starts a comment line.  JSON: an object
    ``{"crossings": [{"sign": 1, "arcs": [a,b,c,d]}, ...], "arc_count": n}``
    where sign and arc_count are optional.  An empty crossing list with a
    declared arc count gives that many 0-crossing unknot components.
    """
    stripped = "\n".join(line for line in text.splitlines()
                         if not line.strip().startswith("#")).strip()
    if stripped.startswith("{"):
        return _parse_json(stripped)
    return _parse_text(stripped)


def _parse_text(text: str) -> PDCode:
    if not text:
        raise MalformedDiagram("empty diagram text")
    raw = []
    for piece in text.replace("\n", ";").split(";"):
        piece = piece.strip()
        if not piece:
            continue
        sign = None
        if piece[0] in "+-":
            sign = 1 if piece[0] == "+" else -1
            piece = piece[1:].strip()
        if not (piece.startswith("X[") and piece.endswith("]")):
            raise MalformedDiagram(f"crossing {len(raw)}: expected X[a,b,c,d], got {piece!r}")
        body = piece[2:-1]
        try:
            arcs = tuple(int(x) for x in body.split(","))
        except ValueError:
            raise MalformedDiagram(f"crossing {len(raw)}: non-integer label in {piece!r}")
        raw.append((sign, arcs))
    return _build(raw, declared_arc_count=None)


def _parse_json(text: str) -> PDCode:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDiagram(f"bad diagram JSON: {exc}")
    raw = []
    for i, rec in enumerate(doc.get("crossings", [])):
        if isinstance(rec, dict):
            sign = rec.get("sign")
            arcs = tuple(rec["arcs"])
        else:
            sign, arcs = None, tuple(rec)
        if sign is not None and sign not in (1, -1):
            raise MalformedDiagram(f"crossing {i}: sign must be +-1")
        if not all(isinstance(x, int) for x in arcs):
            raise MalformedDiagram(f"crossing {i}: non-integer label")
        raw.append((sign, arcs))
    return _build(raw, declared_arc_count=doc.get("arc_count"))


def _build(raw, declared_arc_count) -> PDCode:
    if not raw:
        n = declared_arc_count if declared_arc_count is not None else 1
        if n < 1:
            raise MalformedDiagram("0-crossing diagram needs a positive arc count")
        return PDCode(crossings=(), arc_count=n)

    for i, (_, arcs) in enumerate(raw):
        if len(arcs) != 4:
            raise MalformedDiagram(f"crossing {i}: tuple arity {len(arcs)} != 4")
        if any(a < 1 for a in arcs):
            raise MalformedDiagram(f"crossing {i}: labels must be positive")

    labels = sorted({a for _, arcs in raw for a in arcs})
    arc_count = declared_arc_count if declared_arc_count is not None else max(labels)
    counts: dict = {}
    for i, (_, arcs) in enumerate(raw):
        for a in arcs:
            counts[a] = counts.get(a, 0) + 1
    for a in range(1, arc_count + 1):
        if counts.get(a, 0) != 2:
            where = next((i for i, (_, arcs) in enumerate(raw) if a in arcs), None)
            raise MalformedDiagram(
                f"arc label {a} appears {counts.get(a, 0)} times (crossing {where})")
    if max(labels) > arc_count:
        raise MalformedDiagram(f"arc label {max(labels)} exceeds arc count {arc_count}")

    signs = _resolve_signs(raw)
    crossings = tuple(Crossing(sign=s, arcs=arcs) for s, (_, arcs) in zip(signs, raw))
    pd = PDCode(crossings=crossings, arc_count=arc_count)
    components(pd)  # validates that the successor relation closes into cycles
    return pd


def _resolve_signs(raw) -> list:
    """Determine each crossing's over-strand direction (hence sign).

    Incidence constraint: every arc has exactly one head (it terminates
    there) and one tail.  Position a is a head, position c a tail; for the
    over positions, sign +1 makes d the head and b the tail, sign -1 the
    reverse.  Explicit signs seed the propagation; contradictions raise.
    """
    n = len(raw)
    signs = [s for s, _ in raw]
    incid: dict = {}
    for i, (_, arcs) in enumerate(raw):
        for pos, a in enumerate(arcs):
            incid.setdefault(a, []).append((i, pos))

    def head_state(i, pos, sign):
        # True = head, False = tail, None = depends on the unknown sign
        if pos == POS_A:
            return True
        if pos == POS_C:
            return False
        if sign is None:
            return None
        if pos == POS_D:
            return sign > 0
        return sign < 0  # POS_B

    # Propagate until stable: each arc's two incidences must be one head,
    # one tail.
    changed = True
    while changed:
        changed = False
        for a, places in incid.items():
            if len(places) != 2:
                raise MalformedDiagram(f"arc label {a} does not appear exactly twice")
            (i1, p1), (i2, p2) = places
            s1 = head_state(i1, p1, signs[i1])
            s2 = head_state(i2, p2, signs[i2])
            if s1 is None and s2 is None:
                continue
            if s1 is not None and s2 is not None:
                if s1 == s2:
                    raise MalformedDiagram(
                        f"inconsistent orientation at arc {a} (crossings {i1}, {i2})")
                continue
            if s1 is None:
                i1, p1, i2, p2, s1, s2 = i2, p2, i1, p1, s2, s1
            # incidence (i2, p2) must be the opposite of s1
            want_head = not s1
            if p2 == POS_D:
                signs[i2] = 1 if want_head else -1
            else:  # POS_B
                signs[i2] = -1 if want_head else 1
            changed = True
    # Components lying entirely over the rest of the diagram are not
    # constrained; orient them positively at their lowest crossing and
    # re-propagate.
    if any(s is None for s in signs):
        i = next(i for i, s in enumerate(signs) if s is None)
        signs[i] = 1
        return _resolve_signs([(s, arcs) for s, (_, arcs) in zip(signs, raw)])
    return signs


def successor_map(pd: PDCode) -> dict:
    """Arc -> next arc along the strand orientation."""
    succ: dict = {}

    def set_succ(a, b, where):
        if a in succ:
            raise MalformedDiagram(f"arc {a} has two successors (crossing {where})")
        succ[a] = b

    for i, c in enumerate(pd.crossings):
        set_succ(c.arcs[POS_A], c.arcs[POS_C], i)
        set_succ(c.over_in, c.over_out, i)
    if pd.crossings:
        if set(succ) != set(range(1, pd.arc_count + 1)):
            raise MalformedDiagram("arc successor relation does not cover all arcs")
    else:
        succ = {a: a for a in range(1, pd.arc_count + 1)}
    return succ


def components(pd: PDCode):
    """Component index of every arc plus the component count.

    Components are the cycles of the arc-successor relation, indexed in
    increasing order of their smallest arc label.
    """
    succ = successor_map(pd)
    seen: dict = {}
    cycles = []
    for start in range(1, pd.arc_count + 1):
        if start in seen:
            continue
        cycle = []
        a = start
        while a not in seen:
            seen[a] = True
            cycle.append(a)
            a = succ[a]
        if a != start:
            raise MalformedDiagram(f"arc successor relation is not a cycle at arc {start}")
        cycles.append(cycle)
    cycles.sort(key=min)
    comp_of = {}
    for idx, cycle in enumerate(cycles):
        for a in cycle:
            comp_of[a] = idx
    return comp_of, len(cycles)


def linking_number(pd: PDCode, i: int, j: int) -> int:
    """Half the signed count of crossings between components i and j."""
    if i == j:
        raise SameComponent(f"linking number needs two distinct components, got {i}")
    comp_of, count = components(pd)
    if not (0 <= i < count and 0 <= j < count):
        raise SameComponent(f"component index out of range (have {count})")
    total = 0
    for c in pd.crossings:
        under = comp_of[c.arcs[POS_A]]
        over = comp_of[c.over_in]
        if {under, over} == {i, j}:
            total += c.sign
    if total % 2:
        raise MalformedDiagram("odd signed inter-component crossing count")
    return total // 2


# ---------------------------------------------------------------------------
# Wirtinger presentations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupPresentation:
    """Wirtinger-type presentation: words are tuples of (generator, +-1)."""

    generator_count: int
    relations: tuple
    generator_component: tuple

    def __post_init__(self):
        for rel in self.relations:
            sums: dict = {}
            for g, e in rel:
                comp = self.generator_component[g]
                sums[comp] = sums.get(comp, 0) + e
            if any(sums.values()):
                raise MalformedDiagram("relation is not abelianization-trivial")


@dataclass(frozen=True)
class MeridianMap:
    """Abelianization onto Z^m sending each generator to the standard basis
    vector of its component."""

    nvars: int
    generator_component: tuple

    def exponents(self, gen: int) -> tuple:
        e = [0] * self.nvars
        e[self.generator_component[gen]] = 1
        return tuple(e)


def wirtinger(pd: PDCode, swap_components: bool = False):
    """Wirtinger presentation plus the meridian abelianization.

    One generator per over-arc (indexed by smallest arc label), one relation
    per crossing: at a positive crossing with under-in generator a, over
    generator b and under-out generator c the relation is b a b^-1 c^-1; a
    negative crossing conjugates by b^-1 instead.

    ``swap_components`` exchanges the roles of the two meridian variables
    for 2-component diagrams (link component reordering).
    """
    comp_of, ncomp = components(pd)
    if swap_components and ncomp != 2:
        raise MalformedDiagram("component swap only makes sense for 2 components")

    # Over-arcs: merge the two over-edges at each crossing.
    parent = {a: a for a in range(1, pd.arc_count + 1)}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for c in pd.crossings:
        union(c.arcs[POS_B], c.arcs[POS_D])

    classes = sorted({find(a) for a in range(1, pd.arc_count + 1)})
    gen_of_root = {root: idx for idx, root in enumerate(classes)}

    def gen_of_arc(a):
        return gen_of_root[find(a)]

    def comp_index(raw):
        if swap_components:
            return 1 - raw
        return raw

    gen_component = tuple(comp_index(comp_of[root]) for root in classes)

    relations = []
    for c in pd.crossings:
        a = gen_of_arc(c.arcs[POS_A])
        b = gen_of_arc(c.over_in)
        cc = gen_of_arc(c.arcs[POS_C])
        e = c.sign
        relations.append(((b, e), (a, 1), (b, -e), (cc, -1)))

    pres = GroupPresentation(generator_count=len(classes),
                             relations=tuple(relations),
                             generator_component=gen_component)
    ab = MeridianMap(nvars=ncomp, generator_component=gen_component)
    return pres, ab


def arc_of_generator(pd: PDCode) -> list:
    """Smallest PD arc label in each generator's over-arc, by generator
    index (the inverse of the indexing used by `wirtinger`)."""
    parent = {a: a for a in range(1, pd.arc_count + 1)}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for c in pd.crossings:
        ra, rb = find(c.arcs[POS_B]), find(c.arcs[POS_D])
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return sorted({find(a) for a in range(1, pd.arc_count + 1)})
