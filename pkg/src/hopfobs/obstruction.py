"""The satellite obstruction scan against the Hopf link.

For a base link declared concordant to the Hopf link, a companion knot tied
in along a null-homologous unknotted curve, and a prime p, the scan walks
all admissible covers Z^2 -> Z_{p^a} + Z_{p^b} up to a size cap.  At each
cover it reads off the torsion of the first homology, enumerates the
metabolisers of the linking form and the prime-power characters vanishing
on each, and evaluates the satellite signature

    sigma = base_sigma + sum_i sigma(K, omega_i),   omega_i = chi(lift_i).

A cover certifies the obstruction when *every* metaboliser admits a
vanishing character with nonzero sigma; a nonzero value anywhere is
conclusive, a zero value never is.
"""

from __future__ import annotations

import cmath
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from .algebra import AdmissibleMap, Character, FinAbGroup
from .errors import FormRequired, NotInKernel, SingularAtOmega
from .forms import LinkingForm, characters_vanishing_on, enumerate_metabolisers
from .foxcalc import word_abelianization
from .homology import homology_of_cover, lift_class_of_curve
from .linkdiagram import PDCode, components, linking_number, wirtinger
from .signatures import SeifertMatrix, levine_tristram

SIGMA_NONZERO_TOL = 1e-9


@dataclass(frozen=True)
class SatelliteSpec:
    """Satellite data: base diagram, companion Seifert matrix, infection
    curve as a word in the base Wirtinger generators.

    The curve must be null-homologous (checked: trivial abelianization);
    unknottedness in the ambient sphere is caller-asserted and only
    recorded.  ``base_sigma`` is the signature contribution of the base,
    zero when the base is declared concordant to the Hopf link.
    """

    base: PDCode
    companion: SeifertMatrix
    gamma: tuple
    base_sigma: float = 0.0
    base_declared_concordant: bool = True
    gamma_unknotted: bool = False

    def __post_init__(self):
        object.__setattr__(self, "gamma",
                           tuple((int(g), int(e)) for g, e in self.gamma))
        _, ncomp = components(self.base)
        if ncomp != 2:
            raise ValueError(f"base must have 2 components, got {ncomp}")
        if linking_number(self.base, 0, 1) != 1:
            raise ValueError("base must have linking number 1")
        pres, ab = wirtinger(self.base)
        for g, e in self.gamma:
            if not (0 <= g < pres.generator_count) or e not in (1, -1):
                raise ValueError(f"bad curve letter ({g}, {e})")
        if any(word_abelianization(self.gamma, ab)):
            raise NotInKernel("infection curve is not null-homologous")


def admissible_maps(p: int, cap: int) -> list:
    """All admissible Z^2 -> Z_{p^a} + Z_{p^b} with a >= b >= 0, a >= 1 and
    p^(a+b) <= cap, ordered by group order then by a."""
    if p < 2 or any(p % q == 0 for q in range(2, isqrt(p) + 1)):
        raise ValueError(f"{p} is not prime")
    out = []
    a = 1
    while p**a <= cap:
        b = 0
        while b <= a and p**(a + b) <= cap:
            out.append(AdmissibleMap(FinAbGroup((p**a, p**b))))
            b += 1
        a += 1
    out.sort(key=lambda m: (m.target.order, m.target.orders[0]))
    return out


def satellite_sigma(spec: SatelliteSpec, phi: AdmissibleMap, chi: Character,
                    base_sigma: float | None = None, *, cover=None,
                    lifts=None) -> float:
    """sigma of the satellite at one character: base plus the Levine-
    Tristram signatures of the companion at the character values of the
    lifted curve classes."""
    if base_sigma is None:
        base_sigma = spec.base_sigma
    pres, ab = wirtinger(spec.base)
    if cover is None:
        cover = homology_of_cover(pres, ab, phi)
    if tuple(chi.group.orders) != tuple(cover.torsion):
        raise ValueError(
            f"character lives on {chi.group.orders}, cover torsion is {cover.torsion}")
    if lifts is None:
        lifts = lift_class_of_curve(spec.gamma, ab, phi, cover)
    total = float(base_sigma)
    for torsion_coords, _free in lifts:
        turn = chi.angle(torsion_coords) if torsion_coords else Fraction(0)
        if turn == 0:
            continue  # sigma(K, 1) = 0 by convention
        omega = cmath.exp(2j * cmath.pi * float(turn))
        total += levine_tristram(spec.companion, omega)
    return total


def _prime_powers_upto(bound: int) -> list:
    """(q, k) with q prime and q^k <= bound, q^k ascending."""
    out = []
    for m in range(2, bound + 1):
        q = _smallest_prime_factor(m)
        mm, k = m, 0
        while mm % q == 0:
            mm //= q
            k += 1
        if mm == 1:
            out.append((q, k))
    return out


def _smallest_prime_factor(m: int) -> int:
    for q in range(2, isqrt(m) + 1):
        if m % q == 0:
            return q
    return m


@dataclass
class PhiReport:
    orders: tuple
    homology_free_rank: int
    homology_torsion: tuple
    status: str                   # "evaluated" | "form-required"
    metaboliser_count: int = 0
    entries: list = field(default_factory=list)
    verdict: str = "INCONCLUSIVE"

    def to_json(self) -> dict:
        return {"orders": list(self.orders),
                "homology": {"free_rank": self.homology_free_rank,
                             "torsion": list(self.homology_torsion)},
                "status": self.status,
                "metaboliser_count": self.metaboliser_count,
                "entries": self.entries,
                "verdict": self.verdict}


@dataclass
class ObstructionReport:
    p: int
    cap: int
    q_bound: int
    base_sigma: float
    gamma_unknotted: bool
    base_declared_concordant: bool
    phis: list
    verdict: str

    def to_json(self) -> dict:
        return {"p": self.p, "cap": self.cap, "q_bound": self.q_bound,
                "base_sigma": self.base_sigma,
                "gamma_unknotted_asserted": self.gamma_unknotted,
                "base_declared_concordant": self.base_declared_concordant,
                "phis": [ph.to_json() for ph in self.phis],
                "verdict": self.verdict}


def _form_for(torsion: FinAbGroup, supplied: LinkingForm | None):
    """Pick the linking form for a torsion group, or None when metabolisers
    are form-dependent and nothing usable was supplied.

    The default diagonal form is only sound where the metaboliser set does
    not depend on the form: cyclic groups (at most one invariant factor).
    """
    if supplied is not None and tuple(supplied.group.orders) == tuple(torsion.orders):
        return supplied
    nontrivial = [d for d in torsion.orders if d > 1]
    if len(nontrivial) <= 1:
        return LinkingForm.default_diagonal(torsion)
    return None


def _scan_one_phi(spec: SatelliteSpec, phi: AdmissibleMap, q_bound: int,
                  form: LinkingForm | None) -> PhiReport:
    pres, ab = wirtinger(spec.base)
    cover = homology_of_cover(pres, ab, phi)
    torsion = cover.torsion_group
    report = PhiReport(orders=phi.target.orders,
                       homology_free_rank=cover.free_rank,
                       homology_torsion=cover.torsion,
                       status="evaluated")
    lam = _form_for(torsion, form)
    if lam is None:
        report.status = "form-required"
        return report

    metabolisers = enumerate_metabolisers(lam)
    report.metaboliser_count = len(metabolisers)
    lifts = lift_class_of_curve(spec.gamma, ab, phi, cover)

    if not metabolisers:
        # No metaboliser at a prime-power admissible cover already
        # contradicts concordance to the Hopf link.
        report.verdict = "OBSTRUCTED"
        report.entries.append({"note": "no metaboliser exists "
                                       "(|T| not a perfect square)"})
        return report

    all_metabolisers_hit = True
    for midx, P in enumerate(metabolisers):
        found_nonzero = False
        seen = set()
        for q, k in _prime_powers_upto(q_bound):
            for chi in characters_vanishing_on(torsion, P.elements, q, k):
                key = chi.numerators
                if key in seen:
                    continue
                seen.add(key)
                entry = {"metaboliser": midx,
                         "character": {"numerators": list(chi.numerators),
                                       "order": chi.order,
                                       "trivial": chi.is_trivial},
                         "omegas": [str(chi.angle(tc)) for tc, _ in lifts]}
                try:
                    sigma = satellite_sigma(spec, phi, chi,
                                            cover=cover, lifts=lifts)
                    entry["sigma"] = sigma
                    entry["nonzero"] = abs(sigma) > SIGMA_NONZERO_TOL
                    if entry["nonzero"]:
                        found_nonzero = True
                except SingularAtOmega as exc:
                    entry["sigma"] = None
                    entry["nonzero"] = False
                    entry["singular"] = str(exc)
                report.entries.append(entry)
        if not found_nonzero:
            all_metabolisers_hit = False
    report.verdict = "OBSTRUCTED" if all_metabolisers_hit else "INCONCLUSIVE"
    return report


def hopf_obstruction_scan(spec: SatelliteSpec, p: int, cap: int, q_bound: int,
                          form: LinkingForm | None = None, *,
                          jobs: int = 1) -> ObstructionReport:
    """Run the full obstruction scan.

    Per cover phi the verdict is OBSTRUCTED when every metaboliser has a
    vanishing prime-power character with nonzero sigma (vacuously so when
    no metaboliser exists, which already contradicts concordance).  The
    overall verdict is OBSTRUCTED if any cover is; otherwise NOT-OBSTRUCTED,
    meaning inconclusive, never "concordant".  Covers whose torsion needs
    an explicit linking form abort the scan with FormRequired unless some
    other cover already certified the obstruction.

    ``jobs`` > 1 evaluates the covers in worker processes; reports are
    assembled in cover order either way.
    """
    phis = admissible_maps(p, cap)
    if jobs > 1 and len(phis) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            phi_reports = list(pool.map(_scan_one_phi, [spec] * len(phis), phis,
                                        [q_bound] * len(phis), [form] * len(phis)))
    else:
        phi_reports = [_scan_one_phi(spec, phi, q_bound, form) for phi in phis]

    any_obstructed = any(r.verdict == "OBSTRUCTED" for r in phi_reports)
    missing_form = [r.orders for r in phi_reports if r.status == "form-required"]
    if missing_form and not any_obstructed:
        raise FormRequired(
            "linking form required for the torsion at covers "
            f"{missing_form} and no other cover certified the obstruction")

    verdict = "OBSTRUCTED" if any_obstructed else "NOT-OBSTRUCTED"
    return ObstructionReport(p=p, cap=cap, q_bound=q_bound,
                             base_sigma=spec.base_sigma,
                             gamma_unknotted=spec.gamma_unknotted,
                             base_declared_concordant=spec.base_declared_concordant,
                             phis=phi_reports, verdict=verdict)
