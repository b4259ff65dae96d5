"""Wobbly bundles on the support of the brane: pushforwards p_*(p^*F0(R)).

A pair (F0, R) with R effective on the cover of degree 2g - 2 - delta and
deg F0 = 1 - g + delta/2 gives a wobbly bundle exactly when R and sigma(R)
have disjoint supports and K + T - Nm(R) is the class of an effective
divisor D (necessarily of degree delta).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .cover import CoverDivisor, CoverModel, CoverPoint
from .curve import Divisor, Point
from .errors import (
    BudgetExhausted,
    GenusTooSmall,
    InadmissibleDelta,
    NotEffective,
    PreconditionViolated,
)
from .picard import PicClass, class_of_divisor, is_effective_class, random_class, trivial_class


@dataclass(frozen=True)
class DeltaInfo:
    g: int
    admissible: tuple
    delta_max: int
    d0: dict
    absorbed: tuple

    def check(self, delta: int):
        if delta not in self.admissible:
            raise InadmissibleDelta(f"delta = {delta} must be even with 0 <= delta <= {2 * self.g - 2}")


def delta_constraints(g: int) -> DeltaInfo:
    if g < 2:
        raise GenusTooSmall(f"genus {g} < 2")
    adm = tuple(range(0, 2 * g - 1, 2))
    dmax = g - 1 if g % 2 else g - 2
    return DeltaInfo(
        g=g,
        admissible=adm,
        delta_max=dmax,
        d0={d: 1 - g + d // 2 for d in adm},
        absorbed=tuple(d for d in adm if d > dmax),
    )


def det_class_of(model: CoverModel, F0: PicClass, R: CoverDivisor) -> PicClass:
    """F0^2 T (Nm R)."""
    C = model.curve
    return F0 * 2 + model.T + class_of_divisor(C, model.norm_divisor(R))


@dataclass(frozen=True)
class Membership:
    accepted: bool
    reason: str
    delta: Optional[int] = None
    witness: Optional[Divisor] = None
    det_class: Optional[PicClass] = None


def check_membership(model: CoverModel, F0: PicClass, R: CoverDivisor) -> Membership:
    C = model.curve
    g = C.g
    if not R.is_effective():
        raise NotEffective(f"{R!r} is not effective")
    delta = 2 * g - 2 - R.degree
    if delta < 0 or delta % 2:
        return Membership(False, "InadmissibleDelta", delta)
    if F0.degree != 1 - g + delta // 2:
        return Membership(False, "WrongDegree", delta)
    if not model.disjoint_from_involute(R):
        return Membership(False, "InvoluteOverlap", delta)
    K = class_of_divisor(C, C.canonical_divisor())
    target = K + model.T - class_of_divisor(C, model.norm_divisor(R))
    ok, D = is_effective_class(target)
    if not ok:
        return Membership(False, "NotEffective", delta)
    det = det_class_of(model, F0, R)
    if det != F0 * 2 + K - class_of_divisor(C, D):
        raise PreconditionViolated("determinant identity failed for an accepted datum")
    return Membership(True, "Accept", delta, D, det)


@dataclass(frozen=True)
class WobblyDatum:
    delta: int
    F0: PicClass
    R: CoverDivisor
    witness: Divisor
    det_class: PicClass
    strict: bool


def strict_semistability_note(model: CoverModel, witness: Divisor) -> bool:
    """Whether [D] is K or K + T, the case where the bundle is strictly semistable."""
    C = model.curve
    K = class_of_divisor(C, C.canonical_divisor())
    cD = class_of_divisor(C, witness)
    return cD == K or cD == K + model.T


def _frobenius_cover_point(model: CoverModel, Q: CoverPoint) -> CoverPoint:
    P = Q.base
    base = Point(P.x.frobenius(), P.y.frobenius()) if not P.is_infinity else P
    target = Q.value.frobenius()
    for Q2 in model.points_above(base):
        if Q2.value == target:
            return Q2
    raise AssertionError("Frobenius image not found above the conjugate point")


def cover_places(model: CoverModel, ext: int = 1) -> list:
    """F_p-rational effective cover divisors of minimal size: rational points,
    and with ext = 2 also Frobenius-conjugate pairs of points over F_{p^2}."""
    places = [CoverDivisor({Q: 1}) for Q in model.rational_points(1)]
    if ext >= 2:
        seen = set()
        for Q in model.rational_points(2):
            if Q.degree == 1 or Q in seen:
                continue
            Q2 = _frobenius_cover_point(model, Q)
            seen.update((Q, Q2))
            places.append(CoverDivisor({Q: 1, Q2: 1}))
    return places


def candidate_divisors(model: CoverModel, degree: int, ext: int = 1):
    """Effective F_p-rational cover divisors of the given degree, support-disjoint
    from their sigma-image, in a fixed order."""
    places = cover_places(model, ext)
    sizes = [P.degree for P in places]

    def rec(start, remaining, acc):
        if remaining == 0:
            yield acc
            return
        for i in range(start, len(places)):
            if sizes[i] <= remaining:
                yield from rec(i, remaining - sizes[i], acc + places[i])

    for R in rec(0, degree, CoverDivisor()):
        if model.disjoint_from_involute(R):
            yield R


def f0_samples(model: CoverModel, degree: int, count: int, seed: int) -> list:
    C = model.curve
    rng = random.Random(seed)
    out = [trivial_class(C, degree)]
    for _ in range(count - 1):
        out.append(random_class(C, rng, degree))
    return out


def _check_one(args):
    model, F0, R = args
    return check_membership(model, F0, R)


def search_wobbly(model: CoverModel, delta: int, budget: int = 2000, seed: int = 0,
                  ext: int = 1, f0_count: int = 2, executor=None) -> list:
    """Accepted (F0, R) pairs with R over rational cover points.

    At most ``budget`` membership checks are made; if the candidate list
    is longer, BudgetExhausted is raised carrying what was found.
    """
    C = model.curve
    info = delta_constraints(C.g)
    info.check(delta)
    d0 = info.d0[delta]
    F0s = f0_samples(model, d0, f0_count, seed)
    jobs = []
    exhausted = False
    for R in candidate_divisors(model, 2 * C.g - 2 - delta, ext):
        for F0 in F0s:
            if len(jobs) >= budget:
                exhausted = True
                break
            jobs.append((model, F0, R))
        if exhausted:
            break
    mapper = executor.map if executor is not None else map
    results = list(mapper(_check_one, jobs))
    found = []
    for (_, F0, R), res in zip(jobs, results):
        if res.accepted:
            found.append(WobblyDatum(delta, F0, R, res.witness, res.det_class,
                                     strict_semistability_note(model, res.witness)))
    if exhausted:
        raise BudgetExhausted(f"stopped after {budget} checks", found)
    return found


def wobbly_candidates_count(model: CoverModel, delta: int, ext: int = 1) -> int:
    return sum(1 for _ in candidate_divisors(model, 2 * model.curve.g - 2 - delta, ext))

