"""
Principal prime search
Finds the smallest principal prime element (by largest absolute embedding)
satisfying a system of congruences, a positivity bound and extra filters.
Candidates are tested in batches on a thread pool; the earliest hit in the
deterministic ordering wins, so the result does not depend on the pool.
Filters are closures and cannot be pickled, so the pool holds threads, not
processes. Under the GIL it gives no CPU speedup; one worker is equivalent.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import partial
from typing import Callable, Iterator, List, Optional, Tuple

from wacert.config import Config
from wacert.errors import InvalidInputError, NotCoprimeError, SearchExhaustedError
from wacert.logger import logger
from wacert.nf_core import (
    FieldElement,
    PrincipalPrime,
    QuadraticField,
    ResidueRing,
    bezout,
    embedding_magnitude,
    ideal_sum_index,
    is_principal_prime,
    totally_positive_and_large,
)

PrimeFilter = Callable[[PrincipalPrime], bool]


@dataclass(frozen=True)
class Congruence:
    modulus: FieldElement
    target: FieldElement


@dataclass(frozen=True)
class CongruenceSystem:
    field: QuadraticField
    congruences: Tuple[Congruence, ...] = ()
    positivity_bound: Optional[Fraction] = None
    radius: int = dc_field(default_factory=lambda: Config.SEARCH_RADIUS)
    filters: Tuple[PrimeFilter, ...] = ()
    label: str = "prime"

    def validate(self) -> None:
        if self.radius < 1:
            raise InvalidInputError("search radius must be at least 1", self.label)
        for i, cong in enumerate(self.congruences):
            if not ResidueRing(cong.modulus).is_unit(cong.target):
                raise InvalidInputError(
                    f"target {cong.target} is not a unit mod ({cong.modulus})", self.label
                )
            for other in self.congruences[i + 1:]:
                if ideal_sum_index(cong.modulus, other.modulus) != 1:
                    raise NotCoprimeError(
                        f"moduli ({cong.modulus}) and ({other.modulus}) are not coprime", self.label
                    )

    @property
    def modulus(self) -> FieldElement:
        product = self.field.one()
        for cong in self.congruences:
            product = product * cong.modulus
        return product


@dataclass(frozen=True)
class PrimeCertificate:
    """A search hit together with the facts that justify it."""

    prime: PrincipalPrime
    congruences: Tuple[Tuple[str, str, bool], ...]
    positivity_bound: Optional[Fraction]
    tested: int

    @property
    def element(self) -> FieldElement:
        return self.prime.generator

    def to_dict(self) -> dict:
        return {
            "element": str(self.element),
            "norm": str(self.element.norm()),
            "prime": self.prime.to_dict(),
            "congruences": [
                {"modulus": m, "target": t, "holds": ok} for m, t, ok in self.congruences
            ],
            "positivity_bound": None if self.positivity_bound is None else str(self.positivity_bound),
            "tested": self.tested,
        }


def crt_combine(system: CongruenceSystem) -> FieldElement:
    """The canonical x0 modulo the product of the moduli meeting every congruence."""
    K = system.field
    x0, modulus = K.element(0), K.one()
    for cong in system.congruences:
        if modulus == 1:
            x0, modulus = cong.target, cong.modulus
            continue
        e, f = bezout(modulus, cong.modulus)
        # e = 0 mod modulus, e = 1 mod new; f the other way round
        x0 = x0 * f + cong.target * e
        modulus = modulus * cong.modulus
    return ResidueRing(modulus).reduce(x0)


def candidate_stream(system: CongruenceSystem) -> Iterator[FieldElement]:
    """x0 + i*v1 + j*v2 over the HNF box of the given radius, smallest first."""
    K = system.field
    x0 = crt_combine(system)
    (A, B), (_, C) = ResidueRing(system.modulus).lattice_basis
    R = system.radius
    js = range(-R, R + 1) if K.degree == 2 else (0,)
    pool: List[FieldElement] = []
    for i in range(-R, R + 1):
        for j in js:
            candidate = x0 + K.element(i * A, i * B + j * C)
            if not candidate.is_zero():
                pool.append(candidate)
    pool.sort(key=lambda x: (embedding_magnitude(x), x.a, x.b))
    return iter(pool)


def _accept(system: CongruenceSystem, candidate: FieldElement) -> Optional[PrincipalPrime]:
    if candidate.is_unit():
        return None
    if system.positivity_bound is not None and not totally_positive_and_large(
        candidate, system.positivity_bound
    ):
        return None
    verdict = is_principal_prime(candidate)
    if not isinstance(verdict, PrincipalPrime):
        return None
    if not all(f(verdict) for f in system.filters):
        return None
    return verdict


def find_principal_prime(system: CongruenceSystem, workers: Optional[int] = None) -> PrimeCertificate:
    system.validate()
    candidates = list(candidate_stream(system))
    workers = workers or Config.SEARCH_WORKERS
    batch = Config.SEARCH_BATCH
    check = partial(_accept, system)

    logger.log_stage(f"search:{system.label}", f"{len(candidates)} candidates, {workers} workers")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for start in range(0, len(candidates), batch):
            chunk = candidates[start:start + batch]
            results = list(pool.map(check, chunk)) if workers > 1 else [check(c) for c in chunk]
            for offset, prime in enumerate(results):
                if prime is None:
                    continue
                tested = start + offset + 1
                logger.log_search(system.label, tested, str(prime.generator))
                checks = tuple(
                    (str(c.modulus), str(c.target), ResidueRing(c.modulus).congruent(prime.generator, c.target))
                    for c in system.congruences
                )
                return PrimeCertificate(prime, checks, system.positivity_bound, tested)

    logger.log_search(system.label, len(candidates))
    raise SearchExhaustedError(system.label, len(candidates))
