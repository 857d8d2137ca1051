"""Channel sampling and the brute-force ball-intersection oracle.

The error ball of a message Z is the set of read pools of size M*K that
split into K reads per strand with at most floor(tau*K) of each strand's
reads differing from it, every read within (e_i, e_d) of its strand.
``sample_ball`` draws one pool from the ball (the support is what the
model fixes; the distribution here is a pluggable policy), ``in_ball``
decides membership, and ``oracle_balls_intersect`` decides ball
intersection by exhaustive enumeration, independent of the
matching-based criteria it is used to validate.

Oracle enumeration is pruned losslessly: every read of a pool lying in
both balls is within (e_i, e_d) of a strand of Z1 and of a strand of Z2,
so candidates are built over the intersection of the two read
neighborhoods; and when tau < 1 each strand must keep at least
K - floor(tau*K) exact copies in the pool, so those forced copies are
fixed as a base and only completions are enumerated.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from typing import Protocol

from .errors import ShapeMismatch, SpaceTooLarge, ValidationError
from .matching import assignment_feasible
from .model import (
    DEFAULT_SPACE_CAP,
    Message,
    ReadPool,
    Strand,
    SystemParams,
    flip_positions,
)

RNG_ID = "mt19937"


@dataclass(frozen=True)
class ReadProvenance:
    """One read: its value, originating strand, and flipped string positions."""

    read: int
    source: Strand
    flips: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "flips", tuple(sorted(self.flips)))
        expected = flip_positions(self.source.bits, self.source.length, self.flips)
        if self.read != expected:
            raise ValidationError(
                f"read {self.read} does not equal source {self.source} with "
                f"positions {self.flips} flipped"
            )


@dataclass(frozen=True)
class ChannelSample:
    """A sampled pool plus per-read provenance and the RNG identity."""

    pool: ReadPool
    provenance: tuple[ReadProvenance, ...]
    seed: int
    rng: str = RNG_ID

    def __post_init__(self) -> None:
        from_prov = Counter(p.read for p in self.provenance)
        if sorted(from_prov.items()) != list(self.pool.entries):
            raise ValidationError("pool does not match the provenance multiset")


class NoisePolicy(Protocol):
    def strand_flips(
        self, rng: random.Random, params: SystemParams
    ) -> list[tuple[int, ...]]:
        """Flip sets (string positions) for one strand's K reads.

        At most floor(tau*K) sets may be non-empty; each set may contain
        at most e_i index positions (0..l-1) and e_d data positions
        (l..L-1).
        """
        ...


@dataclass(frozen=True)
class UniformNoise:
    """Default policy: corrupt-count uniform on {0..floor(tau*K)}; each
    corrupted read draws an index-flip weight uniform on {0..e_i} and a
    data-flip weight uniform on {0..e_d}, positions uniform without
    replacement.  Zero-weight draws legally yield exact copies."""

    def strand_flips(
        self, rng: random.Random, params: SystemParams
    ) -> list[tuple[int, ...]]:
        flips: list[tuple[int, ...]] = [()] * params.k
        corrupt = rng.randint(0, params.tau_budget)
        for copy in sorted(rng.sample(range(params.k), corrupt)):
            wi = rng.randint(0, params.e_i)
            ipos = rng.sample(range(params.index_len), wi)
            wd = rng.randint(0, params.e_d)
            dpos = rng.sample(range(params.index_len, params.length), wd)
            flips[copy] = tuple(sorted(ipos + dpos))
        return flips


def sample_ball(
    z: Message,
    params: SystemParams,
    seed: int,
    noise: NoisePolicy | None = None,
) -> ChannelSample:
    """Draw one pool from the ball of Z, deterministic given (seed, noise).

    Strands are processed in canonical (sorted) order, K reads each; the
    result is checked against ``assignment_feasible`` before returning.
    """
    _check_shape(z, params)
    policy = noise if noise is not None else UniformNoise()
    rng = random.Random(seed)
    provenance: list[ReadProvenance] = []
    for s in z.strands:
        flips = policy.strand_flips(rng, params)
        _check_policy_output(flips, params)
        for f in flips:
            provenance.append(
                ReadProvenance(flip_positions(s.bits, params.length, f), s, tuple(f))
            )
    pool = ReadPool.from_reads([p.read for p in provenance], params.length)
    sample = ChannelSample(pool, tuple(provenance), seed)
    assert assignment_feasible(pool, z, params), "sampled pool must lie in the ball"
    return sample


def _check_policy_output(flips: list[tuple[int, ...]], params: SystemParams) -> None:
    if len(flips) != params.k:
        raise ValidationError(f"policy produced {len(flips)} flip sets, expected {params.k}")
    noisy = sum(1 for f in flips if f)
    if noisy > params.tau_budget:
        raise ValidationError(
            f"policy corrupted {noisy} reads, budget is {params.tau_budget}"
        )
    for f in flips:
        wi = sum(1 for p in f if p < params.index_len)
        wd = len(f) - wi
        if wi > params.e_i or wd > params.e_d:
            raise ValidationError(
                f"flip set {f} exceeds ({params.e_i},{params.e_d}) per-field limits"
            )
        if any(not 0 <= p < params.length for p in f) or len(set(f)) != len(f):
            raise ValidationError(f"flip set {f} has out-of-range or repeated positions")


def in_ball(pool: ReadPool, z: Message, params: SystemParams) -> bool:
    """True iff the pool is a possible channel output for Z."""
    return assignment_feasible(pool, z, params)


def read_neighborhood(z: Message, params: SystemParams) -> set[int]:
    """All read values within (e_i, e_d) of at least one strand of Z."""
    values: set[int] = set()
    for s in z.strands:
        for wi in range(params.e_i + 1):
            for ipos in combinations(range(params.index_len), wi):
                for wd in range(params.e_d + 1):
                    for dpos in combinations(range(params.index_len, params.length), wd):
                        values.add(flip_positions(s.bits, params.length, ipos + dpos))
    return values


def _neighborhood_size_bound(params: SystemParams) -> int:
    per_strand = sum(math.comb(params.index_len, i) for i in range(params.e_i + 1)) * sum(
        math.comb(params.data_len, d) for d in range(params.e_d + 1)
    )
    return params.m * per_strand


def oracle_balls_intersect(
    z1: Message,
    z2: Message,
    params: SystemParams,
    cap: int = DEFAULT_SPACE_CAP,
) -> bool:
    """Ground truth for ball intersection, by exhaustive enumeration.

    Enumerates candidate pools over the pruned read universe and tests
    each with ``in_ball`` against both messages.  Exact, deterministic,
    and independent of the matching-based decision procedures.
    """
    _check_shape(z1, params)
    _check_shape(z2, params)
    if z1 == z2:
        return True

    bound = _neighborhood_size_bound(params)
    if bound > cap:
        raise SpaceTooLarge(bound, cap, what="read universe")
    shared = read_neighborhood(z1, params) & read_neighborhood(z2, params)
    universe = sorted(shared)

    base: Counter[int] = Counter()
    forced = params.k - params.tau_budget
    if forced > 0:
        for v in {s.bits for s in z1.strands} | {s.bits for s in z2.strands}:
            # every strand keeps >= K - floor(tau*K) exact copies, and all
            # reads of a common pool lie in the pruned universe
            if v not in shared:
                return False
            base[v] = forced
    remaining = params.pool_size - sum(base.values())
    if remaining < 0:
        return False

    count = math.comb(len(universe) + remaining - 1, remaining) if universe else (
        1 if remaining == 0 else 0
    )
    if count > cap:
        raise SpaceTooLarge(count, cap, what="candidate pools")

    for extra in combinations_with_replacement(universe, remaining):
        candidate = base + Counter(extra)
        pool = ReadPool(params.length, tuple(candidate.items()))
        if in_ball(pool, z1, params) and in_ball(pool, z2, params):
            return True
    return False


def _check_shape(z: Message, params: SystemParams) -> None:
    if z.m != params.m or z.length != params.length or z.index_len != params.index_len:
        raise ShapeMismatch(
            f"message shape (M={z.m},L={z.length},l={z.index_len}) does not match "
            f"params (M={params.m},L={params.length},l={params.index_len})"
        )
