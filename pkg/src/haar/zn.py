"""Arithmetic in Z_n: subsets, the affine action x -> a*x + b, canonical forms, projections."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from itertools import combinations
from math import gcd
from typing import Iterable, Optional

from .config import MAX_MODULUS
from .errors import InvalidModulus, ModulusMismatch, NonUnit


def _check_modulus(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise InvalidModulus(f"modulus must be a positive integer, got {n!r}")
    if n > MAX_MODULUS:
        raise InvalidModulus(f"modulus {n} exceeds the configured cap {MAX_MODULUS}")


@dataclass(frozen=True, order=True)
class ZnSet:
    """A subset of Z_n, stored as a strictly increasing tuple of residues."""

    modulus: int
    elems: tuple[int, ...]

    def __post_init__(self):
        _check_modulus(self.modulus)
        prev = -1
        for e in self.elems:
            if not (0 <= e < self.modulus) or e <= prev:
                raise ValueError(f"elements must be strictly increasing residues mod {self.modulus}: {self.elems}")
            prev = e

    @classmethod
    def of(cls, n: int, elems: Iterable[int]) -> "ZnSet":
        """Reduce ``elems`` mod ``n`` and sort them; duplicates after reduction are rejected."""
        _check_modulus(n)
        reduced = [e % n for e in elems]
        if len(set(reduced)) != len(reduced):
            raise ValueError(f"repeated elements mod {n}: {list(elems)}")
        return cls(n, tuple(sorted(reduced)))

    @classmethod
    def parse(cls, text: str, n: Optional[int] = None) -> "ZnSet":
        """Parse ``"n:e1,e2,..."``, or a bare ``"e1,e2,..."`` when ``n`` is supplied."""
        text = text.strip()
        if ":" in text:
            head, _, body = text.partition(":")
            modulus = int(head)
            if n is not None and n != modulus:
                raise ModulusMismatch(f"set {text!r} is not over Z_{n}")
        elif n is None:
            raise ValueError(f"no modulus given for {text!r}")
        else:
            modulus, body = n, text
        items = [int(tok) for tok in body.replace(" ", "").split(",") if tok]
        return cls.of(modulus, items)

    def __str__(self) -> str:
        return f"{self.modulus}:" + ",".join(map(str, self.elems))

    def __len__(self) -> int:
        return len(self.elems)

    def __iter__(self):
        return iter(self.elems)

    def __contains__(self, x: int) -> bool:
        return x % self.modulus in self.elems

    def shift(self, b: int) -> "ZnSet":
        return ZnSet.of(self.modulus, (e + b for e in self.elems))

    def differences(self) -> list[int]:
        """The difference set S - S as a sorted list."""
        n = self.modulus
        return sorted({(a - b) % n for a in self.elems for b in self.elems})

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "elems": list(self.elems)}


@dataclass(frozen=True, order=True)
class AffineWitness:
    """The map x -> a*x + b; ``a`` must be a unit of the modulus it is applied in."""

    a: int
    b: int

    def inverse(self, n: int) -> "AffineWitness":
        ai = pow(self.a, -1, n)
        return AffineWitness(ai, (-ai * self.b) % n)

    def then(self, other: "AffineWitness", n: int) -> "AffineWitness":
        """Composite map: apply ``self`` first, then ``other``."""
        return AffineWitness((other.a * self.a) % n, (other.a * self.b + other.b) % n)

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b}


@lru_cache(maxsize=None)
def _units(n: int) -> tuple[int, ...]:
    return tuple(a for a in range(1, n) if gcd(a, n) == 1)


def units(n: int) -> list[int]:
    """The units of Z_n in ascending order.  n = 1 is rejected as degenerate."""
    _check_modulus(n)
    if n < 2:
        raise InvalidModulus("Z_1 has no meaningful unit group")
    return list(_units(n))


def is_unit(a: int, n: int) -> bool:
    return gcd(a % n, n) == 1 and n > 1


def apply_affine(S: ZnSet, w: AffineWitness) -> ZnSet:
    n = S.modulus
    if not is_unit(w.a, n):
        raise NonUnit(f"{w.a} is not a unit mod {n}")
    return ZnSet(n, tuple(sorted((w.a * s + w.b) % n for s in S.elems)))


def affinely_equivalent(S: ZnSet, T: ZnSet) -> Optional[AffineWitness]:
    """Lexicographically least (a, b) with a*S + b = T, or None."""
    if S.modulus != T.modulus:
        raise ModulusMismatch(f"{S} and {T} live in different groups")
    n = S.modulus
    if len(S) != len(T):
        return None
    if not S.elems:
        return AffineWitness(1, 0)
    target = T.elems
    s0 = S.elems[0]
    for a in _units(n) if n > 1 else (0,):
        # b is pinned down by where s0 lands
        for b in sorted({(t - a * s0) % n for t in target}):
            if tuple(sorted((a * s + b) % n for s in S.elems)) == target:
                return AffineWitness(a, b)
    return None


def canonical_affine_form(S: ZnSet) -> tuple[ZnSet, AffineWitness]:
    """Least sorted image of S under the affine group, with the least (a, b) reaching it."""
    n = S.modulus
    if not S.elems:
        return S, AffineWitness(1, 0)
    if n == 1:
        return S, AffineWitness(0, 0)
    best = None
    for a in _units(n):
        for s in S.elems:
            # the minimum always contains 0, so only these translations can reach it
            b = (-a * s) % n
            img = tuple(sorted((a * x + b) % n for x in S.elems))
            key = (img, a, b)
            if best is None or key < best:
                best = key
    img, a, b = best
    return ZnSet(n, img), AffineWitness(a, b)


def canonical_multiplier_form(S: ZnSet) -> tuple[ZnSet, int]:
    """Least sorted image of S under x -> a*x (a a unit), with the least such a."""
    n = S.modulus
    if n == 1:
        return S, 0
    best = min((tuple(sorted((a * x) % n for x in S.elems)), a) for a in _units(n))
    return ZnSet(n, best[0]), best[1]


def project(S: ZnSet, ell: int) -> ZnSet:
    """Image of S under the reduction Z_n -> Z_ell (duplicates collapse)."""
    n = S.modulus
    if ell < 1 or n % ell:
        raise InvalidModulus(f"{ell} does not divide {n}")
    return ZnSet(ell, tuple(sorted({s % ell for s in S.elems})))


def subgroup_index(gens: Iterable[int], n: int) -> int:
    """Order of the subgroup of Z_n generated by ``gens``."""
    _check_modulus(n)
    return n // reduce(gcd, (g % n for g in gens), n)


def generates(gens: Iterable[int], n: int) -> bool:
    return subgroup_index(gens, n) == n


def element_order(x: int, n: int) -> int:
    return n // gcd(x % n, n)


@lru_cache(maxsize=None)
def _affine_classes(n: int, k: int) -> tuple[ZnSet, ...]:
    if k == 0:
        return (ZnSet(n, ()),)
    seen = set()
    for rest in combinations(range(1, n), k - 1):
        S = ZnSet(n, (0,) + rest)
        seen.add(canonical_affine_form(S)[0])
    return tuple(sorted(seen))


def affine_classes(n: int, k: int) -> list[ZnSet]:
    """Canonical representatives of all k-subsets of Z_n up to affine equivalence, sorted."""
    _check_modulus(n)
    if not 0 <= k <= n:
        raise ValueError(f"subset size {k} impossible in Z_{n}")
    return list(_affine_classes(n, k))


@lru_cache(maxsize=None)
def _multiplier_classes(n: int, k: int) -> tuple[ZnSet, ...]:
    seen = {canonical_multiplier_form(ZnSet(n, c))[0] for c in combinations(range(n), k)}
    return tuple(sorted(seen))


def multiplier_classes(n: int, k: int) -> list[ZnSet]:
    """Canonical representatives of k-subsets of Z_n up to multiplication by units."""
    _check_modulus(n)
    if not 0 <= k <= n:
        raise ValueError(f"subset size {k} impossible in Z_{n}")
    return list(_multiplier_classes(n, k))
