"""Boolean-lattice combinatorics.

A configuration of ``n`` binary variables is stored as an integer whose bit
``j`` (least significant first) holds variable ``j``.  The same convention is
used by every module and by the file formats.  Configuration strings list the
variables left to right, so ``"100"`` means variable 0 is on.

Events are bitmasks over the ``2**n`` configurations: bit ``x`` of an event
mask is set when configuration ``x`` belongs to the event.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_UPSET_RANK = 6
MAX_BOX_RANK = 12


class RankError(ValueError):
    """Raised when a lattice is too large for an exhaustive computation."""


class Relation(enum.Enum):
    LESS = "less"
    GREATER = "greater"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class Configuration:
    n: int
    bits: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bits {self.bits:#x} do not fit in {self.n} variables")

    @classmethod
    def from_string(cls, s: str) -> "Configuration":
        bits = 0
        for j, ch in enumerate(s):
            if ch not in "01":
                raise ValueError(f"bad configuration string {s!r}")
            bits |= (ch == "1") << j
        return cls(len(s), bits)

    @property
    def rank(self) -> int:
        return self.bits.bit_count()

    def __getitem__(self, j: int) -> int:
        return (self.bits >> j) & 1

    def __str__(self) -> str:
        return config_str(self.bits, self.n)


def config_str(x: int, n: int) -> str:
    return "".join("1" if (x >> j) & 1 else "0" for j in range(n))


def parse_config(s: str) -> int:
    return Configuration.from_string(s).bits


def _coerce(x, n: int | None = None) -> tuple[int, int | None]:
    if isinstance(x, Configuration):
        return x.bits, x.n
    if isinstance(x, str):
        c = Configuration.from_string(x)
        return c.bits, c.n
    return int(x), n


def order_relation(x, y) -> tuple[Relation, bool]:
    """Compare two configurations coordinatewise.

    Returns the relation of ``x`` to ``y`` and whether one covers the other
    (comparable with rank difference exactly one).
    """
    xb, xn = _coerce(x)
    yb, yn = _coerce(y)
    if xn is not None and yn is not None and xn != yn:
        raise ValueError(f"configurations live on different lattices ({xn} vs {yn})")
    if xb == yb:
        return Relation.EQUAL, False
    meet = xb & yb
    if meet == xb:
        rel = Relation.LESS
    elif meet == yb:
        rel = Relation.GREATER
    else:
        return Relation.INCOMPARABLE, False
    return rel, (xb ^ yb).bit_count() == 1


@dataclass(frozen=True)
class EventSet:
    """An arbitrary event on the configuration space of ``n`` variables."""

    n: int
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> (1 << self.n):
            raise ValueError("event mask has members outside the lattice")

    @classmethod
    def from_configs(cls, n: int, configs: Iterable) -> "EventSet":
        mask = 0
        for c in configs:
            x, cn = _coerce(c, n)
            if cn is not None and cn != n:
                raise ValueError(f"configuration {c!r} is not on a rank-{n} lattice")
            if not 0 <= x < (1 << n):
                raise ValueError(f"configuration {x} outside the rank-{n} lattice")
            mask |= 1 << x
        return cls(n, mask)

    @classmethod
    def full(cls, n: int) -> "EventSet":
        return cls(n, (1 << (1 << n)) - 1)

    @classmethod
    def cylinder(cls, n: int, assignment: dict[int, int]) -> "EventSet":
        """The event ``{X_j = v for j, v in assignment}``."""
        care = sum(1 << j for j in assignment)
        want = sum(1 << j for j, v in assignment.items() if v)
        return cls.from_configs(n, (x for x in range(1 << n) if x & care == want))

    @property
    def members(self) -> frozenset[int]:
        return frozenset(self)

    def __iter__(self) -> Iterator[int]:
        m, x = self.mask, 0
        while m:
            if m & 1:
                yield x
            m >>= 1
            x += 1

    def __contains__(self, x) -> bool:
        xb, _ = _coerce(x)
        return bool((self.mask >> xb) & 1)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __and__(self, other: "EventSet") -> "EventSet":
        _same_rank(self, other)
        return EventSet(self.n, self.mask & other.mask)

    def __or__(self, other: "EventSet") -> "EventSet":
        _same_rank(self, other)
        return EventSet(self.n, self.mask | other.mask)

    def is_upset(self) -> bool:
        return is_upset_mask(self.mask, self.n)

    def indicator(self) -> np.ndarray:
        return mask_to_bool(self.mask, self.n)

    def __str__(self) -> str:
        return "{" + ", ".join(config_str(x, self.n) for x in self) + "}"


class UpSet(EventSet):
    """An upwardly closed event."""

    def __post_init__(self):
        super().__post_init__()
        if not is_upset_mask(self.mask, self.n):
            raise ValueError("event is not upwardly closed")

    def minimal_elements(self) -> list[int]:
        return sorted(_minimal_mask_elements(self.mask, self.n))


def _same_rank(a: EventSet, b: EventSet) -> None:
    if a.n != b.n:
        raise ValueError(f"events live on different lattices ({a.n} vs {b.n})")


def mask_to_bool(mask: int, n: int) -> np.ndarray:
    size = 1 << n
    raw = mask.to_bytes((size + 7) // 8, "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:size].astype(bool)


def bool_to_mask(ind) -> int:
    packed = np.packbits(np.asarray(ind, dtype=bool), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def is_upset_mask(mask: int, n: int) -> bool:
    for j in range(n):
        low = _half_mask(n, j, 0)
        # members with bit j off must have their j-neighbour inside
        if ((mask & low) << (1 << j)) & ~mask:
            return False
    return True


@lru_cache(maxsize=None)
def _half_mask(n: int, j: int, value: int) -> int:
    """Event mask of ``{X_j = value}``."""
    return sum(1 << x for x in range(1 << n) if ((x >> j) & 1) == value)


def _minimal_mask_elements(mask: int, n: int) -> Iterator[int]:
    covered = 0
    for j in range(n):
        covered |= (mask & _half_mask(n, j, 0)) << (1 << j)
    return iter(EventSet(n, mask & ~covered))


# ---------------------------------------------------------------------------
# up-set enumeration

_BYTE_REVERSE = np.array([int(f"{b:08b}"[::-1], 2) for b in range(256)], dtype=np.uint64)


def _bit_reverse(masks: np.ndarray, width: int) -> np.ndarray:
    out = np.zeros_like(masks)
    for k in range(8):
        byte = (masks >> np.uint64(8 * k)) & np.uint64(0xFF)
        out |= _BYTE_REVERSE[byte] << np.uint64(8 * (7 - k))
    return out >> np.uint64(64 - width)


def _minimal_masks(masks: np.ndarray, n: int) -> np.ndarray:
    covered = np.zeros_like(masks)
    for j in range(n):
        covered |= (masks & np.uint64(_half_mask(n, j, 0))) << np.uint64(1 << j)
    return masks & ~covered


@lru_cache(maxsize=None)
def upset_masks(n: int) -> np.ndarray:
    """All up-sets of the rank-``n`` lattice as ``uint64`` masks, canonically ordered.

    Order: by number of members, then by the list of minimal elements compared
    position by position (an exhausted list counts as larger).
    """
    if not 0 <= n <= MAX_UPSET_RANK:
        raise RankError(f"up-set enumeration supports 0 <= n <= {MAX_UPSET_RANK}, got {n}")
    masks = np.array([0, 1], dtype=np.uint64)
    for k in range(1, n + 1):
        # split on the top variable: lower half u0, upper half u1, with u0 inside u1
        shift = np.uint64(1 << (k - 1))
        pieces = []
        for u1 in masks:
            u0 = masks[(masks & ~u1) == 0]
            pieces.append(u0 | (u1 << shift))
        masks = np.concatenate(pieces)
    width = 1 << n
    key = _bit_reverse(_minimal_masks(masks, n), width)
    order = np.lexsort((~key, np.bitwise_count(masks)))
    masks = masks[order]
    masks.setflags(write=False)
    return masks


class UpSetFamily(Sequence):
    """Lazy sequence view of :func:`upset_masks` yielding :class:`UpSet` objects."""

    def __init__(self, n: int):
        self.n = n
        self.masks = upset_masks(n)

    def __len__(self) -> int:
        return len(self.masks)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [UpSet(self.n, int(m)) for m in self.masks[i]]
        return UpSet(self.n, int(self.masks[i]))


def enumerate_upsets(n: int) -> UpSetFamily:
    """Every up-set of the rank-``n`` lattice exactly once (``n <= 6``)."""
    return UpSetFamily(n)


@lru_cache(maxsize=None)
def upset_matrix(n: int, nontrivial: bool = True) -> np.ndarray:
    """Membership matrix (up-sets x configurations) for ``n <= 5``.

    With ``nontrivial`` the empty and full events are dropped; they never
    witness a strict correlation inequality.
    """
    if n > 5:
        raise RankError("dense membership matrices are limited to n <= 5")
    masks = upset_masks(n)
    if nontrivial:
        full = np.uint64((1 << (1 << n)) - 1) if n < 6 else np.uint64(2**64 - 1)
        masks = masks[(masks != 0) & (masks != full)]
    size = 1 << n
    bits = (masks[:, None] >> np.arange(size, dtype=np.uint64)[None, :]) & np.uint64(1)
    mat = bits.astype(np.int64)
    mat.setflags(write=False)
    return mat


def upset_masses(weights: np.ndarray, n: int, masks: np.ndarray | None = None) -> np.ndarray:
    """Mass of every up-set under each row of ``weights`` (shape ``(..., 2**n)``).

    Works for integer, float and object arrays; rows need not be normalized.
    """
    if masks is None:
        masks = upset_masks(n)
    weights = np.asarray(weights)
    size = 1 << n
    out = None
    for k in range(0, size, 8):
        chunk = weights[..., k : k + 8]
        width = chunk.shape[-1]
        subsets = np.arange(1 << width)
        sel = ((subsets[:, None] >> np.arange(width)[None, :]) & 1).astype(weights.dtype)
        table = chunk @ sel.T  # (..., 2**width)
        byte = ((masks >> np.uint64(k)) & np.uint64((1 << width) - 1)).astype(np.intp)
        part = table[..., byte]
        out = part if out is None else out + part
    return out


# ---------------------------------------------------------------------------
# disjoint occurrence


def _cylinder_containment(ind: np.ndarray, n: int) -> np.ndarray:
    """For every cylinder, whether it lies inside the event.

    Cylinders are coded in base 3: digit ``j`` is the fixed value of variable
    ``j`` or 2 when the variable is free.
    """
    arr = ind.reshape((2,) * n) if n else ind.reshape(())
    for axis in range(n):
        both = np.logical_and(np.take(arr, 0, axis=axis), np.take(arr, 1, axis=axis))
        arr = np.concatenate([arr, np.expand_dims(both, axis)], axis=axis)
    # axis k of the C-ordered array is variable n-1-k, so the flat index is
    # sum_j digit_j 3**j as required
    return arr.reshape(-1)


@lru_cache(maxsize=None)
def _ternary_codes(n: int) -> np.ndarray:
    x = np.arange(1 << n)
    codes = np.zeros(1 << n, dtype=np.int64)
    for j in range(n):
        codes += ((x >> j) & 1) * 3**j
    return codes


def box_product(a: EventSet, b: EventSet) -> EventSet:
    """Configurations where ``a`` and ``b`` occur on disjoint sets of coordinates.

    ``x`` belongs to the result when there are disjoint index sets S, T such
    that every configuration agreeing with ``x`` on S lies in ``a`` and every
    configuration agreeing with ``x`` on T lies in ``b``.  Witness sets are
    tried in order of increasing size; since the set of valid T is closed
    upwards it suffices to take T as the complement of S.
    """
    _same_rank(a, b)
    n = a.n
    if n > MAX_BOX_RANK:
        raise RankError(f"box product supports n <= {MAX_BOX_RANK}, got {n}")
    cont_a = _cylinder_containment(a.indicator(), n)
    cont_b = _cylinder_containment(b.indicator(), n)
    tern = _ternary_codes(n)
    full = (1 << n) - 1
    x = np.arange(1 << n)
    pending = a.indicator() & b.indicator()
    found = np.zeros(1 << n, dtype=bool)
    free_code = [sum(2 * 3**j for j in range(n) if not (s >> j) & 1) for s in range(1 << n)]
    for s in sorted(range(1 << n), key=lambda s: (s.bit_count(), s)):
        idx = np.flatnonzero(pending)
        if idx.size == 0:
            break
        t = full & ~s
        ok = cont_a[free_code[s] + tern[x[idx] & s]] & cont_b[free_code[t] + tern[x[idx] & t]]
        hit = idx[ok]
        found[hit] = True
        pending[hit] = False
    return EventSet(n, bool_to_mask(found))
