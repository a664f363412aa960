"""Truth-table Boolean functions on F2^n.

Tables are bit-packed integers: the entry for input x sits at index
sum(x_j * 2^(j-1)), i.e. coordinate 1 is the least significant bit of the
index.  Functions serialize one per line as
``bf:v1 n=<arity> tt=<hex>`` with table entry 0 in the least significant
bit of the hex value.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .f2linalg import INCONSISTENT, AffineSystem, F2Vector, WidthMismatchError, merge, rref

MAX_ARITY = 20


class ArityLimitError(ValueError):
    """Requested function would exceed the supported arity cap."""


class FormatError(ValueError):
    """Malformed function line; carries 1-based line and column."""

    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class BooleanFunction:
    """A total function F2^arity -> F2 as a packed truth table."""

    arity: int
    table: int

    def __post_init__(self):
        if not 0 <= self.arity <= MAX_ARITY:
            raise ArityLimitError(f"arity {self.arity} outside 0..{MAX_ARITY}")
        if not 0 <= self.table < (1 << (1 << self.arity)):
            raise ValueError("table does not fit 2^arity bits")

    @classmethod
    def from_bits(cls, arity: int, bits: Iterable[int]) -> "BooleanFunction":
        table = 0
        count = 0
        for i, b in enumerate(bits):
            table |= (int(b) & 1) << i
            count += 1
        if count != 1 << arity:
            raise ValueError(f"expected {1 << arity} bits, got {count}")
        return cls(arity, table)

    @classmethod
    def from_callable(cls, arity: int, fn: Callable[[tuple[int, ...]], int]) -> "BooleanFunction":
        """Build from a callable taking the tuple (x_1, ..., x_n)."""
        bits = (
            fn(tuple((idx >> j) & 1 for j in range(arity))) for idx in range(1 << arity)
        )
        return cls.from_bits(arity, bits)

    def value_at(self, index: int) -> int:
        return (self.table >> index) & 1

    def evaluate(self, x: F2Vector) -> int:
        if x.width != self.arity:
            raise WidthMismatchError(f"input width {x.width} != arity {self.arity}")
        return self.value_at(x.bits)

    @property
    def ones(self) -> int:
        return self.table.bit_count()

    @property
    def is_constant(self) -> bool:
        return self.table == 0 or self.table == (1 << (1 << self.arity)) - 1

    def bit_array(self) -> np.ndarray:
        """Truth table as a uint8 array of length 2^arity."""
        return _bit_array(self.arity, self.table).copy()

    def to_line(self) -> str:
        digits = max(1, -(-(1 << self.arity) // 4))
        return f"bf:v1 n={self.arity} tt={self.table:0{digits}x}"

    def content_id(self) -> str:
        return hashlib.sha256(self.to_line().encode()).hexdigest()

    def __repr__(self) -> str:
        return f"BooleanFunction(arity={self.arity}, table=0x{self.table:x})"


@lru_cache(maxsize=128)
def _bit_array(arity: int, table: int) -> np.ndarray:
    size = 1 << arity
    raw = table.to_bytes(max(1, -(-size // 8)), "little")
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
    out = bits[:size].copy()
    out.setflags(write=False)
    return out


def _pack_bits(bits: np.ndarray) -> int:
    packed = np.packbits(bits.astype(np.uint8), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


LINE_RE = re.compile(r"^bf:v1 n=(\d+) tt=([0-9a-f]+)$")


def parse_function_line(text: str, lineno: int = 1) -> BooleanFunction:
    """Parse one ``bf:v1`` line, reporting the column of the first defect."""
    line = text.rstrip("\n")
    if not line.startswith("bf:v1 "):
        raise FormatError("expected 'bf:v1 ' prefix", lineno, 1)
    m = re.match(r"^bf:v1 n=(\d+) ", line)
    if not m:
        raise FormatError("expected 'n=<arity>' field", lineno, 7)
    arity = int(m.group(1))
    tt_col = m.end() + 1
    if arity == 0:
        raise FormatError("arity 0 functions are not accepted", lineno, 9)
    if arity > MAX_ARITY:
        raise FormatError(f"arity {arity} exceeds cap {MAX_ARITY}", lineno, 9)
    m2 = LINE_RE.match(line)
    if not m2:
        raise FormatError("expected 'tt=<lowercase hex>' field", lineno, tt_col)
    digits = max(1, -(-(1 << arity) // 4))
    tt = m2.group(2)
    if len(tt) != digits:
        raise FormatError(
            f"table must have exactly {digits} hex digits, got {len(tt)}", lineno, tt_col + 3
        )
    table = int(tt, 16)
    if table >= (1 << (1 << arity)):
        raise FormatError("table has bits beyond 2^arity", lineno, tt_col + 3)
    return BooleanFunction(arity, table)


def parse_function_file(text: str) -> list[BooleanFunction]:
    out = []
    for i, line in enumerate(text.splitlines(), start=1):
        if line.strip():
            out.append(parse_function_line(line, i))
    return out


def evaluate(f: BooleanFunction, x: F2Vector) -> int:
    return f.evaluate(x)


def compose(f: BooleanFunction, inners: Sequence[BooleanFunction]) -> BooleanFunction:
    """Block composition: slot i of f reads inners[i] on its own block.

    Blocks are contiguous, block 1 in the lowest-index coordinates.
    """
    if len(inners) != f.arity:
        raise ValueError(f"need {f.arity} inner functions, got {len(inners)}")
    total = sum(g.arity for g in inners)
    if total > MAX_ARITY:
        raise ArityLimitError(f"composed arity {total} exceeds cap {MAX_ARITY}")
    y = np.arange(1 << total, dtype=np.int64)
    outer_idx = np.zeros_like(y)
    offset = 0
    for slot, g in enumerate(inners):
        block = (y >> offset) & ((1 << g.arity) - 1)
        outer_idx |= _bit_array(g.arity, g.table)[block].astype(np.int64) << slot
        offset += g.arity
    values = _bit_array(f.arity, f.table)[outer_idx]
    return BooleanFunction(total, _pack_bits(values))


def power(f: BooleanFunction, k: int) -> BooleanFunction:
    """k-fold self-composition; arity n^k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if f.arity ** k > MAX_ARITY:
        raise ArityLimitError(f"arity {f.arity}^{k} exceeds cap {MAX_ARITY}")
    out = f
    for _ in range(k - 1):
        out = compose(f, [out] * f.arity)
    return out


@dataclass(frozen=True)
class RestrictedFunction:
    """A function restricted to an affine subspace, as a quotient table.

    The quotient reads the free coordinates of the system in ascending
    column order; pivot coordinates are solved from the constraints.
    """

    base: BooleanFunction
    system: AffineSystem
    quotient: BooleanFunction

    @property
    def quotient_arity(self) -> int:
        return self.quotient.arity

    @property
    def table(self) -> int:
        return self.quotient.table

    @property
    def is_constant(self) -> bool:
        return self.quotient.is_constant

    def constant_value(self) -> int:
        if not self.is_constant:
            raise ValueError("restriction is not constant")
        return self.quotient.table & 1


def restrict(f: BooleanFunction, system: AffineSystem) -> RestrictedFunction:
    if not system.canonical:
        raise ValueError("restrict requires a canonical system")
    if system.ambient != f.arity:
        raise WidthMismatchError(f"ambient {system.ambient} != arity {f.arity}")
    free = system.free_columns()
    piv = system.pivots()
    m = len(free)
    y = np.arange(1 << m, dtype=np.int64)
    idx = np.zeros_like(y)
    for j, c in enumerate(free):
        idx |= ((y >> j) & 1) << (c - 1)
    for p, row, s in zip(piv, system.rows, system.rhs):
        par = np.full_like(y, s)
        for j, c in enumerate(free):
            if (row.bits >> (c - 1)) & 1:
                par ^= (y >> j) & 1
        idx |= par << (p - 1)
    values = _bit_array(f.arity, f.table)[idx]
    return RestrictedFunction(f, system, BooleanFunction(m, _pack_bits(values)))


def restrict_further(rf: RestrictedFunction, extra: AffineSystem) -> RestrictedFunction:
    """Restrict again by constraints over the original ambient space."""
    merged = merge(rf.system, extra)
    if merged is INCONSISTENT:
        raise ValueError("additional constraints contradict the restriction")
    return restrict(rf.base, merged)


def is_parity(f: BooleanFunction) -> int:
    """1 iff f(x) = <a, x> xor b for some a (possibly zero) and bit b.

    Equivalently the Fourier support has exactly one element; constants
    count (a = 0).
    """
    if f.arity == 0:
        return 1
    b = f.table & 1
    alpha = 0
    for i in range(f.arity):
        alpha |= (f.value_at(1 << i) ^ b) << i
    x = np.arange(1 << f.arity, dtype=np.int64)
    pred = np.full_like(x, b)
    for i in range(f.arity):
        if (alpha >> i) & 1:
            pred ^= (x >> i) & 1
    return int(_pack_bits(pred) == f.table)


# --- named families -------------------------------------------------------

def sort4() -> BooleanFunction:
    """1 iff the four input bits are non-increasing or non-decreasing."""

    def fn(x):
        return int(
            all(x[i] >= x[i + 1] for i in range(3)) or all(x[i] <= x[i + 1] for i in range(3))
        )

    return BooleanFunction.from_callable(4, fn)


# Facet triples of the weight-3 layer, matching the degree-3 terms of the
# hemi-icosahedron's multilinear expansion.
HI_FACETS = (
    (1, 2, 3),
    (1, 2, 4),
    (1, 3, 6),
    (1, 4, 5),
    (1, 5, 6),
    (2, 3, 5),
    (2, 4, 6),
    (2, 5, 6),
    (3, 4, 5),
    (3, 4, 6),
)


def hemi_icosahedron() -> BooleanFunction:
    """Kushilevitz's 6-bit function: weight rule plus ten weight-3 facets."""
    facet_masks = {sum(1 << (c - 1) for c in t) for t in HI_FACETS}

    def fn(x):
        w = sum(x)
        if w in (1, 2, 6):
            return 1
        if w in (0, 4, 5):
            return 0
        mask = sum(b << j for j, b in enumerate(x))
        return int(mask in facet_masks)

    return BooleanFunction.from_callable(6, fn)


def parity_fn(alpha: F2Vector, b: int = 0) -> BooleanFunction:
    def fn(x):
        acc = b
        for c in alpha.support():
            acc ^= x[c - 1]
        return acc

    return BooleanFunction.from_callable(alpha.width, fn)


def identity1() -> BooleanFunction:
    return parity_fn(F2Vector(1, 1), 0)


def and2() -> BooleanFunction:
    return BooleanFunction.from_callable(2, lambda x: x[0] & x[1])


def or2() -> BooleanFunction:
    return BooleanFunction.from_callable(2, lambda x: x[0] | x[1])


def xor2() -> BooleanFunction:
    return BooleanFunction.from_callable(2, lambda x: x[0] ^ x[1])


def maj3() -> BooleanFunction:
    return BooleanFunction.from_callable(3, lambda x: int(sum(x) >= 2))


def nae3() -> BooleanFunction:
    """1 iff the three input bits are not all equal."""
    return BooleanFunction.from_callable(3, lambda x: int(len(set(x)) > 1))


def constant(b: int, n: int) -> BooleanFunction:
    if n < 0 or n > MAX_ARITY:
        raise ArityLimitError(f"arity {n} outside 0..{MAX_ARITY}")
    table = ((1 << (1 << n)) - 1) if b & 1 else 0
    return BooleanFunction(n, table)


def appendix_h(k: int) -> BooleanFunction:
    """The 2-bit-AND feeder family h_k over 2 * 6^k inputs."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if 2 * 6 ** k > MAX_ARITY:
        raise ArityLimitError(f"arity {2 * 6 ** k} exceeds cap {MAX_ARITY}")
    outer = power(hemi_icosahedron(), k)
    return compose(outer, [and2()] * (6 ** k))


def family(name: str, **params) -> BooleanFunction:
    """Construct a named family member; the CLI surface for builders."""
    key = name.replace("-", "_").lower()
    if key == "sort":
        return sort4()
    if key in ("hi", "hemi_icosahedron"):
        return hemi_icosahedron()
    if key == "parity":
        n = int(params["n"])
        alpha = int(params.get("alpha", 0))
        b = int(params.get("b", 0))
        return parity_fn(F2Vector(n, alpha), b)
    if key == "and2":
        return and2()
    if key == "or2":
        return or2()
    if key == "xor2":
        return xor2()
    if key == "maj3":
        return maj3()
    if key == "nae3":
        return nae3()
    if key == "constant":
        return constant(int(params.get("b", 0)), int(params["n"]))
    if key == "appendix_h":
        return appendix_h(int(params.get("k", 1)))
    raise ValueError(f"unknown family {name!r}")
