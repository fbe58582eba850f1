"""Free graded modules, homogeneous maps, Koszul-signed tensor products and shifts.

Maps act on the right of their arguments and scalars are written on the left,
so ``f @ g`` (first f, then g) is a plain matrix product. Signs are introduced
in exactly two places: :func:`tensor_map` and :func:`shift_map`.
"""

import logging
import math
from functools import lru_cache
from itertools import product
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from .exceptions import PositionOutOfRange, RingMismatch, ShapeMismatch
from .gring import RingDescriptor

logger = logging.getLogger(__name__)

Row = Dict[int, int]


class GradedModule(BaseModel):
    """
    A finitely generated free graded module with a fixed ordered basis.

    A base module lists its generator degrees in ``gens``. A tensor product lists its
    base ``factors``; its basis is the lexicographic product of theirs. Factors equal
    to the ground ring (a single generator of degree 0) are dropped, so ``k (x) M == M``.

    Attributes:
        ring (RingDescriptor): The base ring.
        gens (Tuple[int, ...]): Generator degrees of a base module.
        factors (Tuple[GradedModule, ...]): Base factors of a tensor product (empty for base modules).

    Example:
        A = GradedModule(ring=RingDescriptor.parse('prime_field:7'), gens=(0, 1, 2))
        AA = tensor_module(A, A)
    """

    model_config = ConfigDict(frozen=True)

    ring: RingDescriptor
    gens: Tuple[int, ...] = ()
    factors: Tuple["GradedModule", ...] = ()

    @model_validator(mode="after")
    def validate_shape(self) -> "GradedModule":
        if self.factors:
            if self.gens:
                raise ValueError("a tensor module takes factors, not gens")
            if len(self.factors) < 2:
                raise ValueError("a tensor module needs at least two factors")
            for factor in self.factors:
                if factor.factors:
                    raise ValueError("tensor factors must be base modules")
                if factor.ring != self.ring:
                    raise ValueError("tensor factors must share the ring")
        return self

    @property
    def rank(self) -> int:
        return _rank(self)

    def degrees(self) -> Tuple[int, ...]:
        """All basis degrees; only sensible for modest ranks."""
        return _degree_table(self)

    def degree(self, i: int) -> int:
        return self.degree_fn()(i)

    def degree_fn(self) -> Callable[[int], int]:
        """Degree lookup, tabulated for modest ranks and computed per index otherwise."""
        return _degree_fn(self)

    def parts(self) -> Tuple["GradedModule", ...]:
        """Base factors, a base module being its own single factor."""
        return self.factors if self.factors else (self,)

    def is_ground(self) -> bool:
        return not self.factors and self.gens == (0,)

    def split(self, index: int) -> Tuple[int, ...]:
        """Mixed-radix decomposition of a basis index into per-factor indices."""
        out = []
        for factor in reversed(self.parts()):
            index, r = divmod(index, factor.rank)
            out.append(r)
        return tuple(reversed(out))

    def join(self, multi: Sequence[int]) -> int:
        index = 0
        for factor, r in zip(self.parts(), multi):
            index = index * factor.rank + r
        return index


GradedModule.model_rebuild()


_TABLE_LIMIT = 1 << 16


@lru_cache(maxsize=4096)
def _rank(module: GradedModule) -> int:
    return math.prod(len(f.gens) for f in module.parts())


@lru_cache(maxsize=4096)
def _degree_fn(module: GradedModule) -> Callable[[int], int]:
    if module.rank <= _TABLE_LIMIT:
        return _degree_table(module).__getitem__
    radices = [(len(f.gens), f.gens) for f in reversed(module.parts())]

    def lookup(index: int) -> int:
        total = 0
        for size, gens in radices:
            index, r = divmod(index, size)
            total += gens[r]
        return total

    return lookup


@lru_cache(maxsize=4096)
def _degree_table(module: GradedModule) -> Tuple[int, ...]:
    if not module.factors:
        return tuple(module.gens)
    table: Tuple[int, ...] = (0,)
    for factor in module.factors:
        table = tuple(a + b for a in table for b in factor.gens)
    return table


def base_module(ring: RingDescriptor, gens: Iterable[int]) -> GradedModule:
    return GradedModule(ring=ring, gens=tuple(gens))


def ground_module(ring: RingDescriptor) -> GradedModule:
    """The ground ring as a rank-one module in degree 0."""
    return GradedModule(ring=ring, gens=(0,))


def tensor_module(M: GradedModule, N: GradedModule) -> GradedModule:
    """Tensor product with lexicographic basis, dropping ground factors."""
    if M.ring != N.ring:
        raise RingMismatch(f"cannot tensor modules over {M.ring.label()} and {N.ring.label()}")
    parts = [f for f in M.parts() + N.parts() if not f.is_ground()]
    if not parts:
        return ground_module(M.ring)
    if len(parts) == 1:
        return parts[0]
    return GradedModule(ring=M.ring, factors=tuple(parts))


def tensor_power_module(M: GradedModule, n: int) -> GradedModule:
    out = ground_module(M.ring)
    for _ in range(n):
        out = tensor_module(out, M)
    return out


def shift_module(M: GradedModule, a: int) -> GradedModule:
    """M[a], with M[a]^k = M^{a+k}: every generator degree drops by a."""
    return GradedModule(ring=M.ring, gens=tuple(M.degree(i) - a for i in range(M.rank)))


def dual_module(M: GradedModule) -> GradedModule:
    if M.factors:
        return GradedModule(ring=M.ring, factors=tuple(dual_module(f) for f in M.factors))
    return GradedModule(ring=M.ring, gens=tuple(-d for d in M.gens))


class GradedMap:
    """A homogeneous linear map between free graded modules.

    Rows are sparse dicts ``{column: coefficient}``; the ring degree of an entry is
    implied by ``dom.degree(i) + deg - cod.degree(j)``. Rows are either given
    explicitly or produced on demand by ``row_fn`` and cached.

    Attributes:
        dom (GradedModule): Domain.
        cod (GradedModule): Codomain.
        deg (int): Degree of the map.
        support (Optional[List[int]]): Rows known to hold every nonzero entry, used when
            enumerating entries of maps with very large domains.
        overflow (Dict[Tuple[int, int], int]): Terms dropped by truncation, keyed by
            (input word length, output word length).
    """

    def __init__(
        self,
        dom: GradedModule,
        cod: GradedModule,
        deg: int,
        rows: Optional[Dict[int, Row]] = None,
        row_fn: Optional[Callable[[int], Row]] = None,
        support: Optional[Iterable[int]] = None,
    ):
        if dom.ring != cod.ring:
            raise RingMismatch(f"map between modules over {dom.ring.label()} and {cod.ring.label()}")
        self.dom = dom
        self.cod = cod
        self.deg = deg
        self.ring = dom.ring
        self._dom_deg = dom.degree_fn()
        self._cod_deg = cod.degree_fn()
        self._row_fn = row_fn
        self._rows: Dict[int, Row] = {}
        self.support = sorted(set(support)) if support is not None else None
        self.overflow: Dict[Tuple[int, int], int] = {}
        if rows is not None:
            for i, row in rows.items():
                clean = self._clean(row)
                self._check_row(i, clean)
                if clean:
                    self._rows[i] = clean
            if self.support is None:
                self.support = sorted(self._rows)

    def __repr__(self) -> str:
        return f"GradedMap(rank {self.dom.rank} -> rank {self.cod.rank}, deg {self.deg})"

    def _clean(self, row: Row) -> Row:
        reduce = self.ring.reduce
        out = {}
        for j, c in row.items():
            c = reduce(c)
            if c:
                out[j] = c
        return out

    def _check_row(self, i: int, row: Row):
        if not 0 <= i < self.dom.rank:
            raise ShapeMismatch(f"row {i} outside domain of rank {self.dom.rank}")
        for j in row:
            if not 0 <= j < self.cod.rank:
                raise ShapeMismatch(f"column {j} outside codomain of rank {self.cod.rank}")
            ring_deg = self._dom_deg(i) + self.deg - self._cod_deg(j)
            if not self.ring.realizable(ring_deg):
                raise ShapeMismatch(f"entry ({i}, {j}) would need ring degree {ring_deg}")

    def entry_degree(self, i: int, j: int) -> int:
        return self._dom_deg(i) + self.deg - self._cod_deg(j)

    def row(self, i: int) -> Row:
        cached = self._rows.get(i)
        if cached is not None:
            return cached
        if self._row_fn is None:
            return {}
        row = self._clean(self._row_fn(i))
        self._rows[i] = row
        return row

    def entry(self, i: int, j: int) -> int:
        return self.row(i).get(j, 0)

    def entries(self) -> List[Tuple[int, int, int]]:
        """Sorted nonzero triplets ``(row, column, coefficient)`` over the support."""
        rows = self.support if self.support is not None else range(self.dom.rank)
        out = []
        for i in rows:
            for j, c in sorted(self.row(i).items()):
                out.append((i, j, c))
        return out

    def materialize(self) -> "GradedMap":
        rows = self.support if self.support is not None else range(self.dom.rank)
        return GradedMap(self.dom, self.cod, self.deg, rows={i: dict(self.row(i)) for i in rows})

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        return compose(self, other)

    def __add__(self, other: "GradedMap") -> "GradedMap":
        return add_maps(self, other)

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        return add_maps(self, other.scale(-1))

    def __neg__(self) -> "GradedMap":
        return self.scale(-1)

    def scale(self, k: int) -> "GradedMap":
        out = GradedMap(
            self.dom,
            self.cod,
            self.deg,
            row_fn=lambda i: {j: k * c for j, c in self.row(i).items()},
            support=self.support,
        )
        out.overflow = dict(self.overflow)
        return out


def identity(M: GradedModule) -> GradedMap:
    return GradedMap(M, M, 0, row_fn=lambda i: {i: 1})


def zero(dom: GradedModule, cod: GradedModule, deg: int) -> GradedMap:
    return GradedMap(dom, cod, deg, rows={})


def from_entries(dom: GradedModule, cod: GradedModule, deg: int, entries: Iterable[Tuple[int, int, int]]) -> GradedMap:
    rows: Dict[int, Row] = {}
    for i, j, c in entries:
        row = rows.setdefault(i, {})
        row[j] = row.get(j, 0) + c
    return GradedMap(dom, cod, deg, rows=rows)


def scalar_map(ring: RingDescriptor, coef: int, deg: int = 0) -> GradedMap:
    """Multiplication by the monomial ``coef`` of degree ``deg`` on the ground ring."""
    k = ground_module(ring)
    if coef and not ring.realizable(deg):
        raise ShapeMismatch(f"no ring element of degree {deg} in {ring.label()}")
    return GradedMap(k, k, deg, rows={0: {0: coef}} if coef else {})


def _merge_overflow(*maps: GradedMap) -> Dict[Tuple[int, int], int]:
    out: Dict[Tuple[int, int], int] = {}
    for m in maps:
        for key, count in m.overflow.items():
            out[key] = out.get(key, 0) + count
    return out


def compose(f: GradedMap, g: GradedMap) -> GradedMap:
    """``f . g``: first f, then g; degrees add and no sign appears."""
    if f.ring != g.ring:
        raise RingMismatch("cannot compose maps over different rings")
    if f.cod != g.dom:
        raise ShapeMismatch(f"codomain of rank {f.cod.rank} does not match domain of rank {g.dom.rank}")
    ring = f.ring

    def row_fn(i: int) -> Row:
        out: Row = {}
        di = f._dom_deg(i)
        for j, c1 in f.row(i).items():
            d1 = di + f.deg - f._cod_deg(j)
            dj = g._dom_deg(j)
            for k, c2 in g.row(j).items():
                c = ring.mul(c1, d1, c2, dj + g.deg - g._cod_deg(k))
                if c:
                    out[k] = out.get(k, 0) + c
        return out

    out = GradedMap(f.dom, g.cod, f.deg + g.deg, row_fn=row_fn, support=f.support)
    out.overflow = _merge_overflow(f, g)
    return out


def add_maps(f: GradedMap, g: GradedMap) -> GradedMap:
    if f.dom != g.dom or f.cod != g.cod:
        raise ShapeMismatch("cannot add maps with different domains or codomains")
    if f.deg != g.deg:
        raise ShapeMismatch(f"cannot add maps of degrees {f.deg} and {g.deg}")

    def row_fn(i: int) -> Row:
        out = dict(f.row(i))
        for j, c in g.row(i).items():
            out[j] = out.get(j, 0) + c
        return out

    support = None
    if f.support is not None and g.support is not None:
        support = set(f.support) | set(g.support)
    out = GradedMap(f.dom, f.cod, f.deg, row_fn=row_fn, support=support)
    out.overflow = _merge_overflow(f, g)
    return out


def sum_maps(maps: Sequence[GradedMap], dom: GradedModule, cod: GradedModule, deg: int) -> GradedMap:
    out = zero(dom, cod, deg)
    for m in maps:
        out = add_maps(out, m)
    return out


def tensor_map(f: GradedMap, g: GradedMap) -> GradedMap:
    """f (x) g with the Koszul sign of the Koszul rule.

    For basis words e_i (x) e_j the entry towards e'_k (x) e'_l is
    ``(-1)^{|e_j| deg f + |g_jl| |e'_k|} f_ik g_jl``.
    """
    if f.ring != g.ring:
        raise RingMismatch("cannot tensor maps over different rings")
    ring = f.ring
    dom = tensor_module(f.dom, g.dom)
    cod = tensor_module(f.cod, g.cod)
    rg_dom = g.dom.rank
    rg_cod = g.cod.rank

    def row_fn(index: int) -> Row:
        i, j = divmod(index, rg_dom)
        out: Row = {}
        g_row = g.row(j)
        if not g_row:
            return out
        sign_y = (g._dom_deg(j) * f.deg) & 1
        di = f._dom_deg(i)
        dj = g._dom_deg(j)
        for k, c1 in f.row(i).items():
            ek = f._cod_deg(k)
            d1 = di + f.deg - ek
            for l, c2 in g_row.items():
                d2 = dj + g.deg - g._cod_deg(l)
                c = ring.mul(c1, d1, c2, d2)
                if c:
                    if sign_y ^ ((d2 * ek) & 1):
                        c = -c
                    col = k * rg_cod + l
                    out[col] = out.get(col, 0) + c
        return out

    support = None
    if f.support is not None and g.support is not None:
        support = [i * rg_dom + j for i in f.support for j in g.support]
    out = GradedMap(dom, cod, f.deg + g.deg, row_fn=row_fn, support=support)
    out.overflow = _merge_overflow(f, g)
    return out


def tensor_maps(maps: Sequence[GradedMap], ring: Optional[RingDescriptor] = None) -> GradedMap:
    """Left fold of :func:`tensor_map`; the empty product is the identity of the ground ring."""
    if not maps:
        if ring is None:
            raise ShapeMismatch("empty tensor product needs a ring")
        return identity(ground_module(ring))
    out = maps[0]
    for m in maps[1:]:
        out = tensor_map(out, m)
    return out


def tensor_power(f: GradedMap, n: int) -> GradedMap:
    return tensor_maps([f] * n, f.ring)


def sigma(M: GradedModule, a: int) -> GradedMap:
    """sigma^a: M -> M[a], the identity on elements, of degree -a."""
    return GradedMap(M, shift_module(M, a), -a, row_fn=lambda i: {i: 1})


def shift_map(f: GradedMap, a: int) -> GradedMap:
    """f[a] = (-1)^{a deg f} sigma^{-a} f sigma^a as a map dom[a] -> cod[a]."""
    sign = -1 if (a * f.deg) % 2 else 1
    return GradedMap(
        shift_module(f.dom, a),
        shift_module(f.cod, a),
        f.deg,
        row_fn=lambda i: {j: sign * c for j, c in f.row(i).items()},
        support=f.support,
    )


def invert_diagonal(f: GradedMap) -> GradedMap:
    """Inverse of a map with exactly one unit entry in each row and column, e.g. sigma^{(x)n}."""
    ring = f.ring
    if f.dom.rank != f.cod.rank:
        raise ShapeMismatch("only square monomial maps can be inverted")
    rows: Dict[int, Row] = {}
    for i in range(f.dom.rank):
        row = f.row(i)
        if len(row) != 1:
            raise ShapeMismatch(f"row {i} is not a single entry")
        (j, c), = row.items()
        inv = ring.inverse(c)
        if inv is None or f.entry_degree(i, j) != 0 or j in rows:
            raise ShapeMismatch(f"entry ({i}, {j}) is not an invertible degree-0 scalar")
        rows[j] = {i: inv}
    return GradedMap(f.cod, f.dom, -f.deg, rows=rows)


def transpose(f: GradedMap) -> GradedMap:
    """Transposed matrix between dual modules; (f (x) g)^T = (-1)^{deg f deg g} f^T (x) g^T."""
    rows: Dict[int, Row] = {}
    for i in range(f.dom.rank):
        for j, c in f.row(i).items():
            rows.setdefault(j, {})[i] = c
    return GradedMap(dual_module(f.cod), dual_module(f.dom), f.deg, rows=rows)


def drop_first(M: GradedModule) -> GradedMap:
    """Projection of a base module onto the span of all generators but the first."""
    tail = GradedModule(ring=M.ring, gens=M.degrees()[1:])
    return GradedMap(M, tail, 0, row_fn=lambda i: {i - 1: 1} if i > 0 else {})


def include_tail(M: GradedModule) -> GradedMap:
    """Inclusion of the span of all generators but the first."""
    tail = GradedModule(ring=M.ring, gens=M.degrees()[1:])
    return GradedMap(tail, M, 0, row_fn=lambda i: {i + 1: 1})


def maps_equal(f: GradedMap, g: GradedMap, rows: Optional[Iterable[int]] = None) -> Optional[Tuple[int, int]]:
    """Compare two maps row by row.

    Args:
        f: Left-hand map.
        g: Right-hand map.
        rows: Domain rows to compare; all rows when omitted.

    Returns:
        None when equal on the requested rows, else the first differing (row, column).
        A shape mismatch is reported as (-1, -1).
    """
    if f.dom != g.dom or f.cod != g.cod or f.deg != g.deg:
        return (-1, -1)
    reduce = f.ring.reduce
    for i in rows if rows is not None else range(f.dom.rank):
        a = f.row(i)
        b = g.row(i)
        for j in sorted(set(a) | set(b)):
            if reduce(a.get(j, 0) - b.get(j, 0)):
                return (i, j)
    return None


def koszul_sign_oracle(word_degrees: Sequence[int], operator_degrees: Sequence[int], positions: Sequence[int]) -> int:
    """Sign of applying operators at the given 1-based positions of a word, by transposition counting.

    The operators start to the right of the word, in order, and each moves left until it
    sits directly after its letter; every swap of two odd items contributes a factor -1.
    """
    n = len(word_degrees)
    if len(operator_degrees) != len(positions):
        raise PositionOutOfRange("one position per operator is required")
    for a, b in zip(positions, list(positions)[1:]):
        if b <= a:
            raise PositionOutOfRange(f"positions must increase strictly, got {list(positions)}")
    if positions and (positions[0] < 1 or positions[-1] > n):
        raise PositionOutOfRange(f"positions {list(positions)} outside word of length {n}")

    # items are (degree, is_operator, target)
    items: List[Tuple[int, bool, int]] = [(d, False, q + 1) for q, d in enumerate(word_degrees)]
    items += [(d, True, p) for d, p in zip(operator_degrees, positions)]
    swaps = 0
    for _, _, target in [it for it in items if it[1]]:
        idx = next(k for k, it in enumerate(items) if it[1] and it[2] == target)
        while True:
            left = items[idx - 1]
            if not left[1] and left[2] == target:
                break
            if (left[0] * items[idx][0]) % 2:
                swaps += 1
            items[idx - 1], items[idx] = items[idx], items[idx - 1]
            idx -= 1
    return -1 if swaps % 2 else 1


def basis_words(M: GradedModule) -> Iterable[Tuple[int, ...]]:
    return product(*(range(f.rank) for f in M.parts()))


def sigma_power_inverse(M: GradedModule, a: int, n: int) -> GradedMap:
    """(sigma^a)^{(x)n} inverted, i.e. (-1)^{a n(n-1)/2} (sigma^{-a})^{(x)n}: M[a]^{(x)n} -> M^{(x)n}."""
    back = sigma(shift_module(M, a), -a)
    sign = -1 if (a * n * (n - 1) // 2) % 2 else 1
    power = tensor_power(back, n)
    return power if sign == 1 else power.scale(-1)


def power_rows(M: GradedModule, n: int, window: Optional[Sequence[int]] = None) -> List[int]:
    """Basis indices of M^{(x)n} whose letters all lie in ``window``."""
    if n == 0 or M.is_ground():
        return [0]
    letters = list(window) if window is not None else list(range(M.rank))
    return [tensor_power_module(M, n).join(word) for word in product(letters, repeat=n)]
