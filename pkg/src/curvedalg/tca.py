"""Truncated tensor (co)algebras on a letter module.

A :class:`WordModule` is the direct sum of X^{(x)n} for 0 <= n <= cap, laid out as
one base module whose basis lists the words by length and then lexicographically.
Structure maps are built lazily from their components; terms whose word length
would exceed the cap are recorded on the map's ``overflow`` (or raise
:class:`~curvedalg.exceptions.CapOverflow` in strict mode).
"""

import logging
from functools import lru_cache
from itertools import product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, field_validator

from .exceptions import CapOverflow, NonzeroArityZero, NotConilpotentUpToCap, ShapeMismatch
from .gmod import (
    GradedMap,
    GradedModule,
    Row,
    identity,
    tensor_map,
    tensor_maps,
    tensor_module,
    tensor_power_module,
)

logger = logging.getLogger(__name__)

Family = Mapping[int, GradedMap]


class WordModule(BaseModel):
    """
    Truncated tensor module on a letter module.

    Attributes:
        letter (GradedModule): The base letter module X.
        cap (int): Maximal word length N.

    Example:
        W = WordModule(letter=X, cap=4)
        W.index((0, 1))  # basis index of the word x_0 x_1
    """

    model_config = ConfigDict(frozen=True)

    letter: GradedModule
    cap: int

    @field_validator("cap")
    @classmethod
    def validate_cap(cls, v: int) -> int:
        if v < 0:
            raise ValueError("cap must be non-negative")
        return v

    @field_validator("letter")
    @classmethod
    def validate_letter(cls, v: GradedModule) -> GradedModule:
        if v.factors:
            raise ValueError("the letter module must be a base module")
        return v

    @property
    def ring(self):
        return self.letter.ring

    @property
    def r(self) -> int:
        return self.letter.rank

    @property
    def module(self) -> GradedModule:
        return _word_module(self)

    def offset(self, n: int) -> int:
        return _offsets(self)[n]

    def component(self, n: int) -> GradedModule:
        return tensor_power_module(self.letter, n)

    def component_rank(self, n: int) -> int:
        return self.r**n

    def length(self, i: int) -> int:
        offsets = _offsets(self)
        for n in range(self.cap, -1, -1):
            if i >= offsets[n]:
                return n
        raise ShapeMismatch(f"index {i} outside word module")

    def word(self, i: int) -> Tuple[int, ...]:
        n = self.length(i)
        local = i - self.offset(n)
        out = []
        for _ in range(n):
            local, letter = divmod(local, self.r)
            out.append(letter)
        return tuple(reversed(out))

    def index(self, word: Sequence[int]) -> int:
        if len(word) > self.cap:
            raise CapOverflow(f"word of length {len(word)} exceeds cap {self.cap}", {(len(word), len(word)): 1})
        local = 0
        for letter in word:
            local = local * self.r + letter
        return self.offset(len(word)) + local

    def window(self, max_len: int) -> range:
        """Indices of all words of length at most ``max_len``."""
        max_len = min(max_len, self.cap)
        return range(0, self.offset(max_len + 1) if max_len < self.cap else self.module.rank)

    def inj(self, n: int) -> GradedMap:
        """Inclusion X^{(x)n} -> W."""
        off = self.offset(n)
        return GradedMap(self.component(n), self.module, 0, row_fn=lambda i: {off + i: 1})

    def pr(self, n: int) -> GradedMap:
        """Projection W -> X^{(x)n}."""
        off = self.offset(n)
        size = self.component_rank(n)
        return GradedMap(
            self.module, self.component(n), 0, row_fn=lambda i: {i - off: 1} if off <= i < off + size else {}
        )

    def gather(self, parts: Family, cod: GradedModule, deg: int) -> GradedMap:
        """W -> Y assembled from components X^{(x)n} -> Y; missing arities act as zero."""
        for n, part in parts.items():
            _expect(part, self.component(n), cod, deg, f"component {n}")

        def row_fn(i: int) -> Row:
            n = self.length(i)
            part = parts.get(n)
            return dict(part.row(i - self.offset(n))) if part is not None else {}

        support = [self.offset(n) + j for n in parts for j in range(self.component_rank(n))]
        return GradedMap(self.module, cod, deg, row_fn=row_fn, support=support)

    def scatter(self, parts: Family, dom: GradedModule, deg: int) -> GradedMap:
        """Y -> W assembled from components Y -> X^{(x)n}."""
        for n, part in parts.items():
            if n > self.cap:
                raise CapOverflow(f"component of length {n} exceeds cap {self.cap}", {(1, n): 1})
            _expect(part, dom, self.component(n), deg, f"component {n}")

        def row_fn(i: int) -> Row:
            out: Row = {}
            for n, part in parts.items():
                off = self.offset(n)
                for j, c in part.row(i).items():
                    out[off + j] = c
            return out

        return GradedMap(dom, self.module, deg, row_fn=row_fn)


@lru_cache(maxsize=256)
def _offsets(W: WordModule) -> Tuple[int, ...]:
    out = [0]
    for n in range(W.cap + 1):
        out.append(out[-1] + W.r**n)
    return tuple(out)


@lru_cache(maxsize=256)
def _word_module(W: WordModule) -> GradedModule:
    gens: List[int] = []
    for n in range(W.cap + 1):
        gens.extend(tensor_power_module(W.letter, n).degrees() if n else (0,))
    return GradedModule(ring=W.letter.ring, gens=tuple(gens))


def _expect(f: GradedMap, dom: GradedModule, cod: GradedModule, deg: int, what: str):
    if f.dom != dom or f.cod != cod:
        raise ShapeMismatch(f"{what}: unexpected domain or codomain")
    if f.deg != deg:
        raise ShapeMismatch(f"{what}: expected degree {deg}, got {f.deg}")


def _family_degree(family: Family) -> Optional[int]:
    degrees = {f.deg for f in family.values()}
    if len(degrees) > 1:
        raise ShapeMismatch(f"components of mixed degrees {sorted(degrees)}")
    return degrees.pop() if degrees else None


def cut_coproduct(W: WordModule) -> GradedMap:
    """Deconcatenation W -> W (x) W; no signs."""
    R = W.module.rank

    def row_fn(i: int) -> Row:
        word = W.word(i)
        out: Row = {}
        for k in range(len(word) + 1):
            col = W.index(word[:k]) * R + W.index(word[k:])
            out[col] = out.get(col, 0) + 1
        return out

    return GradedMap(W.module, tensor_module(W.module, W.module), 0, row_fn=row_fn)


def concat_product(W: WordModule) -> GradedMap:
    """Concatenation W (x) W -> W; rows whose total length exceeds the cap raise CapOverflow."""
    R = W.module.rank

    def row_fn(index: int) -> Row:
        i, j = divmod(index, R)
        u, v = W.word(i), W.word(j)
        if len(u) + len(v) > W.cap:
            raise CapOverflow(
                f"concatenation of lengths {len(u)} and {len(v)} exceeds cap {W.cap}",
                {(len(u) + len(v), len(u) + len(v)): 1},
            )
        return {W.index(u + v): 1}

    support = [
        i * R + j
        for lu in range(W.cap + 1)
        for i in range(W.offset(lu), W.offset(lu + 1))
        for j in range(W.offset(W.cap - lu + 1))
    ]
    return GradedMap(tensor_module(W.module, W.module), W.module, 0, row_fn=row_fn, support=support)


def _insertion_sum(
    W: WordModule, pieces: Sequence[Tuple[int, int, GradedMap]], deg: int, strict: bool, what: str
) -> GradedMap:
    """Sum over all positions of 1^{(x)r} (x) phi (x) 1^{(x)t} for pieces phi: X^{(x)a} -> X^{(x)b}."""
    cache: Dict[Tuple[int, int, int], GradedMap] = {}

    def insertion(r: int, piece: int, t: int) -> GradedMap:
        key = (r, piece, t)
        if key not in cache:
            _, _, phi = pieces[piece]
            cache[key] = tensor_maps(
                [identity(W.component(r)), phi, identity(W.component(t))], W.ring
            )
        return cache[key]

    out_map = GradedMap(W.module, W.module, deg)

    def row_fn(i: int) -> Row:
        n = W.length(i)
        local = i - W.offset(n)
        out: Row = {}
        for p, (a, b, _) in enumerate(pieces):
            for r in range(0, n - a + 1):
                t = n - r - a
                m = r + b + t
                row = insertion(r, p, t).row(local)
                if not row:
                    continue
                if m > W.cap:
                    key = (n, m)
                    out_map.overflow[key] = out_map.overflow.get(key, 0) + len(row)
                    if strict:
                        raise CapOverflow(f"{what}: word of length {n} reaches length {m} > cap {W.cap}", {key: len(row)})
                    continue
                off = W.offset(m)
                for j, c in row.items():
                    out[off + j] = out.get(off + j, 0) + c
        return out

    out_map._row_fn = row_fn
    return out_map


def coderivation_from_components(b: Family, W: WordModule, strict: bool = True) -> GradedMap:
    """Coderivation of the cut coproduct with components b_k: X^{(x)k} -> X.

    Args:
        b: Components indexed by arity.
        W: The word module.
        strict: Raise CapOverflow on words leaving the cap instead of recording them.

    Returns:
        GradedMap: W -> W of the common component degree.
    """
    deg = _family_degree(b)
    for k, bk in b.items():
        _expect(bk, W.component(k), W.letter, bk.deg, f"b_{k}")
    pieces = [(k, 1, bk) for k, bk in sorted(b.items())]
    logger.debug(f"coderivation on cap {W.cap} with arities {sorted(b)}")
    return _insertion_sum(W, pieces, deg if deg is not None else 0, strict, "coderivation")


def derivation_from_components(xi: Family, W: WordModule, strict: bool = True) -> GradedMap:
    """Derivation of concatenation with components xi_k: X -> X^{(x)k}; the empty word maps to zero."""
    deg = _family_degree(xi)
    for k, xk in xi.items():
        _expect(xk, W.letter, W.component(k), xk.deg, f"xi_{k}")
    pieces = [(1, k, xk) for k, xk in sorted(xi.items())]
    logger.debug(f"derivation on cap {W.cap} with arities {sorted(xi)}")
    return _insertion_sum(W, pieces, deg if deg is not None else 0, strict, "derivation")


def _compositions(n: int, parts: Sequence[int]) -> List[Tuple[int, ...]]:
    """Ordered tuples of allowed positive parts summing to n."""
    if n == 0:
        return [()]
    out = []
    for p in parts:
        if 0 < p <= n:
            out.extend((p,) + rest for rest in _compositions(n - p, parts))
    return out


def coalgebra_hom_from_components(f: Family, W: WordModule, V: WordModule, strict: bool = True) -> GradedMap:
    """Coalgebra hom W -> V with components f_i: X^{(x)i} -> Y.

    A word of length n maps to the sum over compositions (i_1, ..., i_k) of n of
    f_{i_1} (x) ... (x) f_{i_k}.

    Raises:
        NonzeroArityZero: If a nonzero f_0 is given.
        CapOverflow: In strict mode, when an image word would exceed the cap of V.
    """
    f0 = f.get(0)
    if f0 is not None and f0.entries():
        raise NonzeroArityZero("coalgebra homs on truncated words need f_0 = 0")
    comps = {i: fi for i, fi in f.items() if i > 0}
    for i, fi in comps.items():
        _expect(fi, W.component(i), V.letter, 0, f"f_{i}")
    cache: Dict[Tuple[int, ...], GradedMap] = {}
    out_map = GradedMap(W.module, V.module, 0)

    def row_fn(index: int) -> Row:
        n = W.length(index)
        local = index - W.offset(n)
        if n == 0:
            return {V.offset(0): 1}
        out: Row = {}
        for comp in _compositions(n, sorted(comps)):
            k = len(comp)
            if comp not in cache:
                cache[comp] = tensor_maps([comps[i] for i in comp], W.ring)
            row = cache[comp].row(local)
            if not row:
                continue
            if k > V.cap:
                out_map.overflow[(n, k)] = out_map.overflow.get((n, k), 0) + len(row)
                if strict:
                    raise CapOverflow(f"coalgebra hom: image of length {k} exceeds cap {V.cap}", {(n, k): len(row)})
                continue
            off = V.offset(k)
            for j, c in row.items():
                out[off + j] = out.get(off + j, 0) + c
        return out

    out_map._row_fn = row_fn
    return out_map


def algebra_hom_from_components(g: Family, W: WordModule, V: WordModule, strict: bool = True) -> GradedMap:
    """Multiplicative extension W -> V of components g_k: X -> Y^{(x)k}; 1 maps to 1."""
    for k, gk in g.items():
        _expect(gk, W.letter, V.component(k), 0, f"g_{k}")
    cache: Dict[Tuple[int, ...], GradedMap] = {}
    out_map = GradedMap(W.module, V.module, 0)

    def row_fn(index: int) -> Row:
        n = W.length(index)
        local = index - W.offset(n)
        if n == 0:
            return {V.offset(0): 1}
        out: Row = {}
        for arities in product(sorted(g), repeat=n):
            m = sum(arities)
            if arities not in cache:
                cache[arities] = tensor_maps([g[k] for k in arities], W.ring)
            row = cache[arities].row(local)
            if not row:
                continue
            if m > V.cap:
                out_map.overflow[(n, m)] = out_map.overflow.get((n, m), 0) + len(row)
                if strict:
                    raise CapOverflow(f"algebra hom: image of length {m} exceeds cap {V.cap}", {(n, m): len(row)})
                continue
            off = V.offset(m)
            for j, c in row.items():
                out[off + j] = out.get(off + j, 0) + c
        return out

    out_map._row_fn = row_fn
    return out_map


def iterated_product(m2: GradedMap, n: int) -> GradedMap:
    """A^{(x)n} -> A by left-bracketed products; n >= 1."""
    A = m2.cod
    out = identity(A)
    for _ in range(n - 1):
        out = tensor_map(out, identity(A)) @ m2
    return out


def multiplicative_extension(f1: GradedMap, W: WordModule, m2: GradedMap, eta: GradedMap) -> GradedMap:
    """Algebra map W -> A extending a letter map X -> A: 1 maps to eta, words to products of images."""
    _expect(f1, W.letter, m2.cod, 0, "letter map")
    parts = {0: eta}
    for n in range(1, W.cap + 1):
        parts[n] = tensor_maps([f1] * n, W.ring) @ iterated_product(m2, n)
    return W.gather(parts, m2.cod, 0)


def reduced_coproduct_power(delta_bar2: GradedMap, n: int) -> GradedMap:
    """Iterated reduced coproduct C -> C^{(x)n}, n >= 2, by splitting the leftmost factor."""
    C = delta_bar2.dom
    out = delta_bar2
    for k in range(2, n):
        out = out @ tensor_map(delta_bar2, identity(tensor_power_module(C, k - 1)))
    return out


def conilpotency_index(delta_bar2: GradedMap, cap: int, rows: Optional[Sequence[int]] = None) -> int:
    """Smallest n <= cap with vanishing iterated reduced coproduct.

    Args:
        delta_bar2: The reduced coproduct C -> C (x) C.
        cap: Largest n tried.
        rows: Rows of C to test; all rows when omitted.

    Raises:
        NotConilpotentUpToCap: If every iterate up to ``cap`` is nonzero.
    """
    C = delta_bar2.dom
    rows = list(rows) if rows is not None else list(range(C.rank))
    power = delta_bar2
    for n in range(2, cap + 1):
        if n > 2:
            power = power @ tensor_map(delta_bar2, identity(tensor_power_module(C, n - 2)))
        if all(not power.row(i) for i in rows):
            logger.debug(f"conilpotency index {n}")
            return n
    raise NotConilpotentUpToCap(f"iterated reduced coproduct is nonzero up to {cap}", cap)
