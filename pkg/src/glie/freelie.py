"""The free Z2-graded Lie algebra on even variables y1, y2, ... and odd
variables z1, z2, ..., plus ungraded variables x1, x2, ... for ordinary
(parity-blind) identities.

Basis monomials are standard bracketings of Lyndon words under the order
y1 < y2 < ... < z1 < z2 < ... < x1 < ....  Normalization embeds bracket
expressions into the free associative algebra (where the free Lie algebra
lives as the span of Lie monomials) and peels off Lyndon terms by
triangularity; that route is canonical, so results never depend on a
rewriting order.

Expressions (LieExpr) extend plain brackets with operator slots: in a
left-normed chain [head, s1, s2, ...] each slot s denotes an operator acting
on the accumulated value v:

    w^k          v -> v (ad w)^k         (k-fold [v, w, ..., w])
    (w^a - w^b)  v -> v ((ad w)^a - (ad w)^b), generally any +/- power sum

which is exactly the convention that turns the classical two-variable
identities of sl2 over GF(q) into well-formed Lie elements.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import AlgebraElement, GradedLieAlgebra
from .errors import (
    ExpansionTooLarge,
    MissingAssignment,
    NotALieElement,
    ParityError,
)
from .fields import FieldElement, FieldSpec, batch_field

NORMALIZE_TOTAL_CAP = 16

_KIND_RANK = {"y": 0, "z": 1, "x": 2}
_KIND_PARITY = {"y": 0, "z": 1, "x": None}


@dataclass(frozen=True)
class Variable:
    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise ValueError(f"variable kind must be y, z or x, not {self.kind!r}")
        if self.index < 1:
            raise ValueError("variable index starts at 1")

    @property
    def parity(self):
        return _KIND_PARITY[self.kind]

    @property
    def sort_key(self):
        return (_KIND_RANK[self.kind], self.index)

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def __str__(self):
        return f"{self.kind}{self.index}"

    __repr__ = __str__


def y(i: int) -> Variable:
    return Variable("y", i)


def z(i: int) -> Variable:
    return Variable("z", i)


def x(i: int) -> Variable:
    return Variable("x", i)


Word = tuple  # tuple[Variable, ...]


def word_key(word: Word):
    return tuple(v.sort_key for v in word)


def word_parity(word: Word):
    par = 0
    for v in word:
        if v.parity is None:
            return None
        par ^= v.parity
    return par


def is_lyndon(word: Word) -> bool:
    """Strictly smaller than every proper rotation (hence aperiodic)."""
    n = len(word)
    if n == 0:
        return False
    k = word_key(word)
    for i in range(1, n):
        if k >= k[i:] + k[:i]:
            return False
    return True


@dataclass(frozen=True)
class MultiDegree:
    """Occurrence count per variable; the shape of a multihomogeneous component."""

    counts: tuple  # tuple[(Variable, int)], sorted by variable, counts >= 1

    @classmethod
    def of(cls, mapping) -> "MultiDegree":
        items = [(v, int(c)) for v, c in dict(mapping).items() if int(c) > 0]
        items.sort(key=lambda it: it[0].sort_key)
        return cls(tuple(items))

    @classmethod
    def of_word(cls, word: Word) -> "MultiDegree":
        counts: dict = {}
        for v in word:
            counts[v] = counts.get(v, 0) + 1
        return cls.of(counts)

    @property
    def total(self) -> int:
        return sum(c for _, c in self.counts)

    @property
    def parity(self):
        par = 0
        for v, c in self.counts:
            if v.parity is None:
                return None
            par ^= (v.parity * c) % 2
        return par

    def degree_of(self, v: Variable) -> int:
        for w, c in self.counts:
            if w == v:
                return c
        return 0

    def variables(self):
        return [v for v, _ in self.counts]

    def as_dict(self):
        return dict(self.counts)

    def __str__(self):
        return "(" + ", ".join(f"{v}:{c}" for v, c in self.counts) + ")"


def lyndon_words(md: MultiDegree):
    """All Lyndon words with the given letter content, ascending."""
    letters = []
    for v, c in md.counts:
        letters.extend([v] * c)
    out = []
    seen = set()
    for perm in _multiset_permutations(letters):
        if perm in seen:
            continue
        seen.add(perm)
        if is_lyndon(perm):
            out.append(perm)
    out.sort(key=word_key)
    return out


def _multiset_permutations(letters):
    """Distinct permutations of a small multiset."""
    letters = sorted(letters, key=lambda v: v.sort_key)
    n = len(letters)
    results = []

    def rec(remaining, acc):
        if not remaining:
            results.append(tuple(acc))
            return
        last = None
        for i, v in enumerate(remaining):
            if last is not None and v == last:
                continue
            last = v
            rec(remaining[:i] + remaining[i + 1:], acc + [v])

    rec(letters, [])
    return results


@lru_cache(maxsize=None)
def standard_bracketing(word: Word):
    """Right standard factorization tree: w = uv with v the longest proper
    Lyndon suffix; returns nested (left, right) pairs with Variable leaves."""
    if len(word) == 1:
        return word[0]
    best = None
    for i in range(1, len(word)):
        if is_lyndon(word[i:]):
            best = i
            break
    if best is None:
        raise NotALieElement(f"{word} is not a Lyndon word")
    return (standard_bracketing(word[:best]), standard_bracketing(word[best:]))


@lru_cache(maxsize=None)
def _bracketing_ncpoly(word: Word):
    """Associative expansion (dict word -> int coeff) of the standard bracketing."""

    def expand(tree):
        if isinstance(tree, Variable):
            return {(tree,): 1}
        left, right = expand(tree[0]), expand(tree[1])
        out: dict = {}
        for w1, c1 in left.items():
            for w2, c2 in right.items():
                out[w1 + w2] = out.get(w1 + w2, 0) + c1 * c2
                out[w2 + w1] = out.get(w2 + w1, 0) - c1 * c2
        return {w: c for w, c in out.items() if c}

    return expand(standard_bracketing(word))


# ---------------------------------------------------------------------------
# Lie polynomials in the Lyndon basis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LiePolynomial:
    """Finite combination of Lyndon monomials with field coefficients."""

    spec: FieldSpec
    terms: tuple  # tuple[(Word, FieldElement)], sorted by word key, no zeros

    @classmethod
    def from_dict(cls, spec: FieldSpec, mapping) -> "LiePolynomial":
        items = [(w, c) for w, c in mapping.items() if not c.is_zero()]
        items.sort(key=lambda it: (len(it[0]), word_key(it[0])))
        return cls(spec, tuple(items))

    @classmethod
    def zero(cls, spec: FieldSpec) -> "LiePolynomial":
        return cls(spec, ())

    @classmethod
    def monomial(cls, spec: FieldSpec, word: Word, coeff=1) -> "LiePolynomial":
        c = coeff if isinstance(coeff, FieldElement) else spec.from_int(coeff)
        if not is_lyndon(word):
            raise NotALieElement(f"{word} is not a Lyndon word")
        return cls.from_dict(spec, {word: c})

    def is_zero(self) -> bool:
        return not self.terms

    def add(self, other: "LiePolynomial") -> "LiePolynomial":
        acc = dict(self.terms)
        for w, c in other.terms:
            s = acc.get(w, self.spec.zero()) + c
            if s.is_zero():
                acc.pop(w, None)
            else:
                acc[w] = s
        return LiePolynomial.from_dict(self.spec, acc)

    def scale(self, coeff) -> "LiePolynomial":
        c = coeff if isinstance(coeff, FieldElement) else self.spec.from_int(coeff)
        if c.is_zero():
            return LiePolynomial.zero(self.spec)
        return LiePolynomial.from_dict(self.spec, {w: c * v for w, v in self.terms})

    def neg(self) -> "LiePolynomial":
        return self.scale(-1)

    def sub(self, other: "LiePolynomial") -> "LiePolynomial":
        return self.add(other.neg())

    def support(self):
        return [w for w, _ in self.terms]

    def coefficient(self, word: Word) -> FieldElement:
        for w, c in self.terms:
            if w == word:
                return c
        return self.spec.zero()

    def parity(self):
        parities = {word_parity(w) for w, _ in self.terms}
        if len(parities) == 1:
            return parities.pop()
        return None

    def multidegrees(self):
        return sorted({MultiDegree.of_word(w) for w, _ in self.terms},
                      key=lambda md: (md.total, str(md)))

    def components(self):
        """Multihomogeneous components; they sum back to the polynomial."""
        groups: dict = {}
        for w, c in self.terms:
            groups.setdefault(MultiDegree.of_word(w), {})[w] = c
        return {md: LiePolynomial.from_dict(self.spec, g) for md, g in groups.items()}

    def variables(self):
        vs = {v for w, _ in self.terms for v in w}
        return sorted(vs, key=lambda v: v.sort_key)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.terms:
            mono = print_word(w)
            parts.append(f"{c}*{mono}" if c.code != 1 else mono)
        return " + ".join(parts)


def print_word(word: Word) -> str:
    def render(tree):
        if isinstance(tree, Variable):
            return str(tree)
        return f"[{render(tree[0])},{render(tree[1])}]"

    return render(standard_bracketing(word))


def lyndon_decompose(spec: FieldSpec, ncpoly: dict) -> LiePolynomial:
    """Write a Lie element of the free associative algebra in the Lyndon basis.

    Uses triangularity: the expansion of the bracketing of a Lyndon word w is
    w + (lexicographically larger words), so repeatedly stripping the minimal
    surviving word terminates and detects non-Lie input.
    """
    remaining = {w: c for w, c in ncpoly.items() if not c.is_zero()}
    out: dict = {}
    while remaining:
        w = min(remaining, key=word_key)
        if not is_lyndon(w):
            raise NotALieElement(f"minimal word {w} is not Lyndon")
        c = remaining[w]
        out[w] = c
        for w2, k in _bracketing_ncpoly(w).items():
            s = remaining.get(w2, spec.zero()) + c * spec.from_int(-k)
            if s.is_zero():
                remaining.pop(w2, None)
            else:
                remaining[w2] = s
    return LiePolynomial.from_dict(spec, out)


# ---------------------------------------------------------------------------
# expression AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    var: Variable


@dataclass(frozen=True)
class Sum:
    terms: tuple  # tuple[LieExpr]


@dataclass(frozen=True)
class Scale:
    coeff: int
    expr: "LieExpr"


@dataclass(frozen=True)
class AdPower:
    base: "LieExpr"
    exponent: int


@dataclass(frozen=True)
class AdPolyDiff:
    base: "LieExpr"
    terms: tuple  # tuple[(int coeff, int exponent)], exponents >= 1


@dataclass(frozen=True)
class BracketChain:
    head: "LieExpr"
    slots: tuple  # tuple[AdPower | AdPolyDiff]


LieExpr = (Var, Sum, Scale, BracketChain)


def bracket(a, b) -> BracketChain:
    """Plain commutator [a, b]."""
    return BracketChain(a, (AdPower(b, 1),))


def chain(head, *slots) -> BracketChain:
    return BracketChain(head, tuple(slots))


def var_expr(v: Variable) -> Var:
    return Var(v)


def expr_variables(e) -> list:
    out = set()

    def walk(node):
        if isinstance(node, Var):
            out.add(node.var)
        elif isinstance(node, Sum):
            for t in node.terms:
                walk(t)
        elif isinstance(node, Scale):
            walk(node.expr)
        elif isinstance(node, BracketChain):
            walk(node.head)
            for s in node.slots:
                walk(s.base)
        else:
            raise TypeError(f"not a LieExpr node: {node!r}")

    walk(e)
    return sorted(out, key=lambda v: v.sort_key)


def degree_bound(e):
    """Per-variable and total upper bounds on expansion degrees."""

    def walk(node):
        if isinstance(node, Var):
            return {node.var: 1}, 1
        if isinstance(node, Sum):
            per: dict = {}
            tot = 0
            for t in node.terms:
                p, s = walk(t)
                for v, d in p.items():
                    per[v] = max(per.get(v, 0), d)
                tot = max(tot, s)
            return per, tot
        if isinstance(node, Scale):
            return walk(node.expr)
        if isinstance(node, BracketChain):
            per, tot = walk(node.head)
            per = dict(per)
            for s in node.slots:
                bp, bt = walk(s.base)
                mult = s.exponent if isinstance(s, AdPower) else max(eexp for _, eexp in s.terms)
                for v, d in bp.items():
                    per[v] = per.get(v, 0) + mult * d
                tot += mult * bt
            return per, tot
        raise TypeError(f"not a LieExpr node: {node!r}")

    return walk(e)


def expr_parity(e):
    """0/1 for homogeneous-parity expressions, None for mixed or ungraded."""

    def walk(node):
        if isinstance(node, Var):
            return node.var.parity
        if isinstance(node, Scale):
            return walk(node.expr)
        if isinstance(node, Sum):
            ps = {walk(t) for t in node.terms}
            return ps.pop() if len(ps) == 1 else None
        if isinstance(node, BracketChain):
            par = walk(node.head)
            if par is None:
                return None
            for s in node.slots:
                bp = walk(s.base)
                if isinstance(s, AdPower):
                    exps = [s.exponent]
                else:
                    exps = [eexp for _, eexp in s.terms]
                if bp is None:
                    if any(eexp % 2 for eexp in exps):
                        return None
                    contribs = {0}
                else:
                    contribs = {(eexp * bp) % 2 for eexp in exps}
                if len(contribs) != 1:
                    return None
                par = (par + contribs.pop()) % 2
            return par
        raise TypeError(f"not a LieExpr node: {node!r}")

    return walk(e)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def _check_graded_assignment(alg: GradedLieAlgebra, assignment, variables):
    for v in variables:
        if v not in assignment:
            raise MissingAssignment(f"no value for {v}")
        if v.parity is None:
            raise ParityError(f"ungraded variable {v} is not allowed in graded mode")
        el = assignment[v]
        deg = el.degree()
        if deg is not None and deg != v.parity:
            raise ParityError(f"{v} assigned an element of degree {deg}")


def evaluate(e, alg: GradedLieAlgebra, assignment: dict, graded: bool = True) -> AlgebraElement:
    """Evaluate an expression at algebra elements.

    In graded mode each y/z variable must receive a homogeneous element of
    its parity; in ordinary mode any element goes and x variables are legal.
    """
    if graded:
        _check_graded_assignment(alg, assignment, expr_variables(e))

    def walk(node) -> AlgebraElement:
        if isinstance(node, Var):
            if node.var not in assignment:
                raise MissingAssignment(f"no value for {node.var}")
            return assignment[node.var]
        if isinstance(node, Scale):
            return walk(node.expr).scale(node.coeff)
        if isinstance(node, Sum):
            acc = alg.zero_element()
            for t in node.terms:
                acc = acc + walk(t)
            return acc
        if isinstance(node, BracketChain):
            val = walk(node.head)
            for s in node.slots:
                w = walk(s.base)
                if isinstance(s, AdPower):
                    for _ in range(s.exponent):
                        val = alg.bracket(val, w)
                else:
                    acc = alg.zero_element()
                    cur = val
                    done = 0
                    for coeff, eexp in sorted(s.terms, key=lambda t: t[1]):
                        while done < eexp:
                            cur = alg.bracket(cur, w)
                            done += 1
                        acc = acc + cur.scale(coeff)
                    val = acc
            return val
        raise TypeError(f"not a LieExpr node: {node!r}")

    return walk(e)


def batch_evaluate(e, alg: GradedLieAlgebra, assignment: dict) -> np.ndarray:
    """Evaluate over many assignments at once; assignment maps each variable
    to an (N, dim) array of coordinate codes."""
    bf = batch_field(alg.spec)
    n = alg.dim
    sizes = {a.shape[0] for a in assignment.values()}
    if len(sizes) != 1:
        raise ValueError("assignment arrays must share their first dimension")
    count = sizes.pop()

    def walk(node) -> np.ndarray:
        if isinstance(node, Var):
            if node.var not in assignment:
                raise MissingAssignment(f"no value for {node.var}")
            return assignment[node.var]
        if isinstance(node, Scale):
            code = alg.spec.from_int(node.coeff).code
            return bf.scale(code, walk(node.expr))
        if isinstance(node, Sum):
            acc = bf.zeros((count, n))
            for t in node.terms:
                acc = bf.add(acc, walk(t))
            return acc
        if isinstance(node, BracketChain):
            val = walk(node.head)
            for s in node.slots:
                w = walk(s.base)
                if isinstance(s, AdPower):
                    for _ in range(s.exponent):
                        val = alg.batch_bracket(val, w)
                else:
                    acc = bf.zeros((count, n))
                    cur = val
                    done = 0
                    for coeff, eexp in sorted(s.terms, key=lambda t: t[1]):
                        while done < eexp:
                            cur = alg.batch_bracket(cur, w)
                            done += 1
                        acc = bf.add(acc, bf.scale(alg.spec.from_int(coeff).code, cur))
                    val = acc
            return val
        raise TypeError(f"not a LieExpr node: {node!r}")

    return walk(e)


def word_tree_evaluate(word: Word, alg: GradedLieAlgebra, assignment: dict) -> AlgebraElement:
    def walk(tree):
        if isinstance(tree, Variable):
            if tree not in assignment:
                raise MissingAssignment(f"no value for {tree}")
            return assignment[tree]
        return alg.bracket(walk(tree[0]), walk(tree[1]))

    return walk(standard_bracketing(word))


def word_tree_batch_evaluate(word: Word, alg: GradedLieAlgebra, assignment: dict) -> np.ndarray:
    def walk(tree):
        if isinstance(tree, Variable):
            return assignment[tree]
        return alg.batch_bracket(walk(tree[0]), walk(tree[1]))

    return walk(standard_bracketing(word))


def poly_evaluate(poly: LiePolynomial, alg: GradedLieAlgebra, assignment: dict) -> AlgebraElement:
    acc = alg.zero_element()
    for w, c in poly.terms:
        acc = acc + word_tree_evaluate(w, alg, assignment).scale(c)
    return acc


def poly_batch_evaluate(poly: LiePolynomial, alg: GradedLieAlgebra, assignment: dict,
                        count: int) -> np.ndarray:
    bf = batch_field(alg.spec)
    acc = bf.zeros((count, alg.dim))
    for w, c in poly.terms:
        acc = bf.add(acc, bf.scale(c.code, word_tree_batch_evaluate(w, alg, assignment)))
    return acc


# ---------------------------------------------------------------------------
# symbolic expansion
# ---------------------------------------------------------------------------


def _nc_mul(spec, a: dict, b: dict) -> dict:
    out: dict = {}
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            w = w1 + w2
            s = out.get(w, spec.zero()) + c1 * c2
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
    return out


def _nc_comm(spec, a: dict, b: dict) -> dict:
    out = dict(_nc_mul(spec, a, b))
    for w, c in _nc_mul(spec, b, a).items():
        s = out.get(w, spec.zero()) - c
        if s.is_zero():
            out.pop(w, None)
        else:
            out[w] = s
    return out


def _nc_add_scaled(spec, acc: dict, other: dict, coeff: FieldElement) -> dict:
    for w, c in other.items():
        s = acc.get(w, spec.zero()) + coeff * c
        if s.is_zero():
            acc.pop(w, None)
        else:
            acc[w] = s
    return acc


def assoc_expand(e, spec: FieldSpec) -> dict:
    """Expression as a noncommutative polynomial (dict word -> coefficient)."""

    def walk(node) -> dict:
        if isinstance(node, Var):
            return {(node.var,): spec.one()}
        if isinstance(node, Scale):
            return _nc_add_scaled(spec, {}, walk(node.expr), spec.from_int(node.coeff))
        if isinstance(node, Sum):
            acc: dict = {}
            for t in node.terms:
                acc = _nc_add_scaled(spec, acc, walk(t), spec.one())
            return acc
        if isinstance(node, BracketChain):
            val = walk(node.head)
            for s in node.slots:
                w = walk(s.base)
                if isinstance(s, AdPower):
                    for _ in range(s.exponent):
                        val = _nc_comm(spec, val, w)
                else:
                    acc = {}
                    cur = val
                    done = 0
                    for coeff, eexp in sorted(s.terms, key=lambda t: t[1]):
                        while done < eexp:
                            cur = _nc_comm(spec, cur, w)
                            done += 1
                        acc = _nc_add_scaled(spec, acc, cur, spec.from_int(coeff))
                    val = acc
            return val
        raise TypeError(f"not a LieExpr node: {node!r}")

    return walk(e)


def expr_expand(e, spec: FieldSpec, caps: dict | None = None,
                total_cap: int | None = None) -> LiePolynomial:
    """Expand an expression into the Lyndon basis, guarded by degree caps.

    caps maps variables to their maximal admissible degree; expressions whose
    degree bound exceeds a cap (or total_cap) raise ExpansionTooLarge without
    any expansion work.  With caps=None a global sanity bound still applies,
    so an accidental q^3-degree expansion cannot be attempted.
    """
    per, total = degree_bound(e)
    if caps is not None:
        for v, d in per.items():
            if d > caps.get(v, 0):
                raise ExpansionTooLarge(
                    f"degree bound {d} for {v} exceeds cap {caps.get(v, 0)}"
                )
    if total > (total_cap if total_cap is not None else NORMALIZE_TOTAL_CAP):
        raise ExpansionTooLarge(f"total degree bound {total} exceeds cap")
    return lyndon_decompose(spec, assoc_expand(e, spec))


def normalize(e, spec: FieldSpec) -> LiePolynomial:
    """Lyndon-basis normal form of a bracket expression."""
    return expr_expand(e, spec)


def multihomog_components(poly: LiePolynomial) -> dict:
    return poly.components()


# ---------------------------------------------------------------------------
# substitution
# ---------------------------------------------------------------------------


def word_to_expr(word: Word):
    def walk(tree):
        if isinstance(tree, Variable):
            return Var(tree)
        return bracket(walk(tree[0]), walk(tree[1]))

    return walk(standard_bracketing(word))


def poly_to_expr(poly: LiePolynomial):
    if poly.is_zero():
        return Scale(0, Var(y(1)))
    terms = []
    for w, c in poly.terms:
        base = word_to_expr(w)
        code = c.code if c.spec.k == 1 else None
        if code == 1:
            terms.append(base)
        elif code is not None:
            terms.append(Scale(code, base))
        else:
            terms.append(Scale(_int_of(c), base))
    return terms[0] if len(terms) == 1 else Sum(tuple(terms))


def _int_of(c: FieldElement) -> int:
    # extension-field coefficients outside the prime field cannot be carried
    # by integer Scale nodes
    if any(c.coeffs[1:]):
        raise ValueError("cannot embed a proper extension-field scalar into an expression")
    return c.coeffs[0]


def substitute(f, mapping: dict, graded: bool = True):
    """Replace variables by expressions (or Lyndon polynomials).

    In graded mode each image must have a well-defined parity matching its
    variable; x variables accept anything.  Unmapped variables are kept.
    """
    images = {}
    for v, img in mapping.items():
        expr = poly_to_expr(img) if isinstance(img, LiePolynomial) else img
        if graded and v.parity is not None:
            par = expr_parity(expr)
            if par != v.parity:
                raise ParityError(f"{v} has parity {v.parity}, image has parity {par}")
        images[v] = expr

    def walk(node):
        if isinstance(node, Var):
            return images.get(node.var, node)
        if isinstance(node, Scale):
            return Scale(node.coeff, walk(node.expr))
        if isinstance(node, Sum):
            return Sum(tuple(walk(t) for t in node.terms))
        if isinstance(node, BracketChain):
            slots = []
            for s in node.slots:
                if isinstance(s, AdPower):
                    slots.append(AdPower(walk(s.base), s.exponent))
                else:
                    slots.append(AdPolyDiff(walk(s.base), s.terms))
            return BracketChain(walk(node.head), tuple(slots))
        raise TypeError(f"not a LieExpr node: {node!r}")

    return walk(f)


# ---------------------------------------------------------------------------
# built-in expressions
# ---------------------------------------------------------------------------


def sem1(q: int, v1: Variable | None = None, v2: Variable | None = None):
    """First classical two-variable identity of sl2 over GF(q):
    the head pushed through (ad)^(q^2+2) - (ad)^3 of the second variable."""
    a = Var(v1 or x(1))
    b = Var(v2 or x(2))
    return chain(a, AdPolyDiff(b, ((1, q * q + 2), (-1, 3))))


def sem2(q: int, v1: Variable | None = None, v2: Variable | None = None):
    """Second classical identity; six left-normed terms with operator slots."""
    a = Var(v1 or x(1))
    b = Var(v2 or x(2))
    q2 = q * q
    frob_a = ((1, q2), (-1, 1))   # (ad a)^{q^2} - (ad a)
    frob_b = ((1, q2), (-1, 1))
    t1 = bracket(a, b)
    t2 = chain(a, AdPower(b, 1), AdPower(a, q2 - 1))
    t3 = chain(a, AdPower(b, q))
    t4 = chain(a, AdPower(b, 1), AdPower(a, q2 - 1), AdPower(b, q - 1))
    t5 = chain(
        a,
        AdPower(b, 1),
        AdPolyDiff(a, frob_a),
        AdPower(bracket(a, b), q - 2),
        AdPolyDiff(b, frob_b),
    )
    # the sixth term brackets with u = [a^{q^2} - a, b], i.e. minus the chain
    # b ((ad a)^{q^2} - (ad a))
    u = Scale(-1, chain(b, AdPolyDiff(a, frob_a)))
    t6 = chain(b, AdPower(u, q), AdPolyDiff(b, ((1, q2 - 2), (-1, q - 2))))
    return Sum((t1, Scale(-1, t2), Scale(-1, t3), t4, t5, Scale(-1, t6)))


def yy():
    """[y1, y2]: the even part is commutative."""
    return bracket(Var(y(1)), Var(y(2)))


def zz():
    return bracket(Var(z(1)), Var(z(2)))


def zyq_zy(q: int):
    """[z1, y1^q] - [z1, y1], the q-power identity of the natural grading."""
    return Sum((
        chain(Var(z(1)), AdPower(Var(y(1)), q)),
        Scale(-1, bracket(Var(z(1)), Var(y(1)))),
    ))


def _graded_substitution():
    return {
        x(1): Sum((Var(y(1)), Var(z(1)))),
        x(2): Sum((Var(y(2)), Var(z(2)))),
    }


def sem1_graded(q: int):
    return substitute(sem1(q), _graded_substitution(), graded=False)


def sem2_graded(q: int):
    return substitute(sem2(q), _graded_substitution(), graded=False)


def set_s(q: int):
    """The basis candidate for the graded identities of sl2(GF(q))."""
    return [sem1_graded(q), sem2_graded(q), yy(), zyq_zy(q)]


def lema5_set(q: int):
    """Generators for the graded identities of span{e11, e12}."""
    return [yy(), zz(), zyq_zy(q)]


BUILTIN_NAMES = {
    "sem1": lambda q: sem1(q),
    "sem2": lambda q: sem2(q),
    "sem1-graded": sem1_graded,
    "sem2-graded": sem2_graded,
    "yy": lambda q: yy(),
    "zz": lambda q: zz(),
    "zyq-zy": zyq_zy,
}

BUILTIN_SETS = {
    "S": set_s,
    "lema5": lema5_set,
}


def builtin(name: str, q: int):
    key = name.lower().replace("_", "-")
    if key in BUILTIN_NAMES:
        return BUILTIN_NAMES[key](q)
    if name in BUILTIN_SETS:
        return BUILTIN_SETS[name](q)
    if key in {k.lower() for k in BUILTIN_SETS}:
        for k, fn in BUILTIN_SETS.items():
            if k.lower() == key:
                return fn(q)
    raise KeyError(f"unknown builtin {name!r}")
