"""Words in the free product G * F_k and their projections to G.

A word is stored in the alternating form g_0 x_1 g_1 ... x_t g_t with
explicit identity slots.  Letters x_i are signed ints: +i is v_i and -i is
v_i^-1 (1-based).  Reduction merges ``x_i g_i x_{i+1}`` whenever
x_{i+1} = x_i^-1 and g_i = e, so the stored form is the unique normal form
and equality is structural.

A projection is the homomorphism G * F_k -> G fixing G; it is given by the
tuple (pi(v_1), ..., pi(v_k)).
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import TooLarge
from .group_core import Group, coset_square_count, commutator_subgroup, is_generic

Token = Union[Tuple[str, int], int]
DEFAULT_PROJECTION_CAP = 10 ** 7
DEFAULT_BETA = 1 / 8
DEFAULT_GAMMA = 2.0


@dataclass(frozen=True)
class Word:
    group: Group = field(compare=False, repr=False)
    k: int
    gs: Tuple[int, ...]
    xs: Tuple[int, ...]

    def __post_init__(self):
        if len(self.gs) != len(self.xs) + 1:
            raise ValueError("a word needs exactly one more group slot than letters")

    @property
    def length(self) -> int:
        return len(self.xs)

    def is_constant(self) -> bool:
        return not self.xs

    @property
    def constant(self) -> int:
        if self.xs:
            raise ValueError("word contains free variables")
        return self.gs[0]

    def occurrences(self) -> Counter:
        return Counter(abs(x) for x in self.xs)

    def variables(self) -> frozenset:
        return frozenset(abs(x) for x in self.xs)

    def sign_of(self, i: int) -> int:
        for x in self.xs:
            if abs(x) == i:
                return 1 if x > 0 else -1
        return 0

    def tokens(self) -> List[Token]:
        out: List[Token] = [("g", self.gs[0])]
        for x, g in zip(self.xs, self.gs[1:]):
            out.append(x)
            out.append(("g", g))
        return out

    def __mul__(self, other: "Word") -> "Word":
        return word_mul(self, other)

    def __invert__(self) -> "Word":
        return word_inv(self)

    def __str__(self) -> str:
        return format_word(self)


def normalize(G: Group, tokens: Iterable[Token], k: int) -> Word:
    """Free reduction of an arbitrary token stream into normal form."""
    gs: List[int] = [0]
    xs: List[int] = []
    t = G.cayley
    for tok in tokens:
        if isinstance(tok, tuple):
            gs[-1] = t[gs[-1]][tok[1]]
            continue
        x = int(tok)
        if x == 0 or abs(x) > k:
            raise ValueError(f"variable index {abs(x)} outside 1..{k}")
        if xs and xs[-1] == -x and gs[-1] == 0:
            xs.pop()
            gs.pop()
        else:
            xs.append(x)
            gs.append(0)
    return Word(G, k, tuple(gs), tuple(xs))


def constant_word(G: Group, g: int, k: int) -> Word:
    return Word(G, k, (g,), ())


def variable_word(G: Group, i: int, k: int, sign: int = 1) -> Word:
    return normalize(G, [i * sign], k)


_TOKEN = re.compile(r"^(?:g:(\d+)|v(\d+)(\^-1)?)$")


def parse_word(G: Group, text: str, k: Optional[int] = None) -> Word:
    """Parse ``"g:3 v1 g:0 v2^-1"``; arity defaults to the largest index."""
    toks: List[Token] = []
    for raw in text.split():
        m = _TOKEN.match(raw)
        if not m:
            raise ValueError(f"bad word token {raw!r}")
        if m.group(1) is not None:
            g = int(m.group(1))
            if not 0 <= g < G.order:
                raise ValueError(f"group element {g} out of range")
            toks.append(("g", g))
        else:
            i = int(m.group(2))
            toks.append(-i if m.group(3) else i)
    need = max((abs(x) for x in toks if isinstance(x, int)), default=0)
    if k is None:
        k = need
    elif need > k:
        raise ValueError(f"word uses v{need} but arity is {k}")
    return normalize(G, toks, k)


def format_word(w: Word) -> str:
    parts = []
    for tok in w.tokens():
        if isinstance(tok, tuple):
            if tok[1] != 0 or not w.xs:
                parts.append(f"g:{tok[1]}")
        else:
            parts.append(f"v{abs(tok)}" + ("^-1" if tok < 0 else ""))
    return " ".join(parts)


def _check_arity(w: Word, w2: Word) -> None:
    if w.k != w2.k:
        raise ValueError(f"arity mismatch {w.k} vs {w2.k}")


def word_mul(w: Word, w2: Word) -> Word:
    _check_arity(w, w2)
    return normalize(w.group, w.tokens() + w2.tokens(), w.k)


def word_inv(w: Word) -> Word:
    G = w.group
    gs = tuple(G.inv(g) for g in reversed(w.gs))
    xs = tuple(-x for x in reversed(w.xs))
    return Word(G, w.k, gs, xs)


def word_prod(G: Group, words: Sequence[Word], k: int) -> Word:
    toks: List[Token] = []
    for w in words:
        toks.extend(w.tokens())
    return normalize(G, toks, k)


# ------------------------------------------------------------ projections


def apply_projection(pi: Sequence[int], w: Word) -> int:
    if len(pi) != w.k:
        raise ValueError(f"projection has arity {len(pi)}, word has arity {w.k}")
    G = w.group
    t, inv = G.cayley, G.inverse
    acc = w.gs[0]
    for x, g in zip(w.xs, w.gs[1:]):
        v = pi[x - 1] if x > 0 else inv[pi[-x - 1]]
        acc = t[t[acc][v]][g]
    return acc


def pi0(w: Word) -> int:
    return apply_projection((0,) * w.k, w)


def all_projections(G: Group, k: int, cap: int = DEFAULT_PROJECTION_CAP) -> Iterator[Tuple[int, ...]]:
    """Every assignment in lexicographic order."""
    if G.order ** k > cap:
        raise TooLarge(f"{G.order}^{k} projections exceed the cap {cap}")
    return itertools.product(range(G.order), repeat=k)


def count_projections_with_image(G: Group, w: Word, g: int, cap: int = DEFAULT_PROJECTION_CAP) -> int:
    return sum(1 for pi in all_projections(G, w.k, cap) if apply_projection(pi, w) == g)


# ------------------------------------------------------------ linearity


def linear_in(w: Word, i: int) -> bool:
    return w.occurrences().get(i, 0) == 1


def is_linear(w: Word) -> bool:
    occ = w.occurrences()
    return bool(occ) and all(c == 1 for c in occ.values())


# ------------------------------------------------------------ separability

STRONG = "StronglySeparable"
WEAK = "WeaklySeparable"
NOT_SEPARABLE = "NotSeparable"


@dataclass(frozen=True)
class SeparabilityVerdict:
    relation: str
    case: Optional[str] = None
    certificate: Optional[object] = None

    @property
    def strong(self) -> bool:
        return self.relation == STRONG

    def __bool__(self) -> bool:
        return self.relation != NOT_SEPARABLE


def _case_a(w: Word, w2: Word) -> Optional[int]:
    o1, o2 = w.occurrences(), w2.occurrences()
    for i in range(1, w.k + 1):
        a, b = o1.get(i, 0), o2.get(i, 0)
        if (a == 1 and b == 0) or (a == 0 and b == 1):
            return i
    return None


def _case_b(w: Word, w2: Word, tau: Optional[int]) -> Optional[int]:
    if not (is_linear(w) and is_linear(w2)):
        return None
    G = w.group
    wi = word_inv(w)
    # w2 in {g^{+-1} w, g^{+-1} w^-1, w g^{+-1}, w^-1 g^{+-1}}
    for cand in (word_mul(w2, wi), word_mul(w2, w), word_mul(wi, w2), word_mul(w, w2)):
        if cand.is_constant() and is_generic(G, cand.constant, tau):
            return cand.constant
    return None


def _case_c(w: Word, w2: Word, beta: float, gamma: float) -> bool:
    G = w.group
    dsize = commutator_subgroup(G).order
    if dsize > beta * G.order:
        return False
    if not (is_linear(w) and is_linear(w2)) or w.variables() != w2.variables():
        return False
    signs = [(w.sign_of(i), w2.sign_of(i)) for i in w.variables()]
    same = any(a == b for a, b in signs)
    opposite = any(a != b for a, b in signs)
    derived = commutator_subgroup(G)
    p_sum = pi0(word_mul(w, w2))
    p_diff = pi0(word_mul(word_inv(w), w2))
    if p_sum in derived and not same:
        return False
    if p_diff in derived and not opposite:
        return False
    return coset_square_count(G, p_sum) <= gamma * dsize


def strongly_separable(G: Group, w: Word, w2: Word, tau: Optional[int] = None,
                       beta: float = DEFAULT_BETA, gamma: float = DEFAULT_GAMMA) -> SeparabilityVerdict:
    _check_arity(w, w2)
    i = _case_a(w, w2)
    if i is not None:
        return SeparabilityVerdict(STRONG, "a", i)
    g = _case_b(w, w2, tau)
    if g is not None:
        return SeparabilityVerdict(STRONG, "b", g)
    if _case_c(w, w2, beta, gamma):
        return SeparabilityVerdict(STRONG, "c", None)
    return SeparabilityVerdict(NOT_SEPARABLE)


def cyclic_constant(w: Word) -> Optional[int]:
    """A constant conjugate to w, if one exists."""
    G = w.group
    gs, xs = list(w.gs), list(w.xs)
    while xs:
        joint = G.mul(gs[-1], gs[0])
        if len(xs) >= 2 and xs[-1] == -xs[0] and joint == 0:
            # conjugating by g_0 x_1 strips the outer letters
            xs = xs[1:-1]
            gs = gs[1:-1]
            continue
        return None
    return gs[0]


def weakly_separable(G: Group, w: Word, w2: Word, tau: Optional[int] = None,
                     beta: float = DEFAULT_BETA, gamma: float = DEFAULT_GAMMA) -> SeparabilityVerdict:
    v = strongly_separable(G, w, w2, tau, beta, gamma)
    if v:
        return v
    g = cyclic_constant(word_mul(word_inv(w), w2))
    if g is not None and g != 0:
        return SeparabilityVerdict(WEAK, "b'", g)
    return SeparabilityVerdict(NOT_SEPARABLE)


def separable_pairs(G: Group, S: Sequence[Word], tau: Optional[int] = None, **kw) -> List[Tuple[int, int]]:
    out = []
    for i, j in itertools.combinations(range(len(S)), 2):
        if weakly_separable(G, S[i], S[j], tau, **kw):
            out.append((i, j))
    return out


@dataclass(frozen=True)
class SeparationResult:
    ok: bool
    pair: Optional[Tuple[int, int]] = None

    def __bool__(self) -> bool:
        return self.ok


def separates(pi: Sequence[int], S: Sequence[Word], G: Group, tau: Optional[int] = None,
              pairs: Optional[List[Tuple[int, int]]] = None) -> SeparationResult:
    """True when every weakly separable pair of S gets distinct images."""
    if pairs is None:
        pairs = separable_pairs(G, S, tau)
    img = [apply_projection(pi, w) for w in S]
    for i, j in pairs:
        if img[i] == img[j]:
            return SeparationResult(False, (i, j))
    return SeparationResult(True)


def _arity(S: Sequence[Word]) -> int:
    ks = {w.k for w in S}
    if len(ks) > 1:
        raise ValueError("words of different arity")
    return ks.pop() if ks else 0


def enumerate_separating_projections(G: Group, S: Sequence[Word], tau: Optional[int] = None,
                                     U: Iterable[int] = (), cap: int = DEFAULT_PROJECTION_CAP,
                                     restrict: Optional[Iterable[int]] = None) -> Iterator[Tuple[int, ...]]:
    """Projections separating S with no image in U, lexicographically.

    ``restrict`` limits the value range of every variable (for instance to G').
    """
    S = list(S)
    k = _arity(S)
    values = sorted(set(restrict)) if restrict is not None else list(range(G.order))
    if len(values) ** k > cap:
        raise TooLarge(f"{len(values)}^{k} projections exceed the cap {cap}")
    forbidden = set(U)
    pairs = separable_pairs(G, S, tau)
    for pi in itertools.product(values, repeat=k):
        img = [apply_projection(pi, w) for w in S]
        if any(x in forbidden for x in img):
            continue
        if all(img[i] != img[j] for i, j in pairs):
            yield pi


def count_separating_projections(G: Group, S: Sequence[Word], tau: Optional[int] = None,
                                 U: Iterable[int] = (), cap: int = DEFAULT_PROJECTION_CAP) -> int:
    return sum(1 for _ in enumerate_separating_projections(G, S, tau, U, cap))


def greedy_disjoint_separating(G: Group, S: Sequence[Word], tau: Optional[int] = None,
                               want: int = 1, U: Iterable[int] = (),
                               in_commutator: bool = False,
                               cap: int = DEFAULT_PROJECTION_CAP) -> List[Tuple[int, ...]]:
    """Greedy family of separating projections with pairwise disjoint images."""
    if want <= 0:
        return []
    S = list(S)
    restrict = commutator_subgroup(G).elements if in_commutator else None
    used = set(U)
    chosen: List[Tuple[int, ...]] = []
    for pi in enumerate_separating_projections(G, S, tau, (), cap, restrict):
        img = {apply_projection(pi, w) for w in S}
        if img & used:
            continue
        chosen.append(pi)
        used |= img
        if len(chosen) >= want:
            break
    return chosen
