"""Abstract syntax of first-order arithmetic with the connectives ``~``, ``&``, ``all``.

Terms are built from ``0``, variables ``x<i>``, successor, ``+`` and ``*``;
atoms are ``=``, ``<=`` and the opaque Rosser-box atom ``R(t)``.  Everything
else (``->``, ``|``, ``ex``, bounded quantifiers) is sugar over these nodes.

Successor chains are stored run-length encoded, so ``numeral(10**6)`` is a
single node; ``Succ(Succ(Zero()))`` and ``Succ(Zero(), 2)`` are the same value.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Union

__all__ = [
    "Zero", "Var", "Succ", "Sum", "Prod", "Term",
    "Eq", "Leq", "Box", "Not", "And", "Forall", "Formula",
    "numeral", "numeral_value", "implies", "disj", "exists", "bounded_all",
    "substitute", "minus", "free_vars", "term_vars", "is_sentence",
    "is_instance", "instance_of", "allow_empty_prefix", "instance_convention", "leading_vars", "is_universal",
    "is_delta0", "eval_delta0", "eval_term", "is_delta0_sentence",
    "subformulas", "quantifier_skeleton", "contrapositive_parts",
]


# --------------------------------------------------------------------------
# Terms


@dataclass(frozen=True, slots=True)
class Zero:
    pass


@dataclass(frozen=True, slots=True)
class Var:
    index: int

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ValueError(f"variable index must be a natural, got {self.index}")


@dataclass(frozen=True, slots=True)
class Succ:
    arg: "Term"
    times: int = 1

    def __post_init__(self) -> None:
        if self.times < 1:
            raise ValueError("Succ.times must be >= 1")
        if isinstance(self.arg, Succ):
            object.__setattr__(self, "times", self.times + self.arg.times)
            object.__setattr__(self, "arg", self.arg.arg)


@dataclass(frozen=True, slots=True)
class Sum:
    left: "Term"
    right: "Term"


@dataclass(frozen=True, slots=True)
class Prod:
    left: "Term"
    right: "Term"


Term = Union[Zero, Var, Succ, Sum, Prod]


# --------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True, slots=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Leq:
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Box:
    """The Rosser-box atom ``R(t)``; never a Delta_0 formula."""

    arg: Term


@dataclass(frozen=True, slots=True)
class Not:
    body: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Forall:
    var: int
    body: "Formula"


Formula = Union[Eq, Leq, Box, Not, And, Forall]

_TERM_TYPES = (Zero, Var, Succ, Sum, Prod)
_ATOM_TYPES = (Eq, Leq, Box)


def numeral(n: int) -> Term:
    if n < 0:
        raise ValueError("numerals denote naturals")
    return Zero() if n == 0 else Succ(Zero(), n)


def numeral_value(t: Term) -> int | None:
    """Return ``n`` if ``t`` is the numeral for ``n``, else None."""
    if isinstance(t, Zero):
        return 0
    if isinstance(t, Succ) and isinstance(t.arg, Zero):
        return t.times
    return None


# sugar


def implies(a: Formula, b: Formula) -> Formula:
    return Not(And(a, Not(b)))


def disj(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def exists(var: int, body: Formula) -> Formula:
    return Not(Forall(var, Not(body)))


def bounded_all(var: int, bound: Term, body: Formula) -> Formula:
    return Forall(var, Not(And(Leq(Var(var), bound), Not(body))))


def contrapositive_parts(f: Formula) -> tuple[Formula, Formula] | None:
    """Split ``~(A & ~B)`` (that is ``A -> B``) into ``(A, B)``."""
    if isinstance(f, Not) and isinstance(f.body, And) and isinstance(f.body.right, Not):
        return f.body.left, f.body.right.body
    return None


# --------------------------------------------------------------------------
# Traversal


def term_vars(t: Term) -> frozenset[int]:
    if isinstance(t, Zero):
        return frozenset()
    if isinstance(t, Var):
        return frozenset((t.index,))
    if isinstance(t, Succ):
        return term_vars(t.arg)
    return term_vars(t.left) | term_vars(t.right)


def free_vars(f: Formula) -> frozenset[int]:
    if isinstance(f, (Eq, Leq)):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, Box):
        return term_vars(f.arg)
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, And):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Forall):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def subformulas(f: Formula) -> Iterator[Formula]:
    """Yield every subformula of ``f`` (including ``f``), children first."""
    if isinstance(f, Not):
        yield from subformulas(f.body)
    elif isinstance(f, And):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, Forall):
        yield from subformulas(f.body)
    yield f


def quantifier_skeleton(f: Formula) -> tuple:
    """Shape of ``f`` with atoms erased; used to check substitution keeps binders."""
    if isinstance(f, _ATOM_TYPES):
        return ("atom",)
    if isinstance(f, Not):
        return ("not", quantifier_skeleton(f.body))
    if isinstance(f, And):
        return ("and", quantifier_skeleton(f.left), quantifier_skeleton(f.right))
    return ("all", f.var, quantifier_skeleton(f.body))


# --------------------------------------------------------------------------
# Substitution, negation stripping, instances


def _subst_term(t: Term, v: int, s: Term) -> Term:
    if isinstance(t, Zero):
        return t
    if isinstance(t, Var):
        return s if t.index == v else t
    if isinstance(t, Succ):
        arg = _subst_term(t.arg, v, s)
        return t if arg is t.arg else Succ(arg, t.times)
    left, right = _subst_term(t.left, v, s), _subst_term(t.right, v, s)
    if left is t.left and right is t.right:
        return t
    return type(t)(left, right)


def substitute(f: Formula, v: int, t: Term) -> Formula:
    """Replace the free occurrences of ``x<v>`` in ``f`` by the closed term ``t``."""
    if isinstance(f, (Eq, Leq)):
        return type(f)(_subst_term(f.left, v, t), _subst_term(f.right, v, t))
    if isinstance(f, Box):
        return Box(_subst_term(f.arg, v, t))
    if isinstance(f, Not):
        return Not(substitute(f.body, v, t))
    if isinstance(f, And):
        return And(substitute(f.left, v, t), substitute(f.right, v, t))
    if isinstance(f, Forall):
        return f if f.var == v else Forall(f.var, substitute(f.body, v, t))
    raise TypeError(f"not a formula: {f!r}")


def minus(f: Formula) -> Formula:
    return f.body if isinstance(f, Not) else f


def is_universal(f: Formula) -> bool:
    return isinstance(f, Forall)


def leading_vars(f: Formula) -> tuple[list[int], list[Formula]]:
    """Variables of the outermost ``all`` prefix and the matrix after each strip."""
    vars_, matrices = [], []
    while isinstance(f, Forall):
        vars_.append(f.var)
        f = f.body
        matrices.append(f)
    return vars_, matrices


def _match_term(pat: Term, tgt: Term, slots: frozenset[int], bind: dict[int, int]) -> bool:
    if isinstance(pat, Var) and pat.index in slots:
        n = numeral_value(tgt)
        if n is None:
            return False
        prev = bind.setdefault(pat.index, n)
        return prev == n
    if isinstance(pat, Succ):
        # tgt may absorb part of the run into a numeral bound to a slot below
        if not isinstance(tgt, Succ) or tgt.times < pat.times:
            return False
        rest = tgt.arg if tgt.times == pat.times else Succ(tgt.arg, tgt.times - pat.times)
        return _match_term(pat.arg, rest, slots, bind)
    if type(pat) is not type(tgt):
        return False
    if isinstance(pat, (Zero,)):
        return True
    if isinstance(pat, Var):
        return pat == tgt
    return (_match_term(pat.left, tgt.left, slots, bind)
            and _match_term(pat.right, tgt.right, slots, bind))


def _match(pat: Formula, tgt: Formula, slots: frozenset[int], bind: dict[int, int]) -> bool:
    if type(pat) is not type(tgt):
        return False
    if isinstance(pat, (Eq, Leq)):
        return (_match_term(pat.left, tgt.left, slots, bind)
                and _match_term(pat.right, tgt.right, slots, bind))
    if isinstance(pat, Box):
        return _match_term(pat.arg, tgt.arg, slots, bind)
    if isinstance(pat, Not):
        return _match(pat.body, tgt.body, slots, bind)
    if isinstance(pat, And):
        return (_match(pat.left, tgt.left, slots, bind)
                and _match(pat.right, tgt.right, slots, bind))
    if pat.var != tgt.var:
        return False
    return _match(pat.body, tgt.body, slots - {pat.var}, bind)


_ALLOW_EMPTY_PREFIX = False


def instance_convention() -> bool:
    """Whether the empty quantifier prefix (k = 0) currently counts."""
    return _ALLOW_EMPTY_PREFIX


@contextmanager
def allow_empty_prefix(flag: bool = True) -> Iterator[None]:
    """Temporarily switch the default instance convention (k >= 1 vs k >= 0)."""
    global _ALLOW_EMPTY_PREFIX
    prev, _ALLOW_EMPTY_PREFIX = _ALLOW_EMPTY_PREFIX, flag
    try:
        yield
    finally:
        _ALLOW_EMPTY_PREFIX = prev


def instance_of(
    candidate: Formula, f: Formula, allow_empty: bool | None = None
) -> dict[int, int] | None:
    """Numerals witnessing that ``candidate`` is an instance of ``f``, or None.

    The witness maps each stripped variable that occurs free in the matrix to
    its numeral.  With ``allow_empty`` the trivial prefix (k = 0) also counts;
    by default the module-wide convention applies (k >= 1).
    """
    if allow_empty is None:
        allow_empty = _ALLOW_EMPTY_PREFIX
    if allow_empty and candidate == f:
        return {}
    vars_, matrices = leading_vars(f)
    for k in range(1, len(vars_) + 1):
        bind: dict[int, int] = {}
        if _match(matrices[k - 1], candidate, frozenset(vars_[:k]), bind):
            return bind
    return None


def is_instance(candidate: Formula, f: Formula, allow_empty: bool | None = None) -> bool:
    return instance_of(candidate, f, allow_empty) is not None


# --------------------------------------------------------------------------
# Delta_0


def _bounded_parts(f: Forall) -> tuple[Term, Formula] | None:
    b = f.body
    if (isinstance(b, Not) and isinstance(b.body, And)
            and isinstance(b.body.left, Leq) and b.body.left.left == Var(f.var)
            and isinstance(b.body.right, Not)
            and f.var not in term_vars(b.body.left.right)):
        return b.body.left.right, b.body.right.body
    return None


def is_delta0(f: Formula) -> bool:
    if isinstance(f, (Eq, Leq)):
        return True
    if isinstance(f, Box):
        return False
    if isinstance(f, Not):
        return is_delta0(f.body)
    if isinstance(f, And):
        return is_delta0(f.left) and is_delta0(f.right)
    parts = _bounded_parts(f)
    return parts is not None and is_delta0(parts[1])


def is_delta0_sentence(f: Formula) -> bool:
    return is_delta0(f) and is_sentence(f)


def eval_term(t: Term, env: Mapping[int, int]) -> int:
    if isinstance(t, Zero):
        return 0
    if isinstance(t, Var):
        try:
            return env[t.index]
        except KeyError:
            raise KeyError(f"unbound variable x{t.index}") from None
    if isinstance(t, Succ):
        return eval_term(t.arg, env) + t.times
    if isinstance(t, Sum):
        return eval_term(t.left, env) + eval_term(t.right, env)
    return eval_term(t.left, env) * eval_term(t.right, env)


def _eval(f: Formula, env: dict[int, int]) -> bool:
    if isinstance(f, Eq):
        return eval_term(f.left, env) == eval_term(f.right, env)
    if isinstance(f, Leq):
        return eval_term(f.left, env) <= eval_term(f.right, env)
    if isinstance(f, Not):
        return not _eval(f.body, env)
    if isinstance(f, And):
        return _eval(f.left, env) and _eval(f.right, env)
    bound, body = _bounded_parts(f)
    saved = env.get(f.var)
    try:
        for n in range(eval_term(bound, env) + 1):
            env[f.var] = n
            if not _eval(body, env):
                return False
        return True
    finally:
        if saved is None:
            env.pop(f.var, None)
        else:
            env[f.var] = saved


def eval_delta0(s: Formula) -> bool:
    """Truth of a Delta_0 sentence in the standard model."""
    if not is_delta0(s):
        raise ValueError("eval_delta0 needs a Delta_0 formula")
    if not is_sentence(s):
        raise ValueError("eval_delta0 needs a sentence")
    return _eval(s, {})
