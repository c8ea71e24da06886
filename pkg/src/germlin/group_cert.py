"""Certification of irreducible presentations of germ groups.

A presentation is an ordered tuple of basic generators at one truncation
order, optionally with conjugacy witness words.  Certification checks

* the product identity  f_1 o f_2 o ... o f_m = id  (to order N),
* equality of multipliers and the order of the common multiplier,
* pairwise conjugacy inside the group: supplied witness words first, then a
  bounded breadth-first search over reduced words (value-deduplicated at
  order N).  A failed search is recorded as "not-found-up-to", never as a
  proof of non-conjugacy,
* applicability of the finiteness criterion (multiplier order 1 or a prime
  power, with every other check positive).

Presentation files are JSON::

    { "field": {"conductor": n, "constraints": ["a = 1/(1 - a)"]},
      "order": 32,
      "generators": ["z/a", "z/(a + z)"],
      "witnesses": {"(2,1)": [[1, 1], [2, 1]]} }

Constraints are solved by enumerating roots of unity; every solution yields
its own presentation, and reports are produced per solution.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence

from .cyclotomic import (
    CycloElem,
    format_scalar,
    prime_power_order,
    root_of_unity_order,
    solve_root_constraints,
)
from .expressions import ExpressionError, series_from_string
from .germs import Germ, Word, evaluate_word, identity_germ
from .jets import DEFAULT_ORDER, Jet, RightComposer

__all__ = [
    "GroupPresentation",
    "IrreducibilityReport",
    "ConjugacyResolution",
    "PresentationError",
    "check_product_identity",
    "check_conjugacy_witness",
    "search_conjugator",
    "certify",
    "load_presentation_text",
    "load_presentation_file",
    "LoadedPresentation",
]

DEFAULT_MAX_WORD_LEN = 8


class PresentationError(ValueError):
    """Raised for malformed presentation input."""


class GroupPresentation:
    """Ordered basic generators plus optional conjugacy witness words."""

    def __init__(
        self,
        gens: Sequence[Germ],
        witnesses: Optional[dict[tuple[int, int], Word]] = None,
        order: Optional[int] = None,
    ):
        gens = list(gens)
        if len(gens) < 2:
            raise PresentationError("a presentation needs at least two generators")
        if order is None:
            order = gens[0].order
        conductor = 1
        for g in gens:
            if g.order != order:
                raise PresentationError("all generators must share the order")
            c = g.conductor
            conductor = conductor * c // gcd(conductor, c)
        self.order = order
        self.gens: tuple[Germ, ...] = tuple(g.lift(conductor) for g in gens)
        self.conductor = conductor
        self.witnesses: dict[tuple[int, int], Word] = dict(witnesses or {})
        for (i, j), w in self.witnesses.items():
            self._check_index(i)
            self._check_index(j)
            if not isinstance(w, Word):
                raise PresentationError("witnesses must be Word values")
        self._composers: dict = {}
        self._inverses: dict[int, Germ] = {}

    def _check_index(self, i: int):
        if not (1 <= i <= len(self.gens)):
            raise PresentationError(
                f"generator index {i} out of range 1..{len(self.gens)}"
            )

    def __len__(self) -> int:
        return len(self.gens)

    def generator(self, i: int) -> Germ:
        self._check_index(i)
        return self.gens[i - 1]

    def inverse_generator(self, i: int) -> Germ:
        self._check_index(i)
        if i not in self._inverses:
            self._inverses[i] = ~self.gens[i - 1]
        return self._inverses[i]

    def composer(self, germ: Germ) -> RightComposer:
        """Cached right-composition operator for a fixed inner germ."""
        key = germ.jet.key()
        comp = self._composers.get(key)
        if comp is None:
            comp = RightComposer(germ.jet)
            self._composers[key] = comp
        return comp


def check_product_identity(pres: GroupPresentation) -> bool:
    """True iff the ordered composition of all generators is z to order N."""
    acc = pres.gens[0].jet
    for g in pres.gens[1:]:
        acc = pres.composer(g)(acc)
    return acc == Jet.identity(pres.order, pres.conductor)


def check_conjugacy_witness(
    pres: GroupPresentation, i: int, j: int, w: Word
) -> bool:
    """True iff f_i o g = g o f_j to order N, where g is the word's value."""
    pres._check_index(i)
    pres._check_index(j)
    if not isinstance(w, Word):
        w = Word.from_list(w)
    g = evaluate_word(w, pres.gens)
    fi, fj = pres.generator(i), pres.generator(j)
    return fi * g == g * fj


def search_conjugator(
    pres: GroupPresentation, i: int, j: int, max_len: int = DEFAULT_MAX_WORD_LEN
) -> Optional[Word]:
    """Breadth-first search for a witness word of length <= max_len.

    Words are enumerated shortest first and lexicographically by
    (generator index, sign); candidates are deduplicated by their order-N jet,
    so only one word per group-element value is ever expanded.  The returned
    word satisfies :func:`check_conjugacy_witness` by construction; None means
    only "not found up to max_len".
    """
    pres._check_index(i)
    pres._check_index(j)
    fi, fj = pres.generator(i), pres.generator(j)
    compose_fj = pres.composer(fj)

    letters = []
    for idx in range(1, len(pres.gens) + 1):
        letters.append(((idx, 1), pres.composer(pres.generator(idx))))
        letters.append(((idx, -1), pres.composer(pres.inverse_generator(idx))))

    ident = identity_germ(pres.order, pres.conductor).jet
    start_a = fi.jet  # f_i o identity
    if start_a == compose_fj(ident):
        return Word.empty()
    seen = {ident.key()}
    queue = deque([((), ident, start_a)])
    while queue:
        word, h, a = queue.popleft()  # a = f_i o h, maintained incrementally
        if len(word) == max_len:
            continue
        last = word[-1] if word else None
        for letter, comp in letters:
            if last is not None and letter == (last[0], -last[1]):
                continue  # skip immediate cancellation: reduced words only
            child = comp(h)
            key = child.key()
            if key in seen:
                continue
            seen.add(key)
            child_a = comp(a)
            new_word = word + (letter,)
            if child_a == compose_fj(child):
                return Word(new_word)
            queue.append((new_word, child, child_a))
    return None


@dataclass(frozen=True)
class ConjugacyResolution:
    status: str  # "verified-by-witness" | "found-by-search" | "not-found-up-to"
    word: Optional[Word] = None
    max_len: Optional[int] = None

    @property
    def positive(self) -> bool:
        return self.status in ("verified-by-witness", "found-by-search")

    def to_json(self) -> dict:
        out: dict = {"status": self.status}
        if self.word is not None:
            out["word"] = self.word.to_json()
        if self.max_len is not None:
            out["max_len"] = self.max_len
        return out


@dataclass
class IrreducibilityReport:
    product_ok: bool
    multiplier: CycloElem
    multiplier_order: Optional[int]
    multipliers_all_equal: bool
    conjugacy: dict[tuple[int, int], ConjugacyResolution]
    theorem_a_applicable: bool
    prime_power: Optional[tuple[Optional[int], int]] = None

    @property
    def all_conjugacies_positive(self) -> bool:
        return all(r.positive for r in self.conjugacy.values())

    @property
    def certified(self) -> bool:
        """The exit-code condition: product identity plus every pair resolved."""
        return self.product_ok and self.all_conjugacies_positive

    def to_json(self) -> dict:
        conj = {
            f"({i},{j})": self.conjugacy[(i, j)].to_json()
            for (i, j) in sorted(self.conjugacy)
        }
        pp = None
        if self.prime_power is not None:
            pp = {"p": self.prime_power[0], "s": self.prime_power[1]}
        return {
            "product_ok": self.product_ok,
            "multiplier": format_scalar(self.multiplier),
            "multiplier_order": self.multiplier_order,
            "multipliers_all_equal": self.multipliers_all_equal,
            "conjugacy": conj,
            "theorem_a_applicable": self.theorem_a_applicable,
            "prime_power": pp,
            "certified": self.certified,
        }


def _lookup_witness(pres: GroupPresentation, i: int, j: int) -> Optional[Word]:
    w = pres.witnesses.get((i, j))
    if w is not None:
        return w
    w = pres.witnesses.get((j, i))
    if w is not None:
        # g conjugates f_j to f_i iff g^{-1} conjugates f_i to f_j
        return w.inverse()
    return None


def certify(
    pres: GroupPresentation, max_len: int = DEFAULT_MAX_WORD_LEN
) -> IrreducibilityReport:
    """Run all certification checks and assemble the report.

    Witnesses are consulted first; bounded search is the fallback.  The
    finiteness criterion is marked applicable only when the product identity,
    multiplier equality, every conjugacy, and the prime-power condition on
    the multiplier order all hold.
    """
    product_ok = check_product_identity(pres)
    mults = [g.multiplier for g in pres.gens]
    mult = mults[0]
    all_equal = all(m == mult for m in mults[1:])
    order = root_of_unity_order(mult)

    conjugacy: dict[tuple[int, int], ConjugacyResolution] = {}
    m = len(pres.gens)
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            w = _lookup_witness(pres, i, j)
            if w is not None and check_conjugacy_witness(pres, i, j, w):
                conjugacy[(i, j)] = ConjugacyResolution("verified-by-witness", word=w)
                continue
            found = search_conjugator(pres, i, j, max_len)
            if found is not None:
                conjugacy[(i, j)] = ConjugacyResolution("found-by-search", word=found)
            else:
                conjugacy[(i, j)] = ConjugacyResolution(
                    "not-found-up-to", max_len=max_len
                )

    pp = prime_power_order(order) if order is not None else None
    applicable = (
        product_ok
        and all_equal
        and all(r.positive for r in conjugacy.values())
        and pp is not None
    )
    return IrreducibilityReport(
        product_ok=product_ok,
        multiplier=mult,
        multiplier_order=order,
        multipliers_all_equal=all_equal,
        conjugacy=conjugacy,
        theorem_a_applicable=applicable,
        prime_power=pp if applicable else None,
    )


# -- presentation files ---------------------------------------------------------


@dataclass
class LoadedPresentation:
    label: str
    scalars: dict[str, CycloElem]
    presentation: GroupPresentation


_PAIR_RE = re.compile(r"^\((\d+),(\d+)\)$")


def _parse_witnesses(raw: dict) -> dict[tuple[int, int], Word]:
    out: dict[tuple[int, int], Word] = {}
    for key, letters in raw.items():
        m = _PAIR_RE.match(key.replace(" ", ""))
        if not m:
            raise PresentationError(f"bad witness key {key!r}; expected \"(i,j)\"")
        try:
            word = Word.from_list(letters)
        except (TypeError, ValueError) as exc:
            raise PresentationError(f"bad witness word for {key}: {exc}") from exc
        out[(int(m.group(1)), int(m.group(2)))] = word
    return out


def load_presentation_text(
    text: str, order: Optional[int] = None
) -> list[LoadedPresentation]:
    """Parse presentation JSON; one result per solution of the constraints."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PresentationError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise PresentationError("presentation file must hold a JSON object")
    gens_raw = data.get("generators")
    if not isinstance(gens_raw, list) or len(gens_raw) < 2:
        raise PresentationError('field "generators" must list at least two expressions')
    n_order = order if order is not None else data.get("order", DEFAULT_ORDER)
    if not isinstance(n_order, int) or n_order < 1:
        raise PresentationError('field "order" must be a positive integer')

    field_spec = data.get("field") or {}
    conductor = field_spec.get("conductor", 1)
    constraints = field_spec.get("constraints", [])
    var = field_spec.get("var", "a")
    if constraints:
        solutions = solve_root_constraints(conductor, constraints, var=var)
        if not solutions:
            raise PresentationError(
                f"no root of unity of conductor {conductor} satisfies the constraints"
            )
        envs = [({var: sol}, f"{var}={format_scalar(sol)}") for sol in solutions]
    else:
        envs = [({}, "")]

    witnesses = _parse_witnesses(data.get("witnesses") or {})
    out = []
    for env, label in envs:
        gens = []
        for idx, expr in enumerate(gens_raw, start=1):
            if not isinstance(expr, str):
                raise PresentationError(f"generator {idx} must be an expression string")
            try:
                jet = series_from_string(expr, env, order=n_order)
                germ = Germ(jet)
            except (ExpressionError, ValueError) as exc:
                raise PresentationError(f"generator {idx} ({expr!r}): {exc}") from exc
            gens.append(germ)
        out.append(
            LoadedPresentation(
                label=label,
                scalars=dict(env),
                presentation=GroupPresentation(gens, witnesses, order=n_order),
            )
        )
    return out


def load_presentation_file(
    path: str, order: Optional[int] = None
) -> list[LoadedPresentation]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise PresentationError(f"cannot read {path}: {exc}") from exc
    return load_presentation_text(text, order=order)
