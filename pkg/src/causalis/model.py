"""Finite, acyclic structural causal models.

A model couples a signature (exogenous and endogenous variables with finite
ranges) with one lookup-table equation per endogenous variable and any number
of named contexts (total exogenous assignments).  Values are opaque symbols;
``"0"`` and ``"1"`` are tokens, not numbers.

Everything here is immutable after construction and all operations are pure,
so models can be shared freely across threads.
"""
from __future__ import annotations

from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from itertools import product

from .errors import (
    CyclicModelError,
    DuplicateNameError,
    ExogenousVariableError,
    MissingContextError,
    NonTotalTableError,
    UnknownNameError,
    UnknownValueError,
)

__all__ = ["Signature", "StructuralEquation", "CausalModel", "World"]


def _check_unique(names, what):
    seen = set()
    for n in names:
        if n in seen:
            raise DuplicateNameError(f"duplicate {what} {n!r}")
        seen.add(n)


@dataclass(frozen=True)
class Signature:
    """Variable names and their finite value ranges.

    ``exogenous`` and ``endogenous`` are ordered; declaration order is the
    tie-breaker for every deterministic enumeration in the package.
    """

    exogenous: tuple[str, ...]
    endogenous: tuple[str, ...]
    ranges: dict[str, tuple[str, ...]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "exogenous", tuple(self.exogenous))
        object.__setattr__(self, "endogenous", tuple(self.endogenous))
        object.__setattr__(
            self, "ranges", {v: tuple(r) for v, r in self.ranges.items()}
        )
        if not self.exogenous:
            raise UnknownNameError("a signature needs at least one exogenous variable")
        if not self.endogenous:
            raise UnknownNameError("a signature needs at least one endogenous variable")
        _check_unique(self.exogenous, "exogenous variable")
        _check_unique(self.endogenous, "endogenous variable")
        overlap = set(self.exogenous) & set(self.endogenous)
        if overlap:
            raise DuplicateNameError(
                f"variable {sorted(overlap)[0]!r} is both exogenous and endogenous"
            )
        for v in self.variables:
            r = self.ranges.get(v)
            if not r:
                raise UnknownValueError(f"variable {v!r} has an empty or missing range")
            _check_unique(r, f"value in range of {v}")
        extra = set(self.ranges) - set(self.variables)
        if extra:
            raise UnknownNameError(f"range declared for unknown variable {sorted(extra)[0]!r}")

    @property
    def variables(self) -> tuple[str, ...]:
        return self.exogenous + self.endogenous

    def is_exogenous(self, name: str) -> bool:
        return name in self.exogenous

    def is_endogenous(self, name: str) -> bool:
        return name in self.endogenous

    def range_of(self, name: str) -> tuple[str, ...]:
        try:
            return self.ranges[name]
        except KeyError:
            raise UnknownNameError(f"unknown variable {name!r}") from None


@dataclass(frozen=True)
class StructuralEquation:
    """A total lookup table from parent-value tuples to a value of ``target``.

    ``parents`` is ordered and indexes the table keys positionally.  Totality
    and range membership are validated against the signature by the owning
    model (and cached per signature, since equations are shared unchanged
    between a model and its intervened variants).
    """

    target: str
    parents: tuple[str, ...]
    table: dict[tuple[str, ...], str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "parents", tuple(self.parents))
        object.__setattr__(
            self, "table", {tuple(k): v for k, v in self.table.items()}
        )
        _check_unique(self.parents, f"parent of {self.target}")
        if self.target in self.parents:
            raise DuplicateNameError(f"{self.target!r} cannot be its own parent")
        for key in self.table:
            if len(key) != len(self.parents):
                raise NonTotalTableError(
                    f"table row {key!r} for {self.target!r} has "
                    f"{len(key)} entries, expected {len(self.parents)}"
                )
        if not self.table:
            raise NonTotalTableError(f"equation for {self.target!r} has an empty table")

    @classmethod
    def constant(cls, target: str, value: str) -> StructuralEquation:
        return cls(target=target, parents=(), table={(): value})

    @property
    def is_constant(self) -> bool:
        return not self.parents

    def nontrivial_parents(self) -> frozenset[str]:
        """Parents the table output actually varies with.

        A parent is trivial when every pair of rows differing only in its
        position agrees on the output.
        """
        cached = self.__dict__.get("_nontrivial")
        if cached is not None:
            return cached
        nontrivial = set()
        for i, p in enumerate(self.parents):
            groups: dict[tuple[str, ...], str] = {}
            for key, out in self.table.items():
                rest = key[:i] + key[i + 1 :]
                prev = groups.get(rest)
                if prev is None:
                    groups[rest] = out
                elif prev != out:
                    nontrivial.add(p)
                    break
        result = frozenset(nontrivial)
        self.__dict__["_nontrivial"] = result
        return result

    def _validate_against(self, sig: Signature) -> None:
        cache = self.__dict__.get("_validated_sigs")
        if cache is not None and id(sig) in cache:
            return
        if not sig.is_endogenous(self.target):
            raise UnknownNameError(f"equation target {self.target!r} is not endogenous")
        for p in self.parents:
            if p not in sig.variables:
                raise UnknownNameError(f"unknown parent {p!r} of {self.target!r}")
        target_range = sig.range_of(self.target)
        parent_ranges = [sig.range_of(p) for p in self.parents]
        expected = 1
        for r in parent_ranges:
            expected *= len(r)
        if len(self.table) != expected:
            for key in product(*parent_ranges):
                if key not in self.table:
                    raise NonTotalTableError(
                        f"equation for {self.target!r} is missing the row {key!r}"
                    )
            raise NonTotalTableError(
                f"equation for {self.target!r} has {len(self.table)} rows, "
                f"expected {expected}"
            )
        for key, out in self.table.items():
            for p, r, val in zip(self.parents, parent_ranges, key):
                if val not in r:
                    raise UnknownValueError(
                        f"row value {val!r} is not in the range of parent {p!r}"
                    )
            if out not in target_range:
                raise UnknownValueError(
                    f"output {out!r} is not in the range of {self.target!r}"
                )
        # keep a strong reference so the id stays valid for the cache lifetime
        cache = self.__dict__.setdefault("_validated_sigs", {})
        cache[id(sig)] = sig


class World(Mapping):
    """A total assignment of values to all variables of a model."""

    __slots__ = ("_assignment",)

    def __init__(self, assignment: Mapping[str, str]):
        self._assignment = dict(assignment)

    def __getitem__(self, name: str) -> str:
        try:
            return self._assignment[name]
        except KeyError:
            raise UnknownNameError(f"unknown variable {name!r}") from None

    def __iter__(self) -> Iterator[str]:
        return iter(self._assignment)

    def __len__(self) -> int:
        return len(self._assignment)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, World):
            return self._assignment == other._assignment
        if isinstance(other, Mapping):
            return self._assignment == dict(other)
        return NotImplemented

    def __hash__(self):  # Mappings with dict payloads are not hashable
        raise TypeError("World is not hashable")

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}: {v}" for k, v in self._assignment.items())
        return "World({" + inner + "})"


@dataclass(frozen=True, eq=False)
class CausalModel:
    """A signature, one equation per endogenous variable, and named contexts.

    Construction validates all invariants: equation totality, range checks,
    and acyclicity of the nontrivial-dependency graph.  Equality is
    structural over signature, equations, and contexts; the display name is
    ignored.
    """

    signature: Signature
    equations: dict[str, StructuralEquation]
    contexts: dict[str, dict[str, str]]
    name: str = "model"

    def __post_init__(self) -> None:
        object.__setattr__(self, "equations", dict(self.equations))
        object.__setattr__(
            self, "contexts", {c: dict(a) for c, a in self.contexts.items()}
        )
        sig = self.signature
        for v in sig.endogenous:
            if v not in self.equations:
                raise UnknownNameError(f"no equation for endogenous variable {v!r}")
        for v, eq in self.equations.items():
            if not sig.is_endogenous(v):
                raise UnknownNameError(f"equation given for non-endogenous {v!r}")
            if eq.target != v:
                raise UnknownNameError(
                    f"equation stored under {v!r} targets {eq.target!r}"
                )
            eq._validate_against(sig)
        for cname, assignment in self.contexts.items():
            for u in sig.exogenous:
                if u not in assignment:
                    raise MissingContextError(
                        f"context {cname!r} does not assign exogenous {u!r}"
                    )
            for u, val in assignment.items():
                if not sig.is_exogenous(u):
                    raise ExogenousVariableError(
                        f"context {cname!r} assigns non-exogenous variable {u!r}"
                    )
                if val not in sig.range_of(u):
                    raise UnknownValueError(
                        f"context {cname!r} assigns {u!r} the out-of-range value {val!r}"
                    )
        object.__setattr__(self, "_order", self._toposort())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CausalModel):
            return NotImplemented
        return (
            self.signature == other.signature
            and self.equations == other.equations
            and self.contexts == other.contexts
        )

    # -- dependency structure ------------------------------------------------

    def depends_on(self, v: str, w: str) -> bool:
        """Does the equation of endogenous ``v`` nontrivially read ``w``?

        Variables outside the declared parent list, and declared parents the
        table output never varies with, are non-dependencies.
        """
        sig = self.signature
        if not sig.is_endogenous(v):
            raise UnknownNameError(f"{v!r} is not an endogenous variable")
        if w not in sig.variables:
            raise UnknownNameError(f"unknown variable {w!r}")
        eq = self.equations[v]
        if w not in eq.parents:
            return False
        return w in eq.nontrivial_parents()

    def _toposort(self) -> tuple[str, ...]:
        sig = self.signature
        endo = sig.endogenous
        preds = {
            v: {w for w in self.equations[v].nontrivial_parents() if w in set(endo)}
            for v in endo
        }
        order: list[str] = []
        placed: set[str] = set()
        while len(order) < len(endo):
            ready = next(
                (v for v in endo if v not in placed and preds[v] <= placed), None
            )
            if ready is None:
                remaining = [v for v in endo if v not in placed]
                raise CyclicModelError(
                    f"cyclic dependencies among {', '.join(remaining)}"
                )
            order.append(ready)
            placed.add(ready)
        return tuple(order)

    def dependency_order(self) -> list[str]:
        """Topological order of the endogenous nontrivial-dependency graph.

        Ties are broken by declaration order, so the result is deterministic.
        Re-validates acyclicity (construction already rejects cycles).
        """
        return list(self._toposort())

    # -- solving and intervening ---------------------------------------------

    def solve(self, context: str) -> World:
        """The unique world compatible with the model in ``context``."""
        return self._solve_with(context, None)

    def _solve_with(self, context: str, overrides: Mapping[str, str] | None) -> World:
        """Solve with some endogenous variables clamped to constants.

        ``overrides`` behaves exactly like solving ``intervene(overrides)``
        but skips building the intervened model; the evaluator leans on this
        for cause-free subformulas.
        """
        sig = self.signature
        if context not in self.contexts:
            raise UnknownNameError(f"unknown context {context!r}")
        values: dict[str, str] = dict(self.contexts[context])
        for v in self._order:  # type: ignore[attr-defined]
            if overrides is not None and v in overrides:
                values[v] = overrides[v]
                continue
            eq = self.equations[v]
            key = tuple(
                values.get(p) if values.get(p) is not None
                # a parent not yet solved is trivial by acyclicity: any value
                # of it yields the same output, so probe with the first
                else sig.range_of(p)[0]
                for p in eq.parents
            )
            values[v] = eq.table[key]
        ordered = {v: values[v] for v in sig.variables}
        return World(ordered)

    def intervene(self, settings: Mapping[str, str]) -> CausalModel:
        """Replace each targeted variable's equation with a constant.

        Later interventions on the same variable override earlier ones;
        contexts and all untouched equations are shared unchanged.
        """
        sig = self.signature
        for v, val in settings.items():
            if v not in sig.variables:
                raise UnknownNameError(f"unknown variable {v!r}")
            if sig.is_exogenous(v):
                raise ExogenousVariableError(f"cannot intervene on exogenous {v!r}")
            if val not in sig.range_of(v):
                raise UnknownValueError(
                    f"value {val!r} is not in the range of {v!r}"
                )
        if not settings:
            return self
        equations = dict(self.equations)
        for v, val in settings.items():
            equations[v] = StructuralEquation.constant(v, val)
        return CausalModel(
            signature=sig, equations=equations, contexts=self.contexts, name=self.name
        )

    def context_names(self) -> list[str]:
        return list(self.contexts)
