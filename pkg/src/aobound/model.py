"""Graphical model instances: variables, table functions, UAI parsing, evidence."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

import numpy as np


class ModelError(ValueError):
    """Raised for malformed or inconsistent model input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Kind(enum.Enum):
    BAYES = "BAYES"
    MARKOV = "MARKOV"


@dataclass(frozen=True)
class Variable:
    id: int
    domain_size: int

    def __post_init__(self):
        # plain ints keep every downstream product arbitrary precision
        object.__setattr__(self, "id", int(self.id))
        object.__setattr__(self, "domain_size", int(self.domain_size))
        if self.domain_size < 1:
            raise ModelError(f"variable {self.id}: domain size {self.domain_size} < 1")


@dataclass(frozen=True, eq=False)
class FunctionTable:
    """A table function over an ordered scope.

    ``values`` is flat with the last scope variable varying fastest.  The
    array is made read-only so the cached ``tightness`` cannot go stale.
    """

    id: int
    scope: tuple[int, ...]
    values: np.ndarray
    zero_epsilon: float = 0.0
    tightness: int = field(init=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64).ravel()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "scope", tuple(int(v) for v in self.scope))
        if len(set(self.scope)) != len(self.scope):
            raise ModelError(f"function {self.id}: repeated variable in scope {self.scope}")
        if values.size and values.min() < 0:
            raise ModelError(f"function {self.id}: negative table value")
        object.__setattr__(self, "tightness", int(np.count_nonzero(values > self.zero_epsilon)))

    @property
    def size(self) -> int:
        return int(self.values.size)

    def __eq__(self, other):
        if not isinstance(other, FunctionTable):
            return NotImplemented
        return (
            self.id == other.id
            and self.scope == other.scope
            and np.array_equal(self.values, other.values)
        )

    __hash__ = object.__hash__


@dataclass(frozen=True)
class Evidence:
    assignments: Mapping[int, int]


@dataclass(frozen=True, eq=False)
class GraphicalModel:
    variables: tuple[Variable, ...]
    functions: tuple[FunctionTable, ...]
    kind: Kind = Kind.MARKOV
    zero_epsilon: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "functions", tuple(self.functions))
        n = len(self.variables)
        for i, var in enumerate(self.variables):
            if var.id != i:
                raise ModelError(f"variable ids must be contiguous 0..{n - 1}, got {var.id} at {i}")
        for j, f in enumerate(self.functions):
            if f.id != j:
                raise ModelError(f"function ids must be contiguous, got {f.id} at {j}")
            for v in f.scope:
                if not 0 <= v < n:
                    raise ModelError(f"function {f.id}: scope variable {v} out of range")
            expected = math.prod(self.variables[v].domain_size for v in f.scope)
            if f.size != expected:
                raise ModelError(
                    f"function {f.id}: table has {f.size} entries, scope needs {expected}"
                )

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def domains(self) -> list[int]:
        return [v.domain_size for v in self.variables]

    def __eq__(self, other):
        if not isinstance(other, GraphicalModel):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.variables == other.variables
            and self.functions == other.functions
        )

    __hash__ = object.__hash__


def make_model(
    domains: Sequence[int],
    tables: Sequence[tuple[Sequence[int], Sequence[float]]],
    kind: Kind = Kind.MARKOV,
    zero_epsilon: float = 0.0,
) -> GraphicalModel:
    """Build a model from domain sizes and ``(scope, values)`` pairs."""
    variables = [Variable(i, d) for i, d in enumerate(domains)]
    functions = [
        FunctionTable(j, tuple(scope), np.asarray(values, dtype=np.float64), zero_epsilon)
        for j, (scope, values) in enumerate(tables)
    ]
    return GraphicalModel(variables, functions, kind, zero_epsilon)


def _tokens(text: str) -> Iterator[tuple[str, int]]:
    for lineno, line in enumerate(text.splitlines(), 1):
        for tok in line.split():
            yield tok, lineno


class _TokenStream:
    def __init__(self, text: str):
        self._it = _tokens(text)
        self.line = 1

    def next(self, what: str) -> str:
        try:
            tok, self.line = next(self._it)
        except StopIteration:
            raise ModelError(f"unexpected end of input, expected {what}", self.line) from None
        return tok

    def int(self, what: str) -> int:
        tok = self.next(what)
        try:
            return int(tok)
        except ValueError:
            raise ModelError(f"expected integer {what}, got {tok!r}", self.line) from None

    def float(self, what: str) -> float:
        tok = self.next(what)
        try:
            return float(tok)
        except ValueError:
            raise ModelError(f"expected number {what}, got {tok!r}", self.line) from None

    def rest(self) -> list[tuple[str, int]]:
        return list(self._it)


def parse_model(text: str, zero_epsilon: float = 0.0) -> GraphicalModel:
    """Parse a UAI-format instance (BAYES or MARKOV preamble plus tables)."""
    ts = _TokenStream(text)
    header = ts.next("model type")
    try:
        kind = Kind(header.upper())
    except ValueError:
        raise ModelError(f"unknown model type {header!r}", ts.line) from None

    n = ts.int("variable count")
    if n < 0:
        raise ModelError("negative variable count", ts.line)
    domains = []
    for i in range(n):
        d = ts.int(f"domain size of variable {i}")
        if d < 1:
            raise ModelError(f"domain size {d} < 1 for variable {i}", ts.line)
        domains.append(d)

    m = ts.int("function count")
    if m < 0:
        raise ModelError("negative function count", ts.line)
    scopes = []
    for j in range(m):
        arity = ts.int(f"scope size of function {j}")
        if arity < 0:
            raise ModelError(f"negative scope size for function {j}", ts.line)
        scope = []
        for _ in range(arity):
            v = ts.int(f"scope variable of function {j}")
            if not 0 <= v < n:
                raise ModelError(f"function {j}: variable {v} out of range", ts.line)
            scope.append(v)
        if len(set(scope)) != len(scope):
            raise ModelError(f"function {j}: repeated variable in scope", ts.line)
        scopes.append(tuple(scope))

    functions = []
    for j, scope in enumerate(scopes):
        count = ts.int(f"entry count of table {j}")
        expected = math.prod(domains[v] for v in scope)
        if count != expected:
            raise ModelError(
                f"table {j}: declares {count} entries, scope needs {expected}", ts.line
            )
        values = np.empty(count, dtype=np.float64)
        for i in range(count):
            x = ts.float(f"entry {i} of table {j}")
            if x < 0 or math.isnan(x):
                raise ModelError(f"table {j}: invalid value {x}", ts.line)
            values[i] = x
        functions.append(FunctionTable(j, scope, values, zero_epsilon))

    extra = ts.rest()
    if extra:
        tok, line = extra[0]
        raise ModelError(f"trailing token {tok!r} after last table", line)

    variables = [Variable(i, d) for i, d in enumerate(domains)]
    return GraphicalModel(variables, functions, kind, zero_epsilon)


def read_model(path, zero_epsilon: float = 0.0) -> GraphicalModel:
    with open(path) as fh:
        return parse_model(fh.read(), zero_epsilon)


def serialize_model(model: GraphicalModel) -> str:
    """Write ``model`` back to UAI text; floats use ``repr`` so values round-trip exactly."""
    lines = [model.kind.value, str(model.n), " ".join(str(d) for d in model.domains)]
    lines.append(str(len(model.functions)))
    for f in model.functions:
        lines.append(" ".join(str(x) for x in (len(f.scope), *f.scope)))
    for f in model.functions:
        lines.append("")
        lines.append(str(f.size))
        lines.append(" ".join(repr(float(x)) for x in f.values))
    return "\n".join(lines) + "\n"


def parse_evidence(text: str) -> Evidence:
    """Evidence file: a count ``c`` followed by ``c`` pairs ``var value``."""
    ts = _TokenStream(text)
    count = ts.int("evidence count")
    if count < 0:
        raise ModelError("negative evidence count", ts.line)
    assignments = {}
    for _ in range(count):
        var = ts.int("evidence variable")
        val = ts.int("evidence value")
        if var in assignments and assignments[var] != val:
            raise ModelError(f"conflicting evidence for variable {var}", ts.line)
        assignments[var] = val
    extra = ts.rest()
    if extra:
        tok, line = extra[0]
        raise ModelError(f"trailing token {tok!r} in evidence", line)
    return Evidence(assignments)


def read_evidence(path) -> Evidence:
    with open(path) as fh:
        return parse_evidence(fh.read())


def apply_evidence(model: GraphicalModel, ev: Evidence) -> GraphicalModel:
    """Condition ``model`` on ``ev``.

    Observed variables stay in the model with a singleton domain, so ids are
    stable.  They are dropped from every function scope and the tables are
    sliced accordingly; a function whose whole scope is observed becomes a
    constant (empty-scope) function.
    """
    for var, val in ev.assignments.items():
        if not 0 <= var < model.n:
            raise ModelError(f"evidence on unknown variable {var}")
        if not 0 <= val < model.variables[var].domain_size:
            raise ModelError(
                f"evidence value {val} out of range for variable {var} "
                f"(domain size {model.variables[var].domain_size})"
            )

    obs = ev.assignments
    functions = []
    for f in model.functions:
        if not any(v in obs for v in f.scope):
            functions.append(f)
            continue
        shape = tuple(model.variables[v].domain_size for v in f.scope)
        index = tuple(obs[v] if v in obs else slice(None) for v in f.scope)
        sliced = f.values.reshape(shape)[index]
        scope = tuple(v for v in f.scope if v not in obs)
        functions.append(FunctionTable(f.id, scope, np.ravel(sliced), model.zero_epsilon))

    variables = [
        Variable(v.id, 1) if v.id in obs else v for v in model.variables
    ]
    return GraphicalModel(variables, functions, model.kind, model.zero_epsilon)


def tightness_ratio(model: GraphicalModel) -> float:
    """Mean fraction of relevant entries per table over all functions."""
    if not model.functions:
        raise ModelError("tightness ratio undefined for a model without functions")
    return sum(f.tightness / f.size for f in model.functions) / len(model.functions)


def model_stats(model: GraphicalModel) -> tuple[int, int, int, int]:
    """Return ``(n, k, r, m)``: variables, max domain, max arity, functions."""
    k = max(model.domains, default=0)
    r = max((len(f.scope) for f in model.functions), default=0)
    return model.n, k, r, len(model.functions)
