"""Forward-chaining rule engine.

Rules are condition -> conclusion conjunctions of atoms in the style of
`Automobile(?a) ^ productionDate(?a, ?d) ^ swrlb:greaterThan(?x, 48)
-> isRequired(?c, true)`. Evaluation runs to a least fixpoint with
semi-naive passes: after the first pass a rule only fires on matches that
touch at least one newly derived triple.
"""

from __future__ import annotations

import calendar
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterator, Optional, Union

from .graph import Graph
from .terms import (
    Datatype,
    Iri,
    Literal,
    Term,
    TermError,
    Triple,
    Variable,
    integer,
)
from .vocab import RDF_TYPE

BUILTIN_NAMES = (
    "swrlb:greaterThan",
    "swrlb:lessThan",
    "swrlb:equal",
    "temporal:duration",
)

TermOrVar = Union[Iri, Literal, Variable]


class RuleParseError(ValueError):
    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class RuleEvaluationError(RuntimeError):
    """A builtin was applied to arguments it cannot handle."""


@dataclass(frozen=True)
class ClassAtom:
    cls: Iri
    term: TermOrVar


@dataclass(frozen=True)
class PropertyAtom:
    prop: Iri
    subject: TermOrVar
    object: TermOrVar


@dataclass(frozen=True)
class SameAsAtom:
    left: TermOrVar
    right: TermOrVar


@dataclass(frozen=True)
class BuiltinAtom:
    name: str
    args: tuple[TermOrVar, ...]


Atom = Union[ClassAtom, PropertyAtom, SameAsAtom, BuiltinAtom]


def _atom_variables(atom: Atom) -> Iterator[Variable]:
    if isinstance(atom, ClassAtom):
        parts: tuple = (atom.term,)
    elif isinstance(atom, PropertyAtom):
        parts = (atom.subject, atom.object)
    elif isinstance(atom, SameAsAtom):
        parts = (atom.left, atom.right)
    else:
        parts = atom.args
    for part in parts:
        if isinstance(part, Variable):
            yield part


@dataclass(frozen=True)
class Rule:
    name: str
    condition: tuple[Atom, ...]
    conclusion: tuple[Atom, ...]

    def __post_init__(self) -> None:
        if not self.conclusion:
            raise TermError(f"rule {self.name}: empty conclusion")
        condition_vars = {
            v for atom in self.condition for v in _atom_variables(atom)
        }
        for atom in self.conclusion:
            if not isinstance(atom, (ClassAtom, PropertyAtom)):
                raise TermError(
                    f"rule {self.name}: conclusion atoms must be class or "
                    f"property atoms"
                )
            for v in _atom_variables(atom):
                if v not in condition_vars:
                    raise TermError(
                        f"rule {self.name}: unsafe variable ?{v.name} in "
                        f"conclusion"
                    )


@dataclass
class RuleSet:
    rules: list[Rule] = field(default_factory=list)
    reference_time: datetime = field(default_factory=datetime.now)

    def __post_init__(self) -> None:
        names = [r.name for r in self.rules]
        if len(set(names)) != len(names):
            raise TermError("duplicate rule names")


# ---------------------------------------------------------------------------
# Rule document parsing
# ---------------------------------------------------------------------------

_NAME_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_\-]*)\s*:\s*(.*)$", re.S)
_ATOM_RE = re.compile(
    r"^\s*([A-Za-z_][\w\-]*(?::[A-Za-z_][\w\-]*)?)\s*\((.*)\)\s*$", re.S
)
_PREFIX_RE = re.compile(r"^@prefix\s+([A-Za-z_][\w\-]*)?\s*:\s*<([^>]*)>\s*\.?\s*$")
_VAR_RE = re.compile(r"^\?([A-Za-z][A-Za-z0-9]*)$")
_INT_RE = re.compile(r"^[+-]?[0-9]+$")
_FLOAT_RE = re.compile(r"^[+-]?(\d+\.\d*|\.\d+)([eE][+-]?\d+)?$")


def _strip_comment(line: str) -> str:
    out = []
    in_string = False
    in_iri = False
    for i, ch in enumerate(line):
        if ch == '"' and not in_iri and (i == 0 or line[i - 1] != "\\"):
            in_string = not in_string
        elif ch == "<" and not in_string:
            in_iri = True
        elif ch == ">" and not in_string:
            in_iri = False
        if ch == "#" and not in_string and not in_iri:
            break
        out.append(ch)
    return "".join(out)


def _split_args(text: str, line_no: int) -> list[str]:
    args: list[str] = []
    current: list[str] = []
    in_string = False
    for ch in text:
        if ch == '"':
            in_string = not in_string
        if ch == "," and not in_string:
            args.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    tail = "".join(current).strip()
    if tail:
        args.append(tail)
    if in_string:
        raise RuleParseError("unterminated string in atom arguments", line_no)
    return args


class _RuleDocumentParser:
    def __init__(self) -> None:
        self.prefixes: dict[str, str] = {}

    def parse(self, text: str, reference_time: Optional[datetime]) -> RuleSet:
        rules: list[Rule] = []
        pending = ""
        pending_start = 0
        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = _strip_comment(raw).strip()
            if pending:
                line = pending + " " + line
            else:
                pending_start = line_no
            if line.endswith("\\"):
                pending = line[:-1].strip()
                continue
            pending = ""
            if not line:
                continue
            if line.startswith("@prefix"):
                self._parse_prefix(line, pending_start)
            else:
                rules.append(self._parse_rule(line, pending_start))
        if pending:
            raise RuleParseError("dangling line continuation", pending_start)
        if reference_time is None:
            return RuleSet(rules)
        return RuleSet(rules, reference_time)

    def _parse_prefix(self, line: str, line_no: int) -> None:
        m = _PREFIX_RE.match(line)
        if not m:
            raise RuleParseError(f"malformed @prefix line: {line!r}", line_no)
        self.prefixes[m.group(1) or ""] = m.group(2)

    def _parse_rule(self, line: str, line_no: int) -> Rule:
        m = _NAME_RE.match(line)
        if not m:
            raise RuleParseError(f"expected `name : condition -> conclusion`",
                                 line_no)
        name, body = m.group(1), m.group(2)
        if "->" not in body:
            raise RuleParseError(f"rule {name}: missing ->", line_no)
        condition_text, conclusion_text = body.split("->", 1)
        condition = self._parse_atoms(condition_text, line_no)
        conclusion = self._parse_atoms(conclusion_text, line_no)
        for atom in conclusion:
            if isinstance(atom, (SameAsAtom, BuiltinAtom)):
                raise RuleParseError(
                    f"rule {name}: builtins and sameAs are not allowed in "
                    f"conclusions", line_no)
        try:
            return Rule(name, tuple(condition), tuple(conclusion))
        except TermError as exc:
            raise RuleParseError(str(exc), line_no) from exc

    def _parse_atoms(self, text: str, line_no: int) -> list[Atom]:
        atoms = []
        for chunk in text.split("^"):
            chunk = chunk.strip()
            if not chunk:
                raise RuleParseError("empty atom", line_no)
            atoms.append(self._parse_atom(chunk, line_no))
        return atoms

    def _parse_atom(self, text: str, line_no: int) -> Atom:
        m = _ATOM_RE.match(text)
        if not m:
            raise RuleParseError(f"malformed atom: {text!r}", line_no)
        functor, arg_text = m.group(1), m.group(2)
        args = [self._parse_arg(a, line_no) for a in _split_args(arg_text, line_no)]
        if functor in BUILTIN_NAMES:
            return BuiltinAtom(functor, tuple(args))
        if functor.split(":")[0] in ("swrlb", "temporal"):
            raise RuleParseError(f"unknown builtin {functor!r}", line_no)
        if functor == "sameAs":
            if len(args) != 2:
                raise RuleParseError("sameAs takes two arguments", line_no)
            return SameAsAtom(args[0], args[1])
        iri = Iri(self._resolve(functor, line_no))
        if len(args) == 1:
            return ClassAtom(iri, args[0])
        if len(args) == 2:
            return PropertyAtom(iri, args[0], args[1])
        raise RuleParseError(
            f"atom {functor!r} has arity {len(args)}, expected 1 or 2", line_no)

    def _parse_arg(self, text: str, line_no: int) -> TermOrVar:
        if _VAR_RE.match(text):
            return Variable(text[1:])
        if text.startswith('"') and text.endswith('"') and len(text) >= 2:
            return Literal(text[1:-1])
        if text.startswith("<") and text.endswith(">"):
            return Iri(text[1:-1])
        if _INT_RE.match(text):
            return Literal(text, Datatype.INTEGER)
        if _FLOAT_RE.match(text):
            return Literal(text, Datatype.FLOAT)
        if text in ("true", "false"):
            return Literal(text, Datatype.BOOLEAN)
        return Iri(self._resolve(text, line_no))

    def _resolve(self, name: str, line_no: int) -> str:
        prefix, _, local = name.partition(":")
        if not local:
            prefix, local = "", name
        if prefix not in self.prefixes:
            raise RuleParseError(f"undeclared prefix {prefix!r} in {name!r}",
                                 line_no)
        return self.prefixes[prefix] + local


def parse_rules(text: str, reference_time: Optional[datetime] = None) -> RuleSet:
    return _RuleDocumentParser().parse(text, reference_time)


# ---------------------------------------------------------------------------
# Builtins
# ---------------------------------------------------------------------------


def _add_months(moment: datetime, months: int) -> datetime:
    month_index = moment.year * 12 + (moment.month - 1) + months
    year, month0 = divmod(month_index, 12)
    month = month0 + 1
    day = min(moment.day, calendar.monthrange(year, month)[1])
    return moment.replace(year=year, month=month, day=day)


def _as_naive_utc(moment: datetime) -> datetime:
    if moment.tzinfo is not None:
        return moment.astimezone(timezone.utc).replace(tzinfo=None)
    return moment


def months_between(start: datetime, end: datetime) -> int:
    """Whole completed calendar months from start to end (floor); the day
    of month clamps to each target month's length. Never negative."""
    start = _as_naive_utc(start)
    end = _as_naive_utc(end)
    total = (end.year - start.year) * 12 + (end.month - start.month)
    if _add_months(start, total) > end:
        total -= 1
    return max(total, 0)


def _numeric(term: TermOrVar, builtin: str) -> float:
    if isinstance(term, Literal) and term.is_numeric():
        return float(term.value())
    raise RuleEvaluationError(f"{builtin}: non-numeric argument {term!r}")


def eval_builtin(
    name: str,
    args: tuple[TermOrVar, ...],
    reference_time: datetime,
) -> Union[bool, dict[str, Literal]]:
    """Evaluate a builtin over substituted arguments.

    Comparison builtins return pass/fail. temporal:duration returns a
    binding extension when its first argument is still a variable,
    otherwise pass/fail against the bound value.
    """
    if name == "temporal:duration":
        if len(args) != 4:
            raise RuleEvaluationError("temporal:duration takes four arguments")
        target, date_arg, anchor, unit = args
        if not (isinstance(anchor, Literal) and anchor.lexical == "now"):
            raise RuleEvaluationError(
                f'temporal:duration: unsupported anchor {anchor!r} '
                f'(only "now")')
        if not (isinstance(unit, Literal) and unit.lexical == "Months"):
            raise RuleEvaluationError(
                f'temporal:duration: unsupported unit {unit!r} (only "Months")')
        if not (isinstance(date_arg, Literal)
                and date_arg.datatype is Datatype.DATETIME):
            raise RuleEvaluationError(
                f"temporal:duration: expected a dateTime, got {date_arg!r}")
        months = months_between(date_arg.value(), reference_time)
        if isinstance(target, Variable):
            return {target.name: integer(months)}
        return _numeric(target, name) == months

    if name not in BUILTIN_NAMES:
        raise RuleEvaluationError(f"unknown builtin {name!r}")
    if len(args) != 2:
        raise RuleEvaluationError(f"{name} takes two arguments")
    left = _numeric(args[0], name)
    right = _numeric(args[1], name)
    if name == "swrlb:greaterThan":
        return left > right
    if name == "swrlb:lessThan":
        return left < right
    return left == right


# ---------------------------------------------------------------------------
# Condition matching and fixpoint
# ---------------------------------------------------------------------------

Binding = dict[str, Term]


def _substitute(part: TermOrVar, binding: Binding) -> TermOrVar:
    if isinstance(part, Variable):
        return binding.get(part.name, part)
    return part


def _pattern_of(atom: Atom) -> Optional[tuple[TermOrVar, TermOrVar, TermOrVar]]:
    if isinstance(atom, ClassAtom):
        return (atom.term, Iri(RDF_TYPE), atom.cls)
    if isinstance(atom, PropertyAtom):
        return (atom.subject, atom.prop, atom.object)
    return None


def _match_pattern(
    source: Graph,
    pattern: tuple[TermOrVar, TermOrVar, TermOrVar],
    binding: Binding,
) -> Iterator[Binding]:
    parts = tuple(_substitute(p, binding) for p in pattern)
    lookup = tuple(None if isinstance(p, Variable) else p for p in parts)
    for values in source.match_values(*lookup):
        extended = binding
        ok = True
        for part, value in zip(parts, values):
            if isinstance(part, Variable):
                bound = extended.get(part.name)
                if bound is None:
                    if extended is binding:
                        extended = dict(binding)
                    extended[part.name] = value
                elif bound != value:
                    ok = False
                    break
        if ok:
            yield extended if extended is not binding else dict(binding)


def _ready(atom: Atom, binding: Binding) -> bool:
    if isinstance(atom, SameAsAtom):
        return all(
            not isinstance(_substitute(p, binding), Variable)
            for p in (atom.left, atom.right)
        )
    assert isinstance(atom, BuiltinAtom)
    args = [_substitute(a, binding) for a in atom.args]
    if atom.name == "temporal:duration":
        return all(not isinstance(a, Variable) for a in args[1:])
    return all(not isinstance(a, Variable) for a in args)


def _eval_test_atom(
    atom: Atom, binding: Binding, reference_time: datetime
) -> Optional[Binding]:
    """Evaluate a sameAs or builtin atom; None means the test failed."""
    if isinstance(atom, SameAsAtom):
        left = _substitute(atom.left, binding)
        right = _substitute(atom.right, binding)
        return binding if left == right else None
    assert isinstance(atom, BuiltinAtom)
    args = tuple(_substitute(a, binding) for a in atom.args)
    result = eval_builtin(atom.name, args, reference_time)
    if result is True:
        return binding
    if result is False:
        return None
    extended = dict(binding)
    for name, value in result.items():
        if name in extended:
            if extended[name] != value:
                return None
        else:
            extended[name] = value
    return extended


def _solve_condition(
    graph: Graph,
    atoms: tuple[Atom, ...],
    reference_time: datetime,
    delta: Optional[Graph] = None,
    delta_position: Optional[int] = None,
) -> Iterator[Binding]:
    """All bindings satisfying the condition, left to right. Test atoms
    (builtins, sameAs) whose arguments are not bound yet are deferred.
    When delta_position is given, that graph atom must match within delta
    (the semi-naive restriction)."""

    def advance(index: int, pending: tuple[Atom, ...], binding: Binding
                ) -> Iterator[Binding]:
        changed = True
        while changed:
            changed = False
            remaining = []
            for atom in pending:
                if _ready(atom, binding):
                    result = _eval_test_atom(atom, binding, reference_time)
                    if result is None:
                        return
                    binding = result
                    changed = True
                else:
                    remaining.append(atom)
            pending = tuple(remaining)
        if index == len(atoms):
            if pending:
                names = ", ".join(type(a).__name__ for a in pending)
                raise RuleEvaluationError(
                    f"unbound arguments in condition atoms: {names}")
            yield binding
            return
        atom = atoms[index]
        pattern = _pattern_of(atom)
        if pattern is None:
            yield from advance(index + 1, pending + (atom,), binding)
            return
        source = delta if index == delta_position else graph
        assert source is not None
        for extended in _match_pattern(source, pattern, binding):
            yield from advance(index + 1, pending, extended)

    yield from advance(0, (), {})


def _instantiate(atom: Atom, binding: Binding) -> Optional[Triple]:
    pattern = _pattern_of(atom)
    assert pattern is not None
    parts = tuple(_substitute(p, binding) for p in pattern)
    if any(isinstance(p, Variable) for p in parts):
        raise RuleEvaluationError(f"unbound variable in conclusion {atom!r}")
    try:
        return Triple(*parts)
    except TermError:
        # e.g. a literal bound into subject position; nothing to assert
        return None


def _apply(
    graph: Graph,
    rule: Rule,
    reference_time: datetime,
    delta: Optional[Graph],
    first_pass: bool,
) -> set[Triple]:
    derived: set[Triple] = set()

    def collect(position: Optional[int]) -> None:
        for binding in _solve_condition(
            graph, rule.condition, reference_time, delta, position
        ):
            for atom in rule.conclusion:
                triple = _instantiate(atom, binding)
                if triple is not None:
                    derived.add(triple)

    if delta is None or first_pass:
        collect(None)
        return derived
    graph_positions = [
        i for i, atom in enumerate(rule.condition)
        if _pattern_of(atom) is not None
    ]
    if not graph_positions:
        return derived  # ground rules cannot fire on new data
    for position in graph_positions:
        collect(position)
    return derived


def apply_rule(graph: Graph, rule: Rule, reference_time: datetime) -> set[Triple]:
    """Triples derivable from the rule against the full graph, including
    ones already present."""
    return _apply(graph, rule, reference_time, delta=None, first_pass=True)


def saturate(graph: Graph, ruleset: RuleSet) -> Graph:
    """Insert derived triples until the least fixpoint is reached. The
    result does not depend on rule order; the graph is mutated in place."""
    first_pass = True
    delta: Optional[Graph] = None
    while True:
        fresh: dict[Triple, None] = {}
        for rule in ruleset.rules:
            for triple in _apply(
                graph, rule, ruleset.reference_time, delta, first_pass
            ):
                if triple not in graph:
                    fresh[triple] = None
        if not fresh:
            return graph
        delta = Graph()
        for triple in fresh:
            graph.add(triple)
            delta.add(triple)
        first_pass = False
