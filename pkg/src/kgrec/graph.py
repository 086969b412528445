"""Indexed in-memory triple container.

Three nested-dict indexes (SPO, POS, OSP) give constant-time access for any
combination of bound positions. Plain dicts double as insertion-ordered
sets, so iteration order is deterministic for a fixed load sequence.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional

from .terms import Term, TermError, Triple

_Index = dict  # Term -> Term -> dict[Term, None]


class GraphFrozenError(RuntimeError):
    """Raised on mutation after freeze(); reads stay lock-free."""


class Graph:
    def __init__(self, triples: Iterable[Triple] = ()) -> None:
        self._triples: dict[Triple, None] = {}
        self._spo: _Index = {}
        self._pos: _Index = {}
        self._osp: _Index = {}
        self.prefixes: dict[str, str] = {}
        self._frozen = False
        self._predicate_counts: dict[Term, int] = {}
        for t in triples:
            self.add(t)

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._triples

    @property
    def frozen(self) -> bool:
        return self._frozen

    def freeze(self) -> "Graph":
        self._frozen = True
        return self

    def add(self, triple: Triple) -> bool:
        """Insert a triple; returns False if it was already present."""
        if self._frozen:
            raise GraphFrozenError("graph is frozen")
        if not isinstance(triple, Triple):
            raise TermError(f"not a triple: {triple!r}")
        if triple in self._triples:
            return False
        if self._predicate_counts:
            self._predicate_counts.clear()
        self._triples[triple] = None
        s, p, o = triple.subject, triple.predicate, triple.object
        self._spo.setdefault(s, {}).setdefault(p, {})[o] = None
        self._pos.setdefault(p, {}).setdefault(o, {})[s] = None
        self._osp.setdefault(o, {}).setdefault(s, {})[p] = None
        return True

    def update(self, triples: Iterable[Triple]) -> int:
        return sum(1 for t in triples if self.add(t))

    def match(
        self,
        subject: Optional[Term] = None,
        predicate: Optional[Term] = None,
        object: Optional[Term] = None,
    ) -> list[Triple]:
        """All triples agreeing with the bound positions (None = wildcard).

        The most selective index for the binding pattern is used; result
        order is deterministic for a fixed graph.
        """
        s, p, o = subject, predicate, object
        if s is not None and p is not None and o is not None:
            try:
                t = Triple(s, p, o)
            except TermError:
                return []  # e.g. a literal in subject position
            return [t] if t in self._triples else []
        if s is not None and p is not None:
            objs = self._spo.get(s, {}).get(p, {})
            return [Triple(s, p, obj) for obj in objs]
        if p is not None and o is not None:
            subs = self._pos.get(p, {}).get(o, {})
            return [Triple(sub, p, o) for sub in subs]
        if s is not None and o is not None:
            preds = self._osp.get(o, {}).get(s, {})
            return [Triple(s, pred, o) for pred in preds]
        if s is not None:
            return [
                Triple(s, pred, obj)
                for pred, objs in self._spo.get(s, {}).items()
                for obj in objs
            ]
        if p is not None:
            return [
                Triple(sub, p, obj)
                for obj, subs in self._pos.get(p, {}).items()
                for sub in subs
            ]
        if o is not None:
            return [
                Triple(sub, pred, o)
                for sub, preds in self._osp.get(o, {}).items()
                for pred in preds
            ]
        return list(self._triples)

    def match_values(
        self,
        subject: Optional[Term] = None,
        predicate: Optional[Term] = None,
        object: Optional[Term] = None,
    ) -> Iterator[tuple[Term, Term, Term]]:
        """Like match() but yields (s, p, o) tuples without constructing
        Triple objects; the join loops live on this."""
        s, p, o = subject, predicate, object
        if s is not None and p is not None and o is not None:
            if o in self._spo.get(s, {}).get(p, {}):
                yield (s, p, o)
            return
        if s is not None and p is not None:
            for obj in self._spo.get(s, {}).get(p, {}):
                yield (s, p, obj)
            return
        if p is not None and o is not None:
            for sub in self._pos.get(p, {}).get(o, {}):
                yield (sub, p, o)
            return
        if s is not None and o is not None:
            for pred in self._osp.get(o, {}).get(s, {}):
                yield (s, pred, o)
            return
        if s is not None:
            for pred, objs in self._spo.get(s, {}).items():
                for obj in objs:
                    yield (s, pred, obj)
            return
        if p is not None:
            for obj, subs in self._pos.get(p, {}).items():
                for sub in subs:
                    yield (sub, p, obj)
            return
        if o is not None:
            for sub, preds in self._osp.get(o, {}).items():
                for pred in preds:
                    yield (sub, pred, o)
            return
        for t in self._triples:
            yield (t.subject, t.predicate, t.object)

    def count(
        self,
        subject: Optional[Term] = None,
        predicate: Optional[Term] = None,
        object: Optional[Term] = None,
    ) -> int:
        """Cheap cardinality estimate for a binding pattern (exact for the
        index-backed combinations; used for join ordering)."""
        s, p, o = subject, predicate, object
        if s is not None and p is not None and o is not None:
            try:
                return 1 if Triple(s, p, o) in self._triples else 0
            except TermError:
                return 0
        if s is not None and p is not None:
            return len(self._spo.get(s, {}).get(p, {}))
        if p is not None and o is not None:
            return len(self._pos.get(p, {}).get(o, {}))
        if s is not None and o is not None:
            return len(self._osp.get(o, {}).get(s, {}))
        if s is not None:
            return sum(len(objs) for objs in self._spo.get(s, {}).values())
        if p is not None:
            cached = self._predicate_counts.get(p)
            if cached is None:
                cached = sum(len(subs) for subs in self._pos.get(p, {}).values())
                self._predicate_counts[p] = cached
            return cached
        if o is not None:
            return sum(len(preds) for preds in self._osp.get(o, {}).values())
        return len(self._triples)

    def subjects(self, predicate: Term, object: Term) -> list[Term]:
        return list(self._pos.get(predicate, {}).get(object, {}))

    def objects(self, subject: Term, predicate: Term) -> list[Term]:
        return list(self._spo.get(subject, {}).get(predicate, {}))

    def terms(self) -> list[Term]:
        """Every distinct term occurring in the graph, in first-seen order."""
        seen: dict[Term, None] = {}
        for t in self._triples:
            seen.setdefault(t.subject, None)
            seen.setdefault(t.predicate, None)
            seen.setdefault(t.object, None)
        return list(seen)

    def copy(self) -> "Graph":
        g = Graph()
        g.prefixes = dict(self.prefixes)
        for t in self._triples:
            g.add(t)
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return set(self._triples) == set(other._triples)

    def __repr__(self) -> str:
        return f"Graph({len(self)} triples)"
