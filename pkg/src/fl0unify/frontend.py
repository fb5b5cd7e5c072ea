"""Problem ingestion: the s-expression ``.flu`` format and a functional-style
axiom subset (``SubClassOf`` / ``EquivalentClasses`` over intersections and
universal restrictions).

Names ending in ``_var`` are user variables, everything else is a constant.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Literal, Mapping, Optional, Union

from .core import (
    All,
    And,
    Atom,
    Kind,
    Name,
    Top,
    Tree,
    normalize,
    to_tree,
)

VAR_SUFFIX = "_var"


class FrontendError(Exception):
    """Base class for input errors."""


class FluSyntaxError(FrontendError):
    def __init__(self, line: int, col: int, expected: str, got: str = ""):
        self.line, self.col, self.expected, self.got = line, col, expected, got
        msg = f"{line}:{col}: expected {expected}"
        if got:
            msg += f", got {got!r}"
        super().__init__(msg)


class UnsupportedConstructor(FrontendError):
    def __init__(self, constructor: str, line: int = 0, col: int = 0):
        self.constructor, self.line, self.col = constructor, line, col
        super().__init__(f"{line}:{col}: unsupported constructor {constructor!r} (FL0 allows only top, and, all)")


class InvalidName(FrontendError):
    pass


@dataclass(frozen=True)
class Axiom:
    kind: Literal["sub", "equiv"]
    lhs: Tree
    rhs: Tree


@dataclass
class ProblemSource:
    axioms: list = field(default_factory=list)
    roles: list = field(default_factory=list)
    names: dict = field(default_factory=dict)  # id -> Name, first-seen order

    @property
    def constants(self) -> list:
        return [n for n in self.names.values() if n.is_constant]

    @property
    def variables(self) -> list:
        return [n for n in self.names.values() if n.is_variable]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProblemSource):
            return NotImplemented
        return (
            self.axioms == other.axioms
            and self.roles == other.roles
            and {k: v.kind for k, v in self.names.items()} == {k: v.kind for k, v in other.names.items()}
        )


def classify(id: str) -> Name:
    return Name(id, Kind.USER if id.endswith(VAR_SUFFIX) else Kind.CONSTANT)


def _is_name(tok: str) -> bool:
    return bool(tok) and tok[0].isalpha() and all(ch.isalnum() or ch == "_" for ch in tok)


class _Signature:
    def __init__(self) -> None:
        self.roles: list = []
        self.names: dict = {}

    def role(self, id: str, line: int, col: int) -> str:
        if id.endswith(VAR_SUFFIX):
            raise InvalidName(f"{line}:{col}: role {id!r} carries the variable suffix; variable roles are not supported")
        if id not in self.roles:
            self.roles.append(id)
        return id

    def name(self, id: str) -> Name:
        n = self.names.get(id)
        if n is None:
            n = self.names[id] = classify(id)
        return n


# --- .flu -------------------------------------------------------------------

_FLU_KEYWORDS = {"top", "and", "all", "sub", "equiv", "roles"}


@dataclass
class _Tok:
    text: str
    line: int
    col: int


def _flu_tokens(text: str) -> Iterator[_Tok]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(";", 1)[0]
        i = 0
        while i < len(line):
            ch = line[i]
            if ch.isspace():
                i += 1
            elif ch in "()":
                yield _Tok(ch, lineno, i + 1)
                i += 1
            else:
                j = i
                while j < len(line) and not line[j].isspace() and line[j] not in "()":
                    j += 1
                yield _Tok(line[i:j], lineno, i + 1)
                i = j


class _FluParser:
    def __init__(self, text: str):
        self.toks = list(_flu_tokens(text))
        self.pos = 0
        self.sig = _Signature()

    def peek(self) -> Optional[_Tok]:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self, expected: str) -> _Tok:
        tok = self.peek()
        if tok is None:
            last = self.toks[-1] if self.toks else _Tok("", 1, 0)
            raise FluSyntaxError(last.line, last.col + len(last.text), expected, "end of input")
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Tok:
        tok = self.next(repr(text))
        if tok.text != text:
            raise FluSyntaxError(tok.line, tok.col, repr(text), tok.text)
        return tok

    def name_token(self, what: str) -> _Tok:
        tok = self.next(what)
        if not _is_name(tok.text) or tok.text in _FLU_KEYWORDS:
            raise FluSyntaxError(tok.line, tok.col, what, tok.text)
        return tok

    def problem(self) -> ProblemSource:
        axioms = []
        while self.peek() is not None:
            self.expect("(")
            head = self.next("sub, equiv or roles")
            if head.text == "roles":
                self.sig.role(self.name_token("role name").text, head.line, head.col)
                while self.peek() is not None and self.peek().text != ")":
                    tok = self.name_token("role name")
                    self.sig.role(tok.text, tok.line, tok.col)
                self.expect(")")
            elif head.text in ("sub", "equiv"):
                lhs = self.concept()
                rhs = self.concept()
                self.expect(")")
                axioms.append(Axiom(head.text, lhs, rhs))
            else:
                raise FluSyntaxError(head.line, head.col, "sub, equiv or roles", head.text)
        return ProblemSource(axioms, self.sig.roles, self.sig.names)

    def concept(self) -> Tree:
        tok = self.next("concept")
        if tok.text == "top":
            return Top()
        if tok.text == "(":
            head = self.next("and or all")
            if head.text == "and":
                args = [self.concept(), self.concept()]
                while self.peek() is not None and self.peek().text != ")":
                    args.append(self.concept())
                self.expect(")")
                return And(tuple(args))
            if head.text == "all":
                r = self.name_token("role name")
                role = self.sig.role(r.text, r.line, r.col)
                body = self.concept()
                self.expect(")")
                return All(role, body)
            if _is_name(head.text):
                raise UnsupportedConstructor(head.text, head.line, head.col)
            raise FluSyntaxError(head.line, head.col, "and or all", head.text)
        if tok.text == ")" or not _is_name(tok.text) or tok.text in _FLU_KEYWORDS:
            raise FluSyntaxError(tok.line, tok.col, "concept", tok.text)
        return Atom(self.sig.name(tok.text))


def parse_text(data: Union[bytes, str]) -> ProblemSource:
    """Parse the ``.flu`` s-expression syntax."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    return _FluParser(text).problem()


# --- functional-style axiom subset --------------------------------------------

_OFN_TOKEN = re.compile(r"\s*(?:(<[^>]*>)|([()])|([^\s()<>]+))")
_OFN_SKIP = ("Prefix(", "Ontology(", "Declaration(", "Import(", "Annotation(")
_OFN_UNSUPPORTED_HINT = {
    "ObjectSomeValuesFrom",
    "ObjectUnionOf",
    "ObjectComplementOf",
    "ObjectOneOf",
    "ObjectHasValue",
    "ObjectHasSelf",
    "ObjectMinCardinality",
    "ObjectMaxCardinality",
    "ObjectExactCardinality",
    "DataSomeValuesFrom",
    "DataAllValuesFrom",
    "owl:Nothing",
}


def _local_name(tok: str) -> str:
    if tok.startswith("<") and tok.endswith(">"):
        iri = tok[1:-1]
        return re.split(r"[#/]", iri)[-1]
    if ":" in tok:
        return tok.split(":", 1)[1]
    return tok


@dataclass
class _Term:
    head: str
    args: Optional[list]  # None for a bare symbol
    col: int


def _ofn_term(line: str, lineno: int) -> _Term:
    toks = []
    pos = 0
    while pos < len(line):
        m = _OFN_TOKEN.match(line, pos)
        if m is None or m.end() == pos:
            break
        text = m.group(1) or m.group(2) or m.group(3)
        if text is None:
            break
        toks.append((text, m.start(m.lastindex) + 1))
        pos = m.end()
    i = 0

    def term() -> _Term:
        nonlocal i
        if i >= len(toks):
            raise FluSyntaxError(lineno, len(line) + 1, "class expression", "end of line")
        text, col = toks[i]
        if text in "()":
            raise FluSyntaxError(lineno, col, "class expression", text)
        i += 1
        if i < len(toks) and toks[i][0] == "(":
            i += 1
            args = []
            while i < len(toks) and toks[i][0] != ")":
                args.append(term())
            if i >= len(toks):
                raise FluSyntaxError(lineno, len(line) + 1, "')'", "end of line")
            i += 1
            return _Term(text, args, col)
        return _Term(text, None, col)

    t = term()
    if i != len(toks):
        raise FluSyntaxError(lineno, toks[i][1], "end of axiom", toks[i][0])
    return t


def _ofn_class(t: _Term, sig: _Signature, lineno: int) -> Tree:
    if t.args is None:
        if t.head in ("owl:Thing",) or t.head.endswith("#Thing>"):
            return Top()
        if t.head in _OFN_UNSUPPORTED_HINT or t.head.endswith("#Nothing>"):
            raise UnsupportedConstructor(t.head, lineno, t.col)
        local = _local_name(t.head)
        if not _is_name(local) or local in _FLU_KEYWORDS:
            raise FluSyntaxError(lineno, t.col, "class name", t.head)
        return Atom(sig.name(local))
    if t.head == "ObjectIntersectionOf":
        if len(t.args) < 2:
            raise FluSyntaxError(lineno, t.col, "at least two operands of ObjectIntersectionOf")
        return And(tuple(_ofn_class(a, sig, lineno) for a in t.args))
    if t.head == "ObjectAllValuesFrom":
        if len(t.args) != 2 or t.args[0].args is not None:
            raise FluSyntaxError(lineno, t.col, "ObjectAllValuesFrom(property class)")
        role = _local_name(t.args[0].head)
        if not _is_name(role):
            raise FluSyntaxError(lineno, t.args[0].col, "property name", t.args[0].head)
        return All(sig.role(role, lineno, t.args[0].col), _ofn_class(t.args[1], sig, lineno))
    raise UnsupportedConstructor(t.head, lineno, t.col)


def parse_axiom_subset(data: Union[bytes, str]) -> ProblemSource:
    """Parse the functional-style subset, one axiom per line."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    sig = _Signature()
    axioms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line == ")" or line.startswith("#") or line.startswith(_OFN_SKIP):
            continue
        t = _ofn_term(line, lineno)
        if t.args is None:
            raise FluSyntaxError(lineno, t.col, "axiom", t.head)
        if t.head == "SubClassOf":
            if len(t.args) != 2:
                raise FluSyntaxError(lineno, t.col, "SubClassOf(sub super)")
            axioms.append(Axiom("sub", _ofn_class(t.args[0], sig, lineno), _ofn_class(t.args[1], sig, lineno)))
        elif t.head == "EquivalentClasses":
            if len(t.args) < 2:
                raise FluSyntaxError(lineno, t.col, "EquivalentClasses with two or more operands")
            first = _ofn_class(t.args[0], sig, lineno)
            for other in t.args[1:]:
                axioms.append(Axiom("equiv", first, _ofn_class(other, sig, lineno)))
        else:
            raise UnsupportedConstructor(t.head, lineno, t.col)
    return ProblemSource(axioms, sig.roles, sig.names)


def parse_file(path: Union[str, Path], fmt: str = "auto") -> ProblemSource:
    path = Path(path)
    data = path.read_bytes()
    if fmt == "auto":
        fmt = "flu" if path.suffix.lower() in (".flu", ".sol", "") else "ofn"
    if fmt == "flu":
        return parse_text(data)
    if fmt == "ofn":
        return parse_axiom_subset(data)
    raise ValueError(f"unknown format {fmt!r}")


# --- rendering ----------------------------------------------------------------

def render_tree(t: Tree) -> str:
    if isinstance(t, Top):
        return "top"
    if isinstance(t, Atom):
        return t.name.id
    if isinstance(t, And):
        return "(and " + " ".join(render_tree(a) for a in t.args) + ")"
    if isinstance(t, All):
        return f"(all {t.role} {render_tree(t.body)})"
    raise TypeError(t)


def render_concept(c: Iterable) -> str:
    """A normal-form concept in ``.flu`` syntax."""
    return render_tree(to_tree(c))


def render_flu(src: ProblemSource) -> str:
    lines = []
    if src.roles:
        lines.append("(roles " + " ".join(src.roles) + ")")
    for ax in src.axioms:
        lines.append(f"({ax.kind} {render_tree(ax.lhs)} {render_tree(ax.rhs)})")
    return "\n".join(lines) + "\n"


def render_solution(sigma: Mapping[Name, frozenset], names: Optional[Iterable[Name]] = None) -> str:
    """Solution file: one ``(equiv X_var concept)`` line per variable."""
    keys = list(names) if names is not None else sorted(sigma, key=lambda n: n.id)
    return "".join(f"(equiv {x.id} {render_concept(sigma.get(x, frozenset()))})\n" for x in keys)


def substitution_from_source(src: ProblemSource) -> dict:
    """Read a solution file back as a substitution."""
    sigma: dict = {}
    for ax in src.axioms:
        if ax.kind != "equiv" or not isinstance(ax.lhs, Atom) or not ax.lhs.name.is_variable:
            raise FrontendError("solution files may only contain (equiv VARIABLE concept) lines")
        x = ax.lhs.name
        sigma[x] = sigma.get(x, frozenset()) | normalize(ax.rhs)
    return sigma
