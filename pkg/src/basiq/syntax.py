"""Concrete syntax for formulas, sequents and derivation scripts.

Formulas are fully parenthesized; there is no precedence::

    Formula ::= Atom | Atom "^" | "(" Formula BinOp Formula ")"
    BinOp   ::= "&" | "v" | "*" | "%" | "@" | "$"
    Atom    ::= [A-Z][A-Za-z0-9]*
    Sequent ::= FormulaList "|-" FormulaList

The Unicode spellings ``⊥ ∨ ⊗ ℘ § ⊢`` are accepted on input; output is
always ASCII.  Derivation scripts (``.blp``) are conclusion-first, one
node per line, children indented two spaces below their parent::

    PAR_FORM: ((A & A^) @ (B & B^)) |- (A % B)
      CUT: ((A & A^) @ (B & B^)) |- A, B
        ...

A node may carry a display label in brackets: ``WEAK_R [weak.L]: ...``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple, Union

from .formulas import Atom, Bin, Derivation, Formula, Op, PerpAtom, Sequent

MAX_NESTING = 400
INDENT = 2

_OPS = {
    "&": Op.WITH,
    "v": Op.OR,
    "∨": Op.OR,
    "*": Op.TIMES,
    "⊗": Op.TIMES,
    "%": Op.PAR,
    "℘": Op.PAR,
    "@": Op.ENT,
    "$": Op.DUAL_ENT,
    "§": Op.DUAL_ENT,
}


class SourceSpan(NamedTuple):
    line: int
    column: int


class ParseError(ValueError):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"line {span.line}, column {span.column}: {message}")
        self.message = message
        self.span = span


class _Tok(NamedTuple):
    kind: str  # ATOM PERP OP LPAR RPAR COMMA TURNSTILE EOF
    text: str
    span: SourceSpan


def _as_text(text: Union[str, bytes]) -> str:
    if isinstance(text, bytes):
        try:
            return text.decode("utf-8")
        except UnicodeDecodeError as e:
            head = text[: e.start]
            line = head.count(b"\n") + 1
            col = e.start - (head.rfind(b"\n") + 1) + 1
            raise ParseError("invalid UTF-8", SourceSpan(line, col)) from None
    return text


def _tokenize(text: str, line: int = 1) -> List[_Tok]:
    toks = []
    i, col = 0, 1
    n = len(text)
    while i < n:
        ch = text[i]
        span = SourceSpan(line, col)
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        if "A" <= ch <= "Z":
            j = i + 1
            while j < n and (text[j].isascii() and text[j].isalnum()):
                j += 1
            toks.append(_Tok("ATOM", text[i:j], span))
            col += j - i
            i = j
            continue
        if ch in "^⊥":
            kind = "PERP"
        elif ch in _OPS:
            kind = "OP"
        elif ch == "(":
            kind = "LPAR"
        elif ch == ")":
            kind = "RPAR"
        elif ch == ",":
            kind = "COMMA"
        elif ch == "⊢":
            kind = "TURNSTILE"
        elif ch == "|" and text[i + 1 : i + 2] == "-":
            toks.append(_Tok("TURNSTILE", "|-", span))
            i, col = i + 2, col + 2
            continue
        elif ch.isalpha() and ch.islower():
            raise ParseError(f"atoms must start with an uppercase letter, got {ch!r}", span)
        else:
            raise ParseError(f"unexpected character {ch!r}", span)
        toks.append(_Tok(kind, ch, span))
        i, col = i + 1, col + 1
    toks.append(_Tok("EOF", "", SourceSpan(line, col)))
    return toks


class _Parser:
    def __init__(self, text: str, line: int = 1):
        self.toks = _tokenize(text, line)
        self.pos = 0

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def take(self, kind: str, what: str) -> _Tok:
        tok = self.peek()
        if tok.kind != kind:
            found = tok.text or "end of input"
            raise ParseError(f"expected {what}, found {found!r}", tok.span)
        self.pos += 1
        return tok

    def formula(self, depth: int = 0) -> Formula:
        tok = self.peek()
        if depth > MAX_NESTING:
            raise ParseError("formula nested too deeply", tok.span)
        if tok.kind == "ATOM":
            self.pos += 1
            if self.peek().kind == "PERP":
                self.pos += 1
                return PerpAtom(tok.text)
            return Atom(tok.text)
        if tok.kind == "LPAR":
            self.pos += 1
            left = self.formula(depth + 1)
            op = self.take("OP", "a connective")
            right = self.formula(depth + 1)
            self.take("RPAR", "')'")
            if self.peek().kind == "PERP":
                raise ParseError("negation applies to atoms only", self.peek().span)
            return Bin(_OPS[op.text], left, right)
        if tok.kind == "PERP":
            raise ParseError("negation applies to atoms only", tok.span)
        return self.take("ATOM", "a formula")  # raises

    def formula_list(self, stop: str) -> Tuple[Formula, ...]:
        items = []
        if self.peek().kind == stop:
            return ()
        items.append(self.formula())
        while self.peek().kind == "COMMA":
            self.pos += 1
            items.append(self.formula())
        return tuple(items)

    def end(self):
        self.take("EOF", "end of input")


def parse_formula(text: Union[str, bytes]) -> Formula:
    p = _Parser(_as_text(text))
    f = p.formula()
    p.end()
    return f


def parse_sequent(text: Union[str, bytes], *, line: int = 1) -> Sequent:
    p = _Parser(_as_text(text), line)
    left = p.formula_list("TURNSTILE")
    p.take("TURNSTILE", "',' or '|-'")
    right = p.formula_list("EOF")
    p.end()
    return Sequent(left, right)


def print_formula(f: Formula) -> str:
    return str(f)


def print_sequent(s: Sequent) -> str:
    return str(s)


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def parse_blf(text: Union[str, bytes]) -> List[Union[Formula, Sequent]]:
    """Parse a ``.blf`` list: one formula or sequent per line, ``#`` comments."""
    out: List[Union[Formula, Sequent]] = []
    for lineno, raw in enumerate(_as_text(text).split("\n"), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        p = _Parser(line, lineno)
        if any(t.kind == "TURNSTILE" for t in p.toks):
            out.append(parse_sequent(line, line=lineno))
        else:
            f = p.formula()
            p.end()
            out.append(f)
    return out


@dataclass
class _Node:
    rule: str
    label: Optional[str]
    sequent: Sequent
    children: list


def _parse_head(line: str, lineno: int, indent: int) -> Tuple[str, Optional[str], str]:
    colon = line.find(":")
    if colon < 0:
        raise ParseError("expected 'RULE: sequent'", SourceSpan(lineno, indent + 1))
    head, body = line[:colon].strip(), line[colon + 1 :]
    label = None
    if head.endswith("]") and "[" in head:
        head, label = head[:-1].split("[", 1)
        head, label = head.strip(), label.strip()
    if not head or any(c.isspace() for c in head) or not all(
        c.isalnum() or c in "_.-^" for c in head
    ):
        raise ParseError(f"bad rule name {head!r}", SourceSpan(lineno, indent + 1))
    return head, label, body


def parse_derivation(text: Union[str, bytes]) -> Derivation:
    root: Optional[_Node] = None
    stack: List[_Node] = []
    for lineno, raw in enumerate(_as_text(text).split("\n"), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        if "\t" in line:
            raise ParseError("tabs are not allowed in indentation", SourceSpan(lineno, line.index("\t") + 1))
        indent = len(line) - len(line.lstrip(" "))
        span = SourceSpan(lineno, indent + 1)
        if indent % INDENT:
            raise ParseError(f"indentation must be a multiple of {INDENT} spaces", span)
        level = indent // INDENT
        rule, label, body = _parse_head(line[indent:], lineno, indent)
        # sequent columns are reported relative to the whole line
        try:
            seq = parse_sequent(body, line=lineno)
        except ParseError as e:
            offset = len(line) - len(body)
            raise ParseError(e.message, SourceSpan(lineno, e.span.column + offset)) from None
        node = _Node(rule, label, seq, [])
        if root is None:
            if level != 0:
                raise ParseError("the root line must not be indented", span)
            root = node
            stack = [node]
            continue
        if level == 0:
            raise ParseError("a derivation has a single root", span)
        if level > len(stack):
            raise ParseError("child indented more than one level below its parent", span)
        del stack[level:]
        stack[-1].children.append(node)
        stack.append(node)
    if root is None:
        raise ParseError("empty derivation", SourceSpan(1, 1))
    return _freeze(root)


def _freeze(node: _Node) -> Derivation:
    return Derivation(node.rule, node.sequent, tuple(_freeze(c) for c in node.children), node.label)


def print_derivation(d: Derivation) -> str:
    lines = []

    def emit(node: Derivation, level: int):
        head = node.rule if node.label is None else f"{node.rule} [{node.label}]"
        lines.append(f"{' ' * (INDENT * level)}{head}: {node.conclusion}")
        for p in node.premises:
            emit(p, level + 1)

    emit(d, 0)
    return "\n".join(lines) + "\n"
