"""Concrete syntax reader for types, terms, judgments and signature files.

Grammar (ASCII)::

    type  ::= ident | "(" ")" | "(" type ("*" type)* ")" | "[" types? "]" "-o" type
    term  ::= "\\" "<" binds? ">" "." term | postfix
    postfix ::= primary ( "[" binds? ":=" term "]" | "<" terms? ">" )*
    primary ::= ident | ident "(" terms? ")" | "<" terms? ">" | "(" term ")"
    judgment ::= (ident ":" type ("," ident ":" type)*)? "|-" term ":" type
    sigfile ::= ("kind" ident ";")? ("atoms" idents ";")? ("arrow" ident ":" types? "->" type ";")*
"""
from __future__ import annotations

import re

from .errors import ParseError
from .signature import Arrow, Atom, Kind, Tensor, make_signature
from .syntax import Abs, App, ESub, Gen, Lst, Var

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<op>\|-|:=|-o|->|[<>\[\](),:*.;\\])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)


class Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind, self.text, self.line, self.col = kind, text, line, col

    def __repr__(self):
        return f"{self.text!r}@{self.line}:{self.col}"


def tokenize(text):
    out = []
    pos, line, start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), line, pos - start + 1))
        for i, ch in enumerate(m.group()):
            if ch == "\n":
                line += 1
                start = pos + i + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


class Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, k=1):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text):
        return self.tok.kind == "op" and self.tok.text == text

    def fail(self, msg, tok=None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        raise ParseError(f"{msg}, found {found!r}", tok.line, tok.col)

    def expect(self, text):
        if not self.at(text):
            self.fail(f"expected {text!r}")
        self.i += 1

    def ident(self):
        if self.tok.kind != "ident":
            self.fail("expected identifier")
        name = self.tok.text
        self.i += 1
        return name

    def end(self):
        if self.tok.kind != "eof":
            self.fail("unexpected trailing input")

    # types
    def type_(self):
        if self.tok.kind == "ident":
            return Atom(self.ident())
        if self.at("("):
            self.i += 1
            if self.at(")"):
                self.i += 1
                return Tensor(())
            args = [self.type_()]
            while self.at("*"):
                self.i += 1
                args.append(self.type_())
            self.expect(")")
            return Tensor(tuple(args))
        if self.at("["):
            self.i += 1
            args = []
            if not self.at("]"):
                args.append(self.type_())
                while self.at(","):
                    self.i += 1
                    args.append(self.type_())
            self.expect("]")
            self.expect("-o")
            return Arrow(tuple(args), self.type_())
        self.fail("expected a type")

    def binds(self, close):
        out = []
        if self.at(close):
            return out
        while True:
            x = self.ident()
            self.expect(":")
            out.append((x, self.type_()))
            if not self.at(","):
                return out
            self.i += 1

    def terms(self, close):
        out = []
        if self.at(close):
            self.i += 1
            return out
        out.append(self.term())
        while self.at(","):
            self.i += 1
            out.append(self.term())
        self.expect(close)
        return out

    # terms
    def term(self):
        if self.at("\\"):
            self.i += 1
            self.expect("<")
            bs = self.binds(">")
            self.expect(">")
            self.expect(".")
            return Abs(bs, self.term())
        return self.postfix()

    def postfix(self):
        t = self.primary()
        while True:
            if self.at("["):
                self.i += 1
                bs = self.binds(":=")
                self.expect(":=")
                arg = self.term()
                self.expect("]")
                t = ESub(t, bs, arg)
            elif self.at("<"):
                self.i += 1
                t = App(t, self.terms(">"))
            else:
                return t

    def primary(self):
        if self.tok.kind == "ident":
            name = self.ident()
            if self.at("("):
                self.i += 1
                return Gen(name, self.terms(")"))
            return Var(name)
        if self.at("<"):
            self.i += 1
            return Lst(self.terms(">"))
        if self.at("("):
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        self.fail("expected a term")

    def judgment(self):
        ctx = []
        if not self.at("|-"):
            while True:
                x = self.ident()
                self.expect(":")
                ctx.append((x, self.type_()))
                if not self.at(","):
                    break
                self.i += 1
        self.expect("|-")
        s = self.term()
        self.expect(":")
        a = self.type_()
        return ctx, s, a


def parse_type(text):
    p = Parser(text)
    t = p.type_()
    p.end()
    return t


def parse_term(text):
    p = Parser(text)
    t = p.term()
    p.end()
    return t


def parse_context(text):
    p = Parser(text)
    ctx = []
    if p.tok.kind != "eof":
        while True:
            x = p.ident()
            p.expect(":")
            ctx.append((x, p.type_()))
            if not p.at(","):
                break
            p.i += 1
    p.end()
    return ctx


def parse_judgment(text):
    p = Parser(text)
    j = p.judgment()
    p.end()
    return j


def parse_signature(text, default_kind=Kind.AUTONOMOUS):
    """Read ``kind K; atoms a, b; arrow f : a, b -> c;`` declarations."""
    p = Parser(text)
    kind = default_kind
    atoms = []
    arrows = {}
    while p.tok.kind != "eof":
        head = p.tok
        word = p.ident()
        if word == "kind":
            name = p.ident()
            try:
                kind = Kind(name.lower())
            except ValueError:
                p.fail("unknown signature kind", head)
        elif word == "atoms":
            atoms.append(p.ident())
            while p.at(","):
                p.i += 1
                atoms.append(p.ident())
        elif word == "arrow":
            name = p.ident()
            p.expect(":")
            srcs = []
            if not p.at("->"):
                srcs.append(p.type_())
                while p.at(","):
                    p.i += 1
                    srcs.append(p.type_())
            p.expect("->")
            arrows[name] = (srcs, p.type_())
        else:
            p.fail("expected 'kind', 'atoms' or 'arrow'", head)
        p.expect(";")
    return make_signature(kind, atoms, arrows)
