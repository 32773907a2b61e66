"""Recursive-descent parser for `.agc` contract files.

Precedence, lowest to highest::

    ->  (right)   =>  (right)   or   and   not   comparisons (non-assoc)
    + -   * / div mod   unary -   pre   .field / call

``if c then a else b`` is a primary whose else-branch extends as far right
as possible.
"""

from __future__ import annotations

from c2o.errors import ParseError, Span
from c2o.frontend import ast as A
from c2o.frontend.lexer import Token, tokenize

RESERVED_PREFIX = "__"
_CMP = ("<", "<=", ">", ">=", "=", "<>")


class Parser:
    def __init__(self, source: str):
        self.toks = tokenize(source)
        self.i = 0

    # -- token helpers ------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, kind: str, text: str | None = None) -> bool:
        return self.tok.is_(kind, text)

    def at_sym(self, text: str) -> bool:
        return self.tok.is_("sym", text)

    def at_kw(self, text: str) -> bool:
        return self.tok.is_("kw", text)

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        if self.at(kind, text):
            return self.advance()
        return None

    def expect(self, kind: str, text: str | None = None) -> Token:
        if self.at(kind, text):
            return self.advance()
        want = repr(text) if text else kind
        got = repr(self.tok.text) if self.tok.kind != "eof" else "end of input"
        raise ParseError(f"expected {want}, found {got}", self.tok.span)

    def ident(self) -> Token:
        t = self.expect("ident")
        if t.text.startswith(RESERVED_PREFIX):
            raise ParseError(f"identifier {t.text!r} uses the reserved prefix '__'", t.span)
        return t

    # -- declarations -------------------------------------------------------

    def parse_contract(self) -> A.Contract:
        start = self.expect("kw", "component")
        name = self.ident().text
        self.expect("sym", "{")
        parts: dict[str, list] = {k: [] for k in
                                  ("records", "inputs", "outputs", "nodes", "assumes",
                                   "guarantees", "eqs", "assigns")}
        while not self.at_sym("}"):
            t = self.tok
            if self.accept("kw", "record"):
                parts["records"].append(self.record_decl(t.span))
            elif self.accept("kw", "input"):
                parts["inputs"].append(self.var_decl(t.span))
            elif self.accept("kw", "output"):
                parts["outputs"].append(self.var_decl(t.span))
            elif self.accept("kw", "node"):
                parts["nodes"].append(self.node_decl(t.span))
            elif self.accept("kw", "assume"):
                parts["assumes"].append(self.check_decl(t.span))
            elif self.accept("kw", "guarantee"):
                parts["guarantees"].append(self.check_decl(t.span))
            elif self.accept("kw", "eq"):
                parts["eqs"].append(self.eq_decl(t.span))
            elif self.accept("kw", "assign"):
                parts["assigns"].append(self.assign_decl(t.span))
            else:
                got = repr(t.text) if t.kind != "eof" else "end of input"
                raise ParseError(f"expected a declaration or '}}', found {got}", t.span)
        self.expect("sym", "}")
        self.expect("eof")
        return A.Contract(name, **{k: tuple(v) for k, v in parts.items()}, span=start.span)

    def type_ref(self) -> A.TypeRef:
        t = self.tok
        if t.kind == "kw" and t.text in ("bool", "int", "real"):
            self.advance()
            return A.TypeRef(t.text, span=t.span)
        return A.TypeRef(self.ident().text, span=t.span)

    def record_decl(self, span: Span) -> A.RecordDecl:
        name = self.ident().text
        self.expect("sym", "{")
        fields = []
        while not self.at_sym("}"):
            fname = self.ident().text
            self.expect("sym", ":")
            fields.append((fname, self.type_ref()))
            self.expect("sym", ";")
        self.expect("sym", "}")
        return A.RecordDecl(name, tuple(fields), span=span)

    def var_decl(self, span: Span) -> A.VarDecl:
        name = self.ident().text
        self.expect("sym", ":")
        ty = self.type_ref()
        self.expect("sym", ";")
        return A.VarDecl(name, ty, span=span)

    def node_decl(self, span: Span) -> A.NodeDecl:
        name = self.ident().text
        self.expect("sym", "(")
        params = []
        if not self.at_sym(")"):
            while True:
                p = self.tok
                pname = self.ident().text
                self.expect("sym", ":")
                params.append(A.VarDecl(pname, self.type_ref(), span=p.span))
                if not self.accept("sym", ","):
                    break
        self.expect("sym", ")")
        self.expect("sym", ":")
        result = self.type_ref()
        self.expect("sym", "=")
        body = self.expr()
        self.expect("sym", ";")
        return A.NodeDecl(name, tuple(params), result, body, span=span)

    def check_decl(self, span: Span) -> A.CheckDecl:
        label = self.expect("string").value
        self.expect("sym", ":")
        e = self.expr()
        self.expect("sym", ";")
        return A.CheckDecl(label, e, span=span)

    def eq_decl(self, span: Span) -> A.EqDecl:
        name = self.ident().text
        self.expect("sym", ":")
        ty = self.type_ref()
        self.expect("sym", "=")
        e = self.expr()
        self.expect("sym", ";")
        return A.EqDecl(name, ty, e, span=span)

    def assign_decl(self, span: Span) -> A.AssignDecl:
        name = self.ident().text
        self.expect("sym", "=")
        e = self.expr()
        self.expect("sym", ";")
        return A.AssignDecl(name, e, span=span)

    # -- expressions --------------------------------------------------------

    def expr(self) -> A.Expr:
        return self.arrow()

    def arrow(self) -> A.Expr:
        left = self.implies()
        t = self.accept("sym", "->")
        if t:
            return A.Arrow(left, self.arrow(), span=t.span)
        return left

    def implies(self) -> A.Expr:
        left = self.or_()
        t = self.accept("sym", "=>")
        if t:
            return A.Binary("=>", left, self.implies(), span=t.span)
        return left

    def or_(self) -> A.Expr:
        left = self.and_()
        while (t := self.accept("kw", "or")):
            left = A.Binary("or", left, self.and_(), span=t.span)
        return left

    def and_(self) -> A.Expr:
        left = self.not_()
        while (t := self.accept("kw", "and")):
            left = A.Binary("and", left, self.not_(), span=t.span)
        return left

    def not_(self) -> A.Expr:
        t = self.accept("kw", "not")
        if t:
            return A.Unary("not", self.not_(), span=t.span)
        return self.comparison()

    def comparison(self) -> A.Expr:
        left = self.additive()
        if self.tok.kind == "sym" and self.tok.text in _CMP:
            t = self.advance()
            left = A.Binary(t.text, left, self.additive(), span=t.span)
            if self.tok.kind == "sym" and self.tok.text in _CMP:
                raise ParseError("comparison operators do not chain; add parentheses",
                                 self.tok.span)
        return left

    def additive(self) -> A.Expr:
        left = self.multiplicative()
        while self.tok.kind == "sym" and self.tok.text in ("+", "-"):
            t = self.advance()
            left = A.Binary(t.text, left, self.multiplicative(), span=t.span)
        return left

    def multiplicative(self) -> A.Expr:
        left = self.unary()
        while (self.tok.kind == "sym" and self.tok.text in ("*", "/")) or \
                (self.tok.kind == "kw" and self.tok.text in ("div", "mod")):
            t = self.advance()
            left = A.Binary(t.text, left, self.unary(), span=t.span)
        return left

    def unary(self) -> A.Expr:
        t = self.accept("sym", "-")
        if t:
            # a literal directly after '-' folds into one constant, so "-128" fits int8
            lit = self.tok
            if lit.kind == "int":
                self.advance()
                return A.IntLit(-lit.value, span=t.span)
            if lit.kind == "real":
                self.advance()
                return A.RealLit(-lit.value, span=t.span)
            return A.Unary("neg", self.unary(), span=t.span)
        return self.pre()

    def pre(self) -> A.Expr:
        t = self.accept("kw", "pre")
        if t:
            return A.Pre(self.pre(), span=t.span)
        return self.postfix()

    def postfix(self) -> A.Expr:
        e = self.primary()
        while (t := self.accept("sym", ".")):
            e = A.Select(e, self.expect("ident").text, span=t.span)
        return e

    def primary(self) -> A.Expr:
        t = self.tok
        if t.kind == "int":
            self.advance()
            return A.IntLit(t.value, span=t.span)
        if t.kind == "real":
            self.advance()
            return A.RealLit(t.value, span=t.span)
        if t.is_("kw", "true") or t.is_("kw", "false"):
            self.advance()
            return A.BoolLit(t.text == "true", span=t.span)
        if t.is_("kw", "if"):
            self.advance()
            c = self.expr()
            self.expect("kw", "then")
            a = self.expr()
            self.expect("kw", "else")
            b = self.expr()
            return A.If(c, a, b, span=t.span)
        if self.accept("sym", "("):
            e = self.expr()
            self.expect("sym", ")")
            return e
        if t.kind == "ident":
            name = self.ident().text
            if self.accept("sym", "("):
                args = []
                if not self.at_sym(")"):
                    args.append(self.expr())
                    while self.accept("sym", ","):
                        args.append(self.expr())
                self.expect("sym", ")")
                return A.Call(name, tuple(args), span=t.span)
            if self.accept("sym", "{"):
                items = []
                if not self.at_sym("}"):
                    while True:
                        fname = self.expect("ident").text
                        self.expect("sym", "=")
                        items.append((fname, self.expr()))
                        if not self.accept("sym", ","):
                            break
                self.expect("sym", "}")
                return A.RecordLit(name, tuple(items), span=t.span)
            return A.Ident(name, span=t.span)
        got = repr(t.text) if t.kind != "eof" else "end of input"
        raise ParseError(f"expected an expression, found {got}", t.span)


def parse_syntax(source: str) -> A.Contract:
    """Parse without resolving names or types."""
    return Parser(source).parse_contract()


def parse_expr(source: str) -> A.Expr:
    p = Parser(source)
    e = p.expr()
    p.expect("eof")
    return e
