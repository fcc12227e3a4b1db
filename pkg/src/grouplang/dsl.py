"""Declaration language for groups, subgroups and subsets.

One declaration per line; a ``{ ... }`` body may span lines.  ``#`` starts
a comment.

    group F = free(2)
    group A = abelian(2)
    group S = semidirect(2, [[2,1],[1,1]])
    subgroup H = <a1 a1, a2, a1 a2 a1->
    subset K : alg = cfg{ S -> a1 S a1- | T ; T -> a1- T T a1 | a2 }
    subset R : rat = rat{ (a1 | a2 a2)* . a1- }
    subset M : rec = cosets{ a1 a1, a2, a1 a2 a1- ; e, a1 }
    subset L : cf over H at a1 = cfg{ S -> a1 S | e }

Subgroups belong to the latest group.  A subset lives in the latest group
unless ``over`` names a group or subgroup; over a subgroup its letters
``a1, a2, ...`` are the subgroup's basis elements.  ``at`` gives the coset
representative used when composing components.  In cfg bodies, tokens
``a<k>``, ``a<k>-``, ``t``, ``t-`` are terminals, ``e`` is the empty word and
any other name is a nonterminal; the first rule's left side is the start.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import automata
from .grammars import Cfg
from .stallings import StallingsGraph, fold
from .transfer.contexts import FreeAbelian, FreeGroup, SemidirectZmZ, SubgroupOfFree
from .transfer.handles import CosetData, SubsetHandle, lattice_data
from .words import Word, reduce


class DslError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


_TOKEN = re.compile(
    r"""(?P<ws>[ \t\r]+)|(?P<comment>\#[^\n]*)|(?P<nl>\n)
    |(?P<arrow>->)|(?P<int>-?\d+)|(?P<name>[A-Za-z_]\w*(?:-(?!>))?)
    |(?P<punct>[=:()\[\]{}<>,;|.*])""",
    re.VERBOSE,
)

_LETTER = re.compile(r"(a\d+|t)-?")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out, line, start, pos = [], 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DslError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            out.append(Token("nl", "\n", line, pos - start + 1))
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


@dataclass
class Program:
    groups: dict = field(default_factory=dict)
    subgroups: dict = field(default_factory=dict)
    subsets: dict = field(default_factory=dict)
    anchors: dict = field(default_factory=dict)
    owner: dict = field(default_factory=dict)

    def group(self, name: str | None = None):
        if name is None:
            if not self.groups:
                raise ValueError("no group declared")
            return list(self.groups.values())[-1]
        return self.groups[name]

    def subset(self, name: str | None = None, kinds=None) -> SubsetHandle:
        if name is not None:
            if name not in self.subsets:
                raise ValueError(f"no subset named {name!r}")
            return self.subsets[name]
        for h in self.subsets.values():
            if kinds is None or h.kind in kinds:
                return h
        raise ValueError("no suitable subset declared")

    def subgroup(self, name: str | None = None) -> StallingsGraph:
        if name is None:
            if not self.subgroups:
                raise ValueError("no subgroup declared")
            return list(self.subgroups.values())[-1]
        if name not in self.subgroups:
            raise ValueError(f"no subgroup named {name!r}")
        return self.subgroups[name]


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.depth = 0
        self.prog = Program()
        self.current_group = None
        self.angle = False

    # token plumbing -------------------------------------------------------
    def peek(self) -> Token:
        j = self.i
        while self.depth and self.toks[j].kind == "nl":
            j += 1
        return self.toks[j]

    def next(self) -> Token:
        while self.depth and self.toks[self.i].kind == "nl":
            self.i += 1
        tok = self.toks[self.i]
        if tok.kind != "eof":
            self.i += 1
        if tok.text in "{([" and tok.kind == "punct":
            self.depth += 1
        elif tok.text in "})]" and tok.kind == "punct":
            self.depth = max(0, self.depth - 1)
        return tok

    def fail(self, msg: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise DslError(msg, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text != text:
            found = "end of line" if tok.kind == "nl" else ("end of input" if tok.kind == "eof" else repr(tok.text))
            self.fail(f"expected {text!r}, found {found}")
        return self.next()

    def name(self) -> str:
        tok = self.peek()
        if tok.kind != "name":
            self.fail("expected a name")
        return self.next().text

    def integer(self) -> int:
        tok = self.peek()
        if tok.kind != "int":
            self.fail("expected an integer")
        return int(self.next().text)

    # grammar --------------------------------------------------------------
    def parse(self) -> Program:
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                return self.prog
            if tok.kind == "nl":
                self.next()
                continue
            if tok.text == "group":
                self.group_decl()
            elif tok.text == "subgroup":
                self.subgroup_decl()
            elif tok.text == "subset":
                self.subset_decl()
            else:
                self.fail(f"unknown declaration {tok.text!r}")
            end = self.peek()
            if end.kind not in ("nl", "eof"):
                self.fail("unexpected text after declaration", end)

    def group_decl(self):
        self.next()
        name = self.name()
        self.expect("=")
        tok = self.peek()
        kind = self.name()
        self.expect("(")
        n = self.integer()
        if n < 1:
            self.fail("dimension must be positive", tok)
        if kind == "free":
            ctx = FreeGroup(n)
        elif kind == "abelian":
            ctx = FreeAbelian(n)
        elif kind == "semidirect":
            self.expect(",")
            Q = self.matrix()
            try:
                ctx = SemidirectZmZ(n, Q)
            except ValueError as exc:
                self.fail(str(exc), tok)
        else:
            self.fail(f"unknown group family {kind!r}", tok)
        self.expect(")")
        self.prog.groups[name] = ctx
        self.current_group = name

    def matrix(self):
        self.expect("[")
        rows = [self.row()]
        while self.peek().text == ",":
            self.next()
            rows.append(self.row())
        self.expect("]")
        return rows

    def row(self):
        self.expect("[")
        vals = [self.integer()]
        while self.peek().text == ",":
            self.next()
            vals.append(self.integer())
        self.expect("]")
        return vals

    def word(self, rank: int, stable: int | None) -> Word:
        out: list[int] = []
        seen = False
        while True:
            tok = self.peek()
            if tok.kind != "name":
                break
            seen = True
            self.next()
            nxt = self.toks[self.i]
            if self.angle and nxt.kind == "arrow" and nxt.line == tok.line and nxt.col == tok.col + len(tok.text):
                # "a1->" closing an angle-bracket list: inverse letter, then ">"
                tok = Token("name", tok.text + "-", tok.line, tok.col)
                self.toks[self.i] = Token("punct", ">", nxt.line, nxt.col + 1)
            out += self.letter(tok, rank, stable)
        if not seen:
            self.fail("expected a word")
        return tuple(out)

    def letter(self, tok: Token, rank: int, stable: int | None) -> list[int]:
        if tok.text == "e":
            return []
        if not _LETTER.fullmatch(tok.text):
            self.fail(f"bad letter {tok.text!r}", tok)
        body = tok.text.rstrip("-")
        if body == "t":
            if stable is None:
                self.fail("stable letter 't' used outside a semidirect group", tok)
            idx = stable
        else:
            idx = int(body[1:])
            limit = rank if stable is None else stable - 1
            if not 1 <= idx <= limit:
                self.fail(f"generator {body} outside rank {limit}", tok)
        return [-idx if tok.text.endswith("-") else idx]

    def word_list(self, rank, stable) -> list[Word]:
        words = [self.word(rank, stable)]
        while self.peek().text == ",":
            self.next()
            words.append(self.word(rank, stable))
        return words

    def subgroup_decl(self):
        start = self.next()
        name = self.name()
        self.expect("=")
        if self.current_group is None:
            self.fail("subgroup declared before any group", start)
        ctx = self.prog.groups[self.current_group]
        if not isinstance(ctx, FreeGroup):
            self.fail("subgroups are supported in free groups only", start)
        bracket = self.peek().text == "<"
        if bracket:
            self.expect("<")
        self.angle = bracket
        gens = self.word_list(ctx.rank, None)
        self.angle = False
        if bracket:
            self.expect(">")
        self.prog.subgroups[name] = fold(gens, ctx.rank)
        self.prog.owner[name] = self.current_group

    def subset_decl(self):
        start = self.next()
        name = self.name()
        self.expect(":")
        kind_tok = self.peek()
        kind = self.name()
        if kind not in ("rat", "rec", "cf", "alg"):
            self.fail(f"unknown subset class {kind!r}", kind_tok)
        if self.current_group is None:
            self.fail("subset declared before any group", start)
        ctx = self.prog.groups[self.current_group]
        if self.peek().text == "over":
            self.next()
            where_tok = self.peek()
            where = self.name()
            if where in self.prog.groups:
                ctx = self.prog.groups[where]
            elif where in self.prog.subgroups:
                try:
                    ctx = SubgroupOfFree(self.prog.subgroups[where])
                except ValueError as exc:
                    self.fail(str(exc), where_tok)
                self.prog.owner[name] = where
            else:
                self.fail(f"unknown group or subgroup {where!r}", where_tok)
        stable = ctx.stable if isinstance(ctx, SemidirectZmZ) else None
        anchor: Word = ()
        if self.peek().text == "at":
            self.next()
            parent = self.prog.groups[self.current_group]
            anchor = reduce(self.word(parent.rank, None))
        self.expect("=")
        body_tok = self.peek()
        body = self.name()
        self.expect("{")
        if body == "cfg":
            if kind not in ("cf", "alg"):
                self.fail("cfg bodies need class cf or alg", body_tok)
            rep = self.cfg_body(ctx.rank, stable)
        elif body == "rat":
            if kind != "rat":
                self.fail("rat bodies need class rat", body_tok)
            rep = self.regex(ctx.rank, stable)
        elif body == "cosets":
            if kind != "rec":
                self.fail("cosets bodies need class rec", body_tok)
            rep = self.cosets_body(ctx, stable, body_tok)
        else:
            self.fail(f"unknown body {body!r}", body_tok)
        self.expect("}")
        self.prog.subsets[name] = SubsetHandle(ctx, kind, rep)
        self.prog.anchors[name] = anchor

    def cfg_body(self, rank, stable) -> Cfg:
        prods = []
        start = None
        while True:
            lhs_tok = self.peek()
            lhs = self.name()
            if _LETTER.fullmatch(lhs) or lhs == "e":
                self.fail(f"left-hand side {lhs!r} is a terminal", lhs_tok)
            start = start or lhs
            self.expect("->")
            while True:
                prods.append((lhs, self.alternative(rank, stable)))
                if self.peek().text != "|":
                    break
                self.next()
            if self.peek().text != ";":
                break
            self.next()
            if self.peek().text == "}":
                break
        return Cfg(rank, start, prods)

    def alternative(self, rank, stable) -> tuple:
        rhs: list = []
        tok = self.peek()
        if tok.kind != "name":
            self.fail("empty alternative", tok)
        while self.peek().kind == "name":
            t = self.next()
            if t.text == "e":
                continue
            if _LETTER.fullmatch(t.text):
                rhs += self.letter(t, rank, stable)
            else:
                rhs.append(t.text)
        return tuple(rhs)

    def regex(self, rank, stable) -> automata.Nfa:
        x = self.regex_term(rank, stable)
        while self.peek().text == "|":
            self.next()
            x = automata.union(x, self.regex_term(rank, stable))
        return x

    def regex_term(self, rank, stable) -> automata.Nfa:
        x = None
        while True:
            tok = self.peek()
            if tok.text == ".":
                if x is None:
                    self.fail("'.' needs a left operand")
                self.next()
                continue
            if tok.text == "(":
                self.next()
                y = self.regex(rank, stable)
                self.expect(")")
            elif tok.kind == "name":
                self.next()
                y = automata.literal(self.letter(tok, rank, stable), rank)
            else:
                break
            while self.peek().text == "*":
                self.next()
                y = automata.star(y)
            x = y if x is None else automata.concat(x, y)
        if x is None:
            self.fail("empty regular expression")
        return x

    def cosets_body(self, ctx, stable, tok):
        gens = self.word_list(ctx.rank, stable)
        reps = [()]
        if self.peek().text == ";":
            self.next()
            reps = self.word_list(ctx.rank, stable)
        try:
            if isinstance(ctx, FreeAbelian):
                return lattice_data([ctx.normal_form(g) for g in gens], [ctx.normal_form(r) for r in reps], ctx.m)
            if isinstance(ctx, (FreeGroup, SubgroupOfFree)):
                graph = fold(gens, ctx.rank)
                return CosetData(graph, frozenset(graph.read(reduce(r)) for r in reps))
        except ValueError as exc:
            self.fail(str(exc), tok)
        self.fail("recognizable subsets need a free or free-abelian group", tok)


def parse_dsl(text: str) -> Program:
    return _Parser(text).parse()
