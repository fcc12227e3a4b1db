"""``grouplang`` command line: parse a declaration file, run one verb, print a report.

Transfer verbs and experiments end with ``RESULT: PASS|FAIL|INCONCLUSIVE ...``
and exit 0, 1 or 2 accordingly; I/O and parse errors exit 3.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import automata, grammars, semilinear
from .dsl import Program, parse_dsl
from .stallings import (
    as_cover,
    free_basis,
    hall_completion,
    index,
    to_text as graph_text,
)
from .transfer import experiments
from .transfer.contexts import FiniteIndexSubgroupOfFree, FreeGroup, SemidirectZmZ, SubgroupOfFree
from .transfer.handles import NotRecognizable, SubsetHandle
from .transfer.operations import NotContained, cf_embed_free_factor, compose, decompose, rec_restrict
from .transfer.semidirect import (
    FIBONACCI_Q,
    SemidirectElement,
    fibonacci_check,
    mat_pow,
    orbit_enumerate,
    orbit_grammar,
    orbit_rationality_probe,
    semidirect_eval,
)
from .words import format_word, parse_word

EXIT = {"PASS": 0, "FAIL": 1, "INCONCLUSIVE": 2}
EXPERIMENTS = ("example-3-12", "fibonacci", "pumping-z", "powers-of-two", "orbit-rationality", "roundtrip")


class Report:
    def __init__(self):
        self.lines: list[str] = []
        self.status: str | None = None

    def add(self, *lines: str):
        for line in lines:
            self.lines.extend(str(line).rstrip("\n").split("\n"))

    def result(self, status: str, detail: str):
        self.status = status
        self.lines.append(f"RESULT: {status} {detail}".rstrip())

    @property
    def code(self) -> int:
        return EXIT.get(self.status, 0)

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _load(args) -> Program:
    if not args.file:
        raise ValueError("this verb needs a declaration file")
    return parse_dsl(Path(args.file).read_text())


def _word(text, ctx) -> tuple:
    text = " ".join(text) if isinstance(text, list) else text
    stable = ctx.stable if isinstance(ctx, SemidirectZmZ) else None
    return parse_word(text, ctx.rank, stable)


def _stable(ctx):
    return ctx.stable if isinstance(ctx, SemidirectZmZ) else None


def _grammar_text(g) -> str:
    return str(g) if g.productions else "(empty)"


# verbs ------------------------------------------------------------------------


def cmd_red(args, rep: Report):
    h = _load(args).subset(args.subset, kinds=("rat",))
    rep.add(automata.to_text(automata.red_language(h.rep)))


def cmd_parikh(args, rep: Report):
    h = _load(args).subset(args.subset, kinds=("cf", "alg"))
    rep.add(semilinear.to_text(grammars.parikh_image(h.rep)))


def cmd_member(args, rep: Report):
    h = _load(args).subset(args.subset)
    w = _word(args.word, h.context)
    if h.kind in ("cf", "alg"):
        ok = grammars.cyk_member(h.rep, w)
        what = "in the grammar's language"
    else:
        ok = h.contains(w)
        what = "in the subset"
    word = format_word(w, _stable(h.context))
    rep.result("PASS" if ok else "FAIL", f"{word} is {'' if ok else 'not '}{what}")


def cmd_semilinear(args, rep: Report):
    if args.action != "member":
        raise ValueError(f"unknown semilinear action {args.action!r}")
    s = semilinear.from_text(Path(args.file).read_text())
    x = semilinear.parse_vector(args.vector)
    try:
        ok = semilinear.member(s, x)
    except semilinear.UnboundedSearch as exc:
        rep.result("INCONCLUSIVE", str(exc))
        return
    rep.result("PASS" if ok else "FAIL", f"{x} {'is' if ok else 'is not'} a member")


def cmd_stallings(args, rep: Report):
    g = _load(args).subgroup(args.subgroup)
    if args.action == "fold":
        rep.add(graph_text(g))
    elif args.action == "index":
        i = index(g)
        rep.add("infinite" if i == float("inf") else str(i))
    elif args.action == "hall":
        cover = hall_completion(g)
        bh, bh2 = free_basis(cover)
        rep.add(graph_text(cover.graph))
        rep.add("transversal " + " ; ".join(format_word(w) for w in cover.transversal))
        rep.add("basis H " + " ; ".join(format_word(w) for w in bh))
        rep.add("basis H' " + " ; ".join(format_word(w) for w in bh2))
    else:
        raise ValueError(f"unknown stallings action {args.action!r}")


def cmd_decompose(args, rep: Report):
    prog = _load(args)
    K = prog.subset(args.subset, kinds=("cf", "alg"))
    cover = hall_completion(prog.subgroup(args.subgroup))
    parts = decompose(K, cover)
    rep.add(f"index {cover.index}; basis of N: " + " ; ".join(format_word(w) for w in cover.basis))
    for i, (L, b) in enumerate(parts):
        rep.add(f"coset {i} representative {format_word(b)}", _grammar_text(L.rep))
    # composing walks tree geodesics, so composite witnesses are never longer
    # than the originals; exact bounded equality needs reduced witnesses
    bound = args.bound or 8
    want, got = K.image(bound), compose(parts, K.context).image(bound)
    if not want <= got:
        rep.result("FAIL", f"{len(want - got)} element(s) up to length {bound} lost by the decomposition")
    elif K.reduced_form and want != got:
        rep.result("FAIL", f"composite has extra elements up to length {bound}")
    else:
        scope = "equals" if K.reduced_form else "contains"
        rep.result("PASS", f"union of components {scope} the subset up to length {bound}")


def cmd_compose(args, rep: Report):
    prog = _load(args)
    name = args.subgroup or (list(prog.subgroups)[-1] if prog.subgroups else None)
    H = prog.subgroup(name)
    if index(H) == float("inf"):
        raise ValueError(f"subgroup {name} has infinite index; components need a finite-index subgroup")
    ctx = FiniteIndexSubgroupOfFree(as_cover(H))
    parts = [
        (SubsetHandle(ctx, h.kind, h.rep), prog.anchors[k])
        for k, h in prog.subsets.items()
        if prog.owner.get(k) == name and h.kind in ("cf", "alg")
    ]
    out = compose(parts, FreeGroup(H.rank))
    rep.add(_grammar_text(out.rep))
    rep.result("PASS", f"composed {len(parts)} component(s) over {name}")


def cmd_restrict(args, rep: Report):
    prog = _load(args)
    K = prog.subset(args.subset, kinds=("rec",))
    try:
        R = rec_restrict(K, prog.subgroup(args.subgroup))
    except NotContained as exc:
        rep.result("FAIL", f"subset leaves the subgroup: {format_word(exc.witness)}")
        return
    rep.add(graph_text(R.rep.graph), "cosets " + " ".join(map(str, sorted(R.rep.cosets))))
    rep.result("PASS", f"recognizable in the subgroup with {R.rep.graph.n_vertices} coset(s) of F∩H")


def cmd_embed(args, rep: Report):
    prog = _load(args)
    K = prog.subset(args.subset, kinds=("cf", "alg"))
    if not isinstance(K.context, SubgroupOfFree):
        raise ValueError("embed needs a subset declared over a subgroup")
    out = cf_embed_free_factor(K)
    rep.add(_grammar_text(out.rep))
    bound = args.bound or 8
    stretch = max(len(w) for w in K.context.basis)
    want = {K.context.to_parent(w) for w in K.words(bound)}
    missing = [w for w in sorted(want) if not out.contains(w, bound * stretch)]
    if missing:
        rep.result("FAIL", f"{len(missing)} element(s) lost, e.g. {format_word(missing[0])}")
    else:
        rep.result("PASS", f"{len(want)} element(s) of the subset found in the embedding")


def _semidirect(prog: Program) -> SemidirectZmZ:
    for ctx in reversed(list(prog.groups.values())):
        if isinstance(ctx, SemidirectZmZ):
            return ctx
    raise ValueError("no semidirect group declared")


def cmd_orbit(args, rep: Report):
    ctx = _semidirect(_load(args))
    w = _word(args.word or "a1", ctx)
    bound = args.bound if args.bound is not None else 10
    v = semidirect_eval(ctx, w).vector
    orbit = orbit_enumerate(ctx.Q, v, bound)
    for k, x in enumerate(orbit):
        rep.add(f"{k} {x}")
    g = orbit_grammar(ctx, w)
    bad = 0
    for word in grammars.enumerate_words(g, len(w) + 2 * bound):
        n = (len(word) - len(w)) // 2
        if semidirect_eval(ctx, word) != SemidirectElement(0, orbit[n]):
            bad += 1
    rep.result("PASS" if not bad else "FAIL", f"orbit words t^-n w t^n evaluate to (0, vQ^n) for n <= {bound}")


def cmd_eval(args, rep: Report):
    ctx = _semidirect(_load(args))
    w = _word(args.word, ctx)
    x = semidirect_eval(ctx, w)
    rep.add(str(x))
    rep.result("PASS", f"t_exponent {x.t_exponent} vector {x.vector}")


def cmd_verify(args, rep: Report):
    name = args.name
    if name == "example-3-12":
        bound = args.bound if args.bound is not None else 30
        if not 16 <= bound <= 40:
            raise ValueError("example-3-12 bound must lie in 16..40")
        r = experiments.example_3_12_experiment(bound)
        rep.add(f"exponents of a2 up to word length {bound}: {list(r.exponents)}")
        for k in r.exponents:
            rep.add(f"  a2^{k} <- {format_word(r.witnesses[k])}")
        for c in r.candidates:
            rep.add(f"{c.label}: {c.certificate} [{'verified' if c.verified else 'NOT verified'}]")
        rep.result(r.status, "exponents are powers of two; every candidate presentation refuted"
                   if r.status == "PASS" else "see report")
    elif name == "fibonacci":
        bound = args.bound if args.bound is not None else 30
        ok = fibonacci_check(bound)
        rep.add(f"Q^{bound} = {mat_pow(FIBONACCI_Q, bound)}")
        rep.result("PASS" if ok else "FAIL", f"Q^k matches the Fibonacci pattern for k <= {bound}")
    elif name == "pumping-z":
        p = args.p if args.p is not None else 4
        a = experiments.pumping_refute(experiments.two_counter_member, experiments.two_counter_witness(p), p)
        b = experiments.pumping_refute(experiments.triple_block_member, experiments.triple_block_witness(p), p)
        rep.add(f"two counters, z = e1^p e2^p e1^-p e2^-p: {a}", f"a1^n a2^n a1^-n, z = a1^p a2^p a1^-p: {b}")
        ok = a.status == b.status == "PASS"
        rep.result("PASS" if ok else "FAIL", f"pumping witnesses at p={p}")
    elif name == "powers-of-two":
        if args.file:
            s = semilinear.from_text(Path(args.file).read_text())
            sets = [(args.file, s)]
        else:
            sets = [(c.label, c.presentation) for c in experiments.example_3_12_experiment(16).candidates]
        ok = True
        for label, s in sets:
            cert = semilinear.powers_of_two_conflict(s)
            good = cert.verify(s)
            ok = ok and good
            rep.add(f"{label}: {cert} [{'verified' if good else 'NOT verified'}]")
        rep.result("PASS" if ok else "FAIL", f"{len(sets)} presentation(s) differ from the powers of two")
    elif name == "orbit-rationality":
        bound = args.bound if args.bound is not None else 20
        Q = _semidirect(_load(args)).Q if args.file else FIBONACCI_Q
        v = (1,) + (0,) * (len(Q) - 1)
        probe = orbit_rationality_probe(Q, v, bound)
        rep.add(f"values {list(probe.values)}")
        rep.result("PASS" if probe.status != "INCONCLUSIVE" else "INCONCLUSIVE", str(probe))
    elif name == "roundtrip":
        bound = args.bound if args.bound is not None else 8
        r = experiments.roundtrip_experiment(bound=bound)
        rep.add(f"{r.cases} grammar/cover pairs, word length <= {bound}")
        rep.result(r.status, f"{r.cases - len(r.failures)}/{r.cases} round trips agree")
    else:
        raise ValueError(f"unknown experiment {name!r}; choose from {', '.join(EXPERIMENTS)}")


# entry points -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grouplang", description=__doc__.split("\n")[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=int)
    common.add_argument("--p", type=int)
    common.add_argument("--out")
    common.add_argument("--subset")
    common.add_argument("--subgroup")
    sub = ap.add_subparsers(dest="verb", required=True)

    def verb(name, fn, *positional, help=None):
        p = sub.add_parser(name, parents=[common], help=help)
        for arg, kw in positional:
            p.add_argument(arg, **kw)
        p.set_defaults(fn=fn)
        return p

    verb("red", cmd_red, ("file", {}), help="reduced-language automaton of a rational subset")
    verb("parikh", cmd_parikh, ("file", {}), help="Parikh image of a grammar subset")
    verb("member", cmd_member, ("file", {}), ("word", {"nargs": "+"}), help="membership of a word")
    verb("semilinear", cmd_semilinear, ("action", {"choices": ["member"]}), ("file", {}), ("vector", {}))
    verb("stallings", cmd_stallings, ("action", {"choices": ["fold", "index", "hall"]}), ("file", {}))
    verb("decompose", cmd_decompose, ("file", {}), help="coset decomposition over a subgroup's completion")
    verb("compose", cmd_compose, ("file", {}), help="compose components declared over a subgroup")
    verb("restrict", cmd_restrict, ("file", {}), help="restrict a recognizable subset to a subgroup")
    verb("embed", cmd_embed, ("file", {}), help="embed a subset of a subgroup into the free group")
    verb("orbit", cmd_orbit, ("file", {}), help="orbit of a word under the semidirect action")
    verb("eval", cmd_eval, ("file", {}), ("word", {"nargs": "+"}), help="normal form in the semidirect product")
    p = verb("verify", cmd_verify, ("name", {"choices": list(EXPERIMENTS)}), ("file", {"nargs": "?"}))
    p.add_argument("--word")
    sub.choices["orbit"].add_argument("--word")
    return ap


def run(argv: list[str]) -> tuple[str, int]:
    """Run one command; returns the report text and the exit status."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return "", 0 if exc.code == 0 else 3
    rep = Report()
    try:
        args.fn(args, rep)
    except (OSError, ValueError, NotRecognizable) as exc:
        return f"error: {exc}\n", 3
    text = rep.text()
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            return f"error: {exc}\n", 3
        return "", rep.code
    return text, rep.code


def main(argv: list[str] | None = None) -> int:
    text, code = run(sys.argv[1:] if argv is None else argv)
    stream = sys.stderr if code == 3 else sys.stdout
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
