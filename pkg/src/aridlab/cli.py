"""Command-line front end: ``aridlab <command> ...``.

Exit codes: 0 success, 1 a result contradicting ``--expect``, 2 usage
errors, 3 unresolved interval evaluation.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import combinat, corpus, growth, seqkit, setalg
from .dfao import Dfao, from_text, to_text, word_to_str
from .genpoly import GenPolySequence, UnresolvedFloorError, discrepancy, parse
from .genpoly.evaluate import Compiled
from .genpoly.interval import Unresolved

EXIT_OK, EXIT_EXPECT, EXIT_USAGE, EXIT_UNRESOLVED = 0, 1, 2, 3


class UsageError(ValueError):
    pass


# --------------------------------------------------------------------------
# inputs


def _int_list(text: str) -> list:
    return [int(x) for x in text.replace(" ", "").split(",") if x]


def _frac(text: str) -> Fraction:
    return Fraction(text)


def add_source(p: argparse.ArgumentParser, expr: bool = True):
    g = p.add_argument_group("input")
    g.add_argument("--dfao", metavar="PATH", help="automaton file in the DFAO text format")
    g.add_argument("--corpus", metavar="NAME", help="named construction (see `corpus list`)")
    g.add_argument("--k", type=int, default=2, help="base for corpus entries (default 2)")
    g.add_argument("--ban", action="append", default=[],
                   help="banned word for bfree; repeat or comma-separate")
    g.add_argument("--word", help="word for the `contains` entry")
    g.add_argument("--pattern", help="comma-separated pattern for the `periodic` entry")
    g.add_argument("--target", type=int, default=1, help="output value defining the set (default 1)")
    if expr:
        g.add_argument("--expr", help="generalised polynomial, e.g. 'floor(sqrt(2)*n)'")
        g.add_argument("--mod", type=int, help="reduce floor(expr) modulo this")
        g.add_argument("--p0", type=int, default=64, help="initial precision in bits")
        g.add_argument("--pmax", type=int, default=4096, help="precision cap in bits")


def _corpus(args):
    bans = [b for item in args.ban for b in item.split(",") if b]
    pattern = _int_list(args.pattern) if getattr(args, "pattern", None) else None
    try:
        return corpus.build_named(args.corpus, k=args.k, ban=bans, word=args.word, pattern=pattern)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def load_automaton(args) -> Dfao:
    if args.dfao:
        with open(args.dfao, encoding="utf-8") as fh:
            return from_text(fh.read())
    if args.corpus:
        a = _corpus(args)
        if not isinstance(a, Dfao):
            raise UsageError(f"{args.corpus} is a sequence, not an automaton")
        return a
    raise UsageError("an automaton is required (--dfao or --corpus)")


def load_sequence(args):
    if getattr(args, "expr", None):
        if args.mod is None:
            raise UsageError("--expr needs --mod to define a finite-valued sequence")
        return GenPolySequence(args.expr, mod=args.mod, p0=args.p0, p_max=args.pmax)
    if args.corpus and not args.dfao:
        a = _corpus(args)
        return seqkit.as_sequence(a)
    return seqkit.as_sequence(load_automaton(args))


def _expect(args, ok: bool) -> int:
    return EXIT_OK if ok else EXIT_EXPECT


def _w(word, k):
    return word_to_str(word, k) or "ε"


# --------------------------------------------------------------------------
# commands


def cmd_classify(args) -> int:
    cl = growth.classify(load_automaton(args), args.target)
    print(cl.describe())
    if args.expect:
        return _expect(args, (args.expect == "arid") == cl.arid)
    return EXIT_OK


def cmd_count(args) -> int:
    c = growth.Counter(load_automaton(args), args.target)
    print("M,N,count")
    for N in args.N:
        print(f"{args.M},{N},{c.range(args.M, N)}")
    return EXIT_OK


def cmd_decompose(args) -> int:
    a = load_automaton(args)
    try:
        d = growth.arid_decompose(a, args.target, args.verify_len)
    except growth.NotAridError as exc:
        print(f"not arid: {exc}")
        return EXIT_EXPECT
    print(f"rank={d.rank} sets={len(d.sets)}")
    print(d)
    if args.standard:
        if d.rank > 1:
            print("standard form needs rank <= 1")
            return EXIT_EXPECT
        print(corpus.standard_decompose(a.indicator(args.target), args.bound))
    return EXIT_OK


def cmd_kernel(args) -> int:
    if args.lmax is None:
        t = seqkit.kernel_exact(load_automaton(args))
        print(f"# exact kernel: {len(t)} elements")
        print(t.to_text(), end="")
        return EXIT_OK
    f = load_sequence(args)
    ek = seqkit.kernel_empirical(f, args.lmax, args.prefix, args.k)
    print("l,distinct,cumulative")
    for l, c in ek.rows():
        print(f"{l},{c},{ek.cumulative[l]}")
    return EXIT_OK


def cmd_weakperiod(args) -> int:
    f = load_sequence(args)
    res = seqkit.weak_periodicity_search(f, args.a, args.b, args.qmax, args.N, not args.bounded)
    print(res.describe())
    if args.expect:
        found = isinstance(res, seqkit.WeakPeriodicityWitness)
        return _expect(args, (args.expect == "witness") == found)
    return EXIT_OK


def cmd_witness_ips(args) -> int:
    a = load_automaton(args)
    try:
        w = combinat.ips_witness(a, target=args.target)
    except combinat.NotIps as exc:
        print(str(exc))
        return EXIT_EXPECT
    print(w.describe(args.t))
    ind = a.indicator(args.target)
    rep = combinat.verify_fs(ind, w.generators(args.t), w.shifts(args.t))
    print(rep.describe())
    return EXIT_OK if rep.ok else EXIT_EXPECT


def cmd_witness_shifted(args) -> int:
    a = load_automaton(args)
    try:
        w = combinat.shifted_ip_witness(a, args.target)
    except combinat.HypothesisError as exc:
        print(f"hypothesis fails: {exc}")
        return EXIT_EXPECT
    print(w.describe(min(args.T, 4)))
    rep = combinat.verify_fs(a.indicator(args.target), w.generators(args.T), w.N)
    print(rep.describe())
    return EXIT_OK if rep.ok else EXIT_EXPECT


def cmd_witness_verify(args) -> int:
    a = load_automaton(args)
    gens = _int_list(args.gens)
    shifts = None
    if args.shifts:
        shifts = _int_list(args.shifts)
        shifts = shifts[0] if len(shifts) == 1 else shifts
    rep = combinat.verify_fs(a.indicator(args.target), gens, shifts)
    print(rep.describe())
    return EXIT_OK if rep.ok else EXIT_EXPECT


def cmd_density_uniform(args) -> int:
    rep = setalg.uniform_density(load_automaton(args), args.L)
    if rep.exists:
        print("density " + " ".join(f"{y}:{rep.rho[y]}" for y in sorted(rep.rho)))
    else:
        print("uniform density does not exist")
    for c in rep.components:
        rho = " ".join(f"{y}:{c.rho[y]}" for y in sorted(c.rho))
        print(f"component states={sorted(c.states)} period={c.period} converges={c.converges} {rho}")
    return EXIT_OK


def cmd_density_banach(args) -> int:
    f = load_sequence(args) if getattr(args, "expr", None) else load_automaton(args)
    ladder = [2 ** e for e in range(args.emin, args.emax + 1)]
    rep = setalg.banach_estimate(f, ladder, args.samples, args.seed, args.target)
    sys.stdout.write(rep.csv())
    return EXIT_OK


def cmd_eval(args) -> int:
    c = Compiled(parse(args.expr), args.p0, args.pmax)
    ns = _int_list(args.n) if args.n else range(args.start, args.stop)
    print("n,value,precision")
    for n in ns:
        r = c(n)
        print(f"{n},{r.value},{r.precision}")
    return EXIT_OK


def cmd_discrepancy(args) -> int:
    rep = discrepancy(args.expr, args.N, _frac(args.lam), args.a, args.p0, args.pmax)
    print(f"N={rep.N} D*={float(rep.value):.9f} error<={float(rep.error_bound):.3e} "
          f"max_precision={rep.max_precision} exact={rep.exact}")
    return EXIT_OK


def cmd_orbit_verify(args) -> int:
    from .dynamics import SkewSystem, binomial_lift, verify_bridge, verify_identity
    coeffs = [_frac(x) for x in args.poly.split(",")]
    lift = binomial_lift(coeffs, args.m)
    print("a = " + ", ".join(str(x) for x in lift.a))
    rep = verify_identity(SkewSystem.from_lift(lift), args.N)
    print(rep.describe())
    bridge = verify_bridge(coeffs, args.m, args.N)
    print("bridge: " + bridge.describe())
    return EXIT_OK if rep.ok and bridge.ok else EXIT_EXPECT


def cmd_setalg(args) -> int:
    a = load_automaton(args)
    if args.op == "filter":
        out = setalg.congruence_filter(a, args.m, args.r, args.target)
    elif args.op == "affine":
        out = setalg.affine_preimage(a, args.alpha, args.beta)
    else:
        out = setalg.scale_preimage(a, args.c)
    print(to_text(out), end="")
    return EXIT_OK


def cmd_corpus_list(args) -> int:
    for e in corpus.CATALOGUE:
        print(f"{e.name:<22} {e.kind:<9} {e.params:<22} {e.description}")
    return EXIT_OK


def cmd_corpus_build(args) -> int:
    args.corpus = args.name
    obj = _corpus(args)
    if isinstance(obj, Dfao):
        print(to_text(obj), end="")
    else:
        print(",".join(str(v) for v in obj.values(args.terms)))
    return EXIT_OK


def cmd_compare(args) -> int:
    if args.against:
        f = load_sequence(args)
        g = corpus.build_named(args.against, k=args.k)
        g = seqkit.as_sequence(g)
        fv, gv = f.values(args.N), g.values(args.N)
        bad = [n for n in range(args.N) if fv[n] != gv[n]]
        print(f"compared n<{args.N}: {len(bad)} mismatches")
        if bad:
            print("first mismatches: " + ",".join(map(str, bad[:10])))
        return EXIT_OK if not bad else EXIT_EXPECT
    a = load_automaton(args)
    if args.pattern_fit:
        fit = seqkit.best_fit_pattern(a, args.period)
        if fit is None:
            print("no uniform density; cannot fit a periodic part")
            return EXIT_EXPECT
        pattern, miss = fit
    else:
        pattern = _int_list(args.periodic) if args.periodic else [0] * args.period
        miss = None
    z = seqkit.mismatch_set(a, len(pattern), pattern)
    print(f"periodic part: {','.join(map(str, pattern))}" + (f" (mismatch density {miss})" if miss is not None else ""))
    cl = growth.classify(z)
    print(f"Z: {cl.describe()}")
    c = growth.Counter(z)
    print("N,max_window_count")
    for e in range(args.emin, args.emax + 1):
        print(f"{2 ** e},{growth.max_window(z, 2 ** e, 1, c).count}")
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="aridlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", metavar="command")
    sub.required = True

    s = sub.add_parser("classify", help="arid with rank, or not arid with loop evidence")
    add_source(s, expr=False)
    s.add_argument("--expect", choices=["arid", "not-arid"])
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("count", help="exact counts |E ∩ [M, M+N)| as CSV")
    add_source(s, expr=False)
    s.add_argument("--M", type=int, default=0)
    s.add_argument("--N", type=int, nargs="+", required=True)
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("decompose", help="arid decomposition into basic sets")
    add_source(s, expr=False)
    s.add_argument("--verify-len", type=int, default=24, dest="verify_len")
    s.add_argument("--standard", action="store_true", help="closed forms a k^(tl) + b (rank <= 1)")
    s.add_argument("--bound", type=int, default=2 ** 32, help="verification bound for --standard")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("kernel", help="exact kernel of an automaton or empirical kernel profile")
    add_source(s)
    s.add_argument("--lmax", type=int, help="levels for the empirical kernel")
    s.add_argument("--prefix", type=int, default=64, help="truncation length (default 64)")
    s.set_defaults(func=cmd_kernel)

    s = sub.add_parser("weakperiod", help="search f(a(qn+r)+b) = f(a(qn+r')+b)")
    add_source(s)
    s.add_argument("--a", type=int, default=1)
    s.add_argument("--b", type=int, default=0)
    s.add_argument("--qmax", type=int, default=16)
    s.add_argument("--N", type=int, default=1024)
    s.add_argument("--bounded", action="store_true", help="skip the exact upgrade")
    s.add_argument("--expect", choices=["witness", "none"])
    s.set_defaults(func=cmd_weakperiod)

    w = sub.add_parser("witness", help="IPS and shifted-IP witnesses, finite-sums checks")
    wsub = w.add_subparsers(dest="witness", metavar="kind")
    wsub.required = True
    s = wsub.add_parser("ips", help="IPS witness of a non-arid set")
    add_source(s, expr=False)
    s.add_argument("--t", type=int, default=8, help="levels to verify (default 8)")
    s.set_defaults(func=cmd_witness_ips)
    s = wsub.add_parser("shifted-ip", help="shifted IP witness under factor universality")
    add_source(s, expr=False)
    s.add_argument("--T", type=int, default=10, help="generators to verify (default 10)")
    s.set_defaults(func=cmd_witness_shifted)
    s = wsub.add_parser("verify-fs", help="check finite sums of given generators")
    add_source(s, expr=False)
    s.add_argument("--gens", required=True, help="comma-separated generators")
    s.add_argument("--shifts", help="one constant shift or N_1,...,N_T")
    s.set_defaults(func=cmd_witness_verify)

    d = sub.add_parser("density", help="uniform density or windowed density profile")
    dsub = d.add_subparsers(dest="density", metavar="kind")
    dsub.required = True
    s = dsub.add_parser("uniform", help="exact uniform density")
    add_source(s, expr=False)
    s.add_argument("--L", type=int, default=20, help="word lengths tabulated")
    s.set_defaults(func=cmd_density_uniform)
    s = dsub.add_parser("banach", help="max window count / N over N = 2^emin..2^emax (CSV)")
    add_source(s)
    s.add_argument("--emin", type=int, default=10)
    s.add_argument("--emax", type=int, default=16)
    s.add_argument("--samples", type=int, default=64)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_density_banach)

    s = sub.add_parser("eval", help="evaluate an expression at integers")
    s.add_argument("--expr", required=True)
    s.add_argument("--n", help="comma-separated arguments")
    s.add_argument("--start", type=int, default=0)
    s.add_argument("--stop", type=int, default=10)
    s.add_argument("--p0", type=int, default=64)
    s.add_argument("--pmax", type=int, default=4096)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("discrepancy", help="star discrepancy of lam*e(a n) mod 1, n < N")
    s.add_argument("--expr", required=True)
    s.add_argument("--N", type=int, default=10000)
    s.add_argument("--lam", default="1")
    s.add_argument("--a", type=int, default=1)
    s.add_argument("--p0", type=int, default=64)
    s.add_argument("--pmax", type=int, default=512)
    s.set_defaults(func=cmd_discrepancy)

    o = sub.add_parser("orbit", help="skew-product orbit identities")
    osub = o.add_subparsers(dest="orbit", metavar="kind")
    osub.required = True
    s = osub.add_parser("verify", help="closed form and floor bridge for p(x)/m")
    s.add_argument("--poly", required=True, help="coefficients c_0,c_1,...,c_d")
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--N", type=int, default=10000)
    s.set_defaults(func=cmd_orbit_verify)

    g = sub.add_parser("setalg", help="congruence filter, affine and scaling preimages")
    gsub = g.add_subparsers(dest="op", metavar="op")
    gsub.required = True
    s = gsub.add_parser("filter", help="{n ∈ E : n ≡ r mod m}")
    add_source(s, expr=False)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.set_defaults(func=cmd_setalg)
    s = gsub.add_parser("affine", help="n -> a(alpha n + beta)")
    add_source(s, expr=False)
    s.add_argument("--alpha", type=int, required=True)
    s.add_argument("--beta", type=int, default=0)
    s.set_defaults(func=cmd_setalg)
    s = gsub.add_parser("scale", help="{n : c n ∈ E}")
    add_source(s, expr=False)
    s.add_argument("--c", type=int, required=True)
    s.set_defaults(func=cmd_setalg)

    c = sub.add_parser("corpus", help="named constructions")
    csub = c.add_subparsers(dest="action", metavar="action")
    csub.required = True
    s = csub.add_parser("list", help="list the catalogue")
    s.set_defaults(func=cmd_corpus_list)
    s = csub.add_parser("build", help="print an entry (automaton text or sequence terms)")
    s.add_argument("name")
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--ban", action="append", default=[])
    s.add_argument("--word")
    s.add_argument("--pattern")
    s.add_argument("--terms", type=int, default=32)
    s.set_defaults(func=cmd_corpus_build)

    s = sub.add_parser("compare", help="sequence agreement, or the mismatch-set pipeline")
    add_source(s)
    s.add_argument("--against", help="corpus sequence to compare with")
    s.add_argument("--N", type=int, default=10000)
    s.add_argument("--period", type=int, default=1)
    s.add_argument("--periodic", help="periodic part (default all zeros)")
    s.add_argument("--fit", action="store_true", dest="pattern_fit",
                   help="choose the periodic part minimising the mismatch density")
    s.add_argument("--emin", type=int, default=10)
    s.add_argument("--emax", type=int, default=24)
    s.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UnresolvedFloorError, Unresolved) as exc:
        print(f"unresolved: {exc}", file=sys.stderr)
        return EXIT_UNRESOLVED
    except (UsageError, ValueError, OSError) as exc:
        print(f"aridlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
