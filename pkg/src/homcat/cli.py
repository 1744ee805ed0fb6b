"""Command-line interface.

Every report starts with the command echo and a sha256 digest of the input
files, then the results in canonical invariant form, then resource sizes.
Output depends only on the inputs and the configuration.

Exit codes: 0 success, 2 parse error, 3 precondition, 4 budget exceeded,
5 verification failure.
"""

from __future__ import annotations

import argparse
import hashlib
import random
import sys

from . import config
from .errors import HomcatError, ParseError, PreconditionError, VerificationError
from .fgab import FgAbGroup, smith_normal_form
from . import io as hio

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_BUDGET, EXIT_VERIFY = 0, 2, 3, 4, 5


class Report:
    def __init__(self, argv, files):
        self.lines = [f"command: homcat {' '.join(argv)}"]
        h = hashlib.sha256()
        for path in files:
            try:
                with open(path, "rb") as fh:
                    h.update(fh.read())
            except OSError:
                pass
        self.lines.append(f"inputs: sha256 {h.hexdigest()}")
        self.resources = []

    def add(self, *lines):
        self.lines.extend(lines)

    def resource(self, text):
        self.resources.append(text)

    def text(self):
        out = list(self.lines)
        if self.resources:
            out.append("resources: " + "; ".join(self.resources))
        return "\n".join(out) + "\n"


def _coeff(spec: str | None):
    """``z``, ``z/k`` or a path to an abelian-group file."""
    if spec is None or spec.lower() == "z":
        return FgAbGroup.cyclic(0)
    low = spec.lower()
    if low.startswith("z/"):
        try:
            k = int(low[2:])
        except ValueError:
            raise ParseError(f"bad coefficient {spec!r}", 1, 1) from None
        if k < 0:
            raise ParseError("coefficient order must be nonnegative", 1, 1)
        return FgAbGroup.cyclic(k)
    return hio.load_abgroup(spec)


def _coeff_files(spec):
    if spec is None or spec.lower() == "z" or spec.lower().startswith("z/"):
        return []
    return [spec]


def _check(rep, report: Report):
    report.add(*rep.lines())
    if not rep.ok:
        raise VerificationError("; ".join(rep.failures))


# ---------------------------------------------------------------------------
# abelian
# ---------------------------------------------------------------------------


def cmd_abelian(a, report: Report):
    from .chains import homology, long_exact_sequence
    from .derived import (
        YonedaSpace,
        abelian_uct_check,
        cohomology,
        ext_group,
        left_derived,
        parse_functor,
        tor_group,
        yoneda_check,
    )

    sub = a.sub
    if sub == "snf":
        M = hio.load_matrix(a.file)
        S = smith_normal_form(M)
        report.add(f"shape: {M.rows}x{M.cols}",
                   "divisors: " + (", ".join(str(d) for d in S.divisors) or "none"),
                   f"rank: {S.rank}")
        return
    if sub == "homology":
        C = hio.load_complex(a.file)
        degs = [a.degree] if a.degree is not None else list(C.degrees())
        for n in degs:
            report.add(f"H_{n} ≅ {homology(C, n)}")
        report.resource(f"degrees {C.lo}..{C.hi}, generators {sum(C.obj(n).ngens for n in C.degrees())}")
        return
    if sub == "les":
        ses = hio.load_ses(a.file)
        les = long_exact_sequence(ses, strict=False)
        report.add(*les.lines())
        if not les.exact:
            raise VerificationError("; ".join(les.failures))
        return
    if sub == "derived":
        X = hio.load_abgroup(a.file)
        T = parse_functor(a.functor)
        n = a.degree or 0
        report.add(f"L_{n}({T.name})({X}) ≅ {left_derived(T, n, X)}")
        return
    if sub == "ext":
        X = hio.load_abgroup(a.file)
        A = _coeff(a.coeff)
        n = a.degree or 0
        report.add(f"Ext^{n}({X}, {A}) ≅ {ext_group(X, A, n)}")
        report.add(f"Tor_{n}({X}, {A}) ≅ {tor_group(X, A, n)}")
        return
    if sub == "yoneda":
        C = hio.load_complex(a.file)
        T = parse_functor(a.functor)
        n = a.degree or 0
        Y = YonedaSpace(C, T, n)
        rep = yoneda_check(C, T, n, random.Random(a.seed), space=Y)
        classes = Y.Hc.order() if Y.Hc.is_finite() else "infinitely many"
        report.add(f"H_{n}({T.name} C) ≅ {Y.Hc}")
        if rep.ok:
            report.add(f"round-trip OK, {classes} classes")
        _check(rep, report)
        return
    if sub == "uct":
        C = hio.load_complex(a.file)
        A = _coeff(a.coeff)
        n = a.degree or 0
        rep = abelian_uct_check(C, A, n)
        report.add(f"H^{n}(C; {A}) ≅ {cohomology(C, A, n)}")
        _check(rep, report)
        return
    raise PreconditionError(f"unknown subcommand {sub}")


# ---------------------------------------------------------------------------
# group
# ---------------------------------------------------------------------------


def cmd_group(a, report: Report):
    from .grp import abelianisation, center, derived_subgroup, is_perfect
    from .grphom import bar_complex, group_cohomology, group_homology, stallings_tail

    sub = a.sub
    if sub == "stallings":
        e = hio.load_extension(a.file)
        rep = stallings_tail(e)
        _check(rep, report)
        return
    G = hio.load_group(a.file)
    report.resource(f"order {G.order}")
    if sub == "ab":
        report.add(str(abelianisation(G).group))
    elif sub == "commutator":
        D = derived_subgroup(G)
        report.add(f"[G, G] order: {D.order}", f"perfect: {str(is_perfect(G)).lower()}")
    elif sub == "center":
        Z = center(G)
        report.add(f"center order: {Z.order}", f"elements: {list(Z.elements)}")
    elif sub in ("homology", "cohomology"):
        n = a.degree if a.degree is not None else 1
        A = _coeff(a.coeff)
        if sub == "homology":
            if A.free_rank == 1 and not A.torsion:
                k = 0
            elif A.free_rank == 0 and len(A.torsion) <= 1:
                k = A.torsion[0] if A.torsion else 1
            else:
                raise PreconditionError("homology coefficients must be Z or Z/k")
            report.add(str(group_homology(G, n, k)))
        else:
            report.add(str(group_cohomology(G, n, A)))
        bar = bar_complex(G)
        report.resource("bar ranks " + ", ".join(str(bar.rank(i)) for i in range(n + 2)))
    else:
        raise PreconditionError(f"unknown subcommand {sub}")


# ---------------------------------------------------------------------------
# ext
# ---------------------------------------------------------------------------


def cmd_ext(a, report: Report):
    from .grp import double_is_central, extensions_congruent, is_central_extension
    from .uce import (
        acyclicity_class,
        enumerate_central_extensions,
        uct_pairing,
        verify_uce,
    )

    sub = a.sub
    if sub == "check":
        e = hio.load_extension(a.file)
        if e.arity == 1:
            report.add("valid: true", "arity: 1",
                       f"orders: A {e.A.order}, E {e.E.order}, X {e.X.order}")
        else:
            report.add("valid: true", "arity: 2",
                       "orders: " + ", ".join(f"E{i}{j} {e.E[(i, j)].order}"
                                              for i in range(3) for j in range(3)))
        return
    if sub == "central":
        e = hio.load_extension(a.file)
        c = is_central_extension(e) if e.arity == 1 else double_is_central(e)
        report.add(f"central: {str(c).lower()}")
        return
    if sub == "central2":
        e = hio.load_extension(a.file)
        if e.arity != 2:
            raise PreconditionError("central2 needs a double extension")
        report.add(f"central: {str(double_is_central(e)).lower()}")
        return
    if sub == "congruent":
        e, f = hio.load_extension(a.file), hio.load_extension(a.other)
        bound = a.zigzag if a.zigzag is not None else config.get("zigzag_bound")
        r = extensions_congruent(e, f, bound)
        report.add(f"congruent: {r.verdict}")
        for direction, h in r.witness:
            report.add(f"witness {direction}: {list(int(x) for x in h.map)}")
        if r.note:
            report.add(f"note: {r.note}")
        return
    if sub == "enumerate":
        X = hio.load_group(a.base)
        A = hio.load_group(a.kernel)
        res = enumerate_central_extensions(X, A)
        report.add(*res.lines())
        if not res.report.ok:
            raise VerificationError("; ".join(res.report.failures))
        return
    if sub == "uce-verify":
        e = hio.load_extension(a.file)
        probes, versions = hio.load_probes(a.probes) if a.probes else ([], [])
        cert = verify_uce(e, probes)
        report.add(*cert.lines())
        if versions:
            report.add("probe library: " + ", ".join(versions))
        if not cert.valid:
            raise VerificationError("certificate invalid: clause "
                                    + ", ".join(str(c) for c in cert.failing))
        return
    if sub == "acyclicity":
        G = hio.load_group(a.file)
        rep = acyclicity_class(G, a.k, a.n_max)
        report.add(*rep.lines())
        return
    if sub == "uct":
        G = hio.load_group(a.file)
        M = _coeff(a.coeff or "z/2")
        n = a.degree if a.degree is not None else 1
        pr = uct_pairing(G, n, M)
        report.add(*pr.lines())
        if not pr.bijective:
            raise VerificationError("pairing is not bijective")
        return
    raise PreconditionError(f"unknown subcommand {sub}")


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"homcat: error: {message}\n")
        sys.exit(EXIT_PARSE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="homcat", description="Homological algebra for abelian and finite groups.")
    p.add_argument("--config", help="JSON file with configuration keys")
    p.add_argument("--max-tuples", type=int, help="bar-complex basis cap")
    p.add_argument("--max-entry-bits", type=int, help="coefficient growth cap")
    top = p.add_subparsers(dest="area", required=True, parser_class=_Parser)

    ab = top.add_parser("abelian", help="finitely generated abelian groups and complexes")
    ab.add_argument("sub", choices=["snf", "homology", "les", "derived", "ext", "yoneda", "uct"])
    ab.add_argument("file")
    ab.add_argument("--degree", type=int)
    ab.add_argument("--functor", default="id", help="id or tensor:k")
    ab.add_argument("--coeff", help="z, z/k or an abelian-group file")
    ab.add_argument("--seed", type=int, default=0, help="seed for randomized probes")

    gr = top.add_parser("group", help="finite groups")
    gr.add_argument("sub", choices=["ab", "commutator", "center", "homology", "cohomology",
                                    "stallings"])
    gr.add_argument("file")
    gr.add_argument("--degree", type=int)
    gr.add_argument("--coeff", help="z, z/k or an abelian-group file")

    ex = top.add_parser("ext", help="extensions")
    ex.add_argument("sub", choices=["check", "central", "central2", "congruent", "enumerate",
                                    "uce-verify", "acyclicity", "uct"])
    ex.add_argument("file", nargs="?")
    ex.add_argument("other", nargs="?")
    ex.add_argument("--base", help="base group file (enumerate)")
    ex.add_argument("--kernel", help="kernel group file (enumerate)")
    ex.add_argument("--probes", help="probe library file or directory")
    ex.add_argument("--zigzag", type=int)
    ex.add_argument("--k", type=int, default=0, help="exponent of the abelianisation")
    ex.add_argument("--n-max", type=int, default=1)
    ex.add_argument("--degree", type=int)
    ex.add_argument("--coeff", help="z/p or an abelian-group file")
    return p


def _inputs(a):
    files = []
    for key in ("file", "other", "base", "kernel", "config"):
        v = getattr(a, key, None)
        if v:
            files.append(v)
    files += _coeff_files(getattr(a, "coeff", None))
    probes = getattr(a, "probes", None)
    if probes:
        import os

        if os.path.isdir(probes):
            files += [os.path.join(probes, f) for f in sorted(os.listdir(probes))
                      if f.endswith(".json")]
        else:
            files.append(probes)
    return files


def run(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    a = parser.parse_args(argv)
    config.reset()
    try:
        report = Report(argv, _inputs(a))
        if a.config:
            try:
                config.load(a.config)
            except (OSError, ValueError, KeyError) as ex:
                raise ParseError(f"{a.config}: bad configuration ({ex})", 1, 1) from None
        if a.max_tuples is not None:
            config.configure(max_tuples=a.max_tuples)
        if a.max_entry_bits is not None:
            config.configure(max_entry_bits=a.max_entry_bits)
        if a.area == "ext":
            needs_file = a.sub not in ("enumerate",)
            if needs_file and not a.file:
                raise ParseError(f"ext {a.sub} needs an input file", 1, 1)
            if a.sub == "congruent" and not a.other:
                raise ParseError("ext congruent needs two extension files", 1, 1)
            if a.sub == "enumerate" and not (a.base and a.kernel):
                raise ParseError("ext enumerate needs --base and --kernel", 1, 1)
        {"abelian": cmd_abelian, "group": cmd_group, "ext": cmd_ext}[a.area](a, report)
    except HomcatError as ex:
        if "report" in locals():
            out.write(report.text())
        err.write(f"homcat: {type(ex).__name__}: {ex}\n")
        return ex.exit_code
    out.write(report.text())
    return EXIT_OK


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
