"""Command-line interface, report emission, and the matrix disk cache.

Exit codes: 0 success, 2 domain errors (with a machine-readable error
document on stdout), 64 usage errors.  All numeric output is exact:
integers, residues and polynomial coefficient lists; no floating point.
"""

import argparse
import hashlib
import json
import os
import sys
import tempfile

from .congruence import (
    SubgroupH,
    curve_invariants,
    coset_table,
    full_subgroup,
    gamma0_criterion,
    genus_of_subgroup,
    h_from_eigenform,
    index_gamma,
    predicted_kernel_order,
    trivial_subgroup,
)
from .dirichlet import (
    character_literal,
    conductor,
    kernel,
    parse_character,
    trivial_character,
)
from .eigen import reduce_space_mod, decompose, minpoly_prime_field
from .exactalg.arith import primes_up_to, unit_group
from .exactalg.gf import fq_str
from .modsym import build_space
from .pipeline import (
    PipelineError,
    TABLE_ROWS,
    find_twist,
    plus_cuspidal_space,
    realize,
    select_input_form,
    sturm_bound,
    table_row_selector,
)

USAGE_ERROR = 64
DOMAIN_ERROR = 2

CACHE_FORMAT = "MSYMMAT 1"


class MatrixCache:
    """Persistent store of integral operator matrices.

    Layout: <dir>/msym_v1/L{level}_W{weight}/{label}.mat, a text format of
    one header line, decimal integer rows, and a trailing SHA256 line over
    the preceding lines.  Writes are atomic (temp file + rename); corrupt
    entries are deleted and recomputed.
    """

    def __init__(self, root):
        self.root = os.path.join(root, "msym_v1")

    def _path(self, level, weight, label):
        return os.path.join(self.root, "L%d_W%d" % (level, weight),
                            "%s.mat" % label)

    @staticmethod
    def _payload(rows, cols, mat):
        lines = ["%s %d %d" % (CACHE_FORMAT, rows, cols)]
        for row in mat:
            lines.append(" ".join(str(x) for x in row))
        return lines

    def store(self, level, weight, label, mat):
        rows = len(mat)
        cols = len(mat[0]) if mat else 0
        lines = self._payload(rows, cols, mat)
        digest = hashlib.sha256("\n".join(lines).encode()).hexdigest()
        path = self._path(level, weight, label)
        try:
            os.makedirs(os.path.dirname(path), exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path))
            with os.fdopen(fd, "w") as fh:
                fh.write("\n".join(lines))
                fh.write("\nSHA256 %s\n" % digest)
            os.replace(tmp, path)
        except OSError as exc:
            print("warning: cache write failed: %s" % exc, file=sys.stderr)

    def load(self, level, weight, label):
        path = self._path(level, weight, label)
        try:
            with open(path) as fh:
                lines = fh.read().splitlines()
        except OSError:
            return None
        try:
            if not lines or not lines[-1].startswith("SHA256 "):
                raise ValueError("missing checksum")
            digest = lines[-1].split()[1]
            body = lines[:-1]
            if hashlib.sha256("\n".join(body).encode()).hexdigest() != digest:
                raise ValueError("checksum mismatch")
            head = body[0].split()
            if " ".join(head[:2]) != CACHE_FORMAT:
                raise ValueError("version mismatch")
            rows, cols = int(head[2]), int(head[3])
            mat = [[int(x) for x in line.split()] for line in body[1:]]
            if len(mat) != rows or any(len(r) != cols for r in mat):
                raise ValueError("shape mismatch")
            return mat
        except (ValueError, IndexError):
            try:
                os.unlink(path)
            except OSError:
                pass
            return None


def default_cache_dir():
    env = os.environ.get("MGR_CACHE")
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "mgr")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(USAGE_ERROR, "%s: error: %s\n" % (self.prog, message))


def _build_parser():
    parser = _Parser(prog="mgr", description=__doc__)
    parser.add_argument("--format", choices=["json", "tsv"], default="json")
    parser.add_argument("--no-cache", action="store_true")
    parser.add_argument("--cache-dir", default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("char", help="inspect a Dirichlet character")
    p.add_argument("--char", required=True, help="literal n:g^e,...@m or triv:n")

    p = sub.add_parser("subgroup", help="kernel subgroup of an eigenform datum")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--i", type=int, default=0)
    p.add_argument("--char", default=None)

    p = sub.add_parser("genus", help="curve invariants of Gamma_H")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--subgroup", default="full",
                   help="'full', 'triv', or comma-separated residues")

    p = sub.add_parser("msdim", help="modular symbol space dimensions")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--weight", type=int, required=True)

    p = sub.add_parser("hecke", help="an integral Hecke matrix")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--full", action="store_true",
                   help="full space instead of plus-cuspidal")

    p = sub.add_parser("eigensys", help="mod-ell eigensystems of a space")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--primes-up-to", type=int, default=20)
    p.add_argument("--subgroup", default=None,
                   help="comma-separated residues of H")

    for name in ("twist", "realize"):
        p = sub.add_parser(name)
        p.add_argument("--level", type=int, required=True)
        p.add_argument("--weight", type=int, required=True)
        p.add_argument("--ell", type=int, required=True)
        p.add_argument("--a", action="append", default=[],
                       metavar="p=val", help="integer coefficient constraint")
        p.add_argument("--index", type=int, default=None,
                       help="eigensystem index selector")
        p.add_argument("--char", default=None)
        p.add_argument("--truncate-bound", type=int, default=None)
        p.add_argument("--form-file", default=None,
                       help="file of lines 'p a_p'")

    p = sub.add_parser("tables", help="the bundled weight-12 grid")
    p.add_argument("--max-ell", type=int, default=13)
    p.add_argument("--truncate-bound", type=int, default=None)
    return parser


def _selector_from_args(args):
    selector = {}
    ap = {}
    for item in args.a:
        key, _, val = item.partition("=")
        ap[int(key)] = int(val)
    if args.form_file:
        with open(args.form_file) as fh:
            for line in fh:
                parts = line.split()
                if len(parts) == 2:
                    ap[int(parts[0])] = int(parts[1])
    if ap:
        selector["ap"] = ap
    if args.index is not None:
        selector["index"] = args.index
    return selector


def _subgroup_from_text(level, text):
    if text in (None, "full"):
        return full_subgroup(level)
    if text in ("triv", "1"):
        return trivial_subgroup(level)
    return SubgroupH.from_generators(
        level, [int(x) for x in text.split(",")])


def _signed(x, ell):
    x %= ell
    return x - ell if 2 * x > ell else x


def _poly_str(coeffs):
    terms = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        elif i == 1:
            terms.append("x" if c == 1 else "%dx" % c)
        else:
            terms.append("x^%d" % i if c == 1 else "%dx^%d" % (c, i))
    return " + ".join(terms) if terms else "0"


def emit_report(doc, fmt="json", stream=None):
    """Serialize a report document: sorted-key JSON or fixed-column TSV."""
    stream = stream or sys.stdout
    if fmt == "json":
        json.dump(doc, stream, sort_keys=True, indent=2)
        stream.write("\n")
    else:
        rows = doc.get("rows", [doc.get("result", doc)])
        for row in rows:
            if isinstance(row, dict) and "tsv" in row:
                stream.write("\t".join(str(x) for x in row["tsv"]) + "\n")
            else:
                stream.write(json.dumps(row, sort_keys=True) + "\n")


def _run_char(args):
    chi = parse_character(args.char)
    return {
        "literal": character_literal(chi),
        "modulus": chi.modulus,
        "order": chi.order,
        "conductor": conductor(chi),
        "kernel": kernel(chi),
        "even": chi.is_even(),
    }


def _run_subgroup(args):
    eps = parse_character(args.char) if args.char else trivial_character(args.level)
    h = h_from_eigenform(eps, args.weight, args.i, args.ell)
    doc = {
        "level": h.level,
        "order": index_gamma(h),
        "elements": list(h.elements),
        "is_gamma0": h.is_full(),
        "gamma0_criterion": gamma0_criterion(args.ell, args.weight, args.i),
    }
    if eps.is_trivial() and args.weight > 2:
        doc["predicted_order"] = predicted_kernel_order(
            h.level, args.ell, args.weight - 2 - 2 * args.i)
    return doc


def _run_genus(args):
    h = _subgroup_from_text(args.level, args.subgroup)
    inv = curve_invariants(coset_table(h))
    doc = inv.to_dict()
    doc["level"] = args.level
    doc["subgroup_order"] = len(h)
    return doc


def _run_msdim(args, cache):
    space = build_space(args.level, args.weight, cache=cache)
    cusp = space.cuspidal_subspace()
    plus = cusp.star_plus_subspace()
    return {
        "level": args.level,
        "weight": args.weight,
        "full": space.dim,
        "cuspidal": cusp.dim,
        "plus_cuspidal": plus.dim,
        "torsion": list(space.torsion),
    }


def _run_hecke(args, cache):
    if args.full:
        space = build_space(args.level, args.weight, cache=cache)
    else:
        space = plus_cuspidal_space(args.level, args.weight, cache=cache)
    mat = space.hecke_matrix(args.p)
    return {
        "level": args.level,
        "weight": args.weight,
        "p": args.p,
        "dim": space.dim,
        "trace": sum(mat[i][i] for i in range(len(mat))),
        "matrix": mat,
    }


def _run_eigensys(args, cache):
    space = plus_cuspidal_space(args.level, args.weight, cache=cache)
    if args.subgroup:
        space = space.h_invariant_subspace(
            _subgroup_from_text(args.level, args.subgroup))
    primes = list(primes_up_to(args.primes_up_to))
    rspace = reduce_space_mod(space, args.ell, primes)
    systems = decompose(rspace, primes)
    out = []
    for s in systems:
        out.append({
            "field_degree": s.field.r,
            "multiplicity": s.multiplicity,
            "a": {str(p): fq_str(v) for p, v in sorted(s.a.items())},
            "diamond": {str(d): fq_str(v) for d, v in sorted(s.diamond.items())},
            "minpoly_a2": s.minpoly_a(2) if 2 in s.a else None,
            "bad_primes": list(s.bad_primes),
        })
    return {"level": args.level, "weight": args.weight, "ell": args.ell,
            "dim": rspace.dim, "systems": out}


def _resolve_form(args, cache):
    selector = _selector_from_args(args)
    eps = parse_character(args.char) if args.char else None
    bound = sturm_bound(args.level, args.ell, args.weight,
                        min(args.weight, args.ell + 1))
    if args.truncate_bound:
        bound = min(bound, args.truncate_bound)
    return select_input_form(args.level, args.weight, args.ell, selector,
                             eps=eps, bound=bound, cache=cache)


def _run_twist(args, cache):
    form = _resolve_form(args, cache)
    result = find_twist(form, args.ell, truncate=args.truncate_bound,
                        cache=cache)
    return result.to_dict()


def _run_realize(args, cache):
    form = _resolve_form(args, cache)
    report = realize(form, args.ell, truncate=args.truncate_bound,
                     cache=cache)
    return report.to_dict()


def _run_tables(args, cache):
    rows = []
    warnings = []
    for row in TABLE_ROWS:
        if row["ell"] > args.max_ell:
            continue
        eps = parse_character(row["eps"]) if "eps" in row else None
        selector = table_row_selector(row)
        bound = sturm_bound(row["N"], row["ell"], 12, 13)
        if args.truncate_bound:
            bound = min(bound, args.truncate_bound)
        form = select_input_form(row["N"], 12, row["ell"], selector, eps=eps,
                                 bound=bound, cache=cache)
        report = realize(form, row["ell"], truncate=args.truncate_bound,
                         cache=cache)
        ell = row["ell"]
        a2 = report.system.a.get(2)
        digest = "; ".join(
            "a%d=%s" % (p, fq_str(report.system.a[p]))
            for p in sorted(report.system.a)[:2])
        minpoly = report.minpolys.get(2)
        if report.i != row["reference_i"]:
            warnings.append(
                "N=%d ell=%d: computed twist exponent %d differs from the "
                "tabulated value %d" % (row["N"], ell, report.i,
                                        row["reference_i"]))
        rows.append({
            "N": row["N"],
            "ell": ell,
            "lambda_residue_degree": form.system.field.r,
            "i": report.i,
            "f2": digest,
            "minpoly_a2": _poly_str(minpoly) if minpoly else None,
            "d1": report.d1,
            "dH": report.dh,
            "tsv": [ell, "deg%d" % form.system.field.r, report.i, digest,
                    _poly_str(minpoly) if minpoly else "-",
                    report.d1, report.dh],
        })
    doc = {"rows": rows}
    if warnings:
        doc["warnings"] = warnings
    return doc


def run_command(argv):
    """Run one CLI invocation; returns (exit code, document)."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    cache = None
    if not args.no_cache:
        cache = MatrixCache(args.cache_dir or default_cache_dir())
    handlers = {
        "char": lambda: _run_char(args),
        "subgroup": lambda: _run_subgroup(args),
        "genus": lambda: _run_genus(args),
        "msdim": lambda: _run_msdim(args, cache),
        "hecke": lambda: _run_hecke(args, cache),
        "eigensys": lambda: _run_eigensys(args, cache),
        "twist": lambda: _run_twist(args, cache),
        "realize": lambda: _run_realize(args, cache),
        "tables": lambda: _run_tables(args, cache),
    }
    try:
        result = handlers[args.command]()
    except (PipelineError, ValueError) as exc:
        return DOMAIN_ERROR, {"error": str(exc), "command": args.command}
    doc = {"command": args.command, "inputs": {
        k: v for k, v in sorted(vars(args).items())
        if k not in ("command",) and v is not None and v != []}}
    doc.update(result if isinstance(result, dict) else {"result": result})
    return 0, doc


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    code, doc = run_command(argv)
    fmt = "json"
    if "--format" in argv:
        fmt = argv[argv.index("--format") + 1]
    elif any(a.startswith("--format=") for a in argv):
        fmt = next(a.split("=", 1)[1] for a in argv if a.startswith("--format="))
    emit_report(doc, fmt)
    return code


if __name__ == "__main__":
    sys.exit(main())
