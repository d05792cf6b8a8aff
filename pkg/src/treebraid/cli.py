"""Command-line interface: ``treebraid <command> --tree <path|tmin> --n <int> ...``

Exit codes: 0 success, 2 bad input, 3 internal consistency failure,
4 resource bound exceeded.
"""

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from .cells import CellError, format_cell, parse_cell, validate_cell
from .cupring import ring_table
from .morse import (
    CellStatus,
    MorseBoundaryNonzero,
    MorseComplex,
    StabilizationGuardExceeded,
    classify,
    match_down,
    match_up,
)
from .oracle import ResourceBoundExceeded, betti_mod2, chain_complex, integral_homology
from .raag import non_flag_witness, raag_status
from .tree import TreeError, canonical_t_min, from_document, is_sufficiently_subdivided, subdivide_for

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INCONSISTENT = 3
EXIT_BOUND = 4

FORMATS = {
    "betti": ("text", "json", "csv"),
    "classify": ("text", "json", "csv"),
    "cup-table": ("text", "json", "csv", "dot"),
    "raag": ("text", "json"),
    "oracle": ("text", "json", "csv"),
}


class InputError(Exception):
    pass


class Inconsistent(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    tree_source: str
    n: int
    fmt: str = "text"
    oracle: bool = False
    dim: int = None
    max_cells: int = 200_000
    subdivide: bool = False

    def __post_init__(self):
        if self.n is not None and self.n < 1:
            raise InputError(f"--n must be at least 1, got {self.n}")
        if self.fmt not in FORMATS[self.command]:
            raise InputError(f"format {self.fmt!r} is not available for {self.command}")


def load_tree(source):
    if source == "tmin":
        return canonical_t_min()
    try:
        with open(source) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read tree file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"tree file is not valid JSON: {exc}") from None
    return from_document(doc)


def prepared_tree(cfg):
    tree = load_tree(cfg.tree_source)
    if not is_sufficiently_subdivided(tree, cfg.n):
        if not cfg.subdivide:
            raise InputError(f"tree is not sufficiently subdivided for {cfg.n} strands (try --subdivide)")
        tree = subdivide_for(tree, cfg.n)
    return tree


# -- commands: each returns a JSON-ready document --------------------------


def cmd_betti(cfg):
    tree = prepared_tree(cfg)
    space = MorseComplex(tree, cfg.n)
    doc = {"n": cfg.n, "vertices": tree.vertex_count, "betti": space.betti_numbers(check=True)}
    if cfg.dim is not None:
        doc["critical"] = [format_cell(c) for c in space.critical_cells(cfg.dim)]
    if cfg.oracle:
        doc["oracle"] = betti_mod2(tree, cfg.n, cfg.max_cells)
        doc["agree"] = doc["oracle"] == doc["betti"]
        if not doc["agree"]:
            raise Inconsistent(doc)
    return doc


def cmd_classify(cfg, text):
    tree = load_tree(cfg.tree_source)
    c = parse_cell(text)
    n = cfg.n if cfg.n is not None else c.size
    validate_cell(tree, c, n)
    status = classify(tree, c)
    doc = {"cell": format_cell(c), "status": str(status)}
    if status is CellStatus.REDUNDANT:
        doc["partner"] = format_cell(match_up(tree, c))
    elif status is CellStatus.COLLAPSIBLE:
        doc["partner"] = format_cell(match_down(tree, c))
    return doc


def cmd_cup_table(cfg):
    tree = prepared_tree(cfg)
    return ring_table(MorseComplex(tree, cfg.n))


def cmd_raag(cfg, witness=False):
    tree = load_tree(cfg.tree_source)
    doc = raag_status(tree, cfg.n).to_document()
    if witness:
        table = ring_table(MorseComplex(prepared_tree(cfg), cfg.n))
        found = non_flag_witness(table)
        doc["witness"] = None
        if found:
            cells, evidence = found
            doc["witness"] = {
                "diagnostic": True,
                "triangle": [format_cell(c) for c in cells],
                "pair_products": evidence["pair_products"],
            }
    return doc


def cmd_oracle_homology(cfg, torsion=False):
    tree = prepared_tree(cfg)
    cx = chain_complex(tree, cfg.n, cfg.max_cells)
    doc = {"n": cfg.n, "betti_mod2": betti_mod2(tree, cfg.n, complex_=cx)}
    if torsion:
        ranks, tors = integral_homology(tree, cfg.n, complex_=cx)
        doc["betti_integral"] = ranks
        doc["torsion"] = tors
    return doc


# -- rendering -----------------------------------------------------------------


def _csv(rows):
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def render(command, doc, fmt):
    if command == "cup-table":
        table = doc
        if fmt == "dot":
            return table.to_dot()
        doc = table.to_document()
        if fmt == "csv":
            return _csv([("i", "j", "product")] + [tuple(t) for t in doc["products"]])
        if fmt == "text":
            lines = [f"H^1 basis: {len(doc['basis1'])}  H^2 basis: {len(doc['basis2'])}"]
            for i, j, p in table.product_graph():
                prod = " + ".join(format_cell(table.basis2[b]) for b in p)
                lines.append(f"{format_cell(table.basis1[i])} . {format_cell(table.basis1[j])} = {prod}")
            lines.append(f"pairing rank {doc['pairing_rank']}, radical dimension {doc['radical_dimension']}")
            return "\n".join(lines) + "\n"
    if fmt == "json":
        return json.dumps(doc, sort_keys=True) + "\n"
    if fmt == "csv":
        if command in ("betti", "oracle"):
            key = "betti" if command == "betti" else "betti_mod2"
            head = ["dim", key] + (["oracle"] if "oracle" in doc else [])
            rows = [head]
            for i, b in enumerate(doc[key]):
                rows.append([i, b] + ([doc["oracle"][i]] if "oracle" in doc else []))
            return _csv(rows)
        return _csv([("cell", "status", "partner"), (doc["cell"], doc["status"], doc.get("partner", ""))])
    # text
    if command == "betti":
        out = "betti " + " ".join(map(str, doc["betti"])) + "\n"
        if "oracle" in doc:
            out += "oracle " + " ".join(map(str, doc["oracle"])) + f"  agree={doc['agree']}\n"
        for c in doc.get("critical", []):
            out += c + "\n"
        return out
    if command == "classify":
        return doc["status"] + (f" {doc['partner']}" if "partner" in doc else "") + "\n"
    if command == "raag":
        out = f"{doc['verdict']} ({doc['reason']})\n"
        w = doc.get("witness")
        if w:
            out += "diagnostic non-flag triangle: " + ", ".join(w["triangle"]) + "\n"
        return out
    out = "betti_mod2 " + " ".join(map(str, doc["betti_mod2"])) + "\n"
    if "torsion" in doc:
        tors = [t for ts in doc["torsion"] for t in ts]
        out += "torsion " + (" ".join(map(str, tors)) if tors else "none") + "\n"
    return out


# -- entry point ---------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tree", default="tmin", help="tree document (JSON) or the builtin name 'tmin'")
    common.add_argument("--n", type=int, default=None, help="number of strands")
    common.add_argument("--format", dest="fmt", default="text", choices=["text", "json", "csv", "dot"])
    common.add_argument("--subdivide", action="store_true", help="subdivide the tree as needed instead of failing")

    p = argparse.ArgumentParser(prog="treebraid", description="Homology and cohomology of tree braid groups.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("betti", parents=[common], help="Betti numbers from critical cells")
    b.add_argument("--dim", type=int, help="also list the critical cells of this dimension")
    b.add_argument("--oracle", action="store_true", help="cross-check against brute-force mod-2 homology")
    b.add_argument("--max-cells", type=int, default=200_000)

    c = sub.add_parser("classify", parents=[common], help="Morse type of one cell")
    c.add_argument("cell", help="cell text, e.g. '{e16, e19, v10, v13}'")

    sub.add_parser("cup-table", parents=[common], help="cup products of degree-1 classes")

    r = sub.add_parser("raag", parents=[common], help="right-angled Artin group verdict")
    r.add_argument("--witness", action="store_true", help="search for a non-flag triangle (diagnostic)")

    o = sub.add_parser("oracle", parents=[common], help="brute-force homology by matrix reduction")
    o.add_argument("--max-cells", type=int, default=200_000)
    o.add_argument("--torsion", action="store_true", help="also run the integral reduction")
    return p


def run(argv, out=sys.stdout, err=sys.stderr):
    args = build_parser().parse_args(argv)
    try:
        if args.n is None and args.command != "classify":
            raise InputError("--n is required")
        cfg = RunConfig(
            command=args.command,
            tree_source=args.tree,
            n=args.n,
            fmt=args.fmt,
            oracle=getattr(args, "oracle", False),
            dim=getattr(args, "dim", None),
            max_cells=getattr(args, "max_cells", 200_000),
            subdivide=args.subdivide,
        )
        if args.command == "betti":
            doc = cmd_betti(cfg)
        elif args.command == "classify":
            doc = cmd_classify(cfg, args.cell)
        elif args.command == "cup-table":
            doc = cmd_cup_table(cfg)
        elif args.command == "raag":
            doc = cmd_raag(cfg, witness=args.witness)
        else:
            doc = cmd_oracle_homology(cfg, torsion=args.torsion)
    except (InputError, TreeError, CellError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    except Inconsistent as exc:
        print(f"error: oracle disagrees with critical counts: {exc}", file=err)
        return EXIT_INCONSISTENT
    except (MorseBoundaryNonzero, StabilizationGuardExceeded) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INCONSISTENT
    except ResourceBoundExceeded as exc:
        print(f"error: {exc}", file=err)
        return EXIT_BOUND
    out.write(render(args.command, doc, cfg.fmt))
    return EXIT_OK


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
