"""Command-line interface: sequences, balls, colorings, walls, balance,
hyperbolic rendering, and tiling-space comparisons, all as JSON reports.

Exit codes: 0 success, 1 a verification the command performs failed,
2 invalid input or usage.  Reports are deterministic: stable field order,
no timestamps, rationals serialized as "p/q" strings.
"""

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .colorings import aperiodicity_report, norm_coloring
from .coxeter import CoxeterSystem, enumerate_ball, load_system
from .errors import CoxtileError, ValidationError
from .pipeline import (
    Resolution,
    all_plus_resolution,
    alternating_resolution,
    build_walls,
    render_bundle,
)
from .sequences import square_free_prefix, thue_morse_prefix, verify_power_free
from .tiles import classify_balance
from .tiling_space import (
    ChamberTiling,
    patch_as_dict,
    patch_distance,
    restrict_patch,
    translate_compare,
)
from .walls import alternating_palette, build_wall_tree, color_walls, peel_levels

REPORT_VERSION = 1


def _jsonable(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


def emit_report(results, command: str = "") -> str:
    doc = {"version": REPORT_VERSION, "command": command, "results": _jsonable(results)}
    return json.dumps(doc, indent=None, separators=(",", ":")) + "\n"


def parse_report(text: str) -> dict:
    doc = json.loads(text)
    if "version" not in doc or "results" not in doc:
        raise ValidationError("not a coxtile report")
    return doc


def _word_str(system, word) -> str:
    return ".".join(system.generators[s] for s in word) if word else "e"


def _parse_word(system, text) -> tuple:
    if text in ("e", ""):
        return ()
    names = {name: i for i, name in enumerate(system.generators)}
    out = []
    for part in text.replace(",", ".").split("."):
        if part in names:
            out.append(names[part])
        elif part.isdigit() and int(part) < system.rank:
            out.append(int(part))
        else:
            raise ValidationError(f"unknown generator {part!r}")
    return tuple(out)


def _system_from_arg(value: str) -> CoxeterSystem:
    aliases = {
        "pentagon": lambda: CoxeterSystem.right_angled_polygon(5),
        "hexagon": lambda: CoxeterSystem.right_angled_polygon(6),
        "infinite-dihedral": CoxeterSystem.infinite_dihedral,
    }
    if value in aliases:
        return aliases[value]()
    if value.startswith("polygon:"):
        return CoxeterSystem.right_angled_polygon(int(value.split(":")[1]))
    if value.startswith("dihedral:"):
        return CoxeterSystem.dihedral(int(value.split(":")[1]))
    return load_system(value)


def _palette_from_arg(system, value: str) -> dict:
    if value == "alternating":
        return alternating_palette(system)
    if value == "distinct":
        return {s: system.generators[s] for s in range(system.rank)}
    raise ValidationError(f"unknown palette {value!r}")


# -- subcommands -----------------------------------------------------------------


def _cmd_seq(args, out) -> int:
    kind = args.kind
    prefix = thue_morse_prefix(args.n) if kind == "morse_thue" else square_free_prefix(args.n)
    out.write(json.dumps({"kind": kind, "n": args.n, "prefix": prefix}) + "\n")
    status = 0
    if args.power:
        scan = args.scan or args.n
        witness = verify_power_free(prefix, args.power, scan)
        record = {"check": "power_free", "power": args.power, "scan": scan}
        if witness is None:
            record["verdict"] = "free"
        else:
            record["verdict"] = "witness"
            record["position"] = witness.position
            record["word"] = list(witness.word)
            status = 1
        out.write(json.dumps(record) + "\n")
    return status


def _cmd_ball(args, out) -> int:
    system = _system_from_arg(args.system)
    ball = enumerate_ball(system, args.radius)
    results = {
        "system": system.to_dict(),
        "radius": args.radius,
        "size": len(ball),
        "sphere_sizes": ball.sphere_sizes,
        "normal_forms": [_word_str(system, w) for w in ball.words] if args.words else None,
    }
    out.write(emit_report(results, "ball"))
    return 0


def _cmd_color(args, out) -> int:
    system = _system_from_arg(args.system)
    ball = enumerate_ball(system, args.radius)
    coloring = norm_coloring(ball)
    report = aperiodicity_report(ball, coloring, args.g_range, args.h_range, args.window)
    records = []
    for (g, h), x in sorted(report.records.items()):
        records.append(
            {
                "g": _word_str(system, g),
                "h": _word_str(system, h),
                "witness_x": None if x is None else _word_str(system, x),
                "radius_used": None if x is None else ball.norm(ball.mul(ball.inv(h), x)),
            }
        )
    results = {
        "coloring": "norm",
        "palette_size": len(coloring.palette),
        "g_range": args.g_range,
        "h_range": args.h_range,
        "window": args.window,
        "all_witnessed": report.all_witnessed,
        "pairs": records,
    }
    out.write(emit_report(results, "color"))
    return 0 if report.all_witnessed else 1


def _cmd_walls(args, out) -> int:
    system = _system_from_arg(args.system)
    ball, wallset = build_walls(system, args.radius)
    palette = _palette_from_arg(system, args.palette)
    classes = color_walls(wallset, palette)
    levels = {}
    parents = {}
    if classes.disjoint:
        for color, wids in classes.by_color.items():
            levels.update(peel_levels(wallset, wids))
            tree = build_wall_tree(wallset, wids)
            parents.update(tree.parent)
    walls = []
    for w in wallset.walls:
        walls.append(
            {
                "canonical_word": _word_str(system, wallset.canonical_word(w.wid)),
                "color": str(classes.color_of[w.wid]),
                "level": (levels.get(w.wid) if w.determinate else "indeterminate"),
                "tree_parent": (
                    _word_str(system, wallset.canonical_word(parents[w.wid]))
                    if w.wid in parents and w.determinate
                    else None
                ),
            }
        )
    results = {
        "radius": args.radius,
        "palette": args.palette,
        "wall_count": len(wallset),
        "classes_disjoint": classes.disjoint,
        "violations": [
            {"chamber": _word_str(system, ball.words[cid]), "walls": [w1, w2]}
            for cid, w1, w2 in classes.violations
        ],
        "walls": walls,
    }
    out.write(emit_report(results, "walls"))
    return 0 if classes.disjoint else 1


def _cmd_balance(args, out) -> int:
    system = _system_from_arg(args.system)
    ball, wallset = build_walls(system, args.radius)
    palette = _palette_from_arg(system, args.palette)
    make = alternating_resolution if args.orientation == "alternating" else all_plus_resolution
    res: Resolution = make(wallset, palette, refine=args.refine)
    verdict = classify_balance(res.alphabet)
    tiles = [[[str(color), sign] for color, sign in t] for t in res.alphabet.tiles]
    witness = None
    if verdict.witness is not None:
        witness = {str(c): v for c, v in sorted(verdict.witness.weights.items(), key=lambda kv: str(kv[0]))}
    results = {
        "orientation": args.orientation,
        "radius": args.radius,
        "refined": args.refine,
        "alphabet_size": len(res.alphabet),
        "tiles": tiles,
        "verdict": verdict.verdict,
        "witness": witness,
        "tile_sums": verdict.tile_sums,
    }
    out.write(emit_report(results, "balance"))
    return 0


def _cmd_render(args, out) -> int:
    from .hyperbolic import render_svg

    bundle = render_bundle(
        args.n,
        args.radius,
        refine=not args.no_refine,
        deform=not args.no_deform,
        epsilon_factor=args.epsilon,
    )
    svg = render_svg(bundle.tiles, bundle.face_data, stroke_width=args.stroke_width)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(svg)
        sys.stderr.write(f"wrote {args.out}\n")
    else:
        out.write(svg)
    return 0


def _cmd_space(args, out) -> int:
    from .tiles import build_alphabet, rebased_alternating

    system = CoxeterSystem.right_angled_polygon(2 * args.n)
    ball, wallset = build_walls(system, args.radius)
    res = alternating_resolution(wallset, alternating_palette(system), refine=not args.no_refine)
    tiling = ChamberTiling.from_alphabet(ball, res.alphabet)
    gs = (
        [_parse_word(system, args.g)]
        if args.g
        else [w for w in ball.members() if 0 < ball.norm(w) <= 2]
    )
    comparisons = []
    for g in gs:
        v = translate_compare(tiling, g, args.depth)
        comparisons.append(
            {
                "g": _word_str(system, g),
                "verdict": "fixed" if v.fixed else "differs",
                "first_depth": v.first_depth,
            }
        )
    distances = []
    for g in gs:
        if ball.norm(g) > 1:
            continue
        ori = rebased_alternating(wallset, res.class_wids, ball.id_of(g))
        alpha = build_alphabet(wallset, res.wall_colors, ori)
        other = ChamberTiling.from_alphabet(ball, alpha)
        d = patch_distance(
            restrict_patch(tiling, args.depth), restrict_patch(other, args.depth)
        )
        distances.append({"base": _word_str(system, g), "distance": d})
    results = {
        "n": args.n,
        "radius": args.radius,
        "depth": args.depth,
        "base_patch": patch_as_dict(restrict_patch(tiling, args.depth), system),
        "translate_comparisons": comparisons,
        "rebased_patch_distances": distances,
    }
    out.write(emit_report(results, "space"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coxtile",
        description="aperiodic colorings and balanced tilings of Coxeter chamber complexes",
    )
    parser.add_argument("--version", action="version", version=f"coxtile {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("seq", help="sequence prefixes and power-freeness verdicts")
    p.add_argument("--kind", choices=["morse_thue", "ternary"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--power", type=int, choices=[2, 3])
    p.add_argument("--scan", type=int)

    p = sub.add_parser("ball", help="ball enumeration statistics")
    p.add_argument("--system", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--words", action="store_true", help="include normal forms")

    p = sub.add_parser("color", help="norm coloring and aperiodicity report")
    p.add_argument("--system", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--g-range", type=int, default=1)
    p.add_argument("--h-range", type=int, default=1)
    p.add_argument("--window", type=int, default=2)

    p = sub.add_parser("walls", help="wall classes, levels and trees")
    p.add_argument("--system", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--palette", default="distinct")

    p = sub.add_parser("balance", help="tile alphabet and balance verdict")
    p.add_argument("--system", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--orientation", choices=["alternating", "all-plus"], default="alternating")
    p.add_argument("--palette", default="distinct")
    p.add_argument("--refine", action="store_true", help="refine classes by tree colors")

    p = sub.add_parser("render", help="SVG of the deformed hyperbolic tiling")
    p.add_argument("--n", type=int, required=True, help="half the polygon side count")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--no-deform", action="store_true")
    p.add_argument("--no-refine", action="store_true")
    p.add_argument("--stroke-width", type=float, default=0.004)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")

    p = sub.add_parser("space", help="patch distances and translate comparisons")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--g", help="compare one translate (word like s0.s1)")
    p.add_argument("--no-refine", action="store_true")

    return parser


_COMMANDS = {
    "seq": _cmd_seq,
    "ball": _cmd_ball,
    "color": _cmd_color,
    "walls": _cmd_walls,
    "balance": _cmd_balance,
    "render": _cmd_render,
    "space": _cmd_space,
}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args, out)
    except CoxtileError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
