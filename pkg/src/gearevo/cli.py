"""Command line entry point: ``gearevo {evolve,render,score,compare}``."""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

import yaml

from gearevo import analysis, io, surrogate
from gearevo.evolution import ENCODINGS, ConfigError, EvolutionConfig, evolve
from gearevo.render import render_svg

log = logging.getLogger("gearevo")


class CliError(Exception):
    pass


def cmd_evolve(args) -> int:
    config = io.load_config(args.config) if args.config else EvolutionConfig()
    overrides = {"encoding": args.encoding}
    if args.seed is not None:
        overrides["seed"] = args.seed
    config = replace(config, **overrides).validate()
    log.info("evolving %s encoding, seed %d, %d x %d", config.encoding, config.seed,
             config.pop_size, config.generations)
    archive, report = evolve(config)
    out = io.write_run(args.out, archive, report)
    log.info("wrote %d archive records to %s", len(archive), out / io.ARCHIVE_NAME)
    return 0


def _geometry_for(archive_path: Path, args) -> tuple:
    box, axle = None, None
    _, cfg = io.locate_run(archive_path)
    if cfg:
        box = cfg.get("geometry", {}).get("box_length")
        axle = cfg.get("geometry", {}).get("axle_radius")
    box = args.box_length if args.box_length is not None else box
    axle = args.axle_radius if args.axle_radius is not None else axle
    return (150.0 if box is None else float(box)), (2.5 if axle is None else float(axle))


def cmd_render(args) -> int:
    archive = io.read_archive(args.archive)
    matches = [e for e in archive if e.generation == args.entry]
    if not matches:
        raise CliError(f"archive {args.archive} has no entry {args.entry}")
    entry = matches[0]
    box, axle = _geometry_for(Path(args.archive), args)
    svg = render_svg(entry.mechanism, box, axle,
                     title=f"{entry.encoding} generation {entry.generation}")
    Path(args.out).write_text(svg, encoding="utf-8")
    return 0


def cmd_score(args) -> int:
    src = Path(args.archive)
    archive = io.read_archive(src)
    if args.import_path:
        rows = surrogate.read_measurements(Path(args.import_path).read_text(encoding="utf-8"))
        archive = surrogate.import_scores(archive, rows)
    else:
        rig = surrogate.RigModel()
        if args.rig:
            with open(args.rig, encoding="utf-8") as fh:
                rig = surrogate.RigModel.from_dict(yaml.safe_load(fh) or {})
        archive = surrogate.attach_scores(archive, rig)
    out = Path(args.out) if args.out else src.with_name(src.stem + ".scored.jsonl")
    if out.resolve() == src.resolve():
        raise CliError("refusing to overwrite the source archive; pass a different --out")
    io.write_archive(out, archive)
    scored = sum(e.distance_in is not None for e in archive)
    log.info("annotated %d/%d entries -> %s", scored, len(archive), out)
    return 0


def cmd_compare(args) -> int:
    runs = []
    for path in args.runs:
        archive_path, cfg = io.locate_run(path)
        seed = None if cfg is None else cfg.get("seed")
        runs.append((str(path), io.read_archive(archive_path), seed))
    report = analysis.compare(runs)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.txt").write_text(report.to_text(), encoding="utf-8")
    io.write_json(out / "report.json", report.to_dict())
    lines = ["run,index,avg_in,min_in,max_in"]
    for name, archive, _ in runs:
        for idx, avg, lo, hi in analysis.score_table(archive):
            lines.append(f"{name},{idx},{avg!r},{lo!r},{hi!r}")
    (out / "scores.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    sys.stdout.write(report.to_text())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gearevo", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="run novelty search and write a run directory")
    p.add_argument("--encoding", choices=ENCODINGS, required=True)
    p.add_argument("--config", help="YAML/JSON config file")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("render", help="draw one archived mechanism as SVG")
    p.add_argument("--archive", required=True)
    p.add_argument("--entry", type=int, required=True, help="generation index")
    p.add_argument("--out", required=True)
    p.add_argument("--box-length", type=float)
    p.add_argument("--axle-radius", type=float)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("score", help="annotate an archive copy with distance scores")
    p.add_argument("--archive", required=True)
    p.add_argument("--rig", help="YAML/JSON rig model overrides")
    p.add_argument("--import", dest="import_path",
                   help="CSV of generation,trial1_in,trial2_in,trial3_in")
    p.add_argument("--out", help="output archive (default: <archive>.scored.jsonl)")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("compare", help="compare run archives")
    p.add_argument("--runs", nargs="+", required=True, help="run directories or archive files")
    p.add_argument("--out", required=True, help="report directory")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (CliError, ConfigError, io.SchemaVersionError, io.ArchiveFormatError,
            surrogate.ScoreImportError, analysis.AnalysisError, FileNotFoundError,
            ValueError) as exc:
        print(f"gearevo {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
