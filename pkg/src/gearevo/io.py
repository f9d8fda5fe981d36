"""Archive record streams, run directories and config files.

An archive file holds one JSON object per line, one line per generation.
Every record carries a ``schema`` field; readers refuse versions they do not
know.
"""
from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import yaml

from gearevo.direct import DirectGenome
from gearevo.evolution import ConfigError, EvolutionConfig, RunReport
from gearevo.geometry import mechanism_from_record, mechanism_record
from gearevo.novelty import Archive, ArchiveEntry
from gearevo.rnn import ActivationTrace, RnnGenome

SCHEMA_VERSION = 1
ARCHIVE_NAME = "archive.jsonl"
REPORT_NAME = "report.json"
CONFIG_NAME = "config.json"


class SchemaVersionError(ValueError):
    pass


class ArchiveFormatError(ValueError):
    pass


def entry_to_record(entry: ArchiveEntry) -> dict:
    if isinstance(entry.genome, RnnGenome):
        genome = {"kind": "rnn", "params": entry.genome.flat()}
    elif isinstance(entry.genome, DirectGenome):
        genome = {"kind": "direct", "genes": entry.genome.to_record()}
    else:
        raise TypeError(f"unsupported genome type {type(entry.genome).__name__}")
    return {
        "schema": SCHEMA_VERSION,
        "generation": entry.generation,
        "encoding": entry.encoding,
        "genome": genome,
        "mechanism": mechanism_record(entry.mechanism),
        "novelty_vector": list(entry.novelty_vector),
        "novelty_score": entry.novelty_score,
        "fitness": entry.fitness,
        "distance_in": entry.distance_in,
        "trials_in": None if entry.trials_in is None else list(entry.trials_in),
        "score_source": entry.score_source,
        "trace": None if entry.trace is None else entry.trace.to_record(),
    }


def entry_from_record(rec: dict) -> ArchiveEntry:
    version = rec.get("schema")
    if version != SCHEMA_VERSION:
        raise SchemaVersionError(
            f"archive record schema {version!r} does not match supported version "
            f"{SCHEMA_VERSION}")
    g = rec["genome"]
    if g["kind"] == "rnn":
        genome = RnnGenome(g["params"])
    elif g["kind"] == "direct":
        genome = DirectGenome.from_record(g["genes"])
    else:
        raise ArchiveFormatError(f"unknown genome kind {g['kind']!r}")
    return ArchiveEntry(
        generation=int(rec["generation"]),
        encoding=rec["encoding"],
        genome=genome,
        mechanism=mechanism_from_record(rec["mechanism"]),
        novelty_vector=tuple(float(v) for v in rec["novelty_vector"]),
        novelty_score=float(rec["novelty_score"]),
        fitness=float(rec["fitness"]),
        distance_in=rec.get("distance_in"),
        trials_in=None if rec.get("trials_in") is None else tuple(rec["trials_in"]),
        score_source=rec.get("score_source"),
        trace=None if rec.get("trace") is None else ActivationTrace.from_record(rec["trace"]),
    )


def dumps_record(rec: dict) -> str:
    return json.dumps(rec, separators=(",", ":"), allow_nan=False)


def _atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_archive(path, archive: Archive) -> None:
    """Write the whole archive; the file is replaced atomically."""
    text = "".join(dumps_record(entry_to_record(e)) + "\n" for e in archive)
    _atomic_write(Path(path), text)


def append_entry(path, entry: ArchiveEntry) -> None:
    """Append one record as a single complete line."""
    with open(path, "a", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_record(entry_to_record(entry)) + "\n")
        fh.flush()


def read_archive(path) -> Archive:
    entries = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ArchiveFormatError(f"{path}:{lineno}: {exc}") from None
            try:
                entries.append(entry_from_record(rec))
            except SchemaVersionError as exc:
                raise SchemaVersionError(f"{path}:{lineno}: {exc}") from None
    return Archive(entries)


def write_json(path, data) -> None:
    _atomic_write(Path(path), json.dumps(data, indent=2, sort_keys=True) + "\n")


def load_config(path) -> EvolutionConfig:
    """Load a YAML (or JSON) config file; missing keys take their defaults."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from None
    if data is not None and not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a mapping")
    return EvolutionConfig.from_dict(data or {})


def write_run(out_dir, archive: Archive, report: RunReport) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_json(out / CONFIG_NAME, report.config)
    write_json(out / REPORT_NAME, report.to_dict())
    write_archive(out / ARCHIVE_NAME, archive)
    return out


def locate_run(path):
    """Resolve a run directory or archive file to ``(archive_path, config_dict | None)``."""
    p = Path(path)
    archive_path = p / ARCHIVE_NAME if p.is_dir() else p
    if not archive_path.exists():
        raise FileNotFoundError(f"no archive at {archive_path}")
    cfg_path = archive_path.parent / CONFIG_NAME
    config = None
    if cfg_path.exists():
        with open(cfg_path, encoding="utf-8") as fh:
            config = json.load(fh)
    return archive_path, config
