"""Command-line interface.

Machine output goes to stdout (JSON, or CSV for ``attract``); telemetry and
errors go to stderr.  Exit codes: 0 success, 1 domain error (with an error
JSON object on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Optional

from .convergence import CapExceededError, check_sequence, classify
from .embedding import DecodeDepthError, NotOnAttractorError, decode, embed
from .ifs import ResourceCapError, iterate_with_telemetry, project, random_simplex_points
from .lp_geometry import PointSet, SparsePoint, dist_p, parse_p
from .rational import format_rational
from .symbolic import Alphabet, AlphabetError, InfiniteWord, equivalent

FINITE_SUBFAMILY_NOTE = (
    "The alphabet may stand for an infinite set, but every run iterates only "
    "the finite family of maps named on the command line; the contribution of "
    "letters left out is not bounded."
)


class UsageError(Exception):
    pass


class DomainError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    alphabet: Optional[str] = None
    p: str = "2"
    format: Optional[str] = None
    max_points: int = 10**6
    max_depth: int = 64
    m_max: int = 16
    seed: int = 0

    @classmethod
    def load(cls, path: Optional[str]) -> "RunConfig":
        cfg = cls()
        for name, env in (("max_points", "LIPSCOMB_MAX_POINTS"), ("max_depth", "LIPSCOMB_MAX_DEPTH"), ("m_max", "LIPSCOMB_M_MAX")):
            if env in os.environ:
                setattr(cfg, name, _positive(os.environ[env], env))
        if path is None:
            return cfg
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise UsageError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        for key, value in data.items():
            setattr(cfg, key, value)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        for name in ("max_points", "max_depth", "m_max"):
            setattr(self, name, _positive(getattr(self, name), name))
        if not isinstance(self.seed, int):
            raise UsageError("seed must be an integer")
        if self.format not in (None, "json", "csv"):
            raise UsageError("format must be json or csv")
        try:
            parse_p(str(self.p))
        except (ValueError, TypeError) as exc:
            raise UsageError(f"bad p: {exc}") from exc


def _positive(value, name) -> int:
    try:
        n = int(value)
    except (TypeError, ValueError):
        raise UsageError(f"{name} must be a positive integer") from None
    if n < 1 or (isinstance(value, float) and not value.is_integer()):
        raise UsageError(f"{name} must be a positive integer")
    return n


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise DomainError("malformed_json", f"{path}: {exc}") from exc
    except OSError as exc:
        raise DomainError("io_error", str(exc)) from exc


def _letters_in(obj) -> set:
    """Letters mentioned by word or point JSON, used to infer a default alphabet."""
    found = set()
    if isinstance(obj, dict):
        if "coords" in obj and isinstance(obj["coords"], dict):
            found.update(obj["coords"])
        for key in ("prefix", "tail"):
            if isinstance(obj.get(key), list):
                found.update(x for x in obj[key] if isinstance(x, str))
        for key in ("limit", "sequence"):
            if key in obj:
                found |= _letters_in(obj[key])
    elif isinstance(obj, list):
        for item in obj:
            found |= _letters_in(item)
    return found


def _alphabet(cfg: RunConfig, *payloads, extra=()) -> Alphabet:
    if cfg.alphabet:
        data = _read_json(cfg.alphabet)
        try:
            return Alphabet.from_json(data)
        except AlphabetError as exc:
            raise DomainError("alphabet_violation", str(exc)) from exc
    letters = set(extra)
    for obj in payloads:
        letters |= _letters_in(obj)
    letters.discard("z")
    if not letters:
        letters = {"a"}
    return Alphabet(("z",) + tuple(sorted(letters)), "z")


def _word(alphabet: Alphabet, obj) -> InfiniteWord:
    try:
        return InfiniteWord.from_json(alphabet, obj)
    except AlphabetError as exc:
        raise DomainError("alphabet_violation", str(exc)) from exc
    except (ValueError, TypeError) as exc:
        raise DomainError("malformed_word", str(exc)) from exc


def _point(alphabet: Alphabet, obj) -> SparsePoint:
    try:
        return SparsePoint.from_json(alphabet, obj)
    except AlphabetError as exc:
        raise DomainError("alphabet_violation", str(exc)) from exc
    except (ValueError, TypeError) as exc:
        raise DomainError("malformed_point", str(exc)) from exc


def _p(cfg: RunConfig, override: Optional[str]):
    try:
        return parse_p(override if override is not None else str(cfg.p))
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad p: {exc}") from exc


def _render_distance(d) -> dict:
    if isinstance(d, Fraction):
        return {"distance": format_rational(d), "exact": True, "decimal": repr(float(d))}
    return {"distance": repr(float(d)), "exact": False, "decimal": repr(float(d))}


def _emit(obj, out) -> None:
    out.write(json.dumps(obj) + "\n")


def cmd_embed(args, cfg, out, err):
    data = _read_json(args.word)
    alphabet = _alphabet(cfg, data)
    _emit(embed(_word(alphabet, data)).to_json(), out)


def cmd_project(args, cfg, out, err):
    data = _read_json(args.word)
    alphabet = _alphabet(cfg, data)
    _emit(project(_word(alphabet, data)).to_json(), out)


def cmd_classify(args, cfg, out, err):
    data = _read_json(args.word)
    alphabet = _alphabet(cfg, data)
    _emit(classify(_word(alphabet, data)).to_json(), out)


def cmd_decode(args, cfg, out, err):
    data = _read_json(args.point)
    alphabet = _alphabet(cfg, data)
    depth = args.max_depth if args.max_depth is not None else cfg.max_depth
    if depth < 1:
        raise UsageError("--max-depth must be positive")
    if depth > cfg.max_depth:
        raise DomainError("cap_exceeded", f"max depth {depth} over cap {cfg.max_depth}")
    try:
        result = decode(_point(alphabet, data), depth)
    except NotOnAttractorError as exc:
        raise DomainError("not_on_attractor", str(exc)) from exc
    except DecodeDepthError as exc:
        raise DomainError("depth_exceeded", str(exc)) from exc
    _emit(result.to_json(), out)


def cmd_dist(args, cfg, out, err):
    if len(args.point) != 2:
        raise UsageError("dist needs exactly two --point files")
    data = [_read_json(path) for path in args.point]
    alphabet = _alphabet(cfg, *data)
    x, y = (_point(alphabet, d) for d in data)
    p = _p(cfg, args.p)
    _emit({"p": str(p), **_render_distance(dist_p(x, y, p))}, out)


def cmd_equiv(args, cfg, out, err):
    if len(args.word) != 2:
        raise UsageError("equiv needs exactly two --word files")
    data = [_read_json(path) for path in args.word]
    alphabet = _alphabet(cfg, *data)
    a, b = (_word(alphabet, d) for d in data)
    out.write(("true" if equivalent(a, b) else "false") + "\n")


def cmd_attract(args, cfg, out, err):
    letters = [x.strip() for x in args.letters.split(",") if x.strip()]
    if not letters:
        raise UsageError("--letters must name at least one letter")
    alphabet = _alphabet(cfg, extra=letters)
    try:
        alphabet.check_word(letters)
    except AlphabetError as exc:
        raise DomainError("alphabet_violation", str(exc)) from exc
    p = _p(cfg, args.p)
    if args.seed_points:
        seed = random_simplex_points(alphabet, args.seed_points, random.Random(cfg.seed))
    else:
        seed = PointSet.from_points([SparsePoint.origin(alphabet)], alphabet)
    final = None
    try:
        for current, rec in iterate_with_telemetry(letters, seed, args.depth, p, cfg.max_points):
            final = current
            if not args.quiet:
                step = "-" if rec.step_distance is None else _human(rec.step_distance)
                err.write(f"n={rec.n} points={rec.points} hausdorff_to_previous={step}\n")
    except ResourceCapError as exc:
        raise DomainError("cap_exceeded", str(exc)) from exc
    fmt = args.format or cfg.format or "csv"
    if fmt == "json":
        _emit({"points": [x.to_json() for x in final]}, out)
        return
    columns = args.columns.split(",") if args.columns else None
    try:
        rows = final.to_csv_rows(columns)
    except AlphabetError as exc:
        raise DomainError("alphabet_violation", str(exc)) from exc
    writer = csv.writer(out, lineterminator="\n")
    writer.writerows(rows)


def _human(d) -> str:
    if isinstance(d, Fraction):
        return f"{format_rational(d)} (~{float(d):.6g})"
    return f"~{float(d):.12g}"


def cmd_converge(args, cfg, out, err):
    data = _read_json(args.input)
    if not isinstance(data, dict) or not {"limit", "sequence"} <= set(data):
        raise DomainError("malformed_json", 'converge input needs "limit" and "sequence"')
    extra = set(data) - {"limit", "sequence", "p", "m_max"}
    if extra:
        raise DomainError("malformed_json", f"unknown keys: {sorted(extra)}")
    if not isinstance(data["sequence"], list):
        raise DomainError("malformed_json", '"sequence" must be a list of words')
    alphabet = _alphabet(cfg, data)
    limit = _word(alphabet, data["limit"])
    seq = [_word(alphabet, w) for w in data["sequence"]]
    p = _p(cfg, str(data["p"]) if "p" in data else args.p)
    m_max = data.get("m_max", cfg.m_max)
    if not isinstance(m_max, int) or isinstance(m_max, bool):
        raise DomainError("malformed_json", "m_max must be an integer")
    try:
        report = check_sequence(seq, limit, p, m_max)
    except CapExceededError as exc:
        raise DomainError("cap_exceeded", str(exc)) from exc
    except (ValueError, TypeError) as exc:
        raise DomainError("invalid_value", str(exc)) from exc
    _emit(report.to_json(), out)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alphabet", help='alphabet JSON file, {"letters": [...], "z": "z"}')
    common.add_argument("--config", help="run configuration JSON file")

    parser = argparse.ArgumentParser(
        prog="lipscomb",
        description="Lipscomb's space embedded in l^p(A) and the attractor of f_a(x) = (x + u_a)/2.",
        epilog=FINITE_SUBFAMILY_NOTE
        + " Without --alphabet, the alphabet is 'z' plus every letter in the inputs, sorted.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", parents=[common], help="coordinates of a word")
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("project", parents=[common], help="closed-form limit point of a word")
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("classify", parents=[common], help="limit-word case")
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("decode", parents=[common], help="word class of a point")
    p.add_argument("--point", required=True)
    p.add_argument("--max-depth", type=int)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("dist", parents=[common], help="p-distance between two points")
    p.add_argument("--point", action="append", required=True)
    p.add_argument("--p")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("equiv", parents=[common], help="are two words identified")
    p.add_argument("--word", action="append", required=True)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser(
        "attract",
        parents=[common],
        help="Hutchinson iterates of a finite subfamily",
        description="Iterate B -> union of f_a(B) over the given letters. " + FINITE_SUBFAMILY_NOTE,
    )
    p.add_argument("--letters", required=True, help="comma-separated letters, e.g. z,a,b")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--p", help="exponent for the telemetry distances")
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.add_argument("--columns", help="CSV columns (default: every coordinate letter)")
    p.add_argument("--seed-points", type=int, default=0, help="start from this many random simplex points")
    p.add_argument("--quiet", action="store_true", help="suppress telemetry")
    p.set_defaults(func=cmd_attract)

    p = sub.add_parser("converge", parents=[common], help="convergence report for a word sequence")
    p.add_argument("--input", required=True)
    p.add_argument("--p")
    p.set_defaults(func=cmd_converge)
    return parser


def run(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig.load(args.config)
        if args.alphabet:
            cfg.alphabet = args.alphabet
        if args.command == "attract":
            if args.depth < 0:
                raise UsageError("--depth must be non-negative")
        args.func(args, cfg, out, err)
    except UsageError as exc:
        err.write(json.dumps({"error": "usage", "message": str(exc)}) + "\n")
        return 2
    except DomainError as exc:
        err.write(json.dumps({"error": exc.code, "message": str(exc)}) + "\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
