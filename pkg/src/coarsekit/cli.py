"""Command-line front end: config-driven relation queries, function checks and suites.

Every query prints one record line; suites print a text report or record
lines.  Exit codes: 0 completed run (queries) or no failed check (suites),
1 a suite check failed, 2 the configuration or arguments could not be used.
"""
from __future__ import annotations

import argparse
import configparser
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Optional

from coarsekit import constructions as cons
from coarsekit.core import BalleanPresentation, ScaleWindow, Verdict
from coarsekit.functions import (
    DistanceRatio,
    PreconditionError,
    is_asymptotic_neighbourhood,
    macro_uniform_check,
    normality_separator,
    slowly_oscillating_check,
    shipped_candidates,
)
from coarsekit.relations import (
    asymptotically_disjoint,
    closeness,
    compare_relations,
    is_discrete_at,
    is_large_at,
    is_linked,
    separated_net,
)
from coarsekit.subsets import (
    All,
    Arithmetic,
    Band,
    DifferenceWithinWindow,
    Drift,
    FiniteList,
    Geometric,
    Intersection,
    SubsetSpec,
    Union,
)
from coarsekit.suite import SAMPLE_PAIRS, SUITES, render_fields, run_suite


class ConfigError(Exception):
    """The configuration (or a name used on the command line) cannot be resolved."""


def _names(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


@dataclass
class ConfigDocument:
    """Parsed config: scale, named presentations and subsets, built on demand."""

    scale: ScaleWindow
    normality_rmax: int
    presentation_sections: dict
    subset_sections: dict
    _presentations: dict = field(default_factory=dict)
    _subsets: dict = field(default_factory=dict)

    # ------------------------------------------------------------- loading

    @classmethod
    def from_text(cls, text: str, source: str = "<config>") -> "ConfigDocument":
        parser = configparser.ConfigParser(inline_comment_prefixes=("#",), interpolation=None)
        parser.optionxform = str
        try:
            parser.read_string(text, source=source)
        except configparser.Error as exc:
            raise ConfigError(f"{source}: {exc}") from exc
        scale = dict(parser["scale"]) if parser.has_section("scale") else {}
        try:
            window = int(scale.get("window", 4096))
            sw = ScaleWindow(int(scale.get("rmax", 16)), window, int(scale.get("cutoff", window // 2)))
            normality_rmax = int(parser.get("suite", "normality_rmax", fallback="4"))
        except ValueError as exc:
            raise ConfigError(f"{source}: bad scale: {exc}") from exc
        pres, subs = {}, {}
        for section in parser.sections():
            if section in ("scale", "suite"):
                continue
            kind, _, name = section.partition(":")
            if not name or kind not in ("presentation", "subset"):
                raise ConfigError(f"{source}: unknown section [{section}]")
            target = pres if kind == "presentation" else subs
            target[name] = dict(parser[section])
            if "kind" not in target[name]:
                raise ConfigError(f"{source}: [{section}] has no kind")
        return cls(sw, normality_rmax, pres, subs)

    @classmethod
    def load(cls, path: Optional[str]) -> "ConfigDocument":
        if path is None:
            text = resources.files("coarsekit").joinpath("default.ini").read_text(encoding="utf-8")
            return cls.from_text(text, "default.ini")
        try:
            with open(path, encoding="utf-8") as fh:
                return cls.from_text(fh.read(), path)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc

    def validate(self) -> None:
        """Build every presentation and subset so bad references surface early."""
        for name in self.subset_sections:
            self.subset(name)
        for name in self.presentation_sections:
            self.presentation(name)

    # ------------------------------------------------------------- subsets

    def subset(self, name: str, _stack: tuple = ()) -> SubsetSpec:
        if name in self._subsets:
            return self._subsets[name]
        if name not in self.subset_sections:
            raise ConfigError(f"unknown subset {name!r}")
        if name in _stack:
            raise ConfigError(f"subset {name!r} refers to itself")
        sec = self.subset_sections[name]
        stack = _stack + (name,)
        ref = lambda key: self.subset(sec[key], stack)  # noqa: E731
        kind = sec["kind"]
        try:
            if kind == "all":
                spec = All()
            elif kind == "list":
                spec = FiniteList(tuple(int(p) for p in _names(sec.get("points", ""))))
            elif kind == "arithmetic":
                spec = Arithmetic(int(sec["a"]), int(sec["b"]))
            elif kind == "geometric":
                spec = Geometric(int(sec["a"]), Fraction(sec["q"]))
            elif kind == "drift":
                spec = Drift(ref("base"), int(sec.get("step", 1)), int(sec.get("skip", 0)))
            elif kind == "band":
                spec = Band(ref("base"), int(sec.get("slope", 1)))
            elif kind in ("union", "intersection"):
                parts = tuple(self.subset(p, stack) for p in _names(sec["parts"]))
                spec = Union(parts) if kind == "union" else Intersection(parts)
            elif kind == "difference":
                spec = DifferenceWithinWindow(ref("left"), ref("right"))
            else:
                raise ConfigError(f"subset {name!r}: unknown kind {kind!r}")
        except KeyError as exc:
            raise ConfigError(f"subset {name!r}: missing field {exc}") from exc
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise ConfigError(f"subset {name!r}: {exc}") from exc
        self._subsets[name] = spec
        return spec

    # -------------------------------------------------------- presentations

    def presentation(self, name: str, _stack: tuple = ()) -> BalleanPresentation:
        if name in self._presentations:
            return self._presentations[name]
        if name not in self.presentation_sections:
            raise ConfigError(f"unknown presentation {name!r}")
        if name in _stack:
            raise ConfigError(f"presentation {name!r} refers to itself")
        sec = self.presentation_sections[name]
        stack = _stack + (name,)
        ref = lambda key: self.presentation(sec[key], stack)  # noqa: E731
        kind = sec["kind"]
        try:
            if kind == "metric":
                b = cons.make_metric()
                b.label = name
            elif kind == "reindexed":
                b = cons.make_reindexed(ref("base"), int(sec.get("factor", 2)), label=name)
            elif kind == "finitary":
                gens = tuple(cons.cycle(*(int(p) for p in g.split())) for g in sec["generators"].split(";") if g.strip())
                b = cons.make_finitary(cons.FinitaryGroupParams(gens), label=name)
            elif kind == "example5":
                b = cons.make_example5()
                b.label = name
            elif kind == "filter_modified":
                chain = cons.TailChain(int(sec.get("tail_step", 10)), int(sec.get("tail_offset", 0)))
                b = cons.make_filter_modified(cons.FilterChainParams(ref("base"), chain), label=name)
            elif kind == "discrete":
                b = cons.make_discrete_from_bornology(cons.prefix_chain(int(sec.get("prefix_step", 1))), label=name)
            elif kind == "subballean":
                b = cons.make_subballean(ref("base"), self.subset(sec["subset"]), self.scale, label=name)
            elif kind == "product":
                b = cons.make_product(ref("first"), ref("second"), label=name)
            else:
                raise ConfigError(f"presentation {name!r}: unknown kind {kind!r}")
        except KeyError as exc:
            raise ConfigError(f"presentation {name!r}: missing field {exc}") from exc
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"presentation {name!r}: {exc}") from exc
        self._presentations[name] = b
        return b

    def presentations(self) -> dict:
        return {name: self.presentation(name) for name in self.presentation_sections}


# ------------------------------------------------------------------- queries


def _functions(window: int) -> dict:
    return {f.describe(): f for f in shipped_candidates(window)}


def _verdict_fields(v: Verdict) -> list:
    return [("verdict", v.label)] + [(f"witness_{k}", w) for k, w in v.witness.items()]


def _record(op: str, ballean: str, args: list, fields: list, sw: ScaleWindow) -> str:
    return render_fields([("op", op), ("ballean", ballean), ("args", ",".join(args))] + fields
                         + [("scale", sw.describe())])


def run_query(cfg: ConfigDocument, ns: argparse.Namespace) -> list[str]:
    sw = cfg.scale
    if getattr(ns, "rmax", None) is not None:
        sw = sw.with_rmax(ns.rmax)
    op = ns.command
    if op == "compare":
        b1, b2 = cfg.presentation(ns.a), cfg.presentation(ns.b)
        if ns.pairs == "default":
            names = list(SAMPLE_PAIRS)
        else:
            names = [tuple(p.split(":", 1)) for p in _names(ns.pairs)]
            if any(len(p) != 2 for p in names):
                raise ConfigError("--pairs expects default or A:B,C:D,...")
        from coarsekit.suite import sample_sets
        known = sample_sets() if ns.pairs == "default" else {}
        pick = lambda n: known[n] if n in known else cfg.subset(n)  # noqa: E731
        family = [(pick(x), pick(y)) for x, y in names]
        try:
            comparison = compare_relations(b1, b2, family, sw)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        out = []
        for (x, y), row in zip(names, comparison):
            out.append(_record(op, f"{ns.a},{ns.b}", [x, y], [
                ("agree", row.agree), ("delta_agree", row.delta_agree), ("lambda_agree", row.lambda_agree),
                ("close", f"{row.first.close.label},{row.second.close.label}"),
                ("linked", f"{row.first.linked.label},{row.second.linked.label}")], sw))
        return out
    b = cfg.presentation(ns.ballean)
    if op in ("close", "linked", "asymdisj"):
        fn = {"close": closeness, "linked": is_linked, "asymdisj": asymptotically_disjoint}[op]
        v = fn(b, cfg.subset(ns.a), cfg.subset(ns.b), sw)
        return [_record(op, ns.ballean, [ns.a, ns.b], _verdict_fields(v), sw)]
    if op == "large":
        v = is_large_at(b, cfg.subset(ns.y), sw)
        return [_record(op, ns.ballean, [ns.y], _verdict_fields(v), sw)]
    if op == "discrete":
        return [_record(op, ns.ballean, [], _verdict_fields(is_discrete_at(b, sw)), sw)]
    if op in ("mu", "so"):
        funcs = _functions(sw.window)
        if ns.f not in funcs:
            raise ConfigError(f"unknown function {ns.f!r} (known: {', '.join(funcs)})")
        f = funcs[ns.f]
        if op == "mu":
            v = macro_uniform_check(b, f, sw)
            args = [ns.f]
        else:
            v = slowly_oscillating_check(b, f, ns.epsilon, sw)
            args = [ns.f, repr(ns.epsilon)]
        return [_record(op, ns.ballean, args, _verdict_fields(v), sw)]
    if op == "neighbourhood":
        v = is_asymptotic_neighbourhood(b, cfg.subset(ns.u), cfg.subset(ns.a), sw)
        return [_record(op, ns.ballean, [ns.u, ns.a], _verdict_fields(v), sw)]
    if op == "separate":
        A, B = cfg.subset(ns.a), cfg.subset(ns.b)
        try:
            res = normality_separator(b, A, B, sw, ns.epsilon)
        except PreconditionError as exc:
            return [_record(op, ns.ballean, [ns.a, ns.b], [("verdict", "precondition-failed"), ("error", str(exc))], sw)]
        checks = (res.slowly_oscillating,) + tuple(res.neighbourhood_verdicts)
        exact = res.zero_on_a and res.one_on_b and res.disjoint
        if not exact or any(v.is_no for v in checks):
            verdict = "no"
        elif any(v.is_unknown for v in checks):
            verdict = "unknown"
        else:
            verdict = "yes-at-scale"
        return [_record(op, ns.ballean, [ns.a, ns.b], [
            ("verdict", verdict), ("zero_on_a", res.zero_on_a), ("one_on_b", res.one_on_b),
            ("so", res.slowly_oscillating.label), ("disjoint", res.disjoint),
            ("nbhd_a", res.neighbourhood_verdicts[0].label), ("nbhd_b", res.neighbourhood_verdicts[1].label)], sw)]
    if op == "net":
        if not 0 <= ns.r <= sw.rmax:
            raise ConfigError(f"--r must lie in [0, {sw.rmax}]")
        net = separated_net(b, ns.r, sw)
        shown = list(net.points[:ns.show])
        return [_record(op, ns.ballean, [str(ns.r)], [("count", len(net.points)), ("points", shown)], sw)]
    raise ConfigError(f"unknown command {op!r}")  # pragma: no cover


# --------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coarsekit", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="INI config file (default: built-in)")
    sub = parser.add_subparsers(dest="command", required=True)

    def query(name, help_text, *args):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--ballean", required=True, help="presentation name")
        for a in args:
            p.add_argument(f"--{a}", required=True, help="subset name")
        p.add_argument("--rmax", type=int, help="override the configured rmax")
        return p

    query("close", "A δ B", "a", "b")
    query("linked", "A λ B", "a", "b")
    query("asymdisj", "asymptotic disjointness", "a", "b")
    query("large", "largeness of Y", "y")
    query("discrete", "discreteness at scale")
    for name in ("mu", "so"):
        p = query(name, "macro-uniform check" if name == "mu" else "slowly oscillating check")
        p.add_argument("--f", required=True, help="function name")
        if name == "so":
            p.add_argument("--epsilon", type=float, default=0.25)
    query("neighbourhood", "is U an asymptotic neighbourhood of A", "u", "a")
    query("separate", "normality separator for A, B", "a", "b").add_argument("--epsilon", type=float, default=0.25)
    p = query("net", "greedy separated net")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--show", type=int, default=10, help="points to print")
    p = sub.add_parser("compare", help="δ/λ comparison of two presentations")
    p.add_argument("--a", required=True, help="first presentation")
    p.add_argument("--b", required=True, help="second presentation")
    p.add_argument("--pairs", default="default", help="'default' or A:B,C:D with subset names")
    p.add_argument("--rmax", type=int, help="override the configured rmax")
    p = sub.add_parser("suite", help="run property suites")
    p.add_argument("name", choices=SUITES + ("all",))
    p.add_argument("--ballean", help="presentation for single-presentation suites")
    p.add_argument("--format", choices=("text", "records"), default="text")
    p.add_argument("--timings", action="store_true", help="include per-check runtimes")
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = ConfigDocument.load(ns.config)
        if ns.command == "suite":
            reports = run_suite(ns.name, cfg.presentations(), cfg.scale, cfg.normality_rmax, ns.ballean)
        else:
            lines = run_query(cfg, ns)
    except (ConfigError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, ConfigError) else f"unknown presentation {exc}"
        print(f"coarsekit: config error: {msg}", file=sys.stderr)
        return 2
    if ns.command != "suite":
        print("\n".join(lines))
        return 0
    for rep in reports:
        if ns.format == "records":
            print("\n".join(rep.records(ns.timings)))
        else:
            print(rep.text(ns.timings))
    return 1 if any(rep.failed for rep in reports) else 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
