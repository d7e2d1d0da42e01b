"""Command-line interface: scenario ingestion, command dispatch, and
deterministic key/value reports.

Exit statuses: 0 success, 2 parse or validation failure (including
usage errors), 3 computation rejected by a precondition, 4 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass

from .chi import chi_eval, retraction_kills_chi, verify_cocycle
from .errors import (
    ContextError,
    DimensionError,
    InternalError,
    RejectedError,
    UnsupportedError,
)
from .gmodules import GModule
from .groups import FactorSpec, GroupSpec, conjugacy_canonical, are_conjugate
from .intlinalg import QuotientPresentation
from .obstruction import (
    PseudoisotopyClass,
    circle_conclusion,
    clam_double,
    involution,
    power_report,
    retraction_invariant,
    stable_obstruction,
    stable_sum,
)
from .scenario import ASSERT_KERNEL, Scenario, ScenarioError, load_scenario
from .wh1 import WhElement, detect_nontrivial, induced_map, oracle_wh_presentation, wh_equal
from .words import WordError, parse_wh, parse_word

__all__ = ["Report", "run_command", "main"]


@dataclass(frozen=True)
class Report:
    """An ordered list of KEY: value lines plus an exit status."""

    lines: tuple[tuple[str, str], ...]
    status: int = 0

    def render(self) -> str:
        return "".join(f"{key}: {value}\n" for key, value in self.lines)


def _compress_range(flags) -> str:
    """Render the true positions of 1-based flags as comma-joined runs."""
    runs = []
    start = None
    prev = None
    for n, ok in flags:
        if ok:
            if start is None:
                start = n
            prev = n
        elif start is not None:
            runs.append((start, prev))
            start = None
    if start is not None:
        runs.append((start, prev))
    if not runs:
        return "none"
    return ",".join(f"{a}..{b}" if a != b else str(a) for a, b in runs)


# -- builtin tokens for the oracle command -------------------------------


def builtin_group(token: str) -> GroupSpec | None:
    """Cyclic and product shorthands: Z2, Z6, Z2xZ2, ..."""
    orders = []
    for part in token.split("x"):
        if not (part.startswith("Z") and part[1:].isdigit()):
            return None
        m = int(part[1:])
        if m < 2:
            return None
        orders.append(m)
    if not orders:
        return None
    names = tuple(f"s{i + 1}" for i in range(len(orders))) if len(orders) > 1 else ("s",)
    return GroupSpec((FactorSpec.abelian(names, torsion=orders),))


def builtin_module(spec: GroupSpec, token: str) -> GModule | None:
    """Trivial-action shorthands: Ztrivial, Z2trivial, Z^2trivial."""
    if not token.endswith("trivial"):
        return None
    body = token[: -len("trivial")]
    if body == "Z":
        return GModule(spec, QuotientPresentation(1), name=token)
    if body.startswith("Z^") and body[2:].isdigit():
        return GModule(spec, QuotientPresentation(int(body[2:])), name=token)
    if body.startswith("Z") and body[1:].isdigit():
        m = int(body[1:])
        return GModule(spec, QuotientPresentation(1, [(m,)]), name=token)
    return None


def _random_wh(rng: random.Random, module: GModule, elements) -> WhElement:
    terms = []
    for _ in range(rng.randint(0, 4)):
        coords = [rng.randint(-3, 3) for _ in range(module.rank)]
        terms.append((coords, rng.choice(elements)))
    return WhElement.build(module, terms)


# -- command handlers -----------------------------------------------------


def _cmd_normalize(scenario: Scenario, args) -> Report:
    word = parse_word(scenario.spec, args.word)
    return Report((("RESULT", str(word)),))


def _cmd_conjugacy(scenario: Scenario, args) -> Report:
    first = parse_word(scenario.spec, args.word)
    lines = [("CANONICAL", str(conjugacy_canonical(first)))]
    if args.other is not None:
        second = parse_word(scenario.spec, args.other)
        lines.append(("CANONICAL_2", str(conjugacy_canonical(second))))
        lines.append(("ARE_CONJUGATE", _bool(are_conjugate(first, second))))
    return Report(tuple(lines))


def _module_for(scenario: Scenario, name: str | None) -> GModule:
    if name is None:
        name = "Z"
    module = scenario.modules.get(name)
    if module is None:
        raise RejectedError(f"scenario declares no module named {name!r}")
    return module


def _cmd_wh(scenario: Scenario, args) -> Report:
    module = _module_for(scenario, args.module)
    action = args.action
    rest = args.args
    if action == "normalize":
        if len(rest) != 1:
            raise RejectedError("wh normalize takes one Wh expression")
        return Report((("RESULT", str(parse_wh(module, rest[0]))),))
    if action == "add":
        if len(rest) != 2:
            raise RejectedError("wh add takes two Wh expressions")
        total = parse_wh(module, rest[0]) + parse_wh(module, rest[1])
        return Report((("RESULT", str(total)),))
    if action == "equal":
        if len(rest) != 2:
            raise RejectedError("wh equal takes two Wh expressions")
        verdict = wh_equal(parse_wh(module, rest[0]), parse_wh(module, rest[1]))
        return Report((("RESULT", "unknown" if verdict is None else _bool(verdict)),))
    if action == "detect":
        if len(rest) != 2:
            raise RejectedError("wh detect takes a Wh expression and a map name")
        phi = scenario.maps.get(rest[1])
        if phi is None:
            raise RejectedError(f"scenario declares no map named {rest[1]!r}")
        flag = detect_nontrivial(parse_wh(module, rest[0]), phi)
        return Report((("RESULT", _bool(flag)),))
    raise RejectedError(f"unknown wh action {action!r}")


def _cmd_chi(scenario: Scenario, args) -> Report:
    cocycle = scenario.cocycles.get(args.cocycle)
    if cocycle is None:
        raise RejectedError(f"scenario declares no cocycle named {args.cocycle!r}")
    mats = []
    for name in (args.a, args.b, args.c):
        pair = scenario.matrices.get(name)
        if pair is None:
            raise RejectedError(f"scenario declares no matrix named {name!r}")
        mats.append(pair)
    d = None
    if args.d is not None:
        d = scenario.matrices.get(args.d)
        if d is None:
            raise RejectedError(f"scenario declares no matrix named {args.d!r}")
    violated = verify_cocycle(cocycle)
    lines = [("COCYCLE_OK", _bool(violated is None))]
    if violated is not None:
        quad = ", ".join(str(x) for x in violated)
        lines.append(("COCYCLE_VIOLATED_AT", f"({quad})"))
        return Report(tuple(lines), status=3)
    value = chi_eval(cocycle, *mats, d)
    lines.append(("CHI", str(value)))
    return Report(tuple(lines))


def _cmd_obstruct(scenario: Scenario, args) -> Report:
    lens = scenario.lenses.get(args.lens)
    if lens is None:
        raise RejectedError(f"scenario declares no lens named {args.lens!r}")
    lines = [
        ("LENS", args.lens),
        ("K", str(lens.k)),
        ("N", str(lens.n)),
        ("MAIN", str(lens.main)),
        ("FRAMING", str(lens.framing)),
    ]
    sf, sm = stable_obstruction(lens)
    lines.append(("STABLE_MAIN", str(sm)))
    lines.append(("STABLE_FRAMING", str(sf)))
    eps = involution(lens)
    lines.append(("EPS_K", str(eps.k)))
    lines.append(("EPS_MAIN", str(eps.main)))
    if eps.note and eps.note != lens.note:
        lines.append(("EPS_NOTE", eps.note))
    if (lens.k, lens.n) == (1, 3):
        double = clam_double(lens)
        _, dm = stable_sum(double)
        lines.append(("DOUBLE_STABLE_MAIN", str(dm)))
        retraction = args.retraction
        if retraction is None and scenario.paper is not None:
            retraction = scenario.paper.retraction
        if retraction is not None:
            phi = scenario.maps.get(retraction)
            if phi is None:
                raise RejectedError(f"scenario declares no map named {retraction!r}")
            single = PseudoisotopyClass((lens,), boundary=False, note=args.lens)
            lines.append(("RHO", str(retraction_invariant(single, phi))))
            lines.append(("RHO_DOUBLE", str(retraction_invariant(double, phi))))
    return Report(tuple(lines))


def _resolve_oracle_context(scenario: Scenario | None, group_token: str, module_token: str):
    spec = builtin_group(group_token)
    if spec is None:
        raise RejectedError(f"unknown group token {group_token!r} "
                            "(expected Z<m> or products like Z2xZ2)")
    module = builtin_module(spec, module_token)
    if module is None:
        raise RejectedError(f"unknown module token {module_token!r} "
                            "(expected Ztrivial, Z<m>trivial or Z^<k>trivial)")
    return spec, module


def _cmd_oracle(scenario: Scenario | None, args) -> Report:
    spec, module = _resolve_oracle_context(scenario, args.group, args.module)
    oracle = oracle_wh_presentation(spec, module)
    pres = oracle.presentation
    invariants = pres.group_invariants()
    lines = [
        ("GROUP_ORDER", str(spec.order())),
        ("AMBIENT", str(pres.rank)),
        ("INVARIANT_FACTORS", ", ".join(str(d) for d in invariants) or "trivial"),
        ("FREE_RANK", str(pres.free_rank)),
    ]
    if args.action == "agree":
        rng = random.Random(args.seed)
        elements = oracle.elements
        pairs = args.pairs
        disagreements = 0
        for _ in range(pairs):
            x = _random_wh(rng, module, elements)
            y = _random_wh(rng, module, elements)
            fast = x == y if module.trivial_action else None
            slow = oracle.coords(x) == oracle.coords(y)
            if fast is not None and fast != slow:
                disagreements += 1
        lines.append(("PAIRS", str(pairs)))
        lines.append(("DISAGREEMENTS", str(disagreements)))
        lines.append(("RESULT", "ok" if disagreements == 0 else "fail"))
        return Report(tuple(lines), status=0 if disagreements == 0 else 4)
    return Report(tuple(lines))


def _cmd_report_paper(scenario: Scenario, args) -> Report:
    if scenario.paper is None:
        raise RejectedError("scenario has no 'paper' section")
    if ASSERT_KERNEL not in scenario.assertions:
        raise RejectedError(
            "the stable invariant is defined on the kernel of the first "
            f"invariant; scenario must assert {ASSERT_KERNEL!r}"
        )
    cfg = scenario.paper
    lens = scenario.lenses[cfg.lens]
    phi = scenario.maps[cfg.retraction]
    sigma = lens.main.terms[0][1] if lens.main.terms else scenario.spec.identity()
    lines = [
        ("SCENARIO", scenario.name),
        ("GROUP", scenario.spec.describe()),
        ("SIGMA", str(sigma)),
        ("ALPHA", _coeff_str(lens.main)),
        ("LAMBDA_MAIN", str(lens.main)),
        ("LAMBDA_FRAMING", str(lens.framing)),
    ]
    if cfg.cocycle is not None and cfg.matrices is not None:
        cocycle = scenario.cocycles[cfg.cocycle]
        a, b, c = (scenario.matrices[m] for m in cfg.matrices)
        lines.append(("COCYCLE_OK", _bool(verify_cocycle(cocycle) is None)))
        value = chi_eval(cocycle, a, b, c)
        lines.append(("CHI_MAIN", str(value)))
        lines.append(("CHI_RETRACTED", str(induced_map(phi, value))))
        lines.append(("RETRACTION_KILLS_CHI",
                      _bool(retraction_kills_chi(phi, cocycle, a, b, c))))
    eps = involution(lens)
    lines.append(("EPS_MAIN", str(eps.main)))
    if eps.note != lens.note:
        lines.append(("EPS_NOTE", eps.note))
    _, stable_g = stable_obstruction(lens)
    lines.append(("STABLE_G_MAIN", str(stable_g)))
    double = clam_double(lens)
    _, stable_d = stable_sum(double)
    lines.append(("STABLE_DOUBLE_MAIN", str(stable_d)))
    single = PseudoisotopyClass((lens,), boundary=False, note=cfg.lens)
    lines.append(("RHO_G", str(retraction_invariant(single, phi))))
    lines.append(("RHO_DOUBLE", str(retraction_invariant(double, phi))))
    powers = power_report(double, phi, cfg.powers)
    lines.append(("POWERS_NONTRIVIAL", _compress_range(powers.entries)))
    lines.append(("POWERS_SHORTCUT",
                  "rho != 0 in a free abelian group, so n*rho != 0 for all n >= 1"
                  if powers.shortcut_nonzero else "rho = 0, so every power is 0"))
    circle = circle_conclusion(double, phi)
    lines.append(("CIRCLE", "nontrivial" if circle.status == "nontrivial" else circle.status))
    lines.append(("CIRCLE_PSEUDOISOTOPIC_TO_IDENTITY", _bool(circle.pseudoisotopic_to_identity)))
    lines.append(("CIRCLE_WITNESS", circle.witness))
    return Report(tuple(lines))


def _coeff_str(x: WhElement) -> str:
    if not x.terms:
        return "0"
    coords = x.terms[0][0]
    if len(coords) == 1:
        return str(coords[0])
    return "(" + ",".join(str(c) for c in coords) + ")"


def _bool(flag: bool) -> str:
    return "true" if flag else "false"


# -- dispatch --------------------------------------------------------------


def run_command(scenario: Scenario | None, command: str, args) -> Report:
    handlers = {
        "normalize": _cmd_normalize,
        "conjugacy": _cmd_conjugacy,
        "wh": _cmd_wh,
        "chi": _cmd_chi,
        "obstruct": _cmd_obstruct,
        "oracle": _cmd_oracle,
        "report-paper": _cmd_report_paper,
    }
    if command not in handlers:
        raise RejectedError(f"unknown command {command!r}")
    if command != "oracle" and scenario is None:
        raise RejectedError(f"command {command!r} needs a scenario")
    return handlers[command](scenario, args)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="obkit",
        description="Symbolic obstruction calculus over free products.",
    )
    parser.add_argument("--scenario", help="path to a scenario file")
    parser.add_argument("--out", help="write the report to this path")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for randomized property commands only")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", help="normal form of a word")
    p.add_argument("word")

    p = sub.add_parser("conjugacy", help="canonical conjugacy representative")
    p.add_argument("word")
    p.add_argument("other", nargs="?")

    p = sub.add_parser("wh", help="Wh element operations")
    p.add_argument("action", choices=["normalize", "add", "equal", "detect"])
    p.add_argument("args", nargs="*")
    p.add_argument("--module", help="coefficient module name (default Z)")

    p = sub.add_parser("chi", help="evaluate chi on certified matrices")
    p.add_argument("cocycle")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("c")
    p.add_argument("d", nargs="?")

    p = sub.add_parser("obstruct", help="lens obstruction report")
    p.add_argument("lens")
    p.add_argument("--retraction")

    p = sub.add_parser("oracle", help="finite-group Wh oracle")
    p.add_argument("action", choices=["wh", "agree"])
    p.add_argument("group")
    p.add_argument("module")
    p.add_argument("--pairs", type=int, default=200)

    sub.add_parser("report-paper", help="the full headline pipeline")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    scenario = None
    try:
        if args.scenario is not None:
            scenario = load_scenario(args.scenario)
        report = run_command(scenario, args.command, args)
    except ScenarioError as err:
        for diag in err.diagnostics:
            print(diag.render(), file=sys.stderr)
        return 2
    except WordError as err:
        print(f"PARSE: {err}", file=sys.stderr)
        return 2
    except (RejectedError, UnsupportedError, ContextError, DimensionError) as err:
        print(f"REJECTED: {err}", file=sys.stderr)
        return 3
    except InternalError as err:
        print(f"INTERNAL: {err}", file=sys.stderr)
        return 4
    except OSError as err:
        print(f"ERROR: {err}", file=sys.stderr)
        return 2
    text = report.render()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return report.status


if __name__ == "__main__":
    sys.exit(main())
