"""
Command dispatch of the command line tool.

``run_query`` executes one parsed command against a definition file and
returns its exit status together with an ordered report; rendering the report
is left to the writers of ``src.formats``.
"""

from __future__ import annotations

import argparse
import pathlib
import shlex
from concurrent.futures import ThreadPoolExecutor

import pandas as pd

import src.arg_parser as ap
import src.automata as am
import src.chop as ch
import src.compiler as co
import src.config_utils as cu
import src.constants as const
import src.decision as dec
import src.definitions as df
import src.expressions as ex
import src.logging_utils as lu
import src.oracle as orc
import src.regex as rx
from src.errors import InputError, QuantLangError
from src.formats.base import Report
from src.queries import (
    Backend,
    DecisionOptions,
    Emptiness,
    Equivalence,
    Inclusion,
    Query,
    QueryResult,
    Universality,
    Verdict,
)

logger = lu.setup_logger(__name__)

Target = ex.Expression | ch.ChopAutomaton


def parse_word(text: str, *, tokens: bool = False) -> tuple[str, ...]:
    """Split a command line word into symbols.

    ``@eps`` is the empty word. Symbols are single characters unless
    ``tokens`` is set, in which case they are separated by whitespace.
    """
    if text.strip() == const.EPSILON_TOKEN:
        return ()
    if tokens:
        return tuple(text.split())
    return tuple(text)


def decision_options(config: dict) -> DecisionOptions:
    """Search limits of the decision procedures taken from the configuration."""
    semilinear = cu.get_semilinear_config(config)
    countermachine = cu.get_countermachine_config(config)
    return DecisionOptions(
        witness_max_length=semilinear["witness_max_length"],
        witness_max_words=semilinear["witness_max_words"],
        membership_bound=semilinear["membership_bound"],
        ibarra_constant=countermachine["ibarra_constant"],
        step_ceiling=countermachine["step_ceiling"],
        max_configurations=countermachine["max_configurations"],
        step_bound=countermachine["step_bound"],
        trace=bool(countermachine["trace"]),
    )


def _detail(value: object) -> object:
    if isinstance(value, str) and "\n" in value:
        return value.split("\n")
    if isinstance(value, tuple):
        return am.format_word(value)
    return value


def result_report(result: QueryResult) -> Report:
    """Report of a decision: verdict, witness word and value, then the details."""
    report: Report = {"verdict": str(result.verdict)}
    if result.witness_word is not None:
        report["witness_word"] = am.format_word(result.witness_word)
    if result.witness_value is not None:
        report["witness_value"] = result.witness_value
    for key, value in result.details.items():
        report[key] = _detail(value)
    return report


def _threshold_query(args: argparse.Namespace, kind: type[Emptiness] | type[Universality]) -> Query:
    if args.gt is not None:
        return kind(args.gt, strict=True)
    return kind(args.ge, strict=False)


def _relation_query(relation: str) -> Query:
    match relation:
        case "ge":
            return Inclusion(strict=False)
        case "gt":
            return Inclusion(strict=True)
        case "eq":
            return Equivalence()
    msg = f"Unknown relation {relation!r}"
    raise InputError(msg)


def _as_chop(target: Target) -> ch.ChopAutomaton:
    if isinstance(target, ch.ChopAutomaton):
        return target
    dec.require_synchronised([target])
    (compiled,), _ = co.compile([target])
    return compiled


def _decide(targets: list[Target], query: Query, config: dict) -> QueryResult:
    backend = Backend(cu.get_cli_config(config)["backend"])
    options = decision_options(config)
    if any(isinstance(t, ch.ChopAutomaton) for t in targets):
        if backend is Backend.COUNTER_MACHINE:
            msg = "The counter machine back end does not handle chop automata"
            raise InputError(msg)
        chops = [_as_chop(t) for t in targets]
        return ch.wca_decide(chops[0] if len(chops) == 1 else tuple(chops), query, options)
    return dec.decide(targets[0] if len(targets) == 1 else tuple(targets), query, backend, options)


def _evaluate(target: Target, word: tuple[str, ...]) -> int | list[int] | None:
    if isinstance(target, ch.ChopAutomaton):
        value = ch.wca_eval(target, word)
        if value is None:
            return None
        return value[0] if len(value) == 1 else list(value)
    return ex.eval(target, word)


def _domain(target: Target) -> am.Nfa:
    return ch.wca_domain(target) if isinstance(target, ch.ChopAutomaton) else target.domain


def _sync_check(targets: list[Target]) -> Report:
    if not any(isinstance(t, ch.ChopAutomaton) for t in targets):
        report = ex.is_synchronised(targets)
    else:
        report = ch.wca_is_synchronised([_as_chop(t) for t in targets])
    if report.synchronised:
        return {"verdict": str(Verdict.YES)}
    result: Report = {"verdict": str(Verdict.NO)}
    if report.word is not None:
        result["separating_word"] = am.format_word(report.word)
    result["first"] = report.first
    result["second"] = report.second
    return result


def _compile(defs: df.DefinitionFile, names: list[str], output: str) -> Report:
    es = []
    for name in names:
        target = defs.target(name)
        if isinstance(target, ch.ChopAutomaton):
            msg = f"{name} is already a chop automaton"
            raise InputError(msg)
        es.append(target)
    outputs, compile_report = co.compile(es)
    text = df.write_chops(dict(zip(names, outputs, strict=True)), defs.alphabet)
    path = pathlib.Path(output)
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        msg = f"Cannot write compiled chop automata to {path}: {e}"
        raise InputError(msg) from e
    msg = f"Compiled chop automata written to {path}"
    logger.info(msg)
    return {
        "verdict": str(Verdict.YES),
        "output": str(path),
        "level": outputs[0].level,
        "chops": list(names),
        "trace": list(compile_report.trace),
    }


def _oracle(defs: df.DefinitionFile, args: argparse.Namespace, config: dict) -> tuple[int, Report]:
    oracle_config = cu.get_oracle_config(config)
    targets = [defs.target(name) for name in args.names]
    query: Query | None = None
    if args.rel is not None:
        query = _relation_query(args.rel)
    elif args.ge is not None or args.gt is not None:
        query = _threshold_query(args, Emptiness)
    result = orc.oracle(
        targets[0] if len(targets) == 1 else (targets[0], targets[1]),
        oracle_config["max_len"],
        query,
        ceiling=oracle_config["max_len_ceiling"],
    )
    report: Report = {}
    if result.answer is not None:
        report.update(result_report(result.answer))
    else:
        report["status"] = "oracle-bounded"
    report["max_len"] = result.max_len
    report["values"] = sorted(result.values)
    if result.answer is not None:
        return result.answer.verdict.exit_code, report
    return (const.EXIT_YES if result.values else const.EXIT_NO), report


def _run_line(defs: df.DefinitionFile, definitions: str, line: str, config: dict) -> dict:
    row = {"command": line, "exit_code": const.EXIT_ERROR, "verdict": "error", "error": ""}
    try:
        args = ap.run_arg_parser([definitions, *shlex.split(line)])
    except SystemExit:
        row["error"] = "invalid command"
        return row
    if args.command == "batch":
        row["error"] = "nested batch"
        return row
    try:
        code, report = run_query(defs, args, cu.update_config(config, args))
    except QuantLangError as e:
        row["error"] = str(e)
        return row
    row["exit_code"] = code
    row["verdict"] = str(report.get("verdict", "defined" if code == const.EXIT_YES else "undefined"))
    return row


def _batch(defs: df.DefinitionFile, args: argparse.Namespace, config: dict) -> tuple[int, Report]:
    path = pathlib.Path(args.commands_file)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        msg = f"Cannot read batch file {path}: {e}"
        raise InputError(msg) from e
    lines = [line.strip() for line in text.splitlines()]
    lines = [line for line in lines if line and not line.startswith("#")]
    jobs = cu.get_cli_config(config)["jobs"]
    msg = f"Running {len(lines)} command(s) from {path} with {jobs} worker(s)"
    logger.info(msg)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        rows = list(pool.map(lambda line: _run_line(defs, args.definitions, line, config), lines))
    table = pd.DataFrame(rows, columns=["command", "exit_code", "verdict", "error"])
    summary = table.groupby("verdict", sort=True).size()
    logger.debug(table.to_string(index=False))
    report: Report = {"commands": len(table)}
    for index, row in enumerate(table.itertuples(index=False), start=1):
        entry: Report = {"command": row.command, "exit_code": int(row.exit_code), "verdict": row.verdict}
        if row.error:
            entry["error"] = row.error
        report[f"line{index}"] = entry
    report["summary"] = {str(verdict): int(count) for verdict, count in summary.items()}
    code = int(table["exit_code"].max()) if len(table) else const.EXIT_YES
    return code, report


def run_query(defs: df.DefinitionFile, args: argparse.Namespace, config: dict) -> tuple[int, Report]:
    """Run one command and build its report.

    Parameters
    ----------
    defs : DefinitionFile
        Parsed definitions.
    args : argparse.Namespace
        Parsed command line.
    config : dict
        Configuration with the command line overrides applied.

    Returns
    -------
    tuple[int, Report]
        Exit status (0 yes or defined, 1 no or undefined, 2 inconclusive)
        and the ordered report.

    Raises
    ------
    QuantLangError
        On unknown names, ill-formed words, non-synchronised input to a
        decision command and every other library error.
    """
    tokens = bool(cu.get_cli_config(config)["tokens"])
    msg = f"Running command {args.command}"
    logger.debug(msg)
    match args.command:
        case "eval":
            word = parse_word(args.word, tokens=tokens)
            value = _evaluate(defs.target(args.name), word)
            report: Report = {"word": am.format_word(word), "value": value}
            return (const.EXIT_NO if value is None else const.EXIT_YES), report
        case "empty":
            result = _decide([defs.target(args.name)], _threshold_query(args, Emptiness), config)
            return result.verdict.exit_code, result_report(result)
        case "universal":
            result = _decide([defs.target(args.name)], _threshold_query(args, Universality), config)
            return result.verdict.exit_code, result_report(result)
        case "compare":
            targets = [defs.target(args.first), defs.target(args.second)]
            result = _decide(targets, _relation_query(args.rel), config)
            return result.verdict.exit_code, result_report(result)
        case "range":
            target = defs.target(args.name)
            if isinstance(target, ch.ChopAutomaton):
                values = ch.wca_range([target], check=True)
            else:
                values = dec.value_range(target)
            report = {"empty": not values.components, "range": [str(c) for c in values.components]}
            return (const.EXIT_NO if not values.components else const.EXIT_YES), report
        case "sync-check":
            report = _sync_check([defs.target(name) for name in args.names])
            return (const.EXIT_YES if report["verdict"] == Verdict.YES else const.EXIT_NO), report
        case "compile":
            return const.EXIT_YES, _compile(defs, args.names, args.output)
        case "domain":
            domain = am.trim(_domain(defs.target(args.name)))
            shortest = am.shortest_word(domain)
            report = {
                "empty": shortest is None,
                "regex": str(rx.nfa_to_regex(domain)),
                "shortest_word": None if shortest is None else am.format_word(shortest),
            }
            return (const.EXIT_NO if shortest is None else const.EXIT_YES), report
        case "oracle":
            return _oracle(defs, args, config)
        case "batch":
            return _batch(defs, args, config)
    msg = f"Unknown command {args.command!r}"
    raise InputError(msg)
