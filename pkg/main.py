#!/usr/bin/env python3
import argparse
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional

import numpy as np
from tqdm import tqdm

from modules.Config import Config, RunConfig
from modules.Dataset import FORMATS, dataset_stats, distinct_count_exact, dump_dataset, load_dataset_file
from modules.Errors import ConfigError, DistinctCountError, InvalidParameterError, SelftestFailure
from modules.Estimator import (COUNTERS, PRIVATE_SELECTIONS, count_at, count_curve, dp_count_fixed_bound,
                               fixed_bound_lower_bound, release_from_curve, sampling_count_curve, select_bound)
from modules.Experiment import run_comparison
from modules.Loggers import configure_console_logger
from modules.Mechanisms.PrivacyParams import PrivacyParams
from modules.Mechanisms.RandomSource import RandomSource
from modules.Oracle import run_selftest
from modules.SyntheticData import zipf_dataset

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FILE_ERROR, EXIT_USAGE, EXIT_SELFTEST = 0, 1, 2, 3

SELECTION_FLAGS = {
    "max": "max_contribution",
    "p90": "p90_contribution",
    "utility": "exact_utility",
    "gem": "gem_utility",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default="config.ini", help="ini file with default settings.")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ...")
    common.add_argument("--output", default=None, help="Write the report here instead of standard output.")

    def with_input(sub):
        sub.add_argument("input", help="Dataset file.")
        sub.add_argument("--format", choices=FORMATS, default="tsv")

    def with_privacy(sub):
        sub.add_argument("--epsilon", type=float, default=None)
        sub.add_argument("--beta", type=float, default=None)
        sub.add_argument("--ell-max", dest="ell_max", type=int, default=None)

    parser = argparse.ArgumentParser(
        description="Differentially private lower bounds on the number of distinct items in person-keyed data."
    )
    commands = parser.add_subparsers(dest="command", required=True)

    stats = commands.add_parser("stats", parents=[common], help="Dataset statistics.")
    with_input(stats)

    exact = commands.add_parser("count-exact", parents=[common], help="Exact (non-private) distinct count.")
    with_input(exact)

    curve = commands.add_parser("curve", parents=[common], help="Bounded counts for l = 1..ell_max as CSV.")
    with_input(curve)
    curve.add_argument("--algo", choices=COUNTERS, default="matching")
    curve.add_argument("--ell-max", dest="ell_max", type=int, default=None)
    curve.add_argument("--trials", type=int, default=None)
    curve.add_argument("--seed", type=int, default=None)
    curve.add_argument("--workers", type=int, default=None)

    select = commands.add_parser("select-bound", parents=[common], help="Choose a contribution bound.")
    with_input(select)
    with_privacy(select)
    select.add_argument("--method", choices=sorted(SELECTION_FLAGS), required=True)
    select.add_argument("--algo", choices=COUNTERS, default="matching")
    select.add_argument("--seed", type=int, default=None)

    dp_count = commands.add_parser("dp-count", parents=[common], help="Private distinct-count lower bound.")
    with_input(dp_count)
    with_privacy(dp_count)
    dp_count.add_argument("--algo", choices=COUNTERS, default="matching")
    dp_count.add_argument("--seed", type=int, default=None)
    dp_count.add_argument("--trials", type=int, default=None)
    dp_count.add_argument("--workers", type=int, default=None)

    fixed = commands.add_parser("dp-count-fixed", parents=[common], help="Laplace release at a fixed bound.")
    with_input(fixed)
    fixed.add_argument("--algo", choices=COUNTERS, default="matching")
    fixed.add_argument("--ell", type=int, required=True)
    fixed.add_argument("--epsilon", type=float, default=None)
    fixed.add_argument("--beta", type=float, default=None,
                       help="Also report the 1 - beta confidence lower bound.")
    fixed.add_argument("--seed", type=int, default=None)

    selftest = commands.add_parser("selftest", parents=[common], help="Cross-check against brute-force oracles.")
    selftest.add_argument("--cases", type=int, default=1000)
    selftest.add_argument("--seed", type=int, default=None)

    synth = commands.add_parser("synth", parents=[common], help="Generate a synthetic Zipf dataset.")
    synth.add_argument("--people", type=int, default=200)
    synth.add_argument("--exponent", type=float, default=1.1)
    synth.add_argument("--size-p", dest="size_p", type=float, default=0.25)
    synth.add_argument("--max-size", dest="max_size", type=int, default=20)
    synth.add_argument("--seed", type=int, default=None)
    synth.add_argument("--format", choices=FORMATS, default="tsv")

    compare = commands.add_parser("compare", parents=[common], help="Selection x counting comparison rows.")
    with_input(compare)
    compare.add_argument("--epsilon", type=float, nargs="+", default=None,
                         help="One or more budgets; rows are emitted for each.")
    compare.add_argument("--beta", type=float, default=None)
    compare.add_argument("--ell-max", dest="ell_max", type=int, default=None)
    compare.add_argument("--trials", type=int, default=None)
    compare.add_argument("--seed", type=int, default=None)

    return parser


def _pick(value, fallback):
    return fallback if value is None else value


def _check_trials(trials: int) -> None:
    if trials < 1:
        raise InvalidParameterError(f"--trials must be >= 1, got {trials}")


def _json_line(report: dict, run_config: RunConfig) -> str:
    report = dict(report)
    report["config"] = run_config.to_dict()
    return json.dumps(report, ensure_ascii=False) + "\n"


def _sampling_trial(dataset, ell_max: int, seed: int, trial: int) -> List[int]:
    return list(sampling_count_curve(dataset, ell_max, RandomSource.for_trial(seed, trial)).counts)


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        logger.info(f"Wrote report to '{output}'.")
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def command_stats(args, config: Config) -> str:
    dataset = load_dataset_file(args.input, args.format)
    run_config = RunConfig(command=args.command, input=args.input, format=args.format, output=args.output)
    return _json_line(dataset_stats(dataset).to_dict(), run_config)


def command_count_exact(args, config: Config) -> str:
    dataset = load_dataset_file(args.input, args.format)
    run_config = RunConfig(command=args.command, input=args.input, format=args.format, output=args.output)
    return _json_line({"distinct": distinct_count_exact(dataset)}, run_config)


def command_curve(args, config: Config) -> str:
    dataset = load_dataset_file(args.input, args.format)
    ell_max = _pick(args.ell_max, config.ell_max)
    trials = _pick(args.trials, config.trials)
    seed = _pick(args.seed, config.seed)
    workers = _pick(args.workers, config.workers)
    _check_trials(trials)

    if args.algo == "sampling":
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                runs = list(pool.map(_sampling_trial, [dataset] * trials, [ell_max] * trials,
                                     [seed] * trials, range(trials)))
        else:
            runs = [_sampling_trial(dataset, ell_max, seed, trial)
                    for trial in tqdm(range(trials), desc="sampling", disable=None)]
        counts = [float(mean) for mean in np.mean(np.asarray(runs, dtype=np.float64), axis=0)]
    else:
        counts = list(count_curve(dataset, ell_max, args.algo, RandomSource(seed), workers=workers).counts)

    lines = ["ell,count"] + [f"{ell},{count}" for ell, count in enumerate(counts, start=1)]
    return "\n".join(lines) + "\n"


def command_select_bound(args, config: Config) -> str:
    dataset = load_dataset_file(args.input, args.format)
    params = PrivacyParams(epsilon=_pick(args.epsilon, config.epsilon),
                           beta=_pick(args.beta, config.beta),
                           ell_max=_pick(args.ell_max, config.ell_max))
    seed = _pick(args.seed, config.seed)
    method = SELECTION_FLAGS[args.method]
    ell = select_bound(dataset, method, params, args.algo, RandomSource(seed), workers=config.workers)
    run_config = RunConfig(command=args.command, input=args.input, format=args.format, algorithm=args.algo,
                           method=args.method, epsilon=params.epsilon, beta=params.beta, ell_max=params.ell_max,
                           seed=seed, output=args.output)
    return _json_line({"ell": ell, "private": method in PRIVATE_SELECTIONS}, run_config)


def command_dp_count(args, config: Config) -> str:
    dataset = load_dataset_file(args.input, args.format)
    params = PrivacyParams(epsilon=_pick(args.epsilon, config.epsilon),
                           beta=_pick(args.beta, config.beta),
                           ell_max=_pick(args.ell_max, config.ell_max))
    seed = _pick(args.seed, config.seed)
    trials = _pick(args.trials, config.trials)
    workers = _pick(args.workers, config.workers)
    _check_trials(trials)
    run_config = RunConfig(command=args.command, input=args.input, format=args.format, algorithm=args.algo,
                           epsilon=params.epsilon, beta=params.beta, ell_max=params.ell_max,
                           trials=trials, seed=seed, output=args.output)

    curve = None
    if args.algo != "sampling":
        curve = count_curve(dataset, params.ell_max, args.algo, RandomSource(seed), workers=workers)

    lines = []
    for trial in tqdm(range(trials), desc="dp-count", disable=None):
        rng = RandomSource.for_trial(seed, trial)
        trial_curve = curve if curve is not None else sampling_count_curve(dataset, params.ell_max, rng)
        estimate = release_from_curve(trial_curve, params, rng, args.algo)
        report = estimate.to_dict()
        report["trial"] = trial
        lines.append(_json_line(report, run_config))
    return "".join(lines)


def command_dp_count_fixed(args, config: Config) -> str:
    dataset = load_dataset_file(args.input, args.format)
    epsilon = _pick(args.epsilon, config.epsilon)
    seed = _pick(args.seed, config.seed)
    rng = RandomSource(seed)
    count = count_at(dataset, args.ell, args.algo, rng)
    value = dp_count_fixed_bound(count, args.ell, epsilon, rng)
    run_config = RunConfig(command=args.command, input=args.input, format=args.format, algorithm=args.algo,
                           epsilon=epsilon, beta=args.beta, ell=args.ell, seed=seed, output=args.output)
    report = {"method": args.algo, "ell": args.ell, "epsilon": epsilon, "seed": seed, "nu_hat": value}
    if args.beta is not None:
        report["beta"] = args.beta
        report["lower_bound"] = fixed_bound_lower_bound(value, args.ell, epsilon, args.beta)
    return _json_line(report, run_config)


def command_selftest(args, config: Config) -> str:
    seed = _pick(args.seed, config.seed)
    report = run_selftest(cases=args.cases, seed=seed)
    for mismatch in report.mismatches:
        logger.error(mismatch)
    text = _json_line(report.to_dict(), RunConfig(command=args.command, seed=seed, output=args.output))
    if not report.passed:
        _emit(text, args.output)
        raise SelftestFailure(report.mismatches)
    return text


def command_synth(args, config: Config) -> str:
    dataset = zipf_dataset(args.people, exponent=args.exponent, size_p=args.size_p,
                           max_size=args.max_size, seed=_pick(args.seed, config.seed))
    buffer = io.BytesIO()
    dump_dataset(dataset, buffer, args.format)
    return buffer.getvalue().decode("utf-8")


def command_compare(args, config: Config) -> str:
    dataset = load_dataset_file(args.input, args.format)
    epsilons = args.epsilon or [config.epsilon]
    params = PrivacyParams(epsilon=epsilons[0],
                           beta=_pick(args.beta, config.beta),
                           ell_max=_pick(args.ell_max, config.ell_max))
    seed = _pick(args.seed, config.seed)
    trials = _pick(args.trials, config.trials)
    _check_trials(trials)

    run_configs = {}
    lines = []
    for row in run_comparison(dataset, params, trials, seed, epsilons):
        if row.epsilon not in run_configs:
            run_configs[row.epsilon] = RunConfig(command=args.command, input=args.input, format=args.format,
                                                 epsilon=row.epsilon, beta=params.beta, ell_max=params.ell_max,
                                                 trials=trials, seed=seed, output=args.output)
        lines.append(_json_line(row.to_dict(), run_configs[row.epsilon]))
    return "".join(lines)


COMMANDS = {
    "stats": command_stats,
    "count-exact": command_count_exact,
    "curve": command_curve,
    "select-bound": command_select_bound,
    "dp-count": command_dp_count,
    "dp-count-fixed": command_dp_count_fixed,
    "selftest": command_selftest,
    "synth": command_synth,
    "compare": command_compare,
}


def run(argv: List[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 0 for --help and 2 for usage errors
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        config = Config(args.config)
    except ConfigError as e:
        configure_console_logger(args.log_level or logging.INFO)
        logger.error(str(e))
        return EXIT_USAGE
    configure_console_logger(args.log_level or config.log_level)
    if config.loaded:
        logger.debug(f"Read settings from '{args.config}'.")

    try:
        text = COMMANDS[args.command](args, config)
    except SelftestFailure as e:
        logger.error(str(e))
        return EXIT_SELFTEST
    except InvalidParameterError as e:
        logger.error(str(e))
        return EXIT_USAGE
    except (OSError, DistinctCountError) as e:
        logger.error(str(e))
        return EXIT_FILE_ERROR

    _emit(text, args.output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(run(sys.argv[1:]))
