import argparse
import logging
import sys

l = logging.getLogger("hdl.main")

EXIT_OK, EXIT_VERIFICATION, EXIT_USAGE = 0, 1, 2


def build_parser():
    parser = argparse.ArgumentParser(prog="hdl", description="Heatmap decoding lab: soft-argmax bias, gradients and localization experiments.")
    sub = parser.add_subparsers(dest="command", metavar="subcommand")
    sub.required = True
    for name, experiment in sorted(EXPERIMENTS.items()):
        p = sub.add_parser(name, help=(experiment.__doc__ or "").strip().split("\n")[0])
        p.add_argument("--config", help="YAML run configuration")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=int)
        p.add_argument("--beta", type=float)
        p.add_argument("--threads", type=int, help="worker threads (default: $HDL_THREADS or 1)")
        p.add_argument("--set", dest="overrides", action="append", default=[ ], metavar="KEY=VALUE", help="override a config key (repeatable)")
        p.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def collect_overrides(args):
    overrides = { }
    for text in args.overrides:
        key, value = parse_override(text)
        overrides[key] = value
    for key in ("out", "seed", "beta", "threads"):
        value = getattr(args, key)
        if value is not None:
            overrides[key] = value
    return overrides


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=(logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)],
        format="%(levelname)s | %(name)s | %(message)s",
    )
    experiment = EXPERIMENTS[args.command]
    try:
        config = load(experiment.CONFIG, args.config, collect_overrides(args))
        experiment(config).fire()
    except VerificationError as e:
        print("hdl %s: verification failed: %s" % (args.command, e), file=sys.stderr)
        return EXIT_VERIFICATION
    except (ConfigError, RecordError, HeatmapError) as e:
        print("hdl %s: %s" % (args.command, e), file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print("hdl %s: %s" % (args.command, e), file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


from .config import load, parse_override
from .errors import ConfigError, HeatmapError, RecordError, VerificationError
from .experiments import EXPERIMENTS

if __name__ == "__main__":
    sys.exit(main())
