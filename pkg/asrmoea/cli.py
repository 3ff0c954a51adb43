"""Command-line entry point: ``asrmoea attack|evaluate|transfer|gen-target``.

Exit status is 0 on success, 1 if some samples or pairs failed, and 2 on a
configuration or input error.
"""
from .audio import load_wav
from .exceptions import ConfigError, NoEligibleTargetError, OracleError
from .harness import (attack_command, evaluate_command, transfer_command,
                      generate_target, parse_binding, TargetTextSpec)
from .oracles import transcribe
from .text import normalize
from .utils import derive_rng, STREAM_TARGET
import argparse
import logging
import os
import sys

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_ERROR = 2

SUMMARY_LABELS = (
    ('rows', 'samples'),
    ('failed', 'failed'),
    ('mean_edit_distance', 'WER (raw edit count)'),
    ('mean_wer', 'WER (normalized)'),
    ('mean_distance_to_target', 'edit distance to target'),
    ('mean_cc', 'CC'),
)

REPORT_COLUMNS = ('original', 'transcript', 'edit_distance', 'wer', 'cc')
MANIFEST_COLUMNS = ('input', 'adversarial_transcript',
                    'distance_to_original', 'cc', 'status')


def build_parser():
    parser = argparse.ArgumentParser(
        prog='asrmoea',
        description="Black-box evolutionary adversarial audio for speech "
                    "recognizers.")
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help="more log output (repeatable)")
    parser.add_argument('-q', '--quiet', action='store_true',
                        help="log errors only")
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    p = sub.add_parser('attack', help="attack one WAV file or a directory")
    p.add_argument('--config', required=True, help="JSON run configuration")
    p.add_argument('--input', required=True, help="WAV file or directory")
    p.add_argument('--out', required=True, help="output directory")
    p.add_argument('--jobs', type=int, default=1,
                   help="samples attacked concurrently (default 1)")

    p = sub.add_parser('evaluate', help="transcribe and score WAV pairs")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument('--manifest', help="manifest written by 'attack'")
    source.add_argument('--pairs',
                        help="CSV with original,adversarial,reference")
    p.add_argument('--oracle', required=True,
                   help="'toy', inline JSON, or a JSON binding/config file")
    p.add_argument('--baseline', action='store_true',
                   help="transcribe the originals instead")
    p.add_argument('--report', help="write the report as JSON")

    p = sub.add_parser('transfer',
                       help="test adversarial samples on another oracle")
    p.add_argument('--manifest', required=True)
    p.add_argument('--oracle', required=True)
    p.add_argument('--report', help="write the report as JSON")

    p = sub.add_parser('gen-target', help="draw a target phrase")
    p.add_argument('--corpus', required=True, help="phrase file")
    p.add_argument('--reference', required=True,
                   help="reference WAV, text file or literal text")
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--oracle',
                   help="oracle transcribing a WAV reference")
    return parser


def configure_logging(verbose, quiet):
    if quiet:
        level = logging.ERROR
    elif verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level,
                        format="%(asctime)s %(levelname)s %(name)s: "
                               "%(message)s")


def format_summary(summary):
    lines = []
    for key, label in SUMMARY_LABELS:
        if key not in summary:
            continue
        value = summary[key]
        if value is None:
            text = 'n/a'
        elif isinstance(value, float):
            text = '{:.4f}'.format(value)
        else:
            text = str(value)
        lines.append('{:<26}{}'.format(label + ':', text))
    return '\n'.join(lines)


def print_report(report, columns, out):
    if len(report):
        print(report.entries[list(columns)].to_string(index=False), file=out)
    print(format_summary(report.summary()), file=out)


def reference_length(args):
    ref = args.reference
    if ref.lower().endswith('.wav'):
        if args.oracle is None:
            raise ConfigError("--oracle is needed to transcribe {}"
                              .format(ref))
        return len(transcribe(load_wav(ref), parse_binding(args.oracle)))
    if os.path.isfile(ref):
        with open(ref, encoding='utf-8') as f:
            ref = f.read()
    return len(normalize(ref))


def run(args, out):
    if args.command == 'attack':
        report = attack_command(args.config, args.input, args.out, args.jobs)
        print_report(report, MANIFEST_COLUMNS, out)
    elif args.command in ('evaluate', 'transfer'):
        if args.command == 'evaluate':
            source = args.manifest or args.pairs
            report = evaluate_command(source, args.oracle, args.baseline)
        else:
            report = transfer_command(args.manifest, args.oracle)
        print_report(report, REPORT_COLUMNS, out)
        if args.report:
            report.to_json(args.report)
    else:
        spec = TargetTextSpec(args.corpus, reference_length(args))
        target = generate_target(spec, derive_rng(args.seed, STREAM_TARGET))
        print(target.text, file=out)
        return EXIT_OK
    return EXIT_PARTIAL if report.failures else EXIT_OK


def main(argv=None, out=None):
    """Run the command line; return the exit status."""
    if out is None:
        out = sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    try:
        return run(args, out)
    except (ValueError, NoEligibleTargetError, OSError, OracleError) as e:
        log.error("%s", e)
        print("error: {}".format(e), file=sys.stderr)
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
