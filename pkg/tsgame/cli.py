"""
Command-line interface: ``tsgame generate|solve|verify|sweep|reward-sweep``.
"""

import io
import sys
import json
import logging
import argparse

from tsgame import __version__
from tsgame import exceptions
from tsgame.experiments import (
    SweepSpec, run_reward_sweep, run_single, run_sweep, summarize, write_csv,
)
from tsgame.feasibility import is_feasible_profile
from tsgame.helpers import EPS, ensure_schedule
from tsgame.instance_gen import USER_TYPES, GenConfig, generate
from tsgame.model import dump_instance, dumps_instance, load_instance, require_valid
from tsgame.solvers.best_response import DEFAULT_ENUMERATION_CAP
from tsgame.solvers.dynamics import verify_ne
from tsgame.solvers.optimizer import DEFAULT_JOINT_CAP

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_CAP = 3


class ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors with exit code 1 instead of argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, '{0}: error: {1}\n'.format(self.prog, message))


def int_list(text):
    """Parse ``2,4,6`` or an inclusive range ``2:20:2``."""
    try:
        if ':' in text:
            parts = [int(p) for p in text.split(':')]
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else 1
            return tuple(range(start, stop + 1, step))
        return tuple(int(p) for p in text.split(',') if p)
    except ValueError:
        raise argparse.ArgumentTypeError('expected a list like 2,4,6 or 2:20:2')


def float_list(text):
    try:
        return tuple(float(p) for p in text.split(',') if p)
    except ValueError:
        raise argparse.ArgumentTypeError('expected a list like 0.2,0.6,1')


def name_list(text):
    names = tuple(p for p in text.split(',') if p)
    unknown = set(names) - set(USER_TYPES)
    if unknown:
        raise argparse.ArgumentTypeError('unknown user types {0}'.format(sorted(unknown)))
    return names


def user_mix(text):
    """Parse ``walking`` or ``walking=0.5,driving=0.5``."""
    mix = {}
    for part in text.split(','):
        name, _, share = part.partition('=')
        if name not in USER_TYPES:
            raise argparse.ArgumentTypeError('unknown user type {0!r}'.format(name))
        try:
            mix[name] = float(share) if share else 1.0
        except ValueError:
            raise argparse.ArgumentTypeError('bad proportion {0!r}'.format(share))
    return mix


def _write(text, path):
    if path in (None, '-'):
        sys.stdout.write(text)
    else:
        with io.open(path, 'w', encoding='utf-8') as fp:
            fp.write(text)


def _load_valid(path):
    return require_valid(load_instance(path))


PROFILE_SHAPE = 'profile must look like {"profile": [{"user": id, "schedule": [ids]}]}'


def _load_profile(path, inst):
    with io.open(path, 'r', encoding='utf-8') as fp:
        try:
            data = json.load(fp)
        except ValueError as error:
            raise exceptions.InstanceFormatError(
                getattr(error, 'msg', str(error)), line=getattr(error, 'lineno', None))
    try:
        entries = list(data['profile'])
    except (KeyError, TypeError):
        raise exceptions.InstanceFormatError(PROFILE_SHAPE)
    profile = [()] * len(inst.users)
    seen = set()
    for idx, entry in enumerate(entries):
        where = 'profile[{0}]'.format(idx)
        try:
            user_id, schedule = entry['user'], entry['schedule']
        except (KeyError, TypeError):
            raise exceptions.InstanceFormatError(PROFILE_SHAPE, path=where)
        if isinstance(user_id, bool) or not isinstance(user_id, int):
            raise exceptions.InstanceFormatError(
                'user must be an integer id, got {0!r}'.format(user_id), path=where)
        if user_id in seen:
            raise exceptions.InstanceFormatError(
                'user {0} listed twice'.format(user_id), path=where)
        seen.add(user_id)
        try:
            i = inst.user_index(user_id)
        except KeyError:
            raise exceptions.InstanceFormatError(
                'unknown user {0!r}'.format(user_id), path=where)
        if not isinstance(schedule, list) or not all(
                isinstance(k, int) and not isinstance(k, bool) for k in schedule):
            raise exceptions.InstanceFormatError(
                'schedule must be a list of task ids', path=where)
        profile[i] = ensure_schedule(schedule)
    return tuple(profile)


def cmd_generate(args):
    config = GenConfig(
        n_users=args.n_users,
        n_tasks=args.n_tasks,
        user_mix=args.user_type,
        seed=args.seed,
        budget=args.budget,
        availability=args.availability,
    )
    inst = generate(config)
    if args.out in (None, '-'):
        sys.stdout.write(dumps_instance(inst))
    else:
        dump_instance(inst, args.out)
    return EXIT_OK


def cmd_solve(args):
    inst = _load_valid(args.instance)
    report = run_single(
        inst, args.mode,
        enumeration_cap=args.enumeration_cap,
        joint_cap=args.joint_cap,
        max_rounds=args.max_rounds,
    )
    _write(json.dumps(report, indent=2, sort_keys=True) + '\n', args.out)
    return EXIT_OK


def cmd_verify(args):
    inst = _load_valid(args.instance)
    if args.profile is None:
        print('instance ok: {0} tasks, {1} users'.format(len(inst.tasks), len(inst.users)))
        return EXIT_OK
    profile = _load_profile(args.profile, inst)
    if not is_feasible_profile(profile, inst):
        print('profile is infeasible', file=sys.stderr)
        return EXIT_INVALID
    check = verify_ne(inst, profile, args.threshold)
    if check:
        print('profile is a Nash equilibrium')
        return EXIT_OK
    print('profile is not a Nash equilibrium: user {0} gains {1:.6g} by playing {2}'.format(
        check.user, check.gain, list(check.schedule)))
    return EXIT_INVALID


def cmd_sweep(args):
    spec = SweepSpec(
        user_counts=args.users,
        user_types=args.types,
        reps=args.reps,
        seed_base=args.seed_base,
        mode=args.mode,
        n_tasks=args.n_tasks,
        enumeration_cap=args.enumeration_cap,
        joint_cap=args.joint_cap,
        max_rounds=args.max_rounds,
        jobs=args.jobs,
    )
    results = run_sweep(spec)
    write_csv(results, args.out if args.out not in (None, '-') else sys.stdout)
    if args.summary:
        write_csv(summarize(results), args.summary)
    return EXIT_OK


def cmd_reward_sweep(args):
    results = run_reward_sweep(
        rewards=args.rewards, user_counts=args.users, reps=args.reps,
        seed_base=args.seed_base,
    )
    write_csv(results, args.out if args.out not in (None, '-') else sys.stdout)
    if args.summary:
        write_csv(summarize(results, by=('reward', 'n_users'),
                            metrics=['sw_se_norm', 'sw_ne_norm', 'ratio']), args.summary)
    return EXIT_OK


def _add_caps(parser):
    parser.add_argument('--mode', choices=('exact', 'heuristic'), default='exact')
    parser.add_argument('--enumeration-cap', type=int, default=DEFAULT_ENUMERATION_CAP,
                        help='max available tasks per user for exact search')
    parser.add_argument('--joint-cap', type=int, default=DEFAULT_JOINT_CAP,
                        help='max joint search space for exact search')
    parser.add_argument('--max-rounds', type=int, default=100)


def build_parser():
    parser = ArgumentParser(prog='tsgame', description='Task scheduling game solver suite')
    parser.add_argument('--version', action='version', version=__version__)
    parser.add_argument('-v', '--verbose', action='count', default=0)
    parser.add_argument('-q', '--quiet', action='store_true')
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    p = sub.add_parser('generate', help='generate a random instance')
    p.add_argument('--n-users', type=int, default=4)
    p.add_argument('--n-tasks', type=int, default=8)
    p.add_argument('--user-type', type=user_mix, default={'walking': 1.0},
                   help='type name, or a mix like walking=0.5,bike=0.5')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--budget', type=float, default=float('inf'))
    p.add_argument('--availability', type=float, default=1.0)
    p.add_argument('-o', '--out')
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser('solve', help='solve one instance and print a report')
    p.add_argument('instance')
    _add_caps(p)
    p.add_argument('-o', '--out')
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser('verify', help='validate an instance and optionally a profile')
    p.add_argument('instance')
    p.add_argument('--profile')
    p.add_argument('--threshold', type=float, default=EPS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser('sweep', help='welfare and fairness sweep')
    p.add_argument('--users', type=int_list, default=(2, 4, 6))
    p.add_argument('--types', type=name_list, default=('walking', 'bike', 'driving'))
    p.add_argument('--reps', type=int, default=200)
    p.add_argument('--seed-base', type=int, default=0)
    p.add_argument('--n-tasks', type=int, default=5)
    p.add_argument('--jobs', type=int, default=1)
    _add_caps(p)
    p.add_argument('-o', '--out')
    p.add_argument('--summary', help='also write mean/stderr per point here')
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser('reward-sweep', help='one-task welfare study over rewards')
    p.add_argument('--rewards', type=float_list, default=(0.2, 0.4, 0.6, 0.8, 1.0))
    p.add_argument('--users', type=int_list, default=tuple(range(2, 15, 2)))
    p.add_argument('--reps', type=int, default=200)
    p.add_argument('--seed-base', type=int, default=0)
    p.add_argument('-o', '--out')
    p.add_argument('--summary')
    p.set_defaults(func=cmd_reward_sweep)

    return parser


def _configure_logging(args):
    if args.quiet:
        level = logging.ERROR
    else:
        level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')


def main(argv=None):
    """Entry point; returns the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args)
    try:
        return args.func(args)
    except exceptions.ValidationError as error:
        for violation in error.report.violations:
            print('invalid: {0}'.format(violation), file=sys.stderr)
        return EXIT_INVALID
    except exceptions.InstanceFormatError as error:
        print('malformed: {0}'.format(error), file=sys.stderr)
        return EXIT_INVALID
    except (IOError, OSError) as error:
        print('cannot read: {0}'.format(error), file=sys.stderr)
        return EXIT_INVALID
    except exceptions.CapExceededError as error:
        print(str(error), file=sys.stderr)
        return EXIT_CAP
    except exceptions.ConfigError as error:
        print('bad configuration: {0}'.format(error), file=sys.stderr)
        return EXIT_USAGE


def run():
    sys.exit(main())


if __name__ == '__main__':
    run()
