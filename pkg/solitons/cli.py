"""
Single entry point returning an exit code: 0 success, 1 failed checks,
2 invalid input, 3 no convergence.
"""

import os
import sys

from django.core.management import execute_from_command_line


COMMANDS = ('solve', 'sweep', 'threshold', 'wave', 'kernel', 'verify')

USAGE = "usage: {prog} {{{commands}}} [options]\nRun '{prog} <command> --help' for the options of a command.\n"


def run(argv=None, prog='manage.py'):
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] not in COMMANDS:
        sys.stderr.write(USAGE.format(prog=prog, commands=','.join(COMMANDS)))
        return 2

    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')
    try:
        execute_from_command_line([prog, *argv])
    except SystemExit as error:
        if error.code is None:
            return 0
        return error.code if isinstance(error.code, int) else 1
    return 0
