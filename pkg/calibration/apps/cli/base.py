import sys

from django.core.management.base import BaseCommand, CommandError

from ..core.exceptions import InvalidConfig, core_exception_handler
from ..core.utils import mdts_setting
from .models import RunConfig

COMMON_ARGUMENTS = {
    'data': (('--data',), {'metavar': 'DIR', 'required': True,
                           'help': 'Dataset directory or manifest file.'}),
    'out': (('--out',), {'metavar': 'DIR', 'required': True,
                         'help': 'Directory the command writes into.'}),
    'model': (('--model',), {'metavar': 'FILE', 'required': True,
                             'help': 'Fitted calibrator file, or "msp".'}),
    'bins': (('--bins',), {'metavar': 'M', 'type': int, 'default': None,
                           'help': 'Number of ECE bins.'}),
    'seed': (('--seed',), {'metavar': 'N', 'type': int, 'default': 0}),
    'split_seed': (('--split-seed',), {'metavar': 'N', 'type': int, 'default': 0,
                                       'help': 'Seed of the calibration/evaluation split.'}),
}


class CalibrationCommand(BaseCommand):
    """
    Base of the toolkit's subcommands.

    Subclasses list the shared flags they take in ``common`` and implement
    ``run``. Toolkit exceptions leave as CommandError with the exit code
    of their class; argument errors exit 1.
    """
    common = ()
    requires_system_checks = []

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser.called_from_command_line = False
        self.usage = parser.format_usage()
        return parser

    def run_from_argv(self, argv):
        # argument errors surface before BaseCommand.run_from_argv handles errors
        parser = self.create_parser(argv[0], argv[1])
        try:
            parser.parse_args(argv[2:])
        except CommandError as exc:
            self.stderr.write('%s%s' % (self.usage, exc))
            sys.exit(1)
        super().run_from_argv(argv)

    def add_arguments(self, parser):
        for name in self.common:
            flags, kwargs = COMMON_ARGUMENTS[name]
            parser.add_argument(*flags, **kwargs)
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def handle(self, *args, **options):
        try:
            bins = options.get('bins')
            options['bins'] = mdts_setting('BINS') if bins is None else bins
            self.config = RunConfig(
                command=self.__module__.rsplit('.', 1)[-1],
                data=options.get('data'), model=options.get('model'),
                bins=options['bins'], seed=options.get('seed', 0),
                split_seed=options.get('split_seed', 0),
                out=options.get('out')).validate()
            self.run(options)
        except Exception as exc:
            error = core_exception_handler(exc)
            if error is None:
                raise
            if isinstance(exc, InvalidConfig):
                self.stderr.write(self.usage)
            raise error from exc

    def run(self, options):
        raise NotImplementedError

    def success(self, message):
        self.stdout.write(self.style.SUCCESS(message))
