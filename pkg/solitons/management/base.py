from django.core.management.base import BaseCommand, CommandError

from ..exceptions import NonPhysicalMaximizerError, SolitonError, TruncationError, ValidationFailure
from ..maximize import solve_adaptive, solve_max
from ..orlicz import OrliczParams
from ..output import FORMATS, output_stem, read_profile


# exit codes of the CLI
VALIDATION_ERROR = 2
NOT_CONVERGED = 3
FAILURE = 1


class SolitonCommand(BaseCommand):
    """
    Base class of the solitons commands: parses the options, validates them
    with `serializer_class` and maps domain errors onto exit codes.
    """
    serializer_class = None


    def add_arguments(self, parser):
        parser.add_argument('--seed', help="Seed for randomized checks (default from settings).")
        parser.add_argument('--format', choices=FORMATS, help="Output files to write (default both).")
        parser.add_argument('--out', help="Output path or stem (default under SOLITONS_OUTPUT_DIR).")
        self.add_command_arguments(parser)


    def add_command_arguments(self, parser):
        pass


    def add_grid_arguments(self, parser):
        parser.add_argument('--l', help="Domain exponent, L = 2**l, or 'auto' (default).")
        parser.add_argument('--n', help="Number of grid points, a power of two.")


    def add_solver_arguments(self, parser, include_tol=True):
        if include_tol:
            parser.add_argument('--tol', help="Euler-Lagrange residual tolerance.")
        parser.add_argument('--max-iter', dest='max_iter')
        parser.add_argument('--damping')
        parser.add_argument('--anderson-depth', dest='anderson_depth')


    def load_config(self, options):
        """
        Validate the options that belong to the serializer; returns a RunConfig.
        """
        names = self.serializer_class().fields
        data = {name: options[name] for name in names if options.get(name) is not None}
        serializer = self.serializer_class(data=data)
        if not serializer.is_valid():
            raise CommandError(self.format_errors(serializer.errors), returncode=VALIDATION_ERROR)
        return serializer.save()


    def format_errors(self, errors):
        lines = []
        for field, messages in errors.items():
            label = "options" if field == 'non_field_errors' else f"--{field.replace('_', '-')}"
            lines.extend(f"{label}: {message}" for message in messages)
        return "; ".join(lines)


    def handle(self, *args, **options):
        config = self.load_config(options)
        try:
            self.perform(config)
        except ValidationFailure as error:
            raise CommandError(str(error), returncode=VALIDATION_ERROR)
        except (TruncationError, NonPhysicalMaximizerError) as error:
            raise CommandError(str(error), returncode=NOT_CONVERGED)
        except SolitonError as error:
            raise CommandError(str(error), returncode=FAILURE)


    def perform(self, config):
        raise NotImplementedError


    # helpers shared by solve and wave

    def solve(self, config):
        """
        Maximizer for config.alpha on the explicit grid, or on the automatic
        one with domain doubling.
        """
        p = OrliczParams(config.alpha)
        warm = read_profile(config.warm_start) if config.warm_start else None
        cfg = config.solver_config()
        if config.explicit_grid:
            return solve_max(p, config.grid(), cfg, warm=warm)
        return solve_adaptive(p, cfg, grid=config.grid(config.alpha), warm=warm)


    def stem(self, config, default_name):
        return output_stem(config.out, default_name)


    def report_written(self, paths):
        for path in paths:
            self.stdout.write(self.style.SUCCESS(f"Wrote {path}"))


    def fail_unconverged(self, message):
        raise CommandError(message, returncode=NOT_CONVERGED)
