import math

from ...output import write_outputs
from ...serializers import SweepReportSerializer, SweepSerializer
from ...sweep import CONVERGED, NON_PHYSICAL, alpha_sweep, branch_summary, fit_exponent, linear_alphas, log_alphas
from ..base import SolitonCommand


def _number(value):
    return math.nan if value is None else value


class Command(SolitonCommand):
    help = "Continue the maximizers over a range of alpha and check the branch alpha J^2."
    serializer_class = SweepSerializer


    def add_command_arguments(self, parser):
        parser.add_argument('--alpha-min', dest='alpha_min')
        parser.add_argument('--alpha-max', dest='alpha_max')
        parser.add_argument('--steps', help="Number of alpha values (default 8).")
        parser.add_argument('--spacing', choices=('log', 'linear'), help="Spacing of the alpha values (default log).")
        parser.add_argument('--cold', action='store_true', help="Solve every alpha from the initial bump.")
        parser.add_argument('--workers', help="Processes for --cold sweeps (default 1).")
        self.add_grid_arguments(parser)
        self.add_solver_arguments(parser)


    def perform(self, config):
        spaced = log_alphas if config.spacing == 'log' else linear_alphas
        alphas = spaced(config.alpha_min, config.alpha_max, config.steps)
        grid = config.grid() if config.explicit_grid else None
        rows = alpha_sweep(alphas, grid, config.solver_config(), cold=config.cold, workers=config.workers)
        summary = branch_summary(rows)

        physical = [row for row in rows if row.status == CONVERGED]
        exponent = None
        if len(physical) >= 2:
            exponent = fit_exponent([row.alpha for row in physical], [row.wave.diagnostics['sup_phi'] for row in physical])

        report = SweepReportSerializer({'rows': rows, 'branch': summary, 'sup_phi_exponent': exponent}).data
        columns = {
            'alpha': [row.alpha for row in rows],
            'J': [_number(row.J) for row in rows],
            'alphaJ2': [_number(row.alphaJ2) for row in rows],
            'peak_ratio': [_number(row.peak_ratio) for row in rows],
            'mu': [_number(row.mu) for row in rows],
            'converged': [1.0 if row.converged else 0.0 for row in rows],
        }
        self.report_written(write_outputs(self.stem(config, 'sweep'), config.fmt, report, columns))

        for row in rows:
            line = f"alpha={row.alpha:<12.6g} alphaJ2={_number(row.alphaJ2):.12f} status={row.status}"
            self.stdout.write(line if row.status == CONVERGED else self.style.WARNING(line))
        if summary.flagged:
            self.stdout.write(self.style.ERROR("alpha J^2 is not strictly decreasing across the converged rows."))

        unresolved = [row.alpha for row in rows if row.status not in (CONVERGED, NON_PHYSICAL)]
        if unresolved:
            self.fail_unconverged(f"{len(unresolved)} of {len(rows)} rows did not converge: {unresolved}")
