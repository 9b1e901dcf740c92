from ...output import write_outputs
from ...serializers import ThresholdReportSerializer, ThresholdSerializer
from ...sweep import estimate_alpha0
from ..base import SolitonCommand


class Command(SolitonCommand):
    help = "Bracket the threshold alpha_0 above which the maximizers stay below alpha at the origin."
    serializer_class = ThresholdSerializer


    def add_command_arguments(self, parser):
        parser.add_argument('--lo', help="Lower end of the starting bracket.")
        parser.add_argument('--hi', help="Upper end of the starting bracket.")
        parser.add_argument('--tol', help="Bracket width to stop at (default 0.05).")
        parser.add_argument('--solver-tol', dest='solver_tol', help="Euler-Lagrange residual tolerance.")
        parser.add_argument('--delta', help="Relative peak margin of the predicate (default 1e-6).")
        self.add_grid_arguments(parser)
        self.add_solver_arguments(parser, include_tol=False)


    def perform(self, config):
        grid = config.grid() if config.explicit_grid else None
        estimate = estimate_alpha0(
            config.lo, config.hi, config.width, grid=grid, cfg=config.solver_config(), delta=config.delta,
        )

        report = ThresholdReportSerializer(estimate).data
        evaluations = estimate.evaluations
        columns = {
            'alpha': [e.alpha for e in evaluations],
            'peak_ratio': [float('nan') if e.peak_ratio is None else e.peak_ratio for e in evaluations],
            'converged': [1.0 if e.converged else 0.0 for e in evaluations],
            'below_alpha': [1.0 if e.below_alpha else 0.0 for e in evaluations],
        }
        self.report_written(write_outputs(self.stem(config, 'threshold'), config.fmt, report, columns))

        self.stdout.write(
            f"alpha_0 in [{estimate.lo:.6f}, {estimate.hi:.6f}] (width {estimate.width:.3g}, "
            f"{len(evaluations)} solves, a-priori bound {report['upper_bound']:.4f})"
        )
        if estimate.extreme_gap is not None:
            self.stdout.write(f"mu/2 - phi(0) at the upper end: {estimate.extreme_gap:.3e}")
