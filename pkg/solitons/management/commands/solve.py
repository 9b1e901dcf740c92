from ...orlicz import OrliczParams
from ...output import write_outputs
from ...serializers import MaximizerSummarySerializer, SolveSerializer
from ...whitham import to_wave
from ..base import SolitonCommand


class Command(SolitonCommand):
    help = "Compute the constrained maximizer for one alpha; writes the profile (x, f) and a JSON summary."
    serializer_class = SolveSerializer


    def add_command_arguments(self, parser):
        parser.add_argument('--alpha', help="Constraint parameter alpha > 0.")
        self.add_grid_arguments(parser)
        self.add_solver_arguments(parser)
        parser.add_argument('--warm-start', dest='warm_start', help="Profile CSV to start from.")


    def perform(self, config):
        result = self.solve(config)

        # mu and sup phi only exist for physical maximizers
        wave = None
        if result.converged and result.peak_ratio <= 1.0:
            wave = to_wave(result, OrliczParams(config.alpha))

        summary = MaximizerSummarySerializer(result, context={'wave': wave}).data
        stem = self.stem(config, f"solve_alpha_{config.alpha:g}")
        columns = {'x': result.grid.nodes, 'f': result.f.values}
        self.report_written(write_outputs(stem, config.fmt, summary, columns))

        self.stdout.write(
            f"alpha={result.alpha:g} J={result.J:.15g} alphaJ2={result.alpha_j2:.12f} "
            f"f(0)/alpha={result.peak_ratio:.6f} residual={result.residual:.3e} "
            f"iterations={result.iterations} converged={result.converged}"
        )
        if not result.converged:
            self.fail_unconverged(
                f"No convergence for alpha={config.alpha:g} after {result.iterations} iterations "
                f"(residual {result.residual:.3e})."
            )
