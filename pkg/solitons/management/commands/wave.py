from ...orlicz import OrliczParams
from ...output import write_outputs
from ...serializers import WaveSerializer, WaveSummarySerializer
from ...whitham import to_wave, wave_from_files
from ..base import SolitonCommand


class Command(SolitonCommand):
    help = (
        "Transform a maximizer into a solitary wave of the steady Whitham equation; "
        "writes the profile (x, phi) and the speed, height and residuals."
    )
    serializer_class = WaveSerializer


    def add_command_arguments(self, parser):
        parser.add_argument('--alpha', help="Solve for this alpha first.")
        parser.add_argument('--from', dest='source', help="Output of `solve` (.json, .csv or their stem).")
        self.add_grid_arguments(parser)
        self.add_solver_arguments(parser)


    def perform(self, config):
        if config.source is not None:
            result, wave = wave_from_files(
                config.source.with_suffix('.json'), config.source.with_suffix('.csv'), tol=config.solver_config().tol,
            )
            name = f"{config.source.name}_wave"
        else:
            result = self.solve(config)
            if not result.converged:
                self.fail_unconverged(
                    f"No convergence for alpha={config.alpha:g} (residual {result.residual:.3e}); no wave to report."
                )
            wave = to_wave(result, OrliczParams(config.alpha))
            name = f"wave_alpha_{config.alpha:g}"

        summary = WaveSummarySerializer(result, context={'wave': wave}).data
        columns = {'x': wave.phi.grid.nodes, 'phi': wave.phi.values}
        self.report_written(write_outputs(self.stem(config, name), config.fmt, summary, columns))

        d = wave.diagnostics
        self.stdout.write(
            f"alpha={wave.alpha:g} mu={wave.mu:.12f} sup_phi={d['sup_phi']:.6e} "
            f"steady_residual={d['steady_residual']:.2e} branch_residual={d['branch_residual']:.2e} "
            f"mass_identity_gap={d['mass_identity_gap']:.2e}"
        )
        if d['possible_extreme']:
            self.stdout.write(self.style.WARNING("phi(0) is within round-off of mu / 2: possible extreme wave."))
