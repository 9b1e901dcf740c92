from ...kernel import HALF_EXPONENT, WHITHAM_EXPONENT, alpha0_upper_bound, kernel_lp_norm, kernel_mass, kernel_table
from ...output import write_outputs
from ...serializers import KernelSerializer, KernelSummarySerializer
from ..base import SolitonCommand


class Command(SolitonCommand):
    help = "Tabulate K_{1/2} and K_{1/4} in real space (the singular origin is left out)."
    serializer_class = KernelSerializer


    def add_command_arguments(self, parser):
        self.add_grid_arguments(parser)


    def perform(self, config):
        grid = config.grid()
        half = kernel_table(grid, WHITHAM_EXPONENT)
        quarter = kernel_table(grid, HALF_EXPONENT)
        k_norm = kernel_lp_norm(half, 1.5)

        summary = KernelSummarySerializer({
            'l': grid.l,
            'n': grid.n,
            'mass_half': kernel_mass(half),
            'mass_quarter': kernel_mass(quarter),
            'k_norm': k_norm,
            'alpha0_bound': alpha0_upper_bound(k_norm),
        }).data
        columns = {'x': half.nodes, 'K_half': half.samples, 'K_quarter': quarter.samples}
        self.report_written(write_outputs(self.stem(config, f"kernel_l{grid.l}_n{grid.n}"), config.fmt, summary, columns))

        self.stdout.write(
            f"mass K_1/2={summary['mass_half']:.12f} mass K_1/4={summary['mass_quarter']:.12f} "
            f"||K||_3/2={k_norm:.6f} alpha_0 bound={summary['alpha0_bound']:.4f}"
        )
