from dataclasses import dataclass
from pathlib import Path
import math

from rest_framework import serializers

from .conf import solver_setting
from .exceptions import GridError
from .grid import Grid, MIN_POINTS, grid_for_alpha
from .kernel import alpha0_upper_bound
from .maximize import SolverConfig
from .output import BOTH, FORMATS
from .verify import SUITES


@dataclass(frozen=True)
class RunConfig:
    """
    Validated options of one CLI run. Grid fields left as None mean the
    automatic choice (l) or the configured default (n).
    """

    command: str
    seed: int = 0
    fmt: str = BOTH
    out: Path = None
    alpha: float = None
    l: int = None
    n: int = None
    tol: float = None
    max_iter: int = None
    damping: float = None
    anderson_depth: int = None
    warm_start: Path = None
    alpha_min: float = None
    alpha_max: float = None
    steps: int = None
    spacing: str = 'log'
    cold: bool = False
    workers: int = 1
    lo: float = None
    hi: float = None
    width: float = None
    delta: float = None
    source: Path = None
    suite: str = None

    def grid(self, alpha=None):
        """
        The explicit grid, or grid_for_alpha(alpha) when l is automatic.
        """
        max_n = solver_setting('MAX_N')
        if self.l is None and alpha is not None:
            auto = grid_for_alpha(alpha, max_n=max_n)
            return auto if self.n is None else Grid(l=auto.l, n=self.n)
        l = solver_setting('DEFAULT_L') if self.l is None else self.l
        return Grid(l=l, n=self.n or solver_setting('DEFAULT_N'))

    @property
    def explicit_grid(self):
        return self.l is not None

    def solver_config(self):
        overrides = {
            'tol': self.tol,
            'max_iter': self.max_iter,
            'damping': self.damping,
            'anderson_depth': self.anderson_depth,
        }
        if self.damping is not None:
            overrides['damping_floor'] = min(solver_setting('DAMPING_FLOOR'), self.damping)
        return SolverConfig.from_settings(**overrides)


def _positive_finite(value, name):
    if not (math.isfinite(value) and value > 0):
        raise serializers.ValidationError(f"{name} must be a positive finite number.")
    return value


# strict JSON has no inf or nan
class FiniteFloatField(serializers.FloatField):

    def to_representation(self, value):
        value = super().to_representation(value)
        return value if math.isfinite(value) else None


# INPUT SERIALIZERS

# options every command takes
class RunSerializer(serializers.Serializer):
    """
    Base serializer; save() returns a RunConfig for `command`.
    """
    command = None

    seed = serializers.IntegerField(min_value=0, default=lambda: solver_setting('SEED'))
    format = serializers.ChoiceField(choices=FORMATS, default=BOTH)
    out = serializers.CharField(required=False, allow_null=True, default=None)


    def validate_out(self, value):
        return Path(value) if value else None


    def create(self, validated_data):
        data = dict(validated_data)
        data['fmt'] = data.pop('format')
        return RunConfig(command=self.command, **data)


# grid options: --l auto|<int>, --n <power of two>
class GridSerializer(RunSerializer):
    l = serializers.CharField(default='auto')
    n = serializers.IntegerField(required=False, allow_null=True, min_value=MIN_POINTS)


    def validate_l(self, value):
        """
        'auto' becomes None; anything else must be an integer >= 0.
        """
        if str(value).strip().lower() == 'auto':
            return None
        try:
            l = int(value)
        except (TypeError, ValueError):
            raise serializers.ValidationError("l must be 'auto' or an integer >= 0.")
        if l < 0:
            raise serializers.ValidationError("l must be >= 0.")
        return l


    def validate_n(self, value):
        if value is None:
            return value
        if value & (value - 1):
            raise serializers.ValidationError("n must be a power of two.")
        if value > solver_setting('MAX_N'):
            raise serializers.ValidationError(f"n must be at most {solver_setting('MAX_N')}.")
        return value


    def validate(self, data):
        if data.get('l') is not None:
            try:
                Grid(l=data['l'], n=data.get('n') or solver_setting('DEFAULT_N'))
            except GridError as error:
                raise serializers.ValidationError(str(error))
        return data


# solver options shared by solve, sweep, threshold and wave
class SolverSerializer(GridSerializer):
    tol = serializers.FloatField(required=False, allow_null=True)
    max_iter = serializers.IntegerField(required=False, allow_null=True, min_value=1)
    damping = serializers.FloatField(required=False, allow_null=True)
    anderson_depth = serializers.IntegerField(required=False, allow_null=True, min_value=0)


    def validate_tol(self, value):
        return value if value is None else _positive_finite(value, "tol")


    def validate_damping(self, value):
        if value is not None and not 0 < value <= 1:
            raise serializers.ValidationError("damping must lie in (0, 1].")
        return value


class SolveSerializer(SolverSerializer):
    """
    Options of `solve`.
    """
    command = 'solve'

    alpha = serializers.FloatField()
    warm_start = serializers.CharField(required=False, allow_null=True)


    def validate_alpha(self, value):
        return _positive_finite(value, "alpha")


    def validate_warm_start(self, value):
        if not value:
            return None
        path = Path(value)
        if not path.is_file():
            raise serializers.ValidationError(f"{path} does not exist.")
        return path


class SweepSerializer(SolverSerializer):
    """
    Options of `sweep`.
    """
    command = 'sweep'

    alpha_min = serializers.FloatField()
    alpha_max = serializers.FloatField()
    steps = serializers.IntegerField(min_value=1, default=8)
    spacing = serializers.ChoiceField(choices=('log', 'linear'), default='log')
    cold = serializers.BooleanField(default=False)
    workers = serializers.IntegerField(min_value=1, default=1)


    def validate_alpha_min(self, value):
        return _positive_finite(value, "alpha_min")


    def validate_alpha_max(self, value):
        return _positive_finite(value, "alpha_max")


    def validate(self, data):
        data = super().validate(data)
        if data['alpha_min'] > data['alpha_max']:
            raise serializers.ValidationError("alpha_min must not exceed alpha_max.")
        if data['alpha_min'] == data['alpha_max'] and data['steps'] > 1:
            raise serializers.ValidationError("alpha_min = alpha_max allows a single step only.")
        if data['workers'] > 1 and not data['cold']:
            raise serializers.ValidationError("Parallel workers need --cold; warm continuation is sequential.")
        return data


class ThresholdSerializer(SolverSerializer):
    """
    Options of `threshold`. Here `tol` is the bracket width and
    `solver_tol` the Euler-Lagrange tolerance.
    """
    command = 'threshold'

    lo = serializers.FloatField()
    hi = serializers.FloatField()
    tol = serializers.FloatField(default=0.05)
    solver_tol = serializers.FloatField(required=False, allow_null=True)
    delta = serializers.FloatField(default=1e-6)


    def validate_lo(self, value):
        return _positive_finite(value, "lo")


    def validate_hi(self, value):
        return _positive_finite(value, "hi")


    def validate_solver_tol(self, value):
        return value if value is None else _positive_finite(value, "solver_tol")


    def validate_delta(self, value):
        if not 0 <= value < 1:
            raise serializers.ValidationError("delta must lie in [0, 1).")
        return value


    def validate(self, data):
        data = super().validate(data)
        if data['lo'] >= data['hi']:
            raise serializers.ValidationError("lo must be smaller than hi.")
        return data


    def create(self, validated_data):
        data = dict(validated_data)
        data['width'] = data.pop('tol')
        data['tol'] = data.pop('solver_tol', None)
        return super().create(data)


class WaveSerializer(SolverSerializer):
    """
    Options of `wave`: either --alpha or --from a solve output.
    """
    command = 'wave'

    alpha = serializers.FloatField(required=False, allow_null=True)
    source = serializers.CharField(required=False, allow_null=True)


    def validate_alpha(self, value):
        return value if value is None else _positive_finite(value, "alpha")


    def validate_source(self, value):
        """
        A solve output given by its .json, its .csv or their common stem;
        both files must exist.
        """
        if not value:
            return None
        path = Path(value)
        stem = path.with_suffix('') if path.suffix in ('.json', '.csv') else path
        missing = [str(p) for p in (stem.with_suffix('.json'), stem.with_suffix('.csv')) if not p.is_file()]
        if missing:
            raise serializers.ValidationError(f"Missing solve output: {', '.join(missing)}.")
        return stem


    def validate(self, data):
        data = super().validate(data)
        if (data.get('alpha') is None) == (data.get('source') is None):
            raise serializers.ValidationError("Give exactly one of --alpha and --from.")
        return data


class KernelSerializer(GridSerializer):
    command = 'kernel'


class VerifySerializer(RunSerializer):
    command = 'verify'

    suite = serializers.CharField(default='all')


    def validate_suite(self, value):
        if value != 'all' and value not in SUITES:
            choices = ', '.join((*SUITES, 'all'))
            raise serializers.ValidationError(f"Unknown suite '{value}'; choose one of {choices}.")
        return value


# reads back the JSON written by `solve`
class StoredSummarySerializer(serializers.Serializer):
    alpha = serializers.FloatField()
    converged = serializers.BooleanField()
    iterations = serializers.IntegerField(min_value=0, default=0)


    def validate_alpha(self, value):
        return _positive_finite(value, "alpha")


# RESULT SERIALIZERS (read-only)

class MaximizerSummarySerializer(serializers.Serializer):
    """
    Summary of one maximizer; pass the SolitaryWave (if any) as
    context['wave'] to fill mu and sup_phi.
    """
    alpha = serializers.FloatField()
    J = serializers.FloatField()
    alphaJ2 = serializers.FloatField(source='alpha_j2')
    pairing = serializers.FloatField()
    peak_ratio = serializers.FloatField()
    residual = serializers.FloatField()
    iterations = serializers.IntegerField()
    converged = serializers.BooleanField()
    mu = serializers.SerializerMethodField()
    sup_phi = serializers.SerializerMethodField()
    l = serializers.IntegerField(source='grid.l')
    n = serializers.IntegerField(source='grid.n')
    l1_norm = serializers.FloatField()
    l3_cubed = serializers.FloatField()
    moment = serializers.FloatField()
    tail_ratio = FiniteFloatField()


    def get_mu(self, result):
        wave = self.context.get('wave')
        return None if wave is None else float(wave.mu)


    def get_sup_phi(self, result):
        wave = self.context.get('wave')
        return None if wave is None else float(wave.diagnostics['sup_phi'])


class WaveSummarySerializer(MaximizerSummarySerializer):
    """
    Maximizer summary plus the identities checked on the transformed wave.
    """
    diagnostics = serializers.SerializerMethodField()


    def get_diagnostics(self, result):
        wave = self.context['wave']
        return {
            key: value if isinstance(value, bool) else float(value)
            for key, value in wave.diagnostics.items()
        }


class SweepRowSerializer(serializers.Serializer):
    alpha = serializers.FloatField()
    J = serializers.FloatField(allow_null=True)
    alphaJ2 = serializers.FloatField(allow_null=True)
    peak_ratio = serializers.FloatField(allow_null=True)
    mu = serializers.FloatField(allow_null=True)
    converged = serializers.BooleanField()
    status = serializers.CharField()
    residual = serializers.FloatField(allow_null=True)
    iterations = serializers.IntegerField()
    l = serializers.IntegerField(allow_null=True)
    n = serializers.IntegerField(allow_null=True)
    message = serializers.CharField(allow_blank=True)


class BranchSummarySerializer(serializers.Serializer):
    rows = serializers.IntegerField()
    converged_rows = serializers.IntegerField()
    monotone = serializers.BooleanField()
    min_alphaJ2 = serializers.FloatField(allow_null=True)
    max_alphaJ2 = serializers.FloatField(allow_null=True)
    below_cap = serializers.BooleanField()
    in_window = serializers.BooleanField()
    max_step = serializers.FloatField()
    mu_decreasing = serializers.BooleanField()
    min_profile_gap = serializers.FloatField(allow_null=True)
    flagged = serializers.BooleanField()


class SweepReportSerializer(serializers.Serializer):
    """
    Instance: {'rows': [...], 'branch': BranchSummary, 'sup_phi_exponent': float or None}.
    """
    rows = SweepRowSerializer(many=True)
    branch = BranchSummarySerializer()
    sup_phi_exponent = serializers.FloatField(allow_null=True)


class ThresholdEvaluationSerializer(serializers.Serializer):
    alpha = serializers.FloatField()
    peak_ratio = serializers.FloatField(allow_null=True)
    converged = serializers.BooleanField()
    below_alpha = serializers.BooleanField()


class ThresholdReportSerializer(serializers.Serializer):
    lo = serializers.FloatField()
    hi = serializers.FloatField()
    width = serializers.FloatField()
    delta = serializers.FloatField()
    extreme_gap = serializers.FloatField(allow_null=True)
    upper_bound = serializers.SerializerMethodField()
    evaluations = ThresholdEvaluationSerializer(many=True)


    # the a-priori bound alpha_0 < (3/2)^(4/3) (2/pi + 1)^(2/3)
    def get_upper_bound(self, estimate):
        return alpha0_upper_bound()


class KernelSummarySerializer(serializers.Serializer):
    l = serializers.IntegerField()
    n = serializers.IntegerField()
    mass_half = serializers.FloatField()
    mass_quarter = serializers.FloatField()
    k_norm = serializers.FloatField()
    alpha0_bound = serializers.FloatField()


class CheckRowSerializer(serializers.Serializer):
    suite = serializers.CharField()
    name = serializers.CharField()
    value = FiniteFloatField(allow_null=True)
    bound = FiniteFloatField(allow_null=True)
    passed = serializers.BooleanField()


class VerifyReportSerializer(serializers.Serializer):
    suite = serializers.CharField()
    seed = serializers.IntegerField()
    passed = serializers.BooleanField()
    checks = CheckRowSerializer(many=True)
