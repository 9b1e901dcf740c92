from django.core.management.base import CommandError

from ...output import BOTH, JSON, write_summary_json
from ...serializers import VerifyReportSerializer, VerifySerializer
from ...verify import verify
from ..base import FAILURE, SolitonCommand


class Command(SolitonCommand):
    help = "Run the named property suite (kernel, orlicz, rearrange, maximize, sweep, whitham or all)."
    serializer_class = VerifySerializer


    def add_command_arguments(self, parser):
        parser.add_argument('--suite', help="Suite to run (default all).")


    def perform(self, config):
        report = verify(config.suite, seed=config.seed)

        # the report is not tabular, so it is only ever written as JSON
        if config.fmt in (JSON, BOTH):
            path = write_summary_json(
                self.stem(config, f"verify_{config.suite}").with_suffix('.json'),
                VerifyReportSerializer(report).data,
            )
            self.report_written([path])

        for check in report.checks:
            line = f"[{check.suite}] {check.name}: value={check.value!r} bound={check.bound!r}"
            self.stdout.write(self.style.SUCCESS(f"PASS {line}") if check.passed else self.style.ERROR(f"FAIL {line}"))

        failures = report.failures
        if failures:
            raise CommandError(f"{len(failures)} of {len(report.checks)} checks failed.", returncode=FAILURE)
        self.stdout.write(self.style.SUCCESS(f"All {len(report.checks)} checks passed."))
