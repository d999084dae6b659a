from django.db import models

from .params import VerifyReport


class VerificationRun(models.Model):
    """One stored outcome of ``manage.py pme verify``."""

    check_name = models.CharField(max_length=64, db_index=True)
    params = models.JSONField(default=dict, blank=True)
    value = models.FloatField()
    tolerance = models.FloatField()
    passed = models.BooleanField(default=False)
    seed = models.BigIntegerField(blank=True, null=True)
    n_samples = models.BigIntegerField(blank=True, null=True)
    created_at = models.DateTimeField(auto_now_add=True)

    @classmethod
    def record(cls, report: VerifyReport):
        return cls.objects.create(
            check_name=report.check, params=report.params, value=report.value,
            tolerance=report.tolerance, passed=report.passed,
            seed=report.seed, n_samples=report.n_samples,
        )

    def as_report(self):
        return VerifyReport(check=self.check_name, value=self.value, tolerance=self.tolerance,
                            passed=self.passed, params=self.params, seed=self.seed,
                            n_samples=self.n_samples)

    def __str__(self):
        return f"{self.check_name}: {'pass' if self.passed else 'fail'} ({self.value:.3e})"

    class Meta:
        verbose_name = 'Verification Run'
        verbose_name_plural = 'Verification Runs'
        ordering = ['-created_at', '-id']
