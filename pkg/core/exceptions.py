from django.core.exceptions import ValidationError


class DomainError(ValidationError):
    """Argument outside the mathematical domain of an evaluator or sampler."""


class PoleError(DomainError):
    pass


class GridError(DomainError):
    """Grid or stencil unusable for the requested operation."""


class AccuracyWarning(UserWarning):
    """Result computed outside its supported accuracy window."""
