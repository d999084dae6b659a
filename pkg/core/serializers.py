from rest_framework import serializers

from .params import (
    EPDParams, FlightSpec, FracEPDParams, GridSpec, ModelParams, OscillatoryQuadratureSpec,
)

LAW_CHOICES = ('f1', 'f2', 'f3')


class ParamsSerializer(serializers.Serializer):
    """Validates command-line values and builds the matching parameter record.

    ``save()`` returns the record; a DomainError raised while building it is
    reported as a field-independent validation error.
    """

    params_class = None

    def validate(self, attrs):
        self.params_class(**attrs)
        return attrs

    def create(self, validated_data):
        return self.params_class(**validated_data)


class ModelParamsSerializer(ParamsSerializer):
    params_class = ModelParams

    m = serializers.FloatField()
    d = serializers.IntegerField(min_value=1, default=1)


class EPDParamsSerializer(ParamsSerializer):
    params_class = EPDParams

    gamma = serializers.FloatField()
    c = serializers.FloatField(default=1.0)
    d = serializers.IntegerField(min_value=1, default=1)


class FlightSpecSerializer(ParamsSerializer):
    params_class = FlightSpec

    n = serializers.IntegerField(min_value=1)
    d = serializers.IntegerField(min_value=1, default=1)
    law = serializers.ChoiceField(choices=LAW_CHOICES, required=False)
    c = serializers.FloatField(default=1.0)
    t = serializers.FloatField(default=1.0)

    def to_internal_value(self, data):
        attrs = super().to_internal_value(data)
        if not attrs.get('law'):
            attrs['law'] = 'f1' if attrs['d'] == 1 else 'f2'
        return attrs


class FracEPDParamsSerializer(ParamsSerializer):
    params_class = FracEPDParams

    nu = serializers.FloatField()
    gamma = serializers.FloatField()
    c = serializers.FloatField(default=1.0)
    d = serializers.IntegerField(min_value=1, default=1)


class GridSpecSerializer(ParamsSerializer):
    params_class = GridSpec

    L = serializers.FloatField()
    nx = serializers.IntegerField()
    t0 = serializers.FloatField()
    t1 = serializers.FloatField()
    cfl = serializers.FloatField(default=0.4)


class QuadratureSpecSerializer(ParamsSerializer):
    params_class = OscillatoryQuadratureSpec

    dampings = serializers.ListField(child=serializers.FloatField(), required=False, allow_empty=False)
    panel_width = serializers.FloatField(required=False)
    order = serializers.IntegerField(required=False)
    cutoff = serializers.FloatField(required=False, allow_null=True)
    tolerance = serializers.FloatField(required=False)


class VerifyReportSerializer(serializers.Serializer):
    """Output schema of one check: check, params, value, tolerance, pass, seed, n_samples."""

    check = serializers.CharField()
    params = serializers.JSONField()
    value = serializers.FloatField()
    tolerance = serializers.FloatField()
    seed = serializers.IntegerField(allow_null=True)
    n_samples = serializers.IntegerField(allow_null=True)

    def get_fields(self):
        # 'pass' is a keyword, so it cannot be declared as a class attribute.
        fields = {}
        for name, field in super().get_fields().items():
            fields[name] = field
            if name == 'tolerance':
                fields['pass'] = serializers.BooleanField(source='passed')
        return fields
