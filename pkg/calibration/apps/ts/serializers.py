import math

from rest_framework import serializers

from .models import TemperatureModel


class TemperatureModelSerializer(serializers.Serializer):
    """ Serializes a fitted TemperatureModel as ``{"type": "ts", ...}``."""
    type = serializers.ChoiceField(choices=['ts'])
    T = serializers.FloatField(min_value=0.0)
    t_min = serializers.FloatField(min_value=0.0)
    t_max = serializers.FloatField(min_value=0.0)
    nll_at_T = serializers.FloatField(required=False)
    converged = serializers.BooleanField(required=False, default=True)

    def to_representation(self, instance):
        data = {
            'type': 'ts',
            'T': instance.T,
            't_min': instance.t_min,
            't_max': instance.t_max,
            'converged': instance.converged,
        }
        if math.isfinite(instance.nll_at_T):
            data['nll_at_T'] = instance.nll_at_T
        return data

    def validate(self, data):
        if not 0 < data['t_min'] < data['t_max']:
            raise serializers.ValidationError('Bounds must satisfy 0 < t_min < t_max.')
        if not data['t_min'] <= data['T'] <= data['t_max']:
            raise serializers.ValidationError('T must lie in [t_min, t_max].')
        return data

    def create(self, validated_data):
        validated_data.pop('type')
        return TemperatureModel(**validated_data)
