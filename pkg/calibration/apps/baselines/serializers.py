from rest_framework import serializers

from ..core.exceptions import CalibrationException
from ..core.serializers import ArrayField
from .models import HistogramBinningModel, IsotonicModel


class BaselineSerializer(serializers.Serializer):
    model_class = None

    def create(self, validated_data):
        validated_data.pop('type')
        try:
            return self.model_class(**validated_data)
        except CalibrationException as error:
            raise serializers.ValidationError(error.detail)


class HistogramBinningModelSerializer(BaselineSerializer):
    """ ``{"type": "histbin", "M": int, "bin_accuracy": [...], "fallback": float}``"""
    type = serializers.ChoiceField(choices=['histbin'])
    M = serializers.IntegerField(min_value=1)
    bin_accuracy = ArrayField()
    fallback = serializers.FloatField(min_value=0.0, max_value=1.0)

    model_class = HistogramBinningModel

    def to_representation(self, instance):
        return {
            'type': 'histbin',
            'M': instance.M,
            'bin_accuracy': instance.bin_accuracy.tolist(),
            'fallback': instance.fallback,
        }


class IsotonicModelSerializer(BaselineSerializer):
    """ ``{"type": "isotonic", "breakpoints": [...], "values": [...]}``"""
    type = serializers.ChoiceField(choices=['isotonic'])
    breakpoints = ArrayField()
    values = ArrayField()

    model_class = IsotonicModel

    def to_representation(self, instance):
        return {
            'type': 'isotonic',
            'breakpoints': instance.breakpoints.tolist(),
            'values': instance.values.tolist(),
        }
