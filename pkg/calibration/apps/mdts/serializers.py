from rest_framework import serializers

from ..core.exceptions import CalibrationException
from ..regress.serializers import FittedRegressorSerializer
from .models import MdtsModel


class MdtsModelSerializer(serializers.Serializer):
    """ Serializes a fitted MdtsModel as ``{"type": "mdts", ...}``."""
    type = serializers.ChoiceField(choices=['mdts'])
    clamp = serializers.ListField(
        child=serializers.FloatField(min_value=0.0), min_length=2, max_length=2)
    per_domain_T = serializers.DictField(child=serializers.FloatField(min_value=0.0))
    regressor = FittedRegressorSerializer()
    num_classes = serializers.IntegerField(min_value=1)
    embedding_dim = serializers.IntegerField(min_value=1)
    domain_weighting = serializers.BooleanField(default=False)

    def to_representation(self, instance):
        return {
            'type': 'mdts',
            'clamp': list(instance.clamp),
            'per_domain_T': dict(instance.per_domain_T),
            'regressor': FittedRegressorSerializer(instance.regressor).data,
            'num_classes': instance.num_classes,
            'embedding_dim': instance.embedding_dim,
            'domain_weighting': instance.domain_weighting,
        }

    def create(self, validated_data):
        validated_data.pop('type')
        validated_data['clamp'] = tuple(validated_data['clamp'])
        try:
            return MdtsModel(**validated_data)
        except CalibrationException as error:
            raise serializers.ValidationError(error.detail)
