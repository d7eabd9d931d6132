from rest_framework import serializers

from ..core.exceptions import CalibrationException
from ..core.serializers import ArrayField
from .models import (
    KINDS, LINEAR_KINDS, KernelRidgeRegressor, LinearRegressor,
    NearestNeighborsRegressor, RegressorSpec)


class RegressorSpecSerializer(serializers.Serializer):
    """ Kind, hyperparameters and intercept switch shared by every fitted regressor."""
    kind = serializers.ChoiceField(choices=KINDS)
    hyperparams = serializers.DictField(source='spec.hyperparams', default=dict)
    fit_intercept = serializers.BooleanField(source='spec.intercept', default=True)

    model_class = None

    def validate(self, data):
        options = data.get('spec', {})
        try:
            data['spec'] = RegressorSpec(
                kind=data['kind'],
                hyperparams=options.get('hyperparams', {}),
                intercept=options.get('intercept', True))
        except CalibrationException as error:
            raise serializers.ValidationError({'hyperparams': error.detail})
        return data

    def create(self, validated_data):
        validated_data.pop('kind')
        try:
            return self.model_class(**validated_data)
        except CalibrationException as error:
            raise serializers.ValidationError(error.detail)


class LinearRegressorSerializer(RegressorSpecSerializer):
    kind = serializers.ChoiceField(choices=LINEAR_KINDS)
    theta = ArrayField()
    intercept = serializers.FloatField()

    model_class = LinearRegressor


class KernelRidgeRegressorSerializer(RegressorSpecSerializer):
    kind = serializers.ChoiceField(choices=['krr'])
    support = ArrayField(ndim=2)
    dual = ArrayField()
    gamma = serializers.FloatField(min_value=0.0)

    model_class = KernelRidgeRegressor


class NearestNeighborsRegressorSerializer(RegressorSpecSerializer):
    kind = serializers.ChoiceField(choices=['knn'])
    support = ArrayField(ndim=2)
    targets = ArrayField()
    k = serializers.IntegerField(min_value=1)

    model_class = NearestNeighborsRegressor


REGRESSOR_SERIALIZERS = {
    'ols': LinearRegressorSerializer,
    'ridge': LinearRegressorSerializer,
    'huber': LinearRegressorSerializer,
    'krr': KernelRidgeRegressorSerializer,
    'knn': NearestNeighborsRegressorSerializer,
}


class FittedRegressorSerializer(serializers.Serializer):
    """
    Reads and writes any fitted regressor, dispatching on ``kind``.
    The validated value is the fitted regressor itself.
    """

    def to_representation(self, instance):
        return REGRESSOR_SERIALIZERS[instance.kind](instance).data

    def to_internal_value(self, data):
        kind = data.get('kind') if isinstance(data, dict) else None
        if kind not in REGRESSOR_SERIALIZERS:
            raise serializers.ValidationError(
                {'kind': ['Expected one of: {}.'.format(', '.join(KINDS))]})
        serializer = REGRESSOR_SERIALIZERS[kind](data=data)
        serializer.is_valid(raise_exception=True)
        return serializer.save()
