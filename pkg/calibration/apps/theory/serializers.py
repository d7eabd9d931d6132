from rest_framework import serializers


class DivergenceReportSerializer(serializers.Serializer):
    """ Serializes a DivergenceReport for the bound-check report file."""
    d_hbar = serializers.FloatField(min_value=0.0, max_value=1.0)
    alpha = serializers.ListField(child=serializers.FloatField(min_value=0.0))
    lhs = serializers.FloatField()
    rhs = serializers.FloatField()
    slack = serializers.FloatField(min_value=0.0)
    holds = serializers.BooleanField()

    def to_representation(self, instance):
        return {
            'd_hbar': instance.d_hbar,
            'lambda': instance.lambda_,
            'alpha': instance.alpha.alpha.tolist(),
            'lhs': instance.lhs,
            'rhs': instance.rhs,
            'slack': instance.slack,
            'holds': instance.holds,
        }
