from rest_framework import serializers


class DomainSummarySerializer(serializers.Serializer):
    """ One ``per_domain`` entry of a report file."""
    domain = serializers.CharField()
    ece = serializers.FloatField()
    acc = serializers.FloatField()
    conf = serializers.FloatField()
    n = serializers.IntegerField()


class MultiDomainReportSerializer(serializers.Serializer):
    """
    Serializes a MultiDomainReport for report files.
    Domains are listed in dataset order.
    """
    bins = serializers.IntegerField()
    mdece = serializers.FloatField()
    pooled_ece = serializers.FloatField()
    pooled_acc = serializers.FloatField()
    pooled_conf = serializers.FloatField()
    per_domain = DomainSummarySerializer(many=True)

    def to_representation(self, instance):
        return {
            'bins': instance.bins,
            'mdece': instance.mdece,
            'pooled_ece': instance.pooled.ece,
            'pooled_acc': instance.pooled.mean_acc,
            'pooled_conf': instance.pooled.mean_conf,
            'per_domain': [
                {
                    'domain': domain_id,
                    'ece': report.ece,
                    'acc': report.mean_acc,
                    'conf': report.mean_conf,
                    'n': report.n,
                }
                for domain_id, report in instance.per_domain.items()
            ],
        }
