from rest_framework import serializers

from .models import SPLIT_TAGS

MANIFEST_VERSION = 1


class DomainEntrySerializer(serializers.Serializer):
    """One ``domains`` entry of manifest.json."""
    id = serializers.CharField(max_length=255)
    file = serializers.CharField(max_length=1024)
    split = serializers.ChoiceField(choices=SPLIT_TAGS)
    n = serializers.IntegerField(min_value=1)

    def validate_file(self, value):
        if value.startswith('/') or '..' in value.replace('\\', '/').split('/'):
            raise serializers.ValidationError(
                'Domain files must be relative paths inside the dataset directory.')
        return value


class ManifestSerializer(serializers.Serializer):
    """Validates manifest.json of a multi-domain dataset directory."""
    version = serializers.IntegerField(
        min_value=MANIFEST_VERSION, max_value=MANIFEST_VERSION,
        error_messages={
            'min_value': 'Only manifest version 1 is supported.',
            'max_value': 'Only manifest version 1 is supported.',
        })
    num_classes = serializers.IntegerField(min_value=1)
    embedding_dim = serializers.IntegerField(min_value=1)
    domains = DomainEntrySerializer(many=True, allow_empty=False)

    def validate_domains(self, domains):
        ids = [entry['id'] for entry in domains]
        duplicates = sorted({domain_id for domain_id in ids if ids.count(domain_id) > 1})
        if duplicates:
            raise serializers.ValidationError(
                'Domain ids must be unique; repeated: {}'.format(', '.join(duplicates)))
        return domains


class GroundTruthSerializer(serializers.Serializer):
    """ground_truth.json: domain id -> calibrating temperature c_k."""
    temperatures = serializers.DictField(
        child=serializers.FloatField(min_value=0.0), allow_empty=False)

    def to_representation(self, instance):
        return {str(key): float(value) for key, value in instance.items()}

    def to_internal_value(self, data):
        return super().to_internal_value({'temperatures': data})['temperatures']
