import numpy as np
from rest_framework import serializers


class ArrayField(serializers.Field):
    """A numpy array of finite floats stored as (nested) JSON lists."""
    default_error_messages = {
        'invalid': 'Expected a {ndim}-dimensional list of numbers.',
        'non_finite': 'Values must be finite numbers.',
        'empty': 'This list may not be empty.',
    }

    def __init__(self, ndim=1, allow_empty=False, **kwargs):
        self.ndim = ndim
        self.allow_empty = allow_empty
        super().__init__(**kwargs)

    def to_internal_value(self, data):
        if isinstance(data, (str, bytes, dict)):
            self.fail('invalid', ndim=self.ndim)
        try:
            array = np.array(data, dtype=float)
        except (TypeError, ValueError):
            self.fail('invalid', ndim=self.ndim)
        if array.ndim != self.ndim:
            self.fail('invalid', ndim=self.ndim)
        if array.size == 0 and not self.allow_empty:
            self.fail('empty')
        if not np.all(np.isfinite(array)):
            self.fail('non_finite')
        return array

    def to_representation(self, value):
        return np.asarray(value, dtype=float).tolist()
