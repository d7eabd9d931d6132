import csv
import io
from numbers import Integral, Real

from rest_framework.renderers import BaseRenderer

from ..core.utils import format_float


class CSVRenderer(BaseRenderer):
    """
    Renders a list of row dicts as CSV with a fixed header.
    Floats keep 17 significant digits; lines end with LF.
    """
    media_type = 'text/csv'
    format = 'csv'
    charset = 'utf-8'
    header = ()

    def render(self, data, accepted_media_type=None, renderer_context=None):
        header = (renderer_context or {}).get('header', self.header)
        stream = io.StringIO()
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(header)
        for row in data:
            writer.writerow([self.format_value(row[column]) for column in header])
        return stream.getvalue().encode(self.charset)

    @staticmethod
    def format_value(value):
        if value is None:
            return ''
        if isinstance(value, bool):
            return 'true' if value else 'false'
        if isinstance(value, Integral):
            return str(int(value))
        if isinstance(value, Real):
            return format_float(value)
        return str(value)


class ReliabilityCSVRenderer(CSVRenderer):
    header = ('bin', 'lo', 'hi', 'count', 'accuracy', 'confidence')
