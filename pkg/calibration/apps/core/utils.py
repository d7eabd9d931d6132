import copy
import io
import logging
import os
import tempfile

from django.conf import settings
from rest_framework.exceptions import ParseError
from rest_framework.parsers import JSONParser
from rest_framework.renderers import JSONRenderer

from .defaults import DEFAULTS
from .exceptions import IoFailure, MissingFile, SchemaViolation

logger = logging.getLogger(__name__)


def mdts_setting(name):
    """Look up a toolkit default, preferring ``settings.MDTS`` when configured."""
    user_settings = getattr(settings, 'MDTS', {}) if settings.configured else {}
    if name in user_settings:
        return copy.deepcopy(user_settings[name])
    return copy.deepcopy(DEFAULTS[name])


def format_float(value):
    """Text form of a float that reloads to the identical double."""
    return '%.17g' % float(value)


def write_atomic(path, content):
    """Write ``content`` (str or bytes) to ``path`` through a temp file + rename."""
    if isinstance(content, str):
        content = content.encode('utf-8')
    directory = os.path.dirname(os.path.abspath(path))
    try:
        os.makedirs(directory, exist_ok=True)
        handle, tmp_path = tempfile.mkstemp(dir=directory, prefix='.tmp-')
        try:
            with os.fdopen(handle, 'wb') as stream:
                stream.write(content)
            os.replace(tmp_path, path)
        except BaseException:
            if os.path.exists(tmp_path):
                os.unlink(tmp_path)
            raise
    except OSError as error:
        raise IoFailure({'path': str(path), 'message': str(error)})
    logger.debug('wrote %s (%d bytes)', path, len(content))
    return path


def write_json(path, data):
    content = JSONRenderer().render(
        data, renderer_context={'indent': 2})
    return write_atomic(path, content + b'\n')


def read_json(path):
    if not os.path.isfile(path):
        raise MissingFile({'path': str(path)})
    try:
        with open(path, 'rb') as stream:
            raw = stream.read()
    except OSError as error:
        raise IoFailure({'path': str(path), 'message': str(error)})
    try:
        return JSONParser().parse(io.BytesIO(raw))
    except ParseError as error:
        raise SchemaViolation({'path': str(path), 'message': str(error.detail)})
