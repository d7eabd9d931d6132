"""
Django settings for the calibration project.

The project has no web surface and no database: Django provides settings,
logging configuration, app discovery and the management command runner;
Django REST framework provides serializers, parsers, renderers and the
exception types used across the toolkit.
"""

import copy
import os

from calibration.apps.core.defaults import DEFAULTS

# Build paths inside the project like this: os.path.join(BASE_DIR, ...)
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

SECRET_KEY = os.environ.get(
    'MDTS_SECRET_KEY', 'mdts-calib-local-key-not-used-for-any-signing')

DEBUG = False

ALLOWED_HOSTS = []

# Application definition

INSTALLED_APPS = [
    'rest_framework',

    'calibration.apps.core',
    'calibration.apps.dataset',
    'calibration.apps.probcore',
    'calibration.apps.ts',
    'calibration.apps.regress',
    'calibration.apps.mdts',
    'calibration.apps.metrics',
    'calibration.apps.baselines',
    'calibration.apps.synth',
    'calibration.apps.theory',
    'calibration.apps.cli',
]

# Datasets and models are files on disk; nothing is persisted in a database.
DATABASES = {}

# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

REST_FRAMEWORK = {
    'NON_FIELD_ERRORS_KEY': 'error',
    'COMPACT_JSON': False,
    'STRICT_JSON': True,
    # No requests are ever authenticated; keeps django.contrib.auth out.
    'DEFAULT_AUTHENTICATION_CLASSES': [],
    'DEFAULT_PERMISSION_CLASSES': [],
    'UNAUTHENTICATED_USER': None,
}

LOG_LEVEL = os.environ.get('MDTS_LOG_LEVEL', 'INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s %(levelname)s %(name)s %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'calibration': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}

# Toolkit defaults. Every key can be overridden per settings module; the
# library falls back to DEFAULTS when Django is not configured
# (see calibration.apps.core.utils.mdts_setting).
MDTS = copy.deepcopy(DEFAULTS)
MDTS['BINS'] = int(os.environ.get('MDTS_BINS', DEFAULTS['BINS']))
MDTS['KRR_MAX_SUPPORT'] = int(
    os.environ.get('MDTS_KRR_MAX_SUPPORT', DEFAULTS['KRR_MAX_SUPPORT']))
