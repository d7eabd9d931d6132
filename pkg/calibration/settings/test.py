from .base import *

DEBUG = True

LOGGING['loggers']['calibration']['level'] = 'WARNING'
