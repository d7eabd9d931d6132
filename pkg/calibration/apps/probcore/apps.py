from django.apps import AppConfig


class ProbcoreConfig(AppConfig):
    name = 'calibration.apps.probcore'
