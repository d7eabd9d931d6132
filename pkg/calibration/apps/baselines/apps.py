from django.apps import AppConfig


class BaselinesConfig(AppConfig):
    name = 'calibration.apps.baselines'
