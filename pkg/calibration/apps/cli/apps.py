from django.apps import AppConfig


class CliConfig(AppConfig):
    name = 'calibration.apps.cli'
