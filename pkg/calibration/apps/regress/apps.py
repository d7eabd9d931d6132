from django.apps import AppConfig


class RegressConfig(AppConfig):
    name = 'calibration.apps.regress'
