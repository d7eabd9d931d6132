from django.apps import AppConfig


class SynthAppConfig(AppConfig):
    name = 'calibration.apps.synth'
