from django.apps import AppConfig


class MdtsConfig(AppConfig):
    name = 'calibration.apps.mdts'
