from django.apps import AppConfig


class FacadesConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'Facades'
    verbose_name = 'Task facades over the engine'
