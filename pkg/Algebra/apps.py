from django.apps import AppConfig


class AlgebraConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'Algebra'
    verbose_name = 'Exact mixed Z/Q algebra'
