from django.apps import AppConfig


class DeligneConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'Deligne'
    verbose_name = 'Equivariant smooth Deligne cohomology'
