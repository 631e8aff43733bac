from django.apps import AppConfig


class SimplicialConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'Simplicial'
    verbose_name = 'Simplicial complexes, group actions and covers'
