from django.apps import AppConfig


class GeometryConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'Geometry'
    verbose_name = 'Equivariant bundles and gerbes with connection'
