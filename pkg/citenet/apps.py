from django.apps import AppConfig


class CitenetConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "citenet"
    verbose_name = "Citation network simulator"
