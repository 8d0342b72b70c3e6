from django.apps import AppConfig


class CrkitConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'crkit'
    verbose_name = 'Complex hyperbolic toolkit'
