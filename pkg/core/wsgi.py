"""
WSGI entry point for the crkit project.

Serves the JSON API in crkit.views (classification, figure-eight
reports and slope changes); the numerical library itself never needs it.
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'core.settings')

application = get_wsgi_application()
