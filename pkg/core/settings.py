import os
from pathlib import Path

BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.environ.get(
    'DJANGO_SECRET_KEY',
    'django-insecure-crkit-3m0-l0-r7q%w1k#v8zj4s0a!xg2e6d5u9y(h)b+t=c',
)
DEBUG = os.environ.get('DJANGO_DEBUG', '1') == '1'
ALLOWED_HOSTS = ['localhost', '127.0.0.1', 'testserver']

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'corsheaders',
    'crkit',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'corsheaders.middleware.CorsMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'core.urls'

WSGI_APPLICATION = 'core.wsgi.application'

# No models; the test runner only needs a database alias to exist.
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}

LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = True
USE_TZ = True

CORS_ALLOW_ALL_ORIGINS = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

CRKIT = {
    # group membership and null-cone residuals
    'TOL': float(os.environ.get('CRKIT_TOL', '1e-9')),
    # eigenvalues closer than this (relative) are one cluster
    'CLUSTER_TOL': 1e-7,
    'GOLDMAN_TOL': 1e-6,
    'AMBIGUITY_GAP': 1e-4,
    'DENOM_BOUND': 512,
    'TYPE_TOL': 1e-6,
    'FAMILY_TOL': 1e-7,
    'LINK_MIN_SEGMENTS': 256,
    'LINK_MIN_DISTANCE': 1e-3,
    # sign of l = m0 in the figure-eight marking
    'ORIENTATION': int(os.environ.get('CRKIT_ORIENTATION', '1')),
}

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'tagged': {
            'format': '[{levelname}] {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'stderr': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'tagged',
        },
    },
    'loggers': {
        'crkit': {
            'handlers': ['stderr'],
            'level': os.environ.get('CRKIT_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        },
    },
}
