"""
Django settings for the whitham-solitons project.

The project has no database and no web server: Django provides the
settings layer, the management-command CLI and the test runner for the
`solitons` app.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

from pathlib import Path

import os
from dotenv import load_dotenv

load_dotenv()


# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# only used for signing, which the CLI never does; a fixed fallback keeps `manage.py` usable without a .env
SECRET_KEY = os.getenv('SECRET_KEY', 'whitham-solitons-local')

DEBUG = os.getenv('DEBUG', 'False') == 'True'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',
    # Third-party apps
    'rest_framework',
    # Local apps
    'solitons',
]


# no models anywhere in the project, so no database either
DATABASES = {}


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# DRF SETTINGS
# serializers are only used for validation and JSON rendering
REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': (
        'rest_framework.renderers.JSONRenderer',
    ),
    'COERCE_DECIMAL_TO_STRING': False,
    'STRICT_JSON': True,
}


# SOLVER SETTINGS
# every value can be overridden from the environment (or the .env file)
SOLITONS = {
    'DEFAULT_L': int(os.getenv('SOLITONS_DEFAULT_L', '6')),
    'DEFAULT_N': int(os.getenv('SOLITONS_DEFAULT_N', '4096')),
    'MAX_N': int(os.getenv('SOLITONS_MAX_N', str(2 ** 15))),
    'TOL': float(os.getenv('SOLITONS_TOL', '1e-10')),
    'MAX_ITER': int(os.getenv('SOLITONS_MAX_ITER', '10000')),
    'DAMPING': float(os.getenv('SOLITONS_DAMPING', '1.0')),
    'DAMPING_FLOOR': 0.05,
    'ANDERSON_DEPTH': int(os.getenv('SOLITONS_ANDERSON_DEPTH', '16')),
    'SEED': int(os.getenv('SOLITONS_SEED', '0')),
    'OUTPUT_DIR': Path(os.getenv('SOLITONS_OUTPUT_DIR', BASE_DIR / 'runs')),
}


# LOGGING
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'solitons': {
            'handlers': ['console'],
            'level': os.getenv('SOLITONS_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
    },
}
