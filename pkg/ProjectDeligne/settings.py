"""
Django settings for ProjectDeligne.

Engine options live in the DELIGNE dict; every key can be set from the environment or a
.env file next to manage.py.
"""

import os
from pathlib import Path
from dotenv import load_dotenv




BASE_DIR = Path(__file__).resolve().parent.parent

load_dotenv(BASE_DIR / '.env')

SECRET_KEY = os.getenv('SECRET_KEY', 'deligne-local-only')

DEBUG = os.getenv('DEBUG', 'False') == 'True'

ALLOWED_HOSTS = []


INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',
    'rest_framework',
    'Algebra',
    'Simplicial',
    'Deligne',
    'Geometry',
    'Facades',
    'Forms',
    'Api',
]

# The engine keeps no state in a database; the in-memory default only lets the test runner start.
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': ':memory:',
    }
}

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

USE_TZ = True

TIME_ZONE = 'UTC'


DELIGNE = {
    'DENOMINATOR_BOUND': int(os.getenv('DELIGNE_DENOMINATOR_BOUND', 8)),
    'MAX_DIMENSION': int(os.getenv('DELIGNE_MAX_DIMENSION', 6000)),
    'COVER': os.getenv('DELIGNE_COVER', 'translated'),
    'PIVOTING': os.getenv('DELIGNE_PIVOTING', 'row'),
    'THREADS': int(os.getenv('DELIGNE_THREADS', 1)),
    'SIGN_CONVENTION': os.getenv('DELIGNE_SIGN_CONVENTION', 'standard'),
}


REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': ['rest_framework.renderers.JSONRenderer'],
    'DEFAULT_PARSER_CLASSES': ['rest_framework.parsers.JSONParser'],
    'UNICODE_JSON': True,
}


LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': os.getenv('DELIGNE_LOG_LEVEL', 'WARNING'),
    },
}
