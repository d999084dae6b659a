"""
Django settings for the pmelab project.

Numerical defaults (seeds, sample sizes, chunking) live in ``PME_LAB`` and can
be overridden from the environment or a ``.env`` file through python-decouple.
"""
from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


SECRET_KEY = config('DJANGO_SECRET_KEY', default='pmelab-local-only-key')

DEBUG = config('DJANGO_DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []

# Application definition

INSTALLED_APPS = [
    'rest_framework',
    'core',
    'django.contrib.contenttypes',
    'django.contrib.auth',
]

MIDDLEWARE = []


# Database
# Stores the verification ledger only; SQLite unless configured otherwise.

DATABASES = {
    'default': {
        'ENGINE': config('DB_ENGINE', default='django.db.backends.sqlite3'),
        'NAME': config('DB_NAME', default=str(BASE_DIR / 'db.sqlite3')),
        'USER': config('DB_USER', default=''),
        'PASSWORD': config('DB_PASSWORD', default=''),
        'HOST': config('DB_HOST', default=''),
        'PORT': config('DB_PORT', default=''),
    }
}

REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'COERCE_DECIMAL_TO_STRING': False,
    'UNAUTHENTICATED_USER': None,
}


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Monte-Carlo and export defaults
PME_LAB = {
    'DEFAULT_SEED': config('PME_DEFAULT_SEED', default=20240601, cast=int),
    'DEFAULT_SAMPLES': config('PME_DEFAULT_SAMPLES', default=100000, cast=int),
    'CHUNK_SIZE': config('PME_CHUNK_SIZE', default=50000, cast=int),
    'THREADS': config('PME_THREADS', default=1, cast=int),
    'OUTPUT_DIR': config('PME_OUTPUT_DIR', default='out'),
    'SDE_START_FRACTION': config('PME_SDE_START_FRACTION', default=0.01, cast=float),
    'KS_ALPHA': config('PME_KS_ALPHA', default=0.001, cast=float),
}


LOG_LEVEL = config('PME_LOG_LEVEL', default='INFO')

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
            'stream': 'ext://sys.stderr',
        },
    },
    'loggers': {
        'core': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}
