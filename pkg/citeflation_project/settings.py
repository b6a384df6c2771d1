"""
Django settings for citeflation_project project.

The project hosts the `citenet` app: a citation network growth simulator,
its scientometric measurements and the citation deflator. Everything the
simulator and the analyses need as defaults lives in the CITENET dict at
the bottom of this module.
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get(
    "DJANGO_SECRET_KEY",
    "django-insecure-5v#0c9l!t3a8q^k2@w1m$z7r(e6y)u4i*o&p-h_s+d=f%g",
)

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = os.environ.get("DJANGO_DEBUG", "1") == "1"

ALLOWED_HOSTS = ["localhost", "127.0.0.1"]


# Application definition

INSTALLED_APPS = [
    "django.contrib.admin",
    "django.contrib.auth",
    "django.contrib.contenttypes",
    "django.contrib.sessions",
    "django.contrib.messages",
    "django.contrib.staticfiles",
    "rest_framework",
    "citenet",
]

MIDDLEWARE = [
    "django.middleware.security.SecurityMiddleware",
    "django.contrib.sessions.middleware.SessionMiddleware",
    "django.middleware.common.CommonMiddleware",
    "django.middleware.csrf.CsrfViewMiddleware",
    "django.contrib.auth.middleware.AuthenticationMiddleware",
    "django.contrib.messages.middleware.MessageMiddleware",
    "django.middleware.clickjacking.XFrameOptionsMiddleware",
]

ROOT_URLCONF = "citeflation_project.urls"

TEMPLATES = [
    {
        "BACKEND": "django.template.backends.django.DjangoTemplates",
        "DIRS": [],
        "APP_DIRS": True,
        "OPTIONS": {
            "context_processors": [
                "django.template.context_processors.debug",
                "django.template.context_processors.request",
                "django.contrib.auth.context_processors.auth",
                "django.contrib.messages.context_processors.messages",
            ],
        },
    },
]

WSGI_APPLICATION = "citeflation_project.wsgi.application"


# Database
# Run records only; simulation outputs are written as CSV files.

DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": BASE_DIR / "db.sqlite3",
    }
}


AUTH_PASSWORD_VALIDATORS = [
    {
        "NAME": "django.contrib.auth.password_validation.UserAttributeSimilarityValidator",
    },
    {
        "NAME": "django.contrib.auth.password_validation.MinimumLengthValidator",
    },
    {
        "NAME": "django.contrib.auth.password_validation.CommonPasswordValidator",
    },
    {
        "NAME": "django.contrib.auth.password_validation.NumericPasswordValidator",
    },
]


LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = True

USE_TZ = True


STATIC_URL = "static/"
STATIC_ROOT = BASE_DIR / "staticfiles"

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

# Django REST Framework Configuration
REST_FRAMEWORK = {
    "DEFAULT_RENDERER_CLASSES": [
        "rest_framework.renderers.JSONRenderer",
        "rest_framework.renderers.BrowsableAPIRenderer",
    ],
    "DEFAULT_PARSER_CLASSES": [
        "rest_framework.parsers.JSONParser",
    ],
    "DEFAULT_PAGINATION_CLASS": "rest_framework.pagination.PageNumberPagination",
    "PAGE_SIZE": 20,
}

# Logging
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{asctime} {levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
    },
    "loggers": {
        "citenet": {
            "handlers": ["console"],
            "level": os.environ.get("CITENET_LOG_LEVEL", "INFO"),
            "propagate": False,
        },
    },
}

# Simulator and analysis defaults
CITENET = {
    "DEFAULT_SCENARIO": BASE_DIR / "citenet" / "scenarios" / "default.scenario",
    "OUT_DIR": Path(os.environ.get("CITENET_OUT_DIR", BASE_DIR / "runs")),
    "WORKERS": int(os.environ.get("CITENET_WORKERS", os.cpu_count() or 1)),
    # Publication years outside this range are rejected at ingestion
    "YEAR_RANGE": (1600, 2100),
    "BASELINE_YEAR": 2010,
    "G10_REFERENCE_YEAR": 2000,
    "ANALYSIS": {
        "window": 5,
        "percentiles": [0.5, 0.75, 0.9, 0.95, 0.99],
        "thresholds": [0, 1, 2, 5, 10],
        "top_q": 0.01,
        "snapshots": [100, 110, 120, 130, 140, 150],
        "pooling": 3,
        "deltas": [3, 8, 45, 50],
        "tau": None,
        # standard errors a bin difference must exceed to count in crossing detection
        "crossing_z": 1.0,
    },
    "SCENARIO_PERIODS": 200,
    "SCENARIO_T_STAR": 165,
}
