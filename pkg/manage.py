#!/usr/bin/env python
"""Command-line entry point.

Besides Django's administrative tasks this exposes the citenet commands:
simulate, analyze, deflate, scenarios and estimate_growth.
"""
import os
import sys


def main():
    """Dispatch to a management command."""
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "citeflation_project.settings")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Install the requirements "
            "(pip install -r requirements.txt) in the active environment."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == "__main__":
    main()
