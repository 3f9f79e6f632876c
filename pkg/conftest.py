import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "rainbow_project.settings")
django.setup()
